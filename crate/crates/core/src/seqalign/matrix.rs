use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use super::{Score, Symbol};
use crate::error::{Error, Result};

/// 9x9 table of exact substitution scores in [`Symbol::ALL`] order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionMatrix {
    scores: [[Score; 9]; 9],
}

impl Default for SubstitutionMatrix {
    fn default() -> Self {
        SubstitutionMatrix::standard()
    }
}

impl SubstitutionMatrix {
    /// The reference table:
    /// * identical symbols score 2;
    /// * angle letters `d` apart score `1/d`;
    /// * sizes one step apart (S-M, M-L) score 1, S-L scores 1/2;
    /// * an angle letter against a size letter scores -2.
    pub fn standard() -> Self {
        let mut scores = [[Score::zero(); 9]; 9];
        for a in Symbol::ALL {
            for b in Symbol::ALL {
                let (i, j) = (a.index(), b.index());
                scores[i][j] = if a == b {
                    Score::from_integer(2)
                } else if a.is_angle() && b.is_angle() {
                    Score::new(1, i.abs_diff(j) as i64)
                } else if a.is_size() && b.is_size() {
                    match i.abs_diff(j) {
                        1 => Score::one(),
                        _ => Score::new(1, 2),
                    }
                } else {
                    Score::from_integer(-2)
                };
            }
        }
        SubstitutionMatrix { scores }
    }

    /// Wraps a table, requiring symmetry and a diagonal of 2.
    pub fn new(scores: [[Score; 9]; 9]) -> Result<Self> {
        let m = SubstitutionMatrix { scores };
        m.check()?;
        Ok(m)
    }

    fn check(&self) -> Result<()> {
        for a in Symbol::ALL {
            if self.get(a, a) != Score::from_integer(2) {
                return Err(Error::Incompatible(format!(
                    "diagonal entry {a}{a} is {}, expected 2",
                    self.get(a, a)
                )));
            }
            for b in Symbol::ALL {
                if self.get(a, b) != self.get(b, a) {
                    return Err(Error::Incompatible(format!(
                        "matrix is not symmetric at {a}/{b}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn get(&self, a: Symbol, b: Symbol) -> Score {
        self.scores[a.index()][b.index()]
    }

    pub fn table(&self) -> &[[Score; 9]; 9] {
        &self.scores
    }

    /// Least common multiple of all denominators; multiplying every entry by
    /// it yields integers.
    pub fn denominator_lcm(&self) -> i64 {
        self.scores
            .iter()
            .flatten()
            .fold(1, |acc, s| num_integer_lcm(acc, *s.denom()))
    }

    /// Ten-line grid: a header row and column of symbols around the scores,
    /// each written as an integer or `p/q`, separated by tabs.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = Symbol::ALL.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(out, "\t{}", header.join("\t"));
        for a in Symbol::ALL {
            let row: Vec<String> = Symbol::ALL
                .iter()
                .map(|&b| self.get(a, b).to_string())
                .collect();
            let _ = writeln!(out, "{a}\t{}", row.join("\t"));
        }
        out
    }

    /// Parses the [`to_text`](Self::to_text) grid. Rows and columns may come
    /// in any order as long as every symbol appears exactly once.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty substitution matrix"))?;
        let columns = parse_symbols(header, hline + 1)?;
        let mut scores = [[None::<Score>; 9]; 9];
        let mut rows_seen = 0;
        for (idx, line) in lines {
            let mut cells = line.split_whitespace();
            let row = cells
                .next()
                .and_then(single_symbol)
                .ok_or_else(|| Error::parse(idx + 1, "row must start with a symbol"))?;
            let values: Vec<&str> = cells.collect();
            if values.len() != 9 {
                return Err(Error::parse(
                    idx + 1,
                    format!("expected 9 scores, got {}", values.len()),
                ));
            }
            for (col, v) in columns.iter().zip(values) {
                let score: Score = v
                    .parse()
                    .map_err(|_| Error::parse(idx + 1, format!("bad score `{v}`")))?;
                let slot = &mut scores[row.index()][col.index()];
                if slot.is_some() {
                    return Err(Error::parse(idx + 1, format!("row {row} repeated")));
                }
                *slot = Some(score);
            }
            rows_seen += 1;
        }
        if rows_seen != 9 {
            return Err(Error::parse(1, format!("expected 9 rows, got {rows_seen}")));
        }
        let mut table = [[Score::zero(); 9]; 9];
        for i in 0..9 {
            for j in 0..9 {
                table[i][j] = scores[i][j].ok_or_else(|| Error::parse(1, "missing entries"))?;
            }
        }
        SubstitutionMatrix::new(table)
    }
}

fn single_symbol(cell: &str) -> Option<Symbol> {
    let mut chars = cell.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Symbol::from_char(c),
        _ => None,
    }
}

fn parse_symbols(line: &str, lineno: usize) -> Result<Vec<Symbol>> {
    let cols: Vec<Symbol> = line
        .split_whitespace()
        .map(|c| {
            single_symbol(c).ok_or_else(|| Error::parse(lineno, format!("bad header cell `{c}`")))
        })
        .collect::<Result<_>>()?;
    let mut seen = [false; 9];
    for c in &cols {
        if std::mem::replace(&mut seen[c.index()], true) {
            return Err(Error::parse(lineno, format!("header repeats {c}")));
        }
    }
    if cols.len() != 9 {
        return Err(Error::parse(lineno, "header must list all 9 symbols"));
    }
    Ok(cols)
}

fn num_integer_lcm(a: i64, b: i64) -> i64 {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    (a / gcd(a, b) * b).abs()
}

/// Scaled integer form of a score, used by the fast scoring kernel.
pub(crate) fn scaled(score: Score, lcm: i64) -> Result<i64> {
    let v = score * Score::from_integer(lcm);
    if !v.denom().is_one() {
        return Err(Error::Internal(format!(
            "{score} does not scale to an integer by {lcm}"
        )));
    }
    Ok(*v.numer())
}

pub(crate) fn is_negative(score: &Score) -> bool {
    score.is_negative()
}

pub(crate) fn scaled_lcm(a: i64, b: i64) -> i64 {
    num_integer_lcm(a, b)
}
