//! Needleman-Wunsch alignment of symbol strings with exact rational scores.
//!
//! The score matrix has `|s2| + 1` rows and `|s1| + 1` columns. Row 0 and
//! column 0 are all zero, so an alignment may begin after a free prefix of
//! either string; interior cells follow
//!
//! ```text
//! F(i, j) = max(F(i-1, j-1) + S(s2[i], s1[j]),  F(i, j-1) + w,  F(i-1, j) + w)
//! ```
//!
//! and the alignment score is the bottom-right cell.

mod matrix;
mod symbol;

use std::fmt::Write as _;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use self::matrix::SubstitutionMatrix;
pub use self::symbol::{Symbol, SymbolString};

/// Exact alignment score.
pub type Score = Ratio<i64>;

/// Default gap penalty.
pub const DEFAULT_GAP: i64 = -2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignParams {
    /// Added for every gap; must be negative.
    pub gap: Score,
    pub matrix: SubstitutionMatrix,
}

impl Default for AlignParams {
    fn default() -> Self {
        AlignParams {
            gap: Score::from_integer(DEFAULT_GAP),
            matrix: SubstitutionMatrix::standard(),
        }
    }
}

impl AlignParams {
    pub fn new(gap: Score, matrix: SubstitutionMatrix) -> Result<Self> {
        if !matrix::is_negative(&gap) {
            return Err(Error::invalid(format!(
                "gap penalty must be negative, got {gap}"
            )));
        }
        Ok(AlignParams { gap, matrix })
    }
}

/// Filled dynamic-programming table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreMatrix {
    rows: usize,
    cols: usize,
    values: Vec<Score>,
}

impl ScoreMatrix {
    /// `|s2| + 1`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// `|s1| + 1`.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Score {
        self.values[i * self.cols + j]
    }

    /// Bottom-right cell.
    pub fn final_score(&self) -> Score {
        self.get(self.rows - 1, self.cols - 1)
    }

    /// Tab-separated table laid out with `s1` across the top and `s2` down
    /// the side, preceded by the zero border.
    pub fn to_tsv(&self, s1: &SymbolString, s2: &SymbolString, exact: bool) -> String {
        let mut out = String::from("\t");
        for s in s1.symbols() {
            let _ = write!(out, "\t{s}");
        }
        out.push('\n');
        for i in 0..self.rows {
            if i > 0 {
                let _ = write!(out, "{}", s2.symbols()[i - 1]);
            }
            for j in 0..self.cols {
                let _ = write!(out, "\t{}", format_score(self.get(i, j), exact));
            }
            out.push('\n');
        }
        out
    }
}

/// One traceback step, named by the direction travelled from the current cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    /// `(i-1, j-1)`: `s2[i]` aligned with `s1[j]`.
    Diagonal,
    /// `(i-1, j)`: `s2[i]` against a gap.
    Up,
    /// `(i, j-1)`: `s1[j]` against a gap.
    Left,
}

pub const GAP_MARK: char = '-';

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignmentResult {
    pub score: Score,
    /// `score / (2 * min(|s1|, |s2|))`, zero when either string is empty.
    pub normalized: Score,
    /// Moves from the bottom-right cell back to the border.
    pub path: Vec<Move>,
    /// Border cell `(row, col)` where the traceback stopped.
    pub start: (usize, usize),
    /// `s1` with gap marks; the unaligned prefix is padded against gaps.
    pub aligned_s1: String,
    /// `s2` with gap marks, same length as `aligned_s1`.
    pub aligned_s2: String,
}

/// Fills the alignment table of `s1` (columns) against `s2` (rows).
pub fn score_matrix(s1: &SymbolString, s2: &SymbolString, p: &AlignParams) -> ScoreMatrix {
    let (rows, cols) = (s2.len() + 1, s1.len() + 1);
    let mut values = vec![Score::zero(); rows * cols];
    for i in 1..rows {
        let b = s2.symbols()[i - 1];
        for j in 1..cols {
            let a = s1.symbols()[j - 1];
            let diag = values[(i - 1) * cols + j - 1] + p.matrix.get(b, a);
            let left = values[i * cols + j - 1] + p.gap;
            let up = values[(i - 1) * cols + j] + p.gap;
            values[i * cols + j] = diag.max(left).max(up);
        }
    }
    ScoreMatrix { rows, cols, values }
}

/// Walks back from the bottom-right cell through predecessors consistent
/// with the recurrence, preferring diagonal, then up, then left, until it
/// reaches row 0 or column 0.
pub fn traceback(
    m: &ScoreMatrix,
    s1: &SymbolString,
    s2: &SymbolString,
    p: &AlignParams,
) -> Result<AlignmentResult> {
    if m.rows != s2.len() + 1 || m.cols != s1.len() + 1 {
        return Err(Error::Internal(
            "score matrix does not match the strings".into(),
        ));
    }
    let (mut i, mut j) = (m.rows - 1, m.cols - 1);
    let mut path = Vec::with_capacity(i + j);
    let mut top = Vec::new();
    let mut bottom = Vec::new();
    while i > 0 && j > 0 {
        let here = m.get(i, j);
        let (a, b) = (s1.symbols()[j - 1], s2.symbols()[i - 1]);
        if here == m.get(i - 1, j - 1) + p.matrix.get(b, a) {
            path.push(Move::Diagonal);
            top.push(a.as_char());
            bottom.push(b.as_char());
            i -= 1;
            j -= 1;
        } else if here == m.get(i - 1, j) + p.gap {
            path.push(Move::Up);
            top.push(GAP_MARK);
            bottom.push(b.as_char());
            i -= 1;
        } else if here == m.get(i, j - 1) + p.gap {
            path.push(Move::Left);
            top.push(a.as_char());
            bottom.push(GAP_MARK);
            j -= 1;
        } else {
            return Err(Error::Internal(format!(
                "cell ({i}, {j}) has no valid predecessor"
            )));
        }
    }
    let start = (i, j);
    // free leading overhang of whichever string still has symbols
    for k in (0..j).rev() {
        top.push(s1.symbols()[k].as_char());
        bottom.push(GAP_MARK);
    }
    for k in (0..i).rev() {
        top.push(GAP_MARK);
        bottom.push(s2.symbols()[k].as_char());
    }
    let score = m.final_score();
    Ok(AlignmentResult {
        score,
        normalized: normalize(score, s1.len(), s2.len()),
        path,
        start,
        aligned_s1: top.into_iter().rev().collect(),
        aligned_s2: bottom.into_iter().rev().collect(),
    })
}

fn normalize(score: Score, a: usize, b: usize) -> Score {
    let shorter = a.min(b) as i64;
    if shorter == 0 {
        Score::zero()
    } else {
        score / Score::from_integer(2 * shorter)
    }
}

/// Full alignment: score table plus traceback.
pub fn align_score(s1: &SymbolString, s2: &SymbolString, p: &AlignParams) -> AlignmentResult {
    let m = score_matrix(s1, s2, p);
    traceback(&m, s1, s2, p).expect("a freshly filled matrix always traces back")
}

/// Score-only kernel over integers scaled by the common denominator of the
/// substitution table and gap. Exact, linear memory, and much faster than
/// the rational table; used for bulk retrieval.
#[derive(Debug, Clone)]
pub struct FastScorer {
    scale: i64,
    table: [[i64; 9]; 9],
    gap: i64,
}

impl FastScorer {
    pub fn new(p: &AlignParams) -> Result<Self> {
        let scale = matrix::scaled_lcm(p.matrix.denominator_lcm(), *p.gap.denom());
        let mut table = [[0i64; 9]; 9];
        for a in Symbol::ALL {
            for b in Symbol::ALL {
                table[a.index()][b.index()] = matrix::scaled(p.matrix.get(a, b), scale)?;
            }
        }
        Ok(FastScorer {
            scale,
            table,
            gap: matrix::scaled(p.gap, scale)?,
        })
    }

    pub fn score(&self, s1: &SymbolString, s2: &SymbolString) -> Score {
        let cols = s1.len() + 1;
        let mut prev = vec![0i64; cols];
        let mut cur = vec![0i64; cols];
        for &b in s2.symbols() {
            let row = &self.table[b.index()];
            cur[0] = 0;
            for j in 1..cols {
                let a = s1.symbols()[j - 1];
                let diag = prev[j - 1] + row[a.index()];
                let left = cur[j - 1] + self.gap;
                let up = prev[j] + self.gap;
                cur[j] = diag.max(left).max(up);
            }
            std::mem::swap(&mut prev, &mut cur);
        }
        Score::new(prev[cols - 1], self.scale)
    }

    /// `(raw, normalized)` pair.
    pub fn score_pair(&self, s1: &SymbolString, s2: &SymbolString) -> (Score, Score) {
        let raw = self.score(s1, s2);
        (raw, normalize(raw, s1.len(), s2.len()))
    }
}

/// Renders a score as an integer, `p/q` when `exact`, or otherwise a decimal
/// with at most six fractional digits.
pub fn format_score(s: Score, exact: bool) -> String {
    if s.is_integer() {
        return s.numer().to_string();
    }
    if exact {
        return s.to_string();
    }
    let v = s.to_f64().unwrap_or(f64::NAN);
    let text = format!("{v:.6}");
    let text = text.trim_end_matches('0').trim_end_matches('.');
    if text == "-0" {
        "0".into()
    } else {
        text.into()
    }
}
