use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// One letter of the nine-symbol alphabet. `A..F` are angle bins, `S, M, L`
/// are distance sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    A,
    B,
    C,
    D,
    E,
    F,
    S,
    M,
    L,
}

impl Symbol {
    /// Alphabet order used to index substitution tables.
    pub const ALL: [Symbol; 9] = [
        Symbol::A,
        Symbol::B,
        Symbol::C,
        Symbol::D,
        Symbol::E,
        Symbol::F,
        Symbol::S,
        Symbol::M,
        Symbol::L,
    ];

    pub const ANGLES: [Symbol; 6] = [
        Symbol::A,
        Symbol::B,
        Symbol::C,
        Symbol::D,
        Symbol::E,
        Symbol::F,
    ];

    pub const SIZES: [Symbol; 3] = [Symbol::S, Symbol::M, Symbol::L];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_angle(self) -> bool {
        self.index() < 6
    }

    pub fn is_size(self) -> bool {
        !self.is_angle()
    }

    pub fn as_char(self) -> char {
        b"ABCDEFSML"[self.index()] as char
    }

    pub fn from_char(c: char) -> Option<Symbol> {
        Symbol::ALL.iter().copied().find(|s| s.as_char() == c)
    }

    /// Angle letter for bin `k` (0-based), if `k < 6`.
    pub fn angle(k: usize) -> Option<Symbol> {
        Symbol::ANGLES.get(k).copied()
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A shape's searchable representation: concatenated symbol triples.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SymbolString(Vec<Symbol>);

impl SymbolString {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        SymbolString(symbols)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(angle, size, size)` groups; a trailing partial group is dropped.
    pub fn triples(&self) -> impl Iterator<Item = &[Symbol]> {
        self.0.chunks_exact(3)
    }

    /// Whether the string has the triple layout produced by the encoder.
    pub fn is_well_formed(&self) -> bool {
        self.0.len().is_multiple_of(3)
            && self
                .0
                .iter()
                .enumerate()
                .all(|(i, s)| s.is_angle() == (i % 3 == 0))
    }
}

impl From<Vec<Symbol>> for SymbolString {
    fn from(v: Vec<Symbol>) -> Self {
        SymbolString(v)
    }
}

impl fmt::Display for SymbolString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|s| s.as_char()).collect();
        f.write_str(&s)
    }
}

impl FromStr for SymbolString {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| {
                Symbol::from_char(c).ok_or_else(|| Error::invalid(format!("unknown symbol `{c}`")))
            })
            .collect::<Result<Vec<_>>>()
            .map(SymbolString)
    }
}
