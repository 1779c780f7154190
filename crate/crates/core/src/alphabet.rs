//! Ordered symbol universes.
//!
//! Every alphabet is a dense ordinal interval `min..=max`, so the successor of
//! a symbol is its ordinal plus one. Text alphabets use Unicode scalar values;
//! tests use tiny alphabets so brute-force oracles stay tractable.

use std::fmt;

use crate::{Error, Result};

/// A character, identified by its ordinal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u32);

impl Symbol {
    pub const fn ordinal(self) -> u32 {
        self.0
    }

    /// The symbol as a `char`, when the ordinal is a Unicode scalar value.
    pub fn as_char(self) -> Option<char> {
        char::from_u32(self.0)
    }
}

impl From<char> for Symbol {
    fn from(c: char) -> Self {
        Symbol(c as u32)
    }
}

impl From<u32> for Symbol {
    fn from(ordinal: u32) -> Self {
        Symbol(ordinal)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_char() {
            Some(c) if c.is_ascii_graphic() => write!(f, "'{c}'"),
            _ => write!(f, "U+{:04X}", self.0),
        }
    }
}

/// Converts text into a word of symbols.
pub fn word(text: &str) -> Vec<Symbol> {
    text.chars().map(Symbol::from).collect()
}

/// The symbol universe `min..=max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet {
    min: Symbol,
    max: Symbol,
}

impl Alphabet {
    pub const UNICODE_MAX: u32 = 0x10FFFF;

    pub fn new(min: u32, max: u32) -> Result<Self> {
        if min > max {
            return Err(Error::InvalidAlphabet { min, max });
        }
        Ok(Alphabet { min: Symbol(min), max: Symbol(max) })
    }

    /// Unicode scalar values. Surrogates are not excluded here.
    pub const fn unicode() -> Self {
        Alphabet { min: Symbol(0), max: Symbol(Self::UNICODE_MAX) }
    }

    pub const fn ascii() -> Self {
        Alphabet { min: Symbol(0), max: Symbol(0x7F) }
    }

    /// The least symbol, written c⊥ in tables.
    pub const fn min(&self) -> Symbol {
        self.min
    }

    pub const fn max(&self) -> Symbol {
        self.max
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.min <= s && s <= self.max
    }

    pub fn check(&self, s: Symbol) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::SymbolOutOfRange { symbol: s, min: self.min, max: self.max })
        }
    }

    /// Number of symbols in the universe.
    pub fn len(&self) -> u64 {
        u64::from(self.max.0 - self.min.0) + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The least symbol strictly greater than `s`, or `None` at the top.
    pub fn successor(&self, s: Symbol) -> Result<Option<Symbol>> {
        self.check(s)?;
        Ok((s < self.max).then(|| Symbol(s.0 + 1)))
    }

    pub fn predecessor(&self, s: Symbol) -> Result<Option<Symbol>> {
        self.check(s)?;
        Ok((s > self.min).then(|| Symbol(s.0 - 1)))
    }

    /// All symbols in ascending order.
    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        (self.min.0..=self.max.0).map(Symbol)
    }
}

impl Default for Alphabet {
    fn default() -> Self {
        Alphabet::unicode()
    }
}
