//! Border functions: sparse change-point maps over an ordered alphabet.
//!
//! A border function stores only the symbols where its value changes. The
//! value at an arbitrary symbol is the value stored at the greatest border not
//! above it, which is always defined because the least symbol of the alphabet
//! is a border. Interval transitions therefore need no start/end distinction.

use std::fmt;

use crate::alphabet::{Alphabet, Symbol};
use crate::{Error, Result};

/// Value of a symbol transition: stuck, or a state reference relative to the
/// state owning the transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    /// No transition is possible (`#`). Distinct from "no border here".
    Stuck,
    Offset(isize),
}

impl Target {
    pub fn offset(self) -> Option<isize> {
        match self {
            Target::Stuck => None,
            Target::Offset(o) => Some(o),
        }
    }

    pub fn is_stuck(self) -> bool {
        self == Target::Stuck
    }

    /// Absolute target for a transition leaving `state`. Returns `None` when
    /// stuck or when the offset would point below zero.
    pub fn resolve(self, state: usize) -> Option<usize> {
        self.offset().and_then(|o| state.checked_add_signed(o))
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Stuck => f.write_str("#"),
            Target::Offset(o) => write!(f, "{o}"),
        }
    }
}

/// A total function over an alphabet, represented by its borders.
///
/// Entries are sorted by symbol, strictly increasing, and the first entry is
/// always at the alphabet minimum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BorderFunction<V> {
    alphabet: Alphabet,
    entries: Vec<(Symbol, V)>,
}

impl<V> BorderFunction<V> {
    /// The function with the single border `(c⊥, value)`.
    pub fn constant(alphabet: Alphabet, value: V) -> Self {
        BorderFunction { alphabet, entries: vec![(alphabet.min(), value)] }
    }

    /// Builds a border function from explicit entries, checking that they start
    /// at the alphabet minimum, stay inside the alphabet and strictly increase.
    /// The entries are kept as given (not minimized).
    pub fn from_entries(alphabet: Alphabet, entries: Vec<(Symbol, V)>) -> Result<Self> {
        match entries.first() {
            None => {
                return Err(Error::MalformedBorderFunction("no entries".into()));
            }
            Some((first, _)) if *first != alphabet.min() => {
                return Err(Error::MalformedBorderFunction(format!(
                    "first border {first} is not the alphabet minimum {}",
                    alphabet.min()
                )));
            }
            Some(_) => {}
        }
        for pair in entries.windows(2) {
            if pair[0].0 >= pair[1].0 {
                return Err(Error::MalformedBorderFunction(format!(
                    "borders not strictly increasing at {}",
                    pair[1].0
                )));
            }
        }
        if let Some((last, _)) = entries.last() {
            alphabet.check(*last)?;
        }
        Ok(BorderFunction { alphabet, entries })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn entries(&self) -> &[(Symbol, V)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(Symbol, V)> {
        self.entries
    }

    /// The borders, ascending.
    pub fn domain(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.entries.iter().map(|(s, _)| *s)
    }

    pub fn values(&self) -> impl Iterator<Item = &V> + '_ {
        self.entries.iter().map(|(_, v)| v)
    }

    /// Number of borders.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Value at `s`: the value of the greatest border `<= s`.
    pub fn eval_le(&self, s: Symbol) -> Result<&V> {
        self.alphabet.check(s)?;
        Ok(self.lookup(s))
    }

    /// [`eval_le`](Self::eval_le) without the alphabet check. Symbols below the
    /// minimum read the first entry.
    pub fn lookup(&self, s: Symbol) -> &V {
        let idx = self.entries.partition_point(|(border, _)| *border <= s);
        &self.entries[idx.saturating_sub(1)].1
    }

    /// Pairs both functions. The domain is the union of both domains; no
    /// minimization is applied.
    pub fn product<W>(&self, other: &BorderFunction<W>) -> Result<BorderFunction<(V, W)>>
    where
        V: Clone,
        W: Clone,
    {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let mut entries = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        // Both start at c⊥, so the running values are always initialized.
        while i < self.entries.len() || j < other.entries.len() {
            let next_left = self.entries.get(i).map(|e| e.0);
            let next_right = other.entries.get(j).map(|e| e.0);
            let border = match (next_left, next_right) {
                (Some(l), Some(r)) => l.min(r),
                (Some(l), None) => l,
                (None, Some(r)) => r,
                (None, None) => unreachable!(),
            };
            if next_left == Some(border) {
                i += 1;
            }
            if next_right == Some(border) {
                j += 1;
            }
            let left = self.entries[i - 1].1.clone();
            let right = other.entries[j - 1].1.clone();
            entries.push((border, (left, right)));
        }
        Ok(BorderFunction { alphabet: self.alphabet, entries })
    }

    /// Applies `f` to every value, then minimizes.
    pub fn map<W: PartialEq>(&self, mut f: impl FnMut(&V) -> W) -> BorderFunction<W> {
        let mut entries: Vec<(Symbol, W)> = Vec::with_capacity(self.entries.len());
        for (border, value) in &self.entries {
            let mapped = f(value);
            if entries.last().is_some_and(|(_, prev)| *prev == mapped) {
                continue;
            }
            entries.push((*border, mapped));
        }
        BorderFunction { alphabet: self.alphabet, entries }
    }
}

impl<V: PartialEq + Clone> BorderFunction<V> {
    /// The smallest equivalent border function: drops every border whose value
    /// repeats the value of the preceding retained border.
    pub fn minimize(&self) -> Self {
        self.map(V::clone)
    }

    pub fn is_minimal(&self) -> bool {
        self.entries.windows(2).all(|pair| pair[0].1 != pair[1].1)
    }
}

/// Boolean border functions, used to describe character sets.
impl BorderFunction<bool> {
    /// The empty set.
    pub fn empty(alphabet: Alphabet) -> Self {
        Self::constant(alphabet, false)
    }

    /// Every symbol.
    pub fn sigma(alphabet: Alphabet) -> Self {
        Self::constant(alphabet, true)
    }

    /// Symbols `>= s`.
    pub fn at_least(alphabet: Alphabet, s: Symbol) -> Result<Self> {
        alphabet.check(s)?;
        if s == alphabet.min() {
            return Ok(Self::sigma(alphabet));
        }
        Ok(BorderFunction { alphabet, entries: vec![(alphabet.min(), false), (s, true)] })
    }

    /// Symbols `<= s`.
    pub fn at_most(alphabet: Alphabet, s: Symbol) -> Result<Self> {
        match alphabet.successor(s)? {
            None => Ok(Self::sigma(alphabet)),
            Some(next) => Ok(BorderFunction {
                alphabet,
                entries: vec![(alphabet.min(), true), (next, false)],
            }),
        }
    }

    /// Symbols in `low..=high`.
    pub fn range(alphabet: Alphabet, low: Symbol, high: Symbol) -> Result<Self> {
        Self::at_least(alphabet, low)?.and(&Self::at_most(alphabet, high)?)
    }

    pub fn single(alphabet: Alphabet, s: Symbol) -> Result<Self> {
        Self::range(alphabet, s, s)
    }

    pub fn and(&self, other: &Self) -> Result<Self> {
        Ok(self.product(other)?.map(|&(a, b)| a && b))
    }

    pub fn or(&self, other: &Self) -> Result<Self> {
        Ok(self.product(other)?.map(|&(a, b)| a || b))
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        Ok(self.product(other)?.map(|&(a, b)| a && !b))
    }

    pub fn not(&self) -> Self {
        self.map(|&a| !a)
    }

    /// True if no symbol maps to `true`.
    pub fn is_false_everywhere(&self) -> bool {
        self.values().all(|v| !v)
    }
}
