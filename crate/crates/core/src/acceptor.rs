//! Flat acceptors.
//!
//! An acceptor is a sequence of states `1..=n`, each holding a set of relative
//! ε-offsets and a border function of relative symbol targets. State 1 is the
//! initial state and the implicit state `n + 1` is the only accepting one, so a
//! word is accepted by "falling out" of the sequence. Transitions never point
//! below state 2 or above `n + 1` (the committing property), which is what lets
//! the regular operations work by plain juxtaposition plus a few ε-edges.

use std::collections::BTreeSet;

use crate::alphabet::{Alphabet, Symbol};
use crate::border_fn::{BorderFunction, Target};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AcceptorState {
    /// Relative ε-offsets.
    pub eps: BTreeSet<isize>,
    pub trans: BorderFunction<Target>,
}

impl AcceptorState {
    pub fn new(eps: impl IntoIterator<Item = isize>, trans: BorderFunction<Target>) -> Self {
        AcceptorState { eps: eps.into_iter().collect(), trans }
    }

    /// A state with no transitions at all.
    pub fn stuck(alphabet: Alphabet) -> Self {
        AcceptorState { eps: BTreeSet::new(), trans: BorderFunction::constant(alphabet, Target::Stuck) }
    }

    /// Every target this state can move to, relative, ε first.
    pub(crate) fn offsets(&self) -> impl Iterator<Item = isize> + '_ {
        self.eps.iter().copied().chain(self.trans.values().filter_map(|t| t.offset()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Acceptor {
    alphabet: Alphabet,
    states: Vec<AcceptorState>,
}

impl Acceptor {
    /// Builds an acceptor from explicit states, checking the committing
    /// property and that every border function lives over `alphabet`.
    pub fn from_states(alphabet: Alphabet, states: Vec<AcceptorState>) -> Result<Self> {
        let n = states.len();
        for (idx, state) in states.iter().enumerate() {
            if state.trans.alphabet() != alphabet {
                return Err(Error::AlphabetMismatch);
            }
            let i = idx + 1;
            for offset in state.offsets() {
                let target = i as i64 + offset as i64;
                if target < 2 || target > n as i64 + 1 {
                    return Err(Error::TargetOutOfRange { state: i, target, low: 2, high: n + 1 });
                }
            }
        }
        Ok(Acceptor { alphabet, states })
    }

    /// The acceptor with no states, accepting exactly the empty word.
    pub fn epsilon(alphabet: Alphabet) -> Self {
        Acceptor { alphabet, states: Vec::new() }
    }

    /// The one-state acceptor `({}, {(c⊥, #)})` accepting nothing.
    pub fn nothing(alphabet: Alphabet) -> Self {
        Acceptor { alphabet, states: vec![AcceptorState::stuck(alphabet)] }
    }

    /// Accepts exactly the one-symbol words whose symbol maps to `true`.
    pub fn from_border(phi: &BorderFunction<bool>) -> Self {
        let trans = phi.map(|&t| if t { Target::Offset(1) } else { Target::Stuck });
        Acceptor { alphabet: phi.alphabet(), states: vec![AcceptorState::new([], trans)] }
    }

    /// Accepts exactly `text`.
    pub fn literal(alphabet: Alphabet, text: &[Symbol]) -> Result<Self> {
        let mut acc = Acceptor::epsilon(alphabet);
        for &s in text {
            acc.states.extend(Acceptor::from_border(&BorderFunction::single(alphabet, s)?).states);
        }
        Ok(acc)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn states(&self) -> &[AcceptorState] {
        &self.states
    }

    pub fn into_states(self) -> Vec<AcceptorState> {
        self.states
    }

    /// Number of states, `‖A‖`.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn is_deterministic(&self) -> bool {
        self.states.iter().all(|s| s.eps.is_empty())
    }

    fn same_alphabet(&self, other: &Acceptor) -> Result<()> {
        if self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch)
        }
    }

    /// Juxtaposes the two state sequences.
    pub fn concat(&self, other: &Acceptor) -> Result<Self> {
        self.same_alphabet(other)?;
        let mut states = Vec::with_capacity(self.len() + other.len());
        states.extend_from_slice(&self.states);
        states.extend_from_slice(&other.states);
        Ok(Acceptor { alphabet: self.alphabet, states })
    }

    /// Adds an ε-transition from state `i` to state `j` (both 1-based).
    pub fn add_eps(&self, i: usize, j: usize) -> Result<Self> {
        let mut out = self.clone();
        out.push_eps(i, j)?;
        Ok(out)
    }

    fn push_eps(&mut self, i: usize, j: usize) -> Result<()> {
        let n = self.len();
        if i < 1 || i > n {
            return Err(Error::NoSuchState { state: i, len: n });
        }
        if j < 2 || j > n + 1 {
            return Err(Error::TargetOutOfRange { state: i, target: j as i64, low: 2, high: n + 1 });
        }
        self.states[i - 1].eps.insert(j as isize - i as isize);
        Ok(())
    }

    /// `A₁ | A₂ = (A₁ ∘ A∅ ∘ A₂){1 →ε n₁+2, n₁+1 →ε n₁+n₂+2}`.
    pub fn union(&self, other: &Acceptor) -> Result<Self> {
        self.same_alphabet(other)?;
        let (n1, n2) = (self.len(), other.len());
        let mut out = self.concat(&Acceptor::nothing(self.alphabet))?.concat(other)?;
        out.push_eps(1, n1 + 2)?;
        out.push_eps(n1 + 1, n1 + n2 + 2)?;
        Ok(out)
    }

    fn wrapped(&self) -> Acceptor {
        let nothing = Acceptor::nothing(self.alphabet);
        let mut states = Vec::with_capacity(self.len() + 2);
        states.extend_from_slice(&nothing.states);
        states.extend_from_slice(&self.states);
        states.extend_from_slice(&nothing.states);
        Acceptor { alphabet: self.alphabet, states }
    }

    /// `A* = (A∅ ∘ A ∘ A∅){1 →ε 2, 2 →ε n+3, n+2 →ε 2}`.
    pub fn star(&self) -> Self {
        let n = self.len();
        let mut out = self.wrapped();
        for (i, j) in [(1, 2), (2, n + 3), (n + 2, 2)] {
            out.push_eps(i, j).expect("star edges stay inside the wrapped acceptor");
        }
        out
    }

    /// `A⁺ = (A∅ ∘ A ∘ A∅){1 →ε 2, n+2 →ε 2, n+2 →ε n+3}`.
    pub fn plus(&self) -> Self {
        let n = self.len();
        let mut out = self.wrapped();
        for (i, j) in [(1, 2), (n + 2, 2), (n + 2, n + 3)] {
            out.push_eps(i, j).expect("plus edges stay inside the wrapped acceptor");
        }
        out
    }

    /// `A? = A{1 →ε n+1}`. The empty acceptor already accepts ε.
    pub fn optional(&self) -> Self {
        if self.is_empty() {
            return self.clone();
        }
        let mut out = self.clone();
        out.push_eps(1, self.len() + 1).expect("optional edge targets the accepting state");
        out
    }

    fn close(&self, set: &mut [bool], stack: &mut Vec<usize>) {
        let n = self.len();
        stack.extend((1..set.len()).filter(|&i| set[i]));
        while let Some(i) = stack.pop() {
            if i > n {
                continue;
            }
            for &offset in &self.states[i - 1].eps {
                if let Some(j) = i.checked_add_signed(offset) {
                    if !set[j] {
                        set[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
    }

    /// Runs the acceptor on `word` by frontier simulation: ε-closure, then one
    /// symbol step, repeated. Symbols outside the alphabet have no transition.
    pub fn accepts(&self, word: &[Symbol]) -> bool {
        let n = self.len();
        let mut current = vec![false; n + 2];
        let mut next = vec![false; n + 2];
        let mut stack = Vec::new();
        current[1] = true;
        self.close(&mut current, &mut stack);
        for &symbol in word {
            if !self.alphabet.contains(symbol) {
                return false;
            }
            next.iter_mut().for_each(|b| *b = false);
            let mut any = false;
            for (idx, state) in self.states.iter().enumerate() {
                let i = idx + 1;
                if !current[i] {
                    continue;
                }
                if let Some(j) = state.trans.lookup(symbol).resolve(i) {
                    next[j] = true;
                    any = true;
                }
            }
            if !any {
                return false;
            }
            std::mem::swap(&mut current, &mut next);
            self.close(&mut current, &mut stack);
        }
        current[n + 1]
    }

    pub fn accepts_empty(&self) -> bool {
        self.accepts(&[])
    }

    /// True if no word at all is accepted: the accepting state is unreachable
    /// through ε-edges and non-`#` borders.
    pub fn is_empty_language(&self) -> bool {
        let n = self.len();
        let mut seen = vec![false; n + 2];
        let mut stack = vec![1];
        seen[1] = true;
        while let Some(i) = stack.pop() {
            if i > n {
                return false;
            }
            for offset in self.states[i - 1].offsets() {
                if let Some(j) = i.checked_add_signed(offset) {
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        true
    }
}
