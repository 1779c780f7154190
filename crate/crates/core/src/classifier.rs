//! Classifiers: flat automata whose states carry token classes.
//!
//! State 1 defines the error class. A classifier is built from the error
//! classifier by appending acceptors, each lifted with an extra state that
//! carries the token class and reached through an ε-edge from state 1.
//! Classification is maximal munch: the longest prefix that can reach a
//! non-error state, labelled by the largest such state.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::acceptor::Acceptor;
use crate::alphabet::{Alphabet, Symbol};
use crate::border_fn::{BorderFunction, Target};
use crate::{Error, Result};

/// Name of a token class. Names are identifiers (`[A-Za-z_][A-Za-z0-9_]*`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TokenClass(Arc<str>);

impl TokenClass {
    pub fn new(name: &str) -> Result<Self> {
        let mut chars = name.chars();
        let valid = chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(Error::InvalidClassName(name.to_string()));
        }
        Ok(TokenClass(Arc::from(name)))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for TokenClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for TokenClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassifierState {
    pub eps: BTreeSet<isize>,
    pub trans: BorderFunction<Target>,
    pub class: TokenClass,
}

impl ClassifierState {
    pub fn new(
        eps: impl IntoIterator<Item = isize>,
        trans: BorderFunction<Target>,
        class: TokenClass,
    ) -> Self {
        ClassifierState { eps: eps.into_iter().collect(), trans, class }
    }

    pub(crate) fn offsets(&self) -> impl Iterator<Item = isize> + '_ {
        self.eps.iter().copied().chain(self.trans.values().filter_map(|t| t.offset()))
    }
}

/// Result of classifying a word: the length of the recognised prefix and its
/// class. A failed classification is `(0, error class)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Classification {
    pub len: usize,
    pub class: TokenClass,
}

impl Classification {
    pub fn lexeme<'a>(&self, input: &'a [Symbol]) -> &'a [Symbol] {
        &input[..self.len]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Classifier {
    alphabet: Alphabet,
    states: Vec<ClassifierState>,
}

impl Classifier {
    /// Builds a classifier from explicit states. Every transition must stay
    /// within `1..=n`.
    pub fn from_states(alphabet: Alphabet, states: Vec<ClassifierState>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::EmptyClassifier);
        }
        let n = states.len();
        for (idx, state) in states.iter().enumerate() {
            if state.trans.alphabet() != alphabet {
                return Err(Error::AlphabetMismatch);
            }
            let i = idx + 1;
            for offset in state.offsets() {
                let target = i as i64 + offset as i64;
                if target < 1 || target > n as i64 {
                    return Err(Error::TargetOutOfRange { state: i, target, low: 1, high: n });
                }
            }
        }
        Ok(Classifier { alphabet, states })
    }

    /// The one-state classifier that classifies everything as `error`.
    ///
    /// State 1 is stuck on every symbol: a self-loop here would let every
    /// suffix of the input start a token.
    pub fn error_classifier(alphabet: Alphabet, error: TokenClass) -> Self {
        let state = ClassifierState::new([], BorderFunction::constant(alphabet, Target::Stuck), error);
        Classifier { alphabet, states: vec![state] }
    }

    /// `A[e, t]`: every acceptor state labelled `error`, plus a final stuck
    /// state labelled `token`.
    pub fn lift_acceptor(acceptor: &Acceptor, error: &TokenClass, token: &TokenClass) -> Self {
        let alphabet = acceptor.alphabet();
        let mut states: Vec<ClassifierState> = acceptor
            .states()
            .iter()
            .map(|s| ClassifierState { eps: s.eps.clone(), trans: s.trans.clone(), class: error.clone() })
            .collect();
        states.push(ClassifierState::new(
            [],
            BorderFunction::constant(alphabet, Target::Stuck),
            token.clone(),
        ));
        Classifier { alphabet, states }
    }

    /// `C[t : A] = C{1 →ε ‖C‖+1} ∘ A[t₁, t]`.
    pub fn add_token(&self, token: &TokenClass, acceptor: &Acceptor) -> Result<Self> {
        if acceptor.alphabet() != self.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let mut states = self.states.clone();
        states[0].eps.insert(self.states.len() as isize);
        states.extend(Self::lift_acceptor(acceptor, self.error_class(), token).states);
        Ok(Classifier { alphabet: self.alphabet, states })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn states(&self) -> &[ClassifierState] {
        &self.states
    }

    /// State `i`, 1-based.
    pub fn state(&self, i: usize) -> &ClassifierState {
        &self.states[i - 1]
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `t₁`, the class of state 1.
    pub fn error_class(&self) -> &TokenClass {
        &self.states[0].class
    }

    pub fn is_error(&self, i: usize) -> bool {
        self.states[i - 1].class == self.states[0].class
    }

    pub fn is_deterministic(&self) -> bool {
        self.states.iter().all(|s| s.eps.is_empty())
    }

    pub(crate) fn check_deterministic(&self) -> Result<()> {
        match self.states.iter().position(|s| !s.eps.is_empty()) {
            Some(idx) => Err(Error::NotDeterministic { state: idx + 1 }),
            None => Ok(()),
        }
    }

    /// Distinct token classes in order of first appearance.
    pub fn classes(&self) -> Vec<TokenClass> {
        let mut out: Vec<TokenClass> = Vec::new();
        for s in &self.states {
            if !out.contains(&s.class) {
                out.push(s.class.clone());
            }
        }
        out
    }

    /// Adds every state reachable by ε-edges to `set` (a 1-based bitmap).
    pub(crate) fn close(&self, set: &mut [bool], stack: &mut Vec<usize>) {
        stack.extend((1..set.len()).filter(|&i| set[i]));
        while let Some(i) = stack.pop() {
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

    /// Fails with the first non-error state reachable from state 1 through
    /// ε-edges alone.
    pub fn check_well_formed(&self) -> Result<()> {
        let mut set = vec![false; self.len() + 1];
        set[1] = true;
        self.close(&mut set, &mut Vec::new());
        match (1..=self.len()).find(|&i| set[i] && !self.is_error(i)) {
            Some(state) => {
                Err(Error::IllFormed { state, class: self.states[state - 1].class.to_string() })
            }
            None => Ok(()),
        }
    }

    pub fn well_formed(&self) -> bool {
        self.check_well_formed().is_ok()
    }

    /// Maximal-munch classification by direct simulation of the
    /// (possibly nondeterministic) classifier.
    pub fn classify_nfa(&self, word: &[Symbol]) -> Result<Classification> {
        self.check_well_formed()?;
        let n = self.len();
        let mut current = vec![false; n + 1];
        let mut next = vec![false; n + 1];
        let mut stack = Vec::new();
        current[1] = true;
        self.close(&mut current, &mut stack);
        let best_state = |set: &[bool]| (1..=n).rev().find(|&i| set[i] && !self.is_error(i));
        let mut best = best_state(&current).map(|i| (0, i));
        for (pos, &symbol) in word.iter().enumerate() {
            if !self.alphabet.contains(symbol) {
                break;
            }
            next.iter_mut().for_each(|b| *b = false);
            let mut any = false;
            for (idx, state) in self.states.iter().enumerate() {
                let i = idx + 1;
                if current[i] {
                    if let Some(j) = state.trans.lookup(symbol).resolve(i) {
                        next[j] = true;
                        any = true;
                    }
                }
            }
            if !any {
                break;
            }
            std::mem::swap(&mut current, &mut next);
            self.close(&mut current, &mut stack);
            if let Some(i) = best_state(&current) {
                best = Some((pos + 1, i));
            }
        }
        Ok(match best {
            Some((len, i)) => Classification { len, class: self.states[i - 1].class.clone() },
            None => Classification { len: 0, class: self.error_class().clone() },
        })
    }

    /// Maximal-munch classification of a deterministic classifier.
    pub fn classify_dfa(&self, word: &[Symbol]) -> Result<Classification> {
        Ok(Dfa::new(self)?.classify(word))
    }
}

/// A token produced by [`Dfa::tokenize`]. Offsets count symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub class: TokenClass,
    pub start: usize,
    pub len: usize,
    /// Set for the one-symbol tokens emitted when nothing matched.
    pub error: bool,
}

/// A deterministic classifier prepared for repeated runs.
#[derive(Debug, Clone)]
pub struct Dfa<'a> {
    classifier: &'a Classifier,
    accepting: Vec<bool>,
}

impl<'a> Dfa<'a> {
    pub fn new(classifier: &'a Classifier) -> Result<Self> {
        classifier.check_deterministic()?;
        let accepting = (1..=classifier.len()).map(|i| !classifier.is_error(i)).collect();
        Ok(Dfa { classifier, accepting })
    }

    pub fn classifier(&self) -> &'a Classifier {
        self.classifier
    }

    /// Runs from state 1 until stuck or out of input, remembering the last
    /// position where the current state was not an error state.
    pub fn classify(&self, word: &[Symbol]) -> Classification {
        let c = self.classifier;
        let mut state = 1;
        let mut best = self.accepting[0].then_some((0, 1));
        for (pos, &symbol) in word.iter().enumerate() {
            if !c.alphabet.contains(symbol) {
                break;
            }
            match c.states[state - 1].trans.lookup(symbol).resolve(state) {
                Some(next) => state = next,
                None => break,
            }
            if self.accepting[state - 1] {
                best = Some((pos + 1, state));
            }
        }
        match best {
            Some((len, i)) => Classification { len, class: c.states[i - 1].class.clone() },
            None => Classification { len: 0, class: c.error_class().clone() },
        }
    }

    /// Splits the whole input into tokens. When no prefix classifies, a
    /// one-symbol token of the error class is emitted and scanning resumes at
    /// the next symbol.
    pub fn tokenize(&self, input: &[Symbol]) -> Vec<Token> {
        let mut tokens = Vec::new();
        let mut pos = 0;
        while pos < input.len() {
            let found = self.classify(&input[pos..]);
            let (len, error) = if found.len == 0 { (1, true) } else { (found.len, false) };
            tokens.push(Token { class: found.class, start: pos, len, error });
            pos += len;
        }
        tokens
    }
}
