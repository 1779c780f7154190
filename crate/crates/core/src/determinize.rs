//! Subset construction for classifiers.
//!
//! Only the borders of the border functions in a state set can change the
//! successor set, so each DFA state is built by evaluating its member states
//! at the union of their borders. Between two consecutive borders every
//! member's transition is constant.

use std::collections::HashMap;

use crate::alphabet::Symbol;
use crate::border_fn::{BorderFunction, Target};
use crate::classifier::{Classifier, ClassifierState, TokenClass};
use crate::{Error, Result};

/// A set of classifier states (1-based), kept sorted so it can be used as a
/// map key.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet(Vec<usize>);

impl StateSet {
    pub fn new(states: impl IntoIterator<Item = usize>) -> Self {
        states.into_iter().collect()
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, state: usize) -> bool {
        self.0.binary_search(&state).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

impl FromIterator<usize> for StateSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        StateSet(v)
    }
}

/// The bijection between discovered state sets and DFA state numbers.
#[derive(Debug, Clone, Default)]
pub struct SubsetIndex {
    by_set: HashMap<StateSet, usize>,
    by_number: Vec<StateSet>,
}

impl SubsetIndex {
    /// Number of discovered sets.
    pub fn len(&self) -> usize {
        self.by_number.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_number.is_empty()
    }

    /// DFA state number of `set`, if discovered.
    pub fn number(&self, set: &StateSet) -> Option<usize> {
        self.by_set.get(set).copied()
    }

    /// The set behind DFA state `number` (1-based).
    pub fn set(&self, number: usize) -> &StateSet {
        &self.by_number[number - 1]
    }

    /// Number of `set`, registering it if new.
    pub fn intern(&mut self, set: StateSet) -> usize {
        if let Some(&h) = self.by_set.get(&set) {
            return h;
        }
        self.by_number.push(set.clone());
        let h = self.by_number.len();
        self.by_set.insert(set, h);
        h
    }
}

fn check_members(c: &Classifier, s: &StateSet) -> Result<()> {
    match s.iter().find(|&i| i == 0 || i > c.len()) {
        Some(state) => Err(Error::NoSuchState { state, len: c.len() }),
        None => Ok(()),
    }
}

/// Closes `seeds` under ε-edges. `marks` must be all-false on entry and is
/// all-false again on return.
fn close_into(c: &Classifier, seeds: &mut Vec<usize>, marks: &mut [bool]) -> StateSet {
    let mut members = Vec::with_capacity(seeds.len() * 2);
    while let Some(i) = seeds.pop() {
        if marks[i] {
            continue;
        }
        marks[i] = true;
        members.push(i);
        for &offset in &c.state(i).eps {
            if let Some(j) = i.checked_add_signed(offset) {
                if !marks[j] {
                    seeds.push(j);
                }
            }
        }
    }
    for &i in &members {
        marks[i] = false;
    }
    StateSet::new(members)
}

/// Least superset of `s` closed under ε-transitions.
pub fn closure(c: &Classifier, s: &StateSet) -> Result<StateSet> {
    check_members(c, s)?;
    let mut marks = vec![false; c.len() + 1];
    Ok(close_into(c, &mut s.members().to_vec(), &mut marks))
}

/// Union of the border-function domains of the states in `s`, ascending.
pub fn borders(c: &Classifier, s: &StateSet) -> Result<Vec<Symbol>> {
    if s.is_empty() {
        return Err(Error::EmptyStateSet);
    }
    check_members(c, s)?;
    Ok(union_of_domains(c, s.iter()))
}

pub(crate) fn union_of_domains(c: &Classifier, states: impl Iterator<Item = usize>) -> Vec<Symbol> {
    let mut out: Vec<Symbol> = states.flat_map(|i| c.state(i).trans.domain()).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Class of the largest non-error state in `s`, or the error class.
pub fn class_of(c: &Classifier, s: &StateSet) -> TokenClass {
    s.members()
        .iter()
        .rev()
        .find(|&&i| i >= 1 && i <= c.len() && !c.is_error(i))
        .map(|&i| c.state(i).class.clone())
        .unwrap_or_else(|| c.error_class().clone())
}

/// Determinizes a well-formed classifier. DFA states are numbered in
/// discovery order and transitions are stored relative, with minimized
/// border functions.
pub fn determinize(c: &Classifier) -> Result<Classifier> {
    determinize_with_index(c).map(|(dfa, _)| dfa)
}

/// [`determinize`], also returning the set behind each DFA state.
pub fn determinize_with_index(c: &Classifier) -> Result<(Classifier, SubsetIndex)> {
    c.check_well_formed()?;
    let alphabet = c.alphabet();
    let mut marks = vec![false; c.len() + 1];
    let mut index = SubsetIndex::default();
    index.intern(close_into(c, &mut vec![1], &mut marks));

    let mut states: Vec<ClassifierState> = Vec::new();
    let mut seeds = Vec::new();
    while states.len() < index.len() {
        let i = states.len() + 1;
        let current = index.set(i).clone();
        let mut entries = Vec::new();
        for sigma in union_of_domains(c, current.iter()) {
            seeds.clear();
            seeds.extend(current.iter().filter_map(|s| c.state(s).trans.lookup(sigma).resolve(s)));
            if seeds.is_empty() {
                entries.push((sigma, Target::Stuck));
                continue;
            }
            let h = index.intern(close_into(c, &mut seeds, &mut marks));
            entries.push((sigma, Target::Offset(h as isize - i as isize)));
        }
        let trans = BorderFunction::from_entries(alphabet, entries)?.minimize();
        states.push(ClassifierState::new([], trans, class_of(c, &current)));
    }
    Ok((Classifier::from_states(alphabet, states)?, index))
}
