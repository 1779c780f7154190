//! State minimization of deterministic classifiers.
//!
//! Hopcroft partition refinement works directly on border functions: for a
//! splitter class the only symbols that need inspecting are the borders of
//! its predecessors. The initial partition either groups states by token
//! class, or additionally by their reachability function (shortest distance
//! to each token class), which usually yields the final partition at once.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use crate::border_fn::{BorderFunction, Target};
use crate::classifier::{Classifier, ClassifierState, TokenClass};
use crate::determinize::union_of_domains;
use crate::{Error, Result};

/// Predecessor lists: `B(i)` holds every state with a symbol transition into `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackTransitions(Vec<Vec<usize>>);

impl BackTransitions {
    /// Predecessors of state `i` (1-based), ascending.
    pub fn of(&self, i: usize) -> &[usize] {
        &self.0[i - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn back_transitions(c: &Classifier) -> Result<BackTransitions> {
    c.check_deterministic()?;
    let mut back = vec![Vec::new(); c.len()];
    for j in 1..=c.len() {
        for target in c.state(j).trans.values() {
            if let Some(i) = target.resolve(j) {
                back[i - 1].push(j);
            }
        }
    }
    for preds in &mut back {
        preds.sort_unstable();
        preds.dedup();
    }
    Ok(BackTransitions(back))
}

/// Per state, the shortest number of steps to a state of each reachable
/// non-error class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reachability(Vec<BTreeMap<TokenClass, usize>>);

impl Reachability {
    pub fn of(&self, i: usize) -> &BTreeMap<TokenClass, usize> {
        &self.0[i - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Computes the reachability function by worklist relaxation over the back
/// transitions, starting from `(tᵢ, 0)` at every non-error state.
pub fn reachability(c: &Classifier) -> Result<Reachability> {
    let back = back_transitions(c)?;
    let n = c.len();
    let mut rho: Vec<BTreeMap<TokenClass, usize>> = (1..=n)
        .map(|i| {
            let mut m = BTreeMap::new();
            if !c.is_error(i) {
                m.insert(c.state(i).class.clone(), 0);
            }
            m
        })
        .collect();
    let mut unchecked: Vec<usize> = (1..=n).collect();
    let mut queued = vec![true; n + 1];
    while let Some(u) = unchecked.pop() {
        queued[u] = false;
        let known = rho[u - 1].clone();
        for &i in back.of(u) {
            let mut changed = false;
            for (class, &dist) in &known {
                let entry = rho[i - 1].entry(class.clone()).or_insert(usize::MAX);
                if dist + 1 < *entry {
                    *entry = dist + 1;
                    changed = true;
                }
            }
            if changed && !queued[i] {
                queued[i] = true;
                unchecked.push(i);
            }
        }
    }
    Ok(Reachability(rho))
}

/// How the initial partition groups states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum InitStrategy {
    /// Same token class.
    ByClass,
    /// Same token class and same reachability function.
    #[default]
    ByReachability,
}

impl FromStr for InitStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "by_class" => Ok(InitStrategy::ByClass),
            "by_reachability" => Ok(InitStrategy::ByReachability),
            other => Err(format!("unknown init strategy `{other}` (expected by_class or by_reachability)")),
        }
    }
}

impl fmt::Display for InitStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InitStrategy::ByClass => "by_class",
            InitStrategy::ByReachability => "by_reachability",
        })
    }
}

/// A partition of the states `1..=n` into disjoint non-empty classes, with
/// the inverse index state → class position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    classes: Vec<Vec<usize>>,
    index: Vec<usize>,
}

impl Partition {
    /// Validates that `classes` is a disjoint cover of `1..=n` by non-empty sets.
    pub fn from_classes(n: usize, classes: Vec<Vec<usize>>) -> Result<Self> {
        let mut index = vec![usize::MAX; n];
        for (k, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(Error::InvalidPartition(format!("class {} is empty", k + 1)));
            }
            for &s in class {
                if s == 0 || s > n {
                    return Err(Error::InvalidPartition(format!("state {s} out of range 1..={n}")));
                }
                if index[s - 1] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("state {s} appears twice")));
                }
                index[s - 1] = k;
            }
        }
        if let Some(missing) = index.iter().position(|&k| k == usize::MAX) {
            return Err(Error::InvalidPartition(format!("state {} is not covered", missing + 1)));
        }
        Ok(Partition { classes, index })
    }

    /// Groups `1..=n` by equal key, classes ordered by first appearance.
    pub fn by_key<K: Eq + Hash>(n: usize, mut key: impl FnMut(usize) -> K) -> Self {
        let mut seen: HashMap<K, usize> = HashMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut index = Vec::with_capacity(n);
        for s in 1..=n {
            let k = *seen.entry(key(s)).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[k].push(s);
            index.push(k);
        }
        Partition { classes, index }
    }

    /// Every state in its own class.
    pub fn discrete(n: usize) -> Self {
        Partition::by_key(n, |s| s)
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Position (0-based) of the class holding state `s`.
    pub fn class_index(&self, s: usize) -> usize {
        self.index[s - 1]
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Number of partitioned states.
    pub fn num_states(&self) -> usize {
        self.index.len()
    }

    /// Checks the cover/disjointness/index invariants.
    pub fn is_valid(&self) -> bool {
        self.classes.iter().all(|c| !c.is_empty())
            && self.classes.iter().map(Vec::len).sum::<usize>() == self.index.len()
            && self
                .classes
                .iter()
                .enumerate()
                .all(|(k, c)| c.iter().all(|&s| s >= 1 && s <= self.index.len() && self.index[s - 1] == k))
    }

    /// Members sorted inside each class, classes sorted by minimal element.
    pub fn sorted(&self) -> Self {
        let mut classes = self.classes.clone();
        for c in &mut classes {
            c.sort_unstable();
        }
        classes.sort_unstable_by_key(|c| c[0]);
        let mut index = vec![0; self.index.len()];
        for (k, c) in classes.iter().enumerate() {
            for &s in c {
                index[s - 1] = k;
            }
        }
        Partition { classes, index }
    }

    /// Splits every class that `splitter` cuts. The larger part keeps the
    /// class position; the smaller part is appended and pushed on `pending`.
    /// `in_splitter` flags the members of `splitter`.
    fn refine(&mut self, splitter: &[usize], in_splitter: &[bool], hits: &mut Vec<usize>, pending: &mut Vec<usize>) {
        let mut touched: Vec<usize> = Vec::new();
        for &s in splitter {
            let k = self.index[s - 1];
            if hits[k] == 0 {
                touched.push(k);
            }
            hits[k] += 1;
        }
        for k in touched {
            let inside_count = std::mem::take(&mut hits[k]);
            if inside_count == self.classes[k].len() {
                continue;
            }
            let (mut inside, mut outside): (Vec<usize>, Vec<usize>) =
                self.classes[k].iter().partition(|&&s| in_splitter[s]);
            if inside.len() < outside.len() {
                std::mem::swap(&mut inside, &mut outside);
            }
            let fresh = self.classes.len();
            for &s in &outside {
                self.index[s - 1] = fresh;
            }
            self.classes[k] = inside;
            self.classes.push(outside);
            hits.push(0);
            pending.push(fresh);
        }
    }
}

/// The initial partition for `strategy`.
pub fn initial_partition(c: &Classifier, strategy: InitStrategy) -> Result<Partition> {
    c.check_deterministic()?;
    Ok(match strategy {
        InitStrategy::ByClass => Partition::by_key(c.len(), |i| c.state(i).class.clone()),
        InitStrategy::ByReachability => {
            let rho = reachability(c)?;
            Partition::by_key(c.len(), |i| (c.state(i).class.clone(), rho.of(i).clone()))
        }
    })
}

/// Refines `init` until states in one class have the same class-level
/// successor at every symbol (`#` only matching `#`).
pub fn hopcroft(c: &Classifier, init: Partition) -> Result<Partition> {
    let back = back_transitions(c)?;
    if init.num_states() != c.len() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} states, classifier has {}",
            init.num_states(),
            c.len()
        )));
    }
    let n = c.len();
    let mut p = init;
    let mut pending: Vec<usize> = (0..p.num_classes()).collect();
    let mut hits = vec![0usize; p.num_classes()];
    let mut in_preds = vec![false; n + 1];
    let mut in_splitter = vec![false; n + 1];
    let mut preds: Vec<usize> = Vec::new();
    let mut splitter: Vec<usize> = Vec::new();

    while let Some(u) = pending.pop() {
        preds.clear();
        for &i in &p.classes[u] {
            for &j in back.of(i) {
                if !in_preds[j] {
                    in_preds[j] = true;
                    preds.push(j);
                }
            }
        }
        for &j in &preds {
            in_preds[j] = false;
        }
        if preds.is_empty() {
            continue;
        }
        for sigma in union_of_domains(c, preds.iter().copied()) {
            splitter.clear();
            for &i in &preds {
                if let Some(j) = c.state(i).trans.lookup(sigma).resolve(i) {
                    if p.index[j - 1] == u {
                        splitter.push(i);
                        in_splitter[i] = true;
                    }
                }
            }
            if !splitter.is_empty() {
                p.refine(&splitter, &in_splitter, &mut hits, &mut pending);
            }
            for &i in &splitter {
                in_splitter[i] = false;
            }
        }
    }
    for class in &mut p.classes {
        class.sort_unstable();
    }
    Ok(p)
}

/// The quotient classifier: classes sorted by minimal member, each
/// represented by its minimal member.
pub fn quotient(c: &Classifier, p: &Partition) -> Result<Classifier> {
    c.check_deterministic()?;
    if p.num_states() != c.len() || !p.is_valid() {
        return Err(Error::InvalidPartition("partition does not match the classifier".into()));
    }
    let p = p.sorted();
    let succ_class = |i: usize, t: &Target| t.resolve(i).map(|j| p.class_index(j));

    for (k, class) in p.classes().iter().enumerate() {
        let rep = class[0];
        for &m in &class[1..] {
            if c.state(m).class != c.state(rep).class {
                return Err(Error::Internal(format!(
                    "states {rep} and {m} share class {} but carry different tokens",
                    k + 1
                )));
            }
            for sigma in union_of_domains(c, [rep, m].into_iter()) {
                let a = succ_class(rep, c.state(rep).trans.lookup(sigma));
                let b = succ_class(m, c.state(m).trans.lookup(sigma));
                if a != b {
                    return Err(Error::Internal(format!(
                        "states {rep} and {m} share class {} but differ at {sigma}",
                        k + 1
                    )));
                }
            }
        }
    }

    let mut states = Vec::with_capacity(p.num_classes());
    for (k, class) in p.classes().iter().enumerate() {
        let rep = class[0];
        let entries = c
            .state(rep)
            .trans
            .entries()
            .iter()
            .map(|(sigma, t)| {
                let target = match succ_class(rep, t) {
                    Some(k2) => Target::Offset(k2 as isize - k as isize),
                    None => Target::Stuck,
                };
                (*sigma, target)
            })
            .collect();
        let trans = BorderFunction::from_entries(c.alphabet(), entries)?.minimize();
        states.push(ClassifierState::new([], trans, c.state(rep).class.clone()));
    }
    Classifier::from_states(c.alphabet(), states)
}

/// Initial partition, refinement and quotient in one call.
pub fn minimize(c: &Classifier, strategy: InitStrategy) -> Result<Classifier> {
    let init = initial_partition(c, strategy)?;
    let fin = hopcroft(c, init)?;
    quotient(c, &fin)
}
