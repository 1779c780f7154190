#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use flatlex::prelude::*;
use rand::Rng;

pub fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn bundled_spec(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn tc(name: &str) -> TokenClass {
    TokenClass::new(name).unwrap()
}

fn borders(a: Alphabet, pairs: &[(char, Target)]) -> BorderFunction<Target> {
    let mut entries = vec![(a.min(), Target::Stuck)];
    entries.extend(pairs.iter().map(|&(c, t)| (Symbol::from(c), t)));
    BorderFunction::from_entries(a, entries).unwrap()
}

/// The two-state identifier acceptor, typed in from its table.
pub fn identifier_acceptor() -> Acceptor {
    use Target::{Offset, Stuck};
    let a = Alphabet::ascii();
    let first = borders(a, &[('A', Offset(1)), ('[', Stuck), ('a', Offset(1)), ('{', Stuck)]);
    let rest = borders(
        a,
        &[
            ('0', Offset(0)),
            (':', Stuck),
            ('A', Offset(0)),
            ('[', Stuck),
            ('_', Offset(0)),
            ('`', Stuck),
            ('a', Offset(0)),
            ('{', Stuck),
        ],
    );
    Acceptor::from_states(a, vec![AcceptorState::new([], first), AcceptorState::new([1], rest)]).unwrap()
}

/// The five-state acceptor for `while`, typed in from its table.
pub fn while_acceptor() -> Acceptor {
    let a = Alphabet::ascii();
    let rows = [('w', 'x'), ('h', 'i'), ('i', 'j'), ('l', 'm'), ('e', 'f')];
    let states = rows
        .iter()
        .map(|&(c, next)| AcceptorState::new([], borders(a, &[(c, Target::Offset(1)), (next, Target::Stuck)])))
        .collect();
    Acceptor::from_states(a, states).unwrap()
}

pub fn id_while_classifier() -> Classifier {
    Classifier::error_classifier(Alphabet::ascii(), tc("E"))
        .add_token(&tc("I"), &identifier_acceptor())
        .unwrap()
        .add_token(&tc("W"), &while_acceptor())
        .unwrap()
}

/// Determinization of the bundled identifier/`for` spec.
pub fn id_for_dfa() -> Classifier {
    let spec = TokenSpec::parse(&bundled_spec("id_for.tokspec")).unwrap();
    determinize(&spec.build_classifier().unwrap()).unwrap()
}

/// Every word over `0..k` of length at most `max_len`, shortest first.
pub fn all_words(k: u32, max_len: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<Symbol>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for s in 0..k {
                let mut v = w.clone();
                v.push(Symbol(s));
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Random expression terms over a small alphabet.
#[derive(Debug, Clone)]
pub enum Term {
    Nothing,
    Epsilon,
    Set(Vec<bool>),
    Concat(Box<Term>, Box<Term>),
    Union(Box<Term>, Box<Term>),
    Star(Box<Term>),
    Plus(Box<Term>),
    Optional(Box<Term>),
}

pub fn set_border(a: Alphabet, members: &[bool]) -> BorderFunction<bool> {
    let mut phi = BorderFunction::empty(a);
    for (k, &m) in members.iter().enumerate() {
        if m {
            phi = phi.or(&BorderFunction::single(a, Symbol(a.min().0 + k as u32)).unwrap()).unwrap();
        }
    }
    phi
}

impl Term {
    pub fn random<R: Rng + ?Sized>(rng: &mut R, k: u32, depth: u32) -> Term {
        let leaf = depth == 0 || rng.gen_bool(0.25);
        if leaf {
            return match rng.gen_range(0..10) {
                0 => Term::Nothing,
                1 => Term::Epsilon,
                _ => Term::Set((0..k).map(|_| rng.gen_bool(0.4)).collect()),
            };
        }
        let sub = |rng: &mut R| Box::new(Term::random(rng, k, depth - 1));
        match rng.gen_range(0..6) {
            0 | 1 => Term::Concat(sub(rng), sub(rng)),
            2 | 3 => Term::Union(sub(rng), sub(rng)),
            4 => match rng.gen_range(0..3) {
                0 => Term::Star(sub(rng)),
                1 => Term::Plus(sub(rng)),
                _ => Term::Optional(sub(rng)),
            },
            _ => Term::Plus(sub(rng)),
        }
    }

    pub fn acceptor(&self, a: Alphabet) -> Acceptor {
        match self {
            Term::Nothing => Acceptor::nothing(a),
            Term::Epsilon => Acceptor::epsilon(a),
            Term::Set(m) => Acceptor::from_border(&set_border(a, m)),
            Term::Concat(x, y) => x.acceptor(a).concat(&y.acceptor(a)).unwrap(),
            Term::Union(x, y) => x.acceptor(a).union(&y.acceptor(a)).unwrap(),
            Term::Star(x) => x.acceptor(a).star(),
            Term::Plus(x) => x.acceptor(a).plus(),
            Term::Optional(x) => x.acceptor(a).optional(),
        }
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Nothing | Term::Epsilon | Term::Set(_) => vec![],
            Term::Concat(x, y) | Term::Union(x, y) => vec![x, y],
            Term::Star(x) | Term::Plus(x) | Term::Optional(x) => vec![x],
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }
}

/// Membership table of a language over all words of bounded length,
/// indexed by word.
pub struct Language {
    members: HashMap<Vec<Symbol>, bool>,
}

impl Language {
    pub fn of_acceptor(a: &Acceptor, words: &[Vec<Symbol>]) -> Language {
        Language { members: words.iter().map(|w| (w.clone(), a.accepts(w))).collect() }
    }

    pub fn contains(&self, w: &[Symbol]) -> bool {
        self.members[w]
    }
}

/// Whether `w` is a concatenation of at least `min_pieces` words of `part`.
pub fn splits_into(part: &Language, w: &[Symbol], min_pieces: usize) -> bool {
    if w.is_empty() {
        return min_pieces == 0 || part.contains(&[]);
    }
    // reach[j]: w[..j] is a concatenation of non-empty pieces from `part`
    let mut reach = vec![false; w.len() + 1];
    reach[0] = true;
    for j in 1..=w.len() {
        reach[j] = (0..j).any(|i| reach[i] && part.contains(&w[i..j]));
    }
    reach[w.len()]
}

/// Membership of `w` in the language of `term`'s root operation, computed from
/// the children's languages alone.
pub fn combine(term: &Term, children: &[&Language], w: &[Symbol], k: u32) -> bool {
    match term {
        Term::Nothing => false,
        Term::Epsilon => w.is_empty(),
        Term::Set(m) => w.len() == 1 && w[0].0 < k && m[w[0].0 as usize],
        Term::Concat(..) => (0..=w.len()).any(|i| children[0].contains(&w[..i]) && children[1].contains(&w[i..])),
        Term::Union(..) => children[0].contains(w) || children[1].contains(w),
        Term::Star(_) => splits_into(children[0], w, 0),
        Term::Plus(_) => splits_into(children[0], w, 1),
        Term::Optional(_) => w.is_empty() || children[0].contains(w),
    }
}

/// Checks every node of `term`: the composite acceptor's language equals the
/// set-theoretic combination of its children's. Returns the mismatch count.
pub fn check_term(term: &Term, a: Alphabet, words: &[Vec<Symbol>]) -> (usize, Language) {
    let mut mismatches = 0;
    let mut child_langs = Vec::new();
    for c in term.children() {
        let (m, lang) = check_term(c, a, words);
        mismatches += m;
        child_langs.push(lang);
    }
    let acc = term.acceptor(a);
    let lang = Language::of_acceptor(&acc, words);
    let refs: Vec<&Language> = child_langs.iter().collect();
    let k = a.len() as u32;
    for w in words {
        if lang.contains(w) != combine(term, &refs, w, k) {
            mismatches += 1;
        }
    }
    (mismatches, lang)
}

/// A random term whose language does not contain the empty word, so the
/// lifted acceptor keeps the classifier well-formed.
pub fn random_token_term(rng: &mut impl Rng, k: u32, depth: u32) -> Term {
    loop {
        let t = Term::random(rng, k, depth);
        if !t.acceptor(Alphabet::new(0, k - 1).unwrap()).accepts_empty() {
            return t;
        }
    }
}

/// A random well-formed classifier with up to `max_tokens` rules over `0..k`.
/// Class names are drawn from a small pool, so rules may share a class.
pub fn random_classifier(rng: &mut impl Rng, k: u32, max_tokens: usize, depth: u32) -> Classifier {
    let a = Alphabet::new(0, k - 1).unwrap();
    let mut c = Classifier::error_classifier(a, tc("E"));
    let tokens = rng.gen_range(1..=max_tokens);
    for _ in 0..tokens {
        let class = tc(["A", "B", "C", "D"][rng.gen_range(0..4)]);
        let term = random_token_term(rng, k, depth);
        c = c.add_token(&class, &term.acceptor(a)).unwrap();
    }
    c
}

/// Explicit transition table of a deterministic classifier: `delta[i][s]`.
pub fn explicit_table(c: &Classifier) -> Vec<Vec<Option<usize>>> {
    (1..=c.len())
        .map(|i| c.alphabet().symbols().map(|s| c.state(i).trans.lookup(s).resolve(i)).collect())
        .collect()
}

/// Table-filling equivalence on a deterministic classifier. States are
/// distinguishable if their classes differ or some symbol leads to a
/// distinguishable pair, or to a state on one side and `#` on the other.
/// Returns the equivalence matrix (0-based).
pub fn table_filling(c: &Classifier) -> Vec<Vec<bool>> {
    let n = c.len();
    let delta = explicit_table(c);
    let mut dist: Vec<Vec<bool>> =
        (1..=n).map(|i| (1..=n).map(|j| c.state(i).class != c.state(j).class).collect()).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..n {
            for j in (i + 1)..n {
                if dist[i][j] {
                    continue;
                }
                let split = delta[i].iter().zip(&delta[j]).any(|pair| match pair {
                    (None, None) => false,
                    (Some(x), Some(y)) => dist[x - 1][y - 1],
                    _ => true,
                });
                if split {
                    dist[i][j] = true;
                    dist[j][i] = true;
                    changed = true;
                }
            }
        }
    }
    dist.into_iter().map(|row| row.into_iter().map(|d| !d).collect()).collect()
}

pub fn count_classes(equiv: &[Vec<bool>]) -> usize {
    (0..equiv.len()).filter(|&i| (0..i).all(|j| !equiv[i][j])).count()
}

pub fn same_result(a: &Classification, b: &Classification) -> bool {
    a.len == b.len && a.class == b.class
}
