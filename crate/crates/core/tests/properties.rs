mod common;

use common::*;
use flatlex::determinize::{closure, determinize_with_index, StateSet};
use flatlex::minimize::{hopcroft, initial_partition, quotient, Partition};
use flatlex::prelude::*;
use flatlex::render;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small(k: u32) -> Alphabet {
    Alphabet::new(0, k - 1).unwrap()
}

fn word_strategy(k: u32, max_len: usize) -> impl Strategy<Value = Vec<Symbol>> {
    proptest::collection::vec((0..k).prop_map(Symbol), 0..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn constructors_keep_acceptors_committing(seed in any::<u64>(), k in 2u32..=6) {
        let term = Term::random(&mut rng(seed), k, 4);
        let acc = term.acceptor(small(k));
        prop_assert!(Acceptor::from_states(acc.alphabet(), acc.states().to_vec()).is_ok());
        for (idx, s) in acc.states().iter().enumerate() {
            let i = idx + 1;
            let targets = s.eps.iter().copied().chain(s.trans.values().filter_map(|t| t.offset()));
            for d in targets {
                let j = i as isize + d;
                prop_assert!(j >= 2 && j <= acc.len() as isize + 1, "state {} reaches {}", i, j);
            }
        }
    }

    #[test]
    fn constructor_sizes(a_seed in any::<u64>(), b_seed in any::<u64>()) {
        let alpha = small(3);
        let x = Term::random(&mut rng(a_seed), 3, 3).acceptor(alpha);
        let y = Term::random(&mut rng(b_seed), 3, 3).acceptor(alpha);
        prop_assert_eq!(x.concat(&y).unwrap().len(), x.len() + y.len());
        prop_assert_eq!(x.union(&y).unwrap().len(), x.len() + y.len() + 1);
        prop_assert_eq!(x.star().len(), x.len() + 2);
        prop_assert_eq!(x.plus().len(), x.len() + 2);
        prop_assert_eq!(x.optional().len(), x.len());
    }

    #[test]
    fn composition_leaves_component_borders_untouched(a_seed in any::<u64>(), b_seed in any::<u64>()) {
        let alpha = small(3);
        let x = Term::random(&mut rng(a_seed), 3, 3).acceptor(alpha);
        let y = Term::random(&mut rng(b_seed), 3, 3).acceptor(alpha);
        let u = x.union(&y).unwrap();
        for (i, s) in x.states().iter().enumerate() {
            prop_assert_eq!(&u.states()[i].trans, &s.trans);
        }
        for (i, s) in y.states().iter().enumerate() {
            prop_assert_eq!(&u.states()[x.len() + 1 + i].trans, &s.trans);
        }
    }

    #[test]
    fn classifiers_are_well_formed_and_in_range(seed in any::<u64>()) {
        let c = random_classifier(&mut rng(seed), 4, 5, 3);
        prop_assert!(c.well_formed());
        prop_assert_eq!(c.error_class().name(), "E");
        prop_assert!(Classifier::from_states(c.alphabet(), c.states().to_vec()).is_ok());
    }

    #[test]
    fn epsilon_tokens_break_well_formedness(seed in any::<u64>()) {
        let mut r = rng(seed);
        let base = random_classifier(&mut r, 3, 2, 2);
        let term = loop {
            let t = Term::random(&mut r, 3, 3);
            if t.acceptor(small(3)).accepts_empty() {
                break t;
            }
        };
        let bad = base.add_token(&tc("Z"), &term.acceptor(small(3))).unwrap();
        prop_assert!(!bad.well_formed());
    }

    #[test]
    fn classification_is_maximal_munch(seed in any::<u64>(), w in word_strategy(4, 10)) {
        let c = random_classifier(&mut rng(seed), 4, 4, 3);
        let r = c.classify_nfa(&w).unwrap();
        if r.class == *c.error_class() {
            prop_assert_eq!(r.len, 0);
        }
        for m in (r.len + 1)..=w.len() {
            let longer = c.classify_nfa(&w[..m]).unwrap();
            prop_assert!(longer.len < m, "prefix of length {} classifies whole", m);
        }
    }

    #[test]
    fn determinize_follows_subset_semantics_at_every_symbol(seed in any::<u64>(), k in 2u32..=5) {
        let nfa = random_classifier(&mut rng(seed), k, 4, 3);
        let (dfa, index) = determinize_with_index(&nfa).unwrap();
        prop_assert!(dfa.is_deterministic());
        prop_assert_eq!(index.len(), dfa.len());
        for i in 1..=dfa.len() {
            prop_assert_eq!(index.number(index.set(i)), Some(i));
            for s in dfa.alphabet().symbols() {
                let raw: StateSet = index
                    .set(i)
                    .iter()
                    .filter_map(|q| nfa.state(q).trans.lookup(s).resolve(q))
                    .collect();
                let got = dfa.state(i).trans.lookup(s).resolve(i);
                if raw.is_empty() {
                    prop_assert_eq!(got, None);
                } else {
                    prop_assert_eq!(Some(index.set(got.unwrap())), Some(&closure(&nfa, &raw).unwrap()));
                }
            }
        }
    }

    #[test]
    fn determinized_classification_matches_on_long_words(seed in any::<u64>(), w in word_strategy(4, 24)) {
        let nfa = random_classifier(&mut rng(seed), 4, 5, 3);
        let dfa = determinize(&nfa).unwrap();
        prop_assert_eq!(nfa.classify_nfa(&w).unwrap(), dfa.classify_dfa(&w).unwrap());
    }

    #[test]
    fn hopcroft_yields_the_table_filling_partition(seed in any::<u64>(), by_class in any::<bool>()) {
        let dfa = determinize(&random_classifier(&mut rng(seed), 4, 5, 3)).unwrap();
        let strategy = if by_class { InitStrategy::ByClass } else { InitStrategy::ByReachability };
        let init = initial_partition(&dfa, strategy).unwrap();
        let p = hopcroft(&dfa, init.clone()).unwrap();
        prop_assert!(p.is_valid());
        prop_assert!(p.num_classes() >= init.num_classes());
        // refinement only: states apart in init stay apart
        for i in 1..=dfa.len() {
            for j in 1..=dfa.len() {
                if init.class_index(i) != init.class_index(j) {
                    prop_assert_ne!(p.class_index(i), p.class_index(j));
                }
            }
        }
        let equiv = table_filling(&dfa);
        for i in 1..=dfa.len() {
            for j in 1..=dfa.len() {
                prop_assert_eq!(p.class_index(i) == p.class_index(j), equiv[i - 1][j - 1], "states {} {}", i, j);
            }
        }
    }

    #[test]
    fn final_partition_is_consistent_at_every_symbol(seed in any::<u64>()) {
        let dfa = determinize(&random_classifier(&mut rng(seed), 5, 5, 3)).unwrap();
        let p = hopcroft(&dfa, initial_partition(&dfa, InitStrategy::ByReachability).unwrap()).unwrap();
        for class in p.classes() {
            for &m in class {
                prop_assert_eq!(&dfa.state(m).class, &dfa.state(class[0]).class);
                for s in dfa.alphabet().symbols() {
                    let a = dfa.state(class[0]).trans.lookup(s).resolve(class[0]).map(|t| p.class_index(t));
                    let b = dfa.state(m).trans.lookup(s).resolve(m).map(|t| p.class_index(t));
                    prop_assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn minimization_is_idempotent_and_keeps_state_one(seed in any::<u64>()) {
        let dfa = determinize(&random_classifier(&mut rng(seed), 4, 5, 3)).unwrap();
        let min = minimize(&dfa, InitStrategy::ByReachability).unwrap();
        prop_assert_eq!(min.error_class(), dfa.error_class());
        prop_assert!(min.states().iter().all(|s| s.trans.is_minimal()));
        prop_assert_eq!(&minimize(&min, InitStrategy::ByClass).unwrap(), &min);
        prop_assert_eq!(quotient(&dfa, &Partition::discrete(dfa.len())).unwrap(), dfa);
    }

    #[test]
    fn printed_and_file_forms_round_trip(seed in any::<u64>(), k in 2u32..=6, offset in 0u32..200) {
        let nfa = random_classifier(&mut rng(seed), k, 4, 3);
        // shifting the alphabet exercises bare, quoted and U+ renderings
        let alphabet = Alphabet::new(offset, offset + k - 1).unwrap();
        let moved = move_classifier(&nfa, alphabet);
        for c in [moved.clone(), determinize(&moved).unwrap()] {
            prop_assert_eq!(&render::parse_classifier(&render::print_classifier(&c), c.alphabet()).unwrap(), &c);
            prop_assert_eq!(&render::read_classifier(&render::write_classifier(&c)).unwrap(), &c);
        }
    }

    #[test]
    fn printed_acceptors_round_trip(seed in any::<u64>(), offset in 0u32..130) {
        let term = Term::random(&mut rng(seed), 5, 4);
        let a = Alphabet::new(offset, offset + 4).unwrap();
        let acc = term.acceptor(a);
        prop_assert_eq!(render::parse_acceptor(&render::print_acceptor(&acc), a).unwrap(), acc);
    }

    #[test]
    fn tokenize_consumes_the_input(seed in any::<u64>(), w in word_strategy(4, 40)) {
        let dfa = determinize(&random_classifier(&mut rng(seed), 4, 4, 3)).unwrap();
        let tokens = Dfa::new(&dfa).unwrap().tokenize(&w);
        let mut pos = 0;
        for t in &tokens {
            prop_assert_eq!(t.start, pos);
            prop_assert!(t.len >= 1);
            prop_assert_eq!(t.error, t.class == *dfa.error_class());
            pos += t.len;
        }
        prop_assert_eq!(pos, w.len());
    }
}

/// The same classifier over a translated alphabet.
fn move_classifier(c: &Classifier, to: Alphabet) -> Classifier {
    let shift = to.min().0 - c.alphabet().min().0;
    let states = c
        .states()
        .iter()
        .map(|s| {
            let entries = s.trans.entries().iter().map(|(sym, t)| (Symbol(sym.0 + shift), *t)).collect();
            ClassifierState::new(s.eps.iter().copied(), BorderFunction::from_entries(to, entries).unwrap(), s.class.clone())
        })
        .collect();
    Classifier::from_states(to, states).unwrap()
}
