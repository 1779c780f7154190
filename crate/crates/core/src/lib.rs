//! Flat automata for tokenizer generation.
//!
//! Automata are stored as flat sequences of states whose transitions use
//! relative state references. Symbol transitions are border functions: sparse
//! change-point maps evaluated by greatest-border-not-above lookup, so interval
//! transitions cost no more than single-symbol ones.
//!
//! The pipeline is:
//!
//! ```text
//! token spec -> acceptors (regular operations) -> classifier
//!            -> determinize -> minimize -> scanner tables / emitted source
//! ```
//!
//! ```
//! use flatlex::prelude::*;
//!
//! let spec = TokenSpec::parse("error E;\ntoken I = [a-z]+;\ntoken W = \"while\";\n").unwrap();
//! let nfa = spec.build_classifier().unwrap();
//! let dfa = minimize(&determinize(&nfa).unwrap(), InitStrategy::ByReachability).unwrap();
//! let input = word("while x");
//! let token = dfa.classify_dfa(&input).unwrap();
//! assert_eq!((token.len, token.class.name()), (5, "W"));
//! ```

pub mod acceptor;
pub mod alphabet;
pub mod border_fn;
pub mod classifier;
pub mod determinize;
mod error;
pub mod minimize;
pub mod render;
pub mod tokenspec;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::acceptor::{Acceptor, AcceptorState};
    pub use crate::alphabet::{word, Alphabet, Symbol};
    pub use crate::border_fn::{BorderFunction, Target};
    pub use crate::classifier::{Classification, Classifier, ClassifierState, Dfa, TokenClass};
    pub use crate::determinize::{determinize, StateSet};
    pub use crate::minimize::{minimize, InitStrategy};
    pub use crate::tokenspec::TokenSpec;
    pub use crate::{Error, Result};
}
