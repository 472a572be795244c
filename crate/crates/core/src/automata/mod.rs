//! Deterministic and probabilistic finite automata.
//!
//! Languages are defined by minimal DFAs whose non-dead states all accept.
//! A [`Pfa`] attaches uniform transition probabilities to the live edges of
//! such a DFA and defines a distribution over strings of every fixed length.

mod dfa;
mod hmm;
mod minimize;
mod pfa;
mod sample;

pub use dfa::{dfa_equivalent, Dfa, StateId};
pub use hmm::{pfa_to_hmm, Hmm, MAX_PAIR_STATES};
pub use minimize::minimize_dfa;
pub use pfa::Pfa;
pub use sample::{sample_pfa, sample_pfa_counted, sample_raw_dfa, SamplerParams};
