//! Workbench for in-context language learning over regular languages.
//!
//! The crate samples probabilistic finite automata, turns them into corpora of
//! problem instances, and provides the classical in-context predictors
//! (backoff n-gram, masked Baum–Welch HMM, learned n-gram reweighting) along
//! with exact next-token ground truth and evaluation metrics. A reference
//! n-gram attention head lives in [`nghead`].

pub mod automata;
pub mod baumwelch;
pub mod corpus;
pub mod distribution;
pub mod error;
pub mod eval;
pub mod lnw;
pub mod ngram;
pub mod nghead;
pub mod rng;

pub use distribution::{Distribution, Token, DELIMITER, NUM_SYMBOLS, VOCAB_SIZE};
pub use error::{Error, Result};
