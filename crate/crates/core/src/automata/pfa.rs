use rand::Rng as _;

use super::dfa::{Dfa, StateId};
use crate::distribution::{Distribution, Token, VOCAB_SIZE};
use crate::error::{Error, Result};
use crate::rng::Rng;

/// A DFA whose live edges carry probabilities, uniform over each state's
/// live out-edges. There are no stop probabilities: the PFA defines a
/// distribution over strings of each fixed length.
#[derive(Debug, Clone, PartialEq)]
pub struct Pfa {
    dfa: Dfa,
    /// `1 / out_degree` per state.
    edge_prob: Vec<f64>,
}

impl Pfa {
    /// Attaches uniform probabilities to the live edges of `dfa`. Every
    /// state must have at least one live out-edge.
    pub fn from_dfa(dfa: Dfa) -> Result<Self> {
        let mut edge_prob = Vec::with_capacity(dfa.num_states());
        for s in 0..dfa.num_states() as StateId {
            match dfa.out_degree(s) {
                0 => return Err(Error::NoLiveEdges(s)),
                k => edge_prob.push(1.0 / k as f64),
            }
        }
        Ok(Pfa { dfa, edge_prob })
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn num_states(&self) -> usize {
        self.dfa.num_states()
    }

    /// T(state, symbol): zero for symbols that lead to the dead state.
    pub fn trans_prob(&self, state: StateId, symbol: Token) -> f64 {
        match self.dfa.step(state, symbol) {
            Some(_) => self.edge_prob[state as usize],
            None => 0.0,
        }
    }

    /// Next-symbol distribution of a state. Delimiter mass is zero.
    pub fn state_distribution(&self, state: StateId) -> Distribution {
        let mut probs = vec![0.0; VOCAB_SIZE];
        let p = self.edge_prob[state as usize];
        for (sym, _) in self.dfa.live_edges(state) {
            probs[sym as usize] = p;
        }
        Distribution::from_vec(probs)
    }

    /// Distribution over the symbol following `prefix`, or `None` if the
    /// prefix leaves the language.
    pub fn next_token_distribution(&self, prefix: &[Token]) -> Option<Distribution> {
        self.dfa.walk(prefix).map(|s| self.state_distribution(s))
    }

    /// Log-probability of `s` among strings of its length; `-inf` outside
    /// the language.
    pub fn string_logprob(&self, s: &[Token]) -> f64 {
        let mut state = 0;
        let mut logp = 0.0;
        for &x in s {
            match self.dfa.step(state, x) {
                Some(next) => {
                    logp += self.edge_prob[state as usize].ln();
                    state = next;
                }
                None => return f64::NEG_INFINITY,
            }
        }
        logp
    }

    /// Draws a string whose length is uniform on `[len_min, len_max]`.
    pub fn sample_string(&self, rng: &mut Rng, len_min: usize, len_max: usize) -> Vec<Token> {
        let len = rng.random_range(len_min..=len_max);
        let mut state = 0;
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            let degree = self.dfa.out_degree(state);
            let pick = rng.random_range(0..degree);
            let (sym, next) = self
                .dfa
                .live_edges(state)
                .nth(pick)
                .expect("pick < out_degree");
            out.push(sym);
            state = next;
        }
        out
    }
}
