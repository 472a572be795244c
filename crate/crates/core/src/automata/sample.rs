use rand::seq::index;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::dfa::{Dfa, StateId};
use super::minimize::minimize_dfa;
use super::pfa::Pfa;
use crate::distribution::{Token, NUM_SYMBOLS};
use crate::error::{Error, Result};
use crate::rng::Rng;

/// Bounds for the random automaton family. All ranges are inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerParams {
    pub n_min: usize,
    pub n_max: usize,
    pub c_min: usize,
    pub c_max: usize,
    pub m_min: usize,
    pub m_max: usize,
    pub global_vocab_size: usize,
}

impl Default for SamplerParams {
    fn default() -> Self {
        SamplerParams {
            n_min: 4,
            n_max: 12,
            c_min: 4,
            c_max: 18,
            m_min: 1,
            m_max: 4,
            global_vocab_size: NUM_SYMBOLS,
        }
    }
}

impl SamplerParams {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::InvalidParams(msg.to_string()));
        if self.global_vocab_size != NUM_SYMBOLS {
            return fail("global_vocab_size must equal the fixed symbol set size (18)");
        }
        if self.n_min < 2 || self.n_min > self.n_max {
            return fail("need 2 <= n_min <= n_max");
        }
        if self.c_min < 1 || self.c_min > self.c_max || self.c_max > self.global_vocab_size {
            return fail("need 1 <= c_min <= c_max <= global_vocab_size");
        }
        if self.m_min < 1 || self.m_min > self.m_max || self.m_max >= self.n_max {
            return fail("need 1 <= m_min <= m_max < n_max");
        }
        if self.m_min > self.c_min || self.m_min >= self.n_min {
            return fail("m_min must fit every sampled alphabet and state count");
        }
        Ok(())
    }
}

/// Draws the raw (unminimized) automaton: `n` accepting states, each with
/// `m` edges on distinct symbols to distinct other states. Unused symbols
/// lead to the dead state.
pub fn sample_raw_dfa(params: &SamplerParams, rng: &mut Rng) -> Dfa {
    let n = rng.random_range(params.n_min..=params.n_max);
    let c = rng.random_range(params.c_min..=params.c_max);
    let mut alphabet: Vec<Token> = index::sample(rng, params.global_vocab_size, c)
        .into_iter()
        .map(|i| i as Token)
        .collect();
    alphabet.sort_unstable();

    // Out-degree is capped by the number of other states and by the alphabet.
    let m_hi = params.m_max.min(n - 1).min(c);
    let mut edges = Vec::new();
    for src in 0..n {
        let m = rng.random_range(params.m_min..=m_hi);
        let symbols = index::sample(rng, c, m);
        let targets = index::sample(rng, n - 1, m);
        for (x, t) in symbols.into_iter().zip(targets) {
            let dst = if t >= src { t + 1 } else { t };
            edges.push((src as StateId, alphabet[x], dst as StateId));
        }
    }
    let accepting: Vec<StateId> = (0..n as StateId).collect();
    Dfa::new(n, alphabet, &edges, &accepting).expect("sampler builds well-formed automata")
}

/// Samples a PFA and reports how many minimized candidates were discarded
/// for having fewer than two live states or a state with no live edge.
pub fn sample_pfa_counted(params: &SamplerParams, rng: &mut Rng) -> (Pfa, usize) {
    let mut discards = 0;
    loop {
        let raw = sample_raw_dfa(params, rng);
        let min = minimize_dfa(&raw);
        if min.num_states() >= 2 {
            if let Ok(pfa) = Pfa::from_dfa(min) {
                return (pfa, discards);
            }
        }
        discards += 1;
    }
}

/// Samples a random language: a minimal DFA with uniform edge probabilities.
pub fn sample_pfa(params: &SamplerParams, rng: &mut Rng) -> Pfa {
    sample_pfa_counted(params, rng).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::dfa_equivalent;
    use crate::rng::seeded;

    #[test]
    fn default_params_are_valid() {
        SamplerParams::default().validate().unwrap();
        let bad = SamplerParams {
            m_max: 12,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = SamplerParams {
            c_max: 19,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn raw_automata_respect_out_degree_bounds() {
        let params = SamplerParams::default();
        let mut rng = seeded(11);
        for _ in 0..300 {
            let d = sample_raw_dfa(&params, &mut rng);
            assert!((4..=12).contains(&d.num_states()));
            assert!((4..=18).contains(&d.alphabet().len()));
            for s in 0..d.num_states() as StateId {
                let deg = d.out_degree(s);
                assert!((1..=4).contains(&deg));
                let mut targets: Vec<_> = d.live_edges(s).map(|(_, t)| t).collect();
                assert!(!targets.contains(&s));
                targets.sort_unstable();
                targets.dedup();
                assert_eq!(targets.len(), deg);
            }
        }
    }

    #[test]
    fn two_state_cycle() {
        let params = SamplerParams {
            n_min: 2,
            n_max: 2,
            c_min: 2,
            c_max: 2,
            m_min: 1,
            m_max: 1,
            global_vocab_size: NUM_SYMBOLS,
        };
        params.validate().unwrap();
        let mut rng = seeded(5);
        for _ in 0..20 {
            let pfa = sample_pfa(&params, &mut rng);
            let d = pfa.dfa();
            assert_eq!(d.num_states(), 2);
            assert_eq!(d.edges().len(), 2);
            for (s, x, t) in d.edges() {
                assert_ne!(s, t);
                assert_eq!(pfa.trans_prob(s, x), 1.0);
            }
        }
    }

    #[test]
    fn minimized_samples_match_their_raw_automata() {
        let params = SamplerParams::default();
        let mut rng = seeded(99);
        for _ in 0..100 {
            let raw = sample_raw_dfa(&params, &mut rng);
            let min = minimize_dfa(&raw);
            assert!(min.num_states() <= raw.num_states());
            assert!(dfa_equivalent(&raw, &min));
        }
    }

    #[test]
    fn same_seed_same_automata() {
        let params = SamplerParams::default();
        let a: Vec<_> = {
            let mut rng = seeded(1234);
            (0..50).map(|_| sample_pfa(&params, &mut rng)).collect()
        };
        let b: Vec<_> = {
            let mut rng = seeded(1234);
            (0..50).map(|_| sample_pfa(&params, &mut rng)).collect()
        };
        assert_eq!(a, b);
    }
}
