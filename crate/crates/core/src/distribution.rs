//! Token space and dense next-token distributions.

use serde::{Deserialize, Serialize};

/// A token id: symbols `0..NUM_SYMBOLS`, then the delimiter.
pub type Token = u8;

/// Size of the shared symbol set.
pub const NUM_SYMBOLS: usize = 18;
/// Delimiter placed between consecutive strings of a problem instance.
pub const DELIMITER: Token = NUM_SYMBOLS as Token;
/// Total token space (symbols plus delimiter).
pub const VOCAB_SIZE: usize = NUM_SYMBOLS + 1;

/// Probability vector over the full token space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution(Vec<f64>);

impl Distribution {
    pub fn uniform() -> Self {
        Distribution(vec![1.0 / VOCAB_SIZE as f64; VOCAB_SIZE])
    }

    pub fn zeros() -> Self {
        Distribution(vec![0.0; VOCAB_SIZE])
    }

    /// Wraps a vector of length [`VOCAB_SIZE`] without renormalizing.
    pub fn from_vec(probs: Vec<f64>) -> Self {
        assert_eq!(probs.len(), VOCAB_SIZE, "distribution must span the token space");
        Distribution(probs)
    }

    /// Normalizes non-negative scores. All-zero input yields the uniform distribution.
    pub fn from_scores(mut scores: Vec<f64>) -> Self {
        assert_eq!(scores.len(), VOCAB_SIZE);
        let total: f64 = scores.iter().sum();
        if total > 0.0 && total.is_finite() {
            scores.iter_mut().for_each(|p| *p /= total);
            Distribution(scores)
        } else {
            Self::uniform()
        }
    }

    /// Numerically stable softmax over logits.
    pub fn softmax(logits: &[f64]) -> Self {
        assert_eq!(logits.len(), VOCAB_SIZE);
        let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = logits.iter().map(|&z| (z - max).exp()).collect();
        let total: f64 = exps.iter().sum();
        Distribution(exps.into_iter().map(|e| e / total).collect())
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn prob(&self, token: Token) -> f64 {
        self.0[token as usize]
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Highest-probability token; ties go to the lowest id.
    pub fn argmax(&self) -> Token {
        let mut best = 0;
        for (i, &p) in self.0.iter().enumerate().skip(1) {
            if p > self.0[best] {
                best = i;
            }
        }
        best as Token
    }

    /// Tokens with strictly positive mass.
    pub fn support(&self) -> Vec<Token> {
        (0..VOCAB_SIZE)
            .filter(|&i| self.0[i] > 0.0)
            .map(|i| i as Token)
            .collect()
    }

    /// The distribution restricted to symbols, with the delimiter's mass removed
    /// and the rest renormalized. Returns `None` when all mass sits on the
    /// delimiter. Distributions with exactly zero delimiter mass are returned
    /// unchanged.
    pub fn symbols_only(&self) -> Option<[f64; NUM_SYMBOLS]> {
        let mut out = [0.0; NUM_SYMBOLS];
        out.copy_from_slice(&self.0[..NUM_SYMBOLS]);
        if self.0[DELIMITER as usize] == 0.0 {
            return Some(out);
        }
        let total: f64 = out.iter().sum();
        if total <= 0.0 {
            return None;
        }
        out.iter_mut().for_each(|p| *p /= total);
        Some(out)
    }
}

/// Half the L1 distance between two equal-length probability vectors.
pub fn half_l1(p: &[f64], q: &[f64]) -> f64 {
    debug_assert_eq!(p.len(), q.len());
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmax_breaks_ties_low() {
        let d = Distribution::uniform();
        assert_eq!(d.argmax(), 0);
        let mut v = vec![0.0; VOCAB_SIZE];
        v[3] = 0.5;
        v[7] = 0.5;
        assert_eq!(Distribution::from_vec(v).argmax(), 3);
    }

    #[test]
    fn symbols_only_renormalizes() {
        let d = Distribution::uniform();
        let s = d.symbols_only().unwrap();
        for p in s {
            assert!((p - 1.0 / 18.0).abs() < 1e-15);
        }
        let mut v = vec![0.0; VOCAB_SIZE];
        v[DELIMITER as usize] = 1.0;
        assert!(Distribution::from_vec(v).symbols_only().is_none());
    }

    #[test]
    fn softmax_of_equal_logits_is_uniform() {
        let d = Distribution::softmax(&[0.0; VOCAB_SIZE]);
        assert!((d.sum() - 1.0).abs() < 1e-12);
        assert!((d.prob(5) - 1.0 / 19.0).abs() < 1e-15);
    }
}
