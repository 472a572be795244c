use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::distribution::{Token, VOCAB_SIZE};

/// Context lengths 0, 1, 2 (unigram, bigram, trigram blocks).
pub const FEATURE_ORDERS: usize = 3;
pub const FEATURE_DIM: usize = FEATURE_ORDERS * VOCAB_SIZE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// `count − 1` per continuation.
    #[serde(rename = "lnw")]
    Counts,
    /// Continuation counts normalized within each order block.
    #[serde(rename = "lnw-r")]
    Frequencies,
    /// 1 where the continuation has been seen.
    #[serde(rename = "lnw-b")]
    Binary,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Counts => "lnw",
            Variant::Frequencies => "lnw-r",
            Variant::Binary => "lnw-b",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "lnw" => Some(Variant::Counts),
            "lnw-r" => Some(Variant::Frequencies),
            "lnw-b" => Some(Variant::Binary),
            _ => None,
        }
    }
}

/// Features for predicting `tokens[i]` from `tokens[..i]`.
///
/// Block `n` (n = 1, 2, 3) holds, for every token `w`, how often the last
/// `n − 1` tokens of the prefix were followed by `w` earlier in the prefix.
/// A prefix shorter than `n − 1` has no such context and counts nothing.
pub fn extract_features(tokens: &[Token], i: usize, variant: Variant) -> [f64; FEATURE_DIM] {
    assert!(i <= tokens.len(), "position out of range");
    let prefix = &tokens[..i];
    let mut out = [0.0; FEATURE_DIM];
    for n in 1..=FEATURE_ORDERS {
        let k = n - 1;
        let mut counts = [0u32; VOCAB_SIZE];
        if prefix.len() >= k {
            let ctx = &prefix[prefix.len() - k..];
            for p in k..prefix.len() {
                if &prefix[p - k..p] == ctx {
                    counts[prefix[p] as usize] += 1;
                }
            }
        }
        transform(&counts, variant, &mut out[k * VOCAB_SIZE..n * VOCAB_SIZE]);
    }
    out
}

fn transform(counts: &[u32; VOCAB_SIZE], variant: Variant, block: &mut [f64]) {
    let total: u32 = counts.iter().sum();
    for (f, &c) in block.iter_mut().zip(counts) {
        *f = match variant {
            Variant::Counts => c as f64 - 1.0,
            Variant::Frequencies if total > 0 => c as f64 / total as f64,
            Variant::Frequencies => 0.0,
            Variant::Binary => (c > 0) as u8 as f64,
        };
    }
}

/// Features at every position `0..tokens.len()`, maintained incrementally.
/// Entry `i` equals `extract_features(tokens, i, variant)`.
pub fn sequence_features(tokens: &[Token], variant: Variant) -> Vec<[f64; FEATURE_DIM]> {
    let mut unigram = [0u32; VOCAB_SIZE];
    let mut bigram: HashMap<Token, [u32; VOCAB_SIZE]> = HashMap::new();
    let mut trigram: HashMap<(Token, Token), [u32; VOCAB_SIZE]> = HashMap::new();
    let zero = [0u32; VOCAB_SIZE];
    let mut out = Vec::with_capacity(tokens.len());
    for i in 0..tokens.len() {
        let mut f = [0.0; FEATURE_DIM];
        transform(&unigram, variant, &mut f[..VOCAB_SIZE]);
        let bi = if i >= 1 { bigram.get(&tokens[i - 1]) } else { None };
        transform(bi.unwrap_or(&zero), variant, &mut f[VOCAB_SIZE..2 * VOCAB_SIZE]);
        let tri = if i >= 2 { trigram.get(&(tokens[i - 2], tokens[i - 1])) } else { None };
        transform(tri.unwrap_or(&zero), variant, &mut f[2 * VOCAB_SIZE..]);
        out.push(f);

        let t = tokens[i] as usize;
        unigram[t] += 1;
        if i >= 1 {
            bigram.entry(tokens[i - 1]).or_insert(zero)[t] += 1;
        }
        if i >= 2 {
            trigram.entry((tokens[i - 2], tokens[i - 1])).or_insert(zero)[t] += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_prefix_counts_are_minus_one() {
        let f = extract_features(&[3, 4], 0, Variant::Counts);
        assert!(f.iter().all(|&x| x == -1.0));
        let f = extract_features(&[3, 4], 0, Variant::Binary);
        assert!(f.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn unseen_trigram_context_gives_zero_block() {
        // context (1, 2) never appeared before position 4
        let f = extract_features(&[0, 0, 1, 2, 5], 4, Variant::Frequencies);
        assert!(f[2 * VOCAB_SIZE..].iter().all(|&x| x == 0.0));
        let unigram: f64 = f[..VOCAB_SIZE].iter().sum();
        assert!((unigram - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bigram_block_counts_followers() {
        let t = [7, 1, 7, 2, 7];
        let f = extract_features(&t, 5, Variant::Counts);
        assert_eq!(f[VOCAB_SIZE + 1], 0.0);
        assert_eq!(f[VOCAB_SIZE + 2], 0.0);
        assert_eq!(f[VOCAB_SIZE + 3], -1.0);
        assert_eq!(f[7], 2.0);
    }

    #[test]
    fn incremental_matches_scan() {
        let t = [0, 1, 0, 1, 18, 0, 1, 2, 18, 0, 1, 0];
        for v in [Variant::Counts, Variant::Frequencies, Variant::Binary] {
            let all = sequence_features(&t, v);
            for (i, f) in all.iter().enumerate() {
                assert_eq!(f, &extract_features(&t, i, v), "variant {v:?} position {i}");
            }
        }
    }

    #[test]
    fn variant_names_round_trip() {
        for v in [Variant::Counts, Variant::Frequencies, Variant::Binary] {
            assert_eq!(Variant::parse(v.name()), Some(v));
        }
        assert_eq!(Variant::parse("lnw-x"), None);
    }
}
