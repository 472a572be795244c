//! Static n-gram attention heads.
//!
//! Row `i` of the order-`n` attention matrix attends uniformly to every
//! earlier position `j` whose preceding `n` tokens equal the `n` tokens
//! ending at `i`: for `A B C A B` and `n = 2`, the final `B` attends to `C`.
//! Written with token positions,
//! `A(n)[i][j] ∝ 1[x[i-k+1] = x[j-k] for k = 1..=n, and i > j]`,
//! where windows reaching before position 0 never match.

use std::collections::HashMap;

use ndarray::{Array2, ArrayView2};

use crate::distribution::Token;

/// Row-normalized, strictly causal attention weights.
#[derive(Debug, Clone, PartialEq)]
pub struct AttnMatrix {
    /// Sparse rows of `(column, weight)` with increasing columns.
    rows: Vec<Vec<(usize, f64)>>,
}

impl AttnMatrix {
    fn from_matches(matches: Vec<Vec<usize>>) -> Self {
        let rows = matches
            .into_iter()
            .map(|cols| {
                let w = 1.0 / cols.len().max(1) as f64;
                cols.into_iter().map(|c| (c, w)).collect()
            })
            .collect();
        AttnMatrix { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i]
            .iter()
            .find(|&&(c, _)| c == j)
            .map_or(0.0, |&(_, w)| w)
    }

    pub fn to_dense(&self) -> Array2<f64> {
        let l = self.rows.len();
        let mut out = Array2::zeros((l, l));
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, w) in row {
                out[[i, j]] = w;
            }
        }
        out
    }
}

/// Reference construction: compares every `(i, j)` window pair.
pub fn ngram_attention(tokens: &[Token], n: usize) -> AttnMatrix {
    assert!(n >= 1, "n-gram order must be positive");
    let l = tokens.len();
    let matches = (0..l)
        .map(|i| {
            if i + 1 < n {
                return Vec::new();
            }
            (n..i)
                .filter(|&j| (1..=n).all(|k| tokens[i + 1 - k] == tokens[j - k]))
                .collect()
        })
        .collect();
    AttnMatrix::from_matches(matches)
}

#[derive(Default)]
struct TrieNode {
    children: HashMap<Token, TrieNode>,
    /// Positions that follow an occurrence of the path to this node.
    followers: Vec<usize>,
}

/// Same matrix as [`ngram_attention`], built in one left-to-right pass over
/// a trie of the n-grams seen so far.
pub fn ngram_attention_trie(tokens: &[Token], n: usize) -> AttnMatrix {
    assert!(n >= 1, "n-gram order must be positive");
    let l = tokens.len();
    let mut root = TrieNode::default();
    let mut matches = Vec::with_capacity(l);
    for i in 0..l {
        // The occurrence ending at i - 1 is followed by i, so it becomes
        // attendable for every later query.
        if i >= n {
            let mut node = &mut root;
            for &t in &tokens[i - n..i] {
                node = node.children.entry(t).or_default();
            }
            node.followers.push(i);
        }
        let mut found = Vec::new();
        if i + 1 >= n {
            let mut node = Some(&root);
            for &t in &tokens[i + 1 - n..=i] {
                node = node.and_then(|nd| nd.children.get(&t));
            }
            if let Some(nd) = node {
                found.extend(nd.followers.iter().copied().filter(|&j| j < i));
            }
        }
        matches.push(found);
    }
    AttnMatrix::from_matches(matches)
}

/// The two `d × d` maps of one head.
#[derive(Debug, Clone, PartialEq)]
pub struct NghWeights {
    pub w1: Array2<f64>,
    pub w2: Array2<f64>,
}

impl NghWeights {
    pub fn identity_passthrough(d: usize) -> Self {
        NghWeights {
            w1: Array2::eye(d),
            w2: Array2::zeros((d, d)),
        }
    }

    pub fn num_params(&self) -> usize {
        self.w1.len() + self.w2.len()
    }
}

/// `out[t] = W1·h[t] + W2·Σ_j A(n)[t][j]·h[j]`
pub fn ngh_apply(h: ArrayView2<f64>, tokens: &[Token], n: usize, w: &NghWeights) -> Array2<f64> {
    assert_eq!(h.nrows(), tokens.len(), "one hidden row per token");
    let attn = ngram_attention_trie(tokens, n);
    let mut mixed = Array2::zeros(h.raw_dim());
    for t in 0..attn.len() {
        for &(j, wt) in attn.row(t) {
            mixed.row_mut(t).scaled_add(wt, &h.row(j));
        }
    }
    h.dot(&w.w1.t()) + mixed.dot(&w.w2.t())
}

/// Applies one head per order in sequence over the same token stream.
pub fn ngh_bundle(
    h: ArrayView2<f64>,
    tokens: &[Token],
    orders: &[usize],
    weights: &[NghWeights],
) -> Array2<f64> {
    assert_eq!(orders.len(), weights.len(), "one weight pair per order");
    let mut cur = h.to_owned();
    for (&n, w) in orders.iter().zip(weights) {
        cur = ngh_apply(cur.view(), tokens, n, w);
    }
    cur
}
