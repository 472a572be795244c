use icll_core::nghead::{ngh_apply, ngh_bundle, ngram_attention, ngram_attention_trie, NghWeights};
use icll_core::rng::seeded;
use icll_core::Token;
use ndarray::Array2;
use proptest::prelude::*;
use rand::Rng as _;

/// Dense matrix straight from the definition, with signed indices so that
/// windows reaching before the sequence start simply fail to match.
fn brute_force(tokens: &[Token], n: usize) -> Array2<f64> {
    let l = tokens.len();
    let at = |p: i64| (p >= 0).then(|| tokens[p as usize]);
    let mut a = Array2::zeros((l, l));
    for i in 0..l {
        for j in 0..i {
            let hit = (1..=n as i64).all(|k| {
                let (x, y) = (at(i as i64 - k + 1), at(j as i64 - k));
                x.is_some() && x == y
            });
            if hit {
                a[[i, j]] = 1.0;
            }
        }
        let s: f64 = a.row(i).sum();
        if s > 0.0 {
            a.row_mut(i).mapv_inplace(|x| x / s);
        }
    }
    a
}

#[test]
fn random_sequences_match_brute_force() {
    let mut rng = seeded(41);
    for case in 0..200 {
        let len = rng.random_range(0..=64);
        let vocab = rng.random_range(2..6u8);
        let tokens: Vec<Token> = (0..len).map(|_| rng.random_range(0..vocab)).collect();
        let n = 1 + case % 3;
        let expected = brute_force(&tokens, n);
        assert_eq!(ngram_attention(&tokens, n).to_dense(), expected, "case {case}");
        assert_eq!(ngram_attention_trie(&tokens, n).to_dense(), expected, "case {case}");
    }
}

#[test]
fn abcab_attends_to_c() {
    let (a, b, c) = (0, 1, 2);
    let tokens = [a, b, c, a, b];
    for n in [1, 2] {
        let m = ngram_attention_trie(&tokens, n);
        assert_eq!(m.row(4), &[(2, 1.0)], "order {n}");
    }
    assert!(ngram_attention(&tokens, 3).row(4).is_empty());
}

#[test]
fn passthrough_weights_leave_states_unchanged() {
    let mut rng = seeded(42);
    let tokens: Vec<Token> = (0..20).map(|_| rng.random_range(0..3)).collect();
    let h = Array2::from_shape_fn((20, 5), |_| rng.random_range(-1.0..1.0));
    let w = NghWeights::identity_passthrough(5);
    assert_eq!(ngh_apply(h.view(), &tokens, 2, &w), h);
    let ws = vec![w.clone(), w.clone(), w];
    assert_eq!(ngh_bundle(h.view(), &tokens, &[1, 2, 3], &ws), h);
}

#[test]
fn mixing_weights_copy_attended_rows() {
    let tokens = [0, 1, 2, 0, 1];
    let h = Array2::from_shape_fn((5, 2), |(i, k)| (i * 10 + k) as f64);
    let w = NghWeights { w1: Array2::zeros((2, 2)), w2: Array2::eye(2) };
    let out = ngh_apply(h.view(), &tokens, 2, &w);
    assert_eq!(out.row(4), h.row(2));
    assert!(out.row(0).iter().all(|&x| x == 0.0));
}

proptest! {
    #[test]
    fn rows_are_causal_and_normalized(
        tokens in prop::collection::vec(0u8..3, 0..50),
        n in 1usize..4,
    ) {
        let m = ngram_attention_trie(&tokens, n);
        for i in 0..m.len() {
            let row = m.row(i);
            prop_assert!(row.iter().all(|&(j, _)| j < i));
            let s: f64 = row.iter().map(|&(_, w)| w).sum();
            prop_assert!(row.is_empty() || (s - 1.0).abs() < 1e-12);
        }
    }
}
