use icll_core::automata::{Dfa, Pfa};
use icll_core::corpus::{build_benchmark, build_instance, BenchmarkParams, InstanceShape, ProblemInstance};
use icll_core::eval::{tvd, Lnw};
use icll_core::lnw::{
    extract_features, lm_loss_and_grads, lnw_predict_sequence, train_lnw, MlpParams, TrainConfig, Variant,
    FEATURE_DIM,
};
use icll_core::rng::seeded;
use icll_core::{Token, DELIMITER, VOCAB_SIZE};
use ndarray::Array2;
use proptest::prelude::*;
use rand::Rng as _;

const VARIANTS: [Variant; 3] = [Variant::Counts, Variant::Frequencies, Variant::Binary];

/// Features from first principles: count occurrences of `ctx · w` for each w.
fn naive_features(tokens: &[Token], i: usize, variant: Variant) -> Vec<f64> {
    let prefix = &tokens[..i];
    let mut out = Vec::new();
    for k in 0..3 {
        let mut block = vec![0.0; VOCAB_SIZE];
        if prefix.len() >= k {
            let ctx = &prefix[prefix.len() - k..];
            for w in 0..VOCAB_SIZE as Token {
                let gram: Vec<Token> = ctx.iter().copied().chain([w]).collect();
                block[w as usize] = prefix.windows(k + 1).filter(|win| *win == gram.as_slice()).count() as f64;
            }
        }
        let total: f64 = block.iter().sum();
        for x in block.iter_mut() {
            *x = match variant {
                Variant::Counts => *x - 1.0,
                Variant::Frequencies => {
                    if total > 0.0 {
                        *x / total
                    } else {
                        0.0
                    }
                }
                Variant::Binary => (*x > 0.0) as u8 as f64,
            };
        }
        out.extend(block);
    }
    out
}

fn random_batch(rng: &mut icll_core::rng::Rng, n: usize) -> (Array2<f64>, Vec<usize>) {
    let x = Array2::from_shape_fn((n, FEATURE_DIM), |_| rng.random_range(-2.0..2.0));
    let y = (0..n).map(|_| rng.random_range(0..VOCAB_SIZE)).collect();
    (x, y)
}

#[test]
fn gradients_match_central_differences() {
    let mut rng = seeded(31);
    let params = MlpParams::init(FEATURE_DIM, 16, VOCAB_SIZE, &mut rng);
    let (x, y) = random_batch(&mut rng, 8);
    let (_, grads) = lm_loss_and_grads(&params, x.view(), &y);
    let h = 1e-5;
    for t in 0..4 {
        let len = grads.tensors()[t].len();
        for _ in 0..20 {
            let k = rng.random_range(0..len);
            let mut plus = params.clone();
            plus.tensors_mut()[t][k] += h;
            let mut minus = params.clone();
            minus.tensors_mut()[t][k] -= h;
            let numeric = (lm_loss_and_grads(&plus, x.view(), &y).0
                - lm_loss_and_grads(&minus, x.view(), &y).0)
                / (2.0 * h);
            let analytic = grads.tensors()[t][k];
            let rel = (numeric - analytic).abs() / numeric.abs().max(analytic.abs()).max(1e-8);
            assert!(rel < 1e-4, "tensor {t} index {k}: {analytic} vs {numeric}");
        }
    }
}

#[test]
fn uniform_logits_give_log_vocab_loss() {
    let p = MlpParams::zeros(FEATURE_DIM, 4, VOCAB_SIZE);
    let mut rng = seeded(32);
    let (x, y) = random_batch(&mut rng, 5);
    let (loss, _) = lm_loss_and_grads(&p, x.view(), &y);
    assert!((loss - (VOCAB_SIZE as f64).ln()).abs() < 1e-12);
}

proptest! {
    #[test]
    fn features_match_naive_count(
        tokens in prop::collection::vec(prop_oneof![0u8..5, Just(DELIMITER)], 1..60),
        frac in 0.0f64..1.0,
    ) {
        let i = ((tokens.len() as f64) * frac) as usize;
        for v in VARIANTS {
            let got = extract_features(&tokens, i, v);
            prop_assert_eq!(got.to_vec(), naive_features(&tokens, i, v));
            match v {
                Variant::Counts => prop_assert!(got.iter().all(|&x| x >= -1.0 && x.fract() == 0.0)),
                Variant::Binary => prop_assert!(got.iter().all(|&x| x == 0.0 || x == 1.0)),
                Variant::Frequencies => {
                    for block in got.chunks(VOCAB_SIZE) {
                        let s: f64 = block.iter().sum();
                        prop_assert!(s == 0.0 || (s - 1.0).abs() < 1e-12);
                    }
                }
            }
        }
    }
}

fn small_corpus(n: usize, seed: u64) -> Vec<ProblemInstance> {
    let mut rng = seeded(seed);
    let (bench, _) = build_benchmark(&BenchmarkParams::default(), n, 1, seed, &mut rng).unwrap();
    bench.train
}

#[test]
fn training_reduces_loss_and_is_reproducible() {
    let train = small_corpus(20, 33);
    let cfg = TrainConfig { epochs: 3, hidden: 32, seed: 5, ..TrainConfig::default() };
    let (p1, r1) = train_lnw(&train, &cfg, Variant::Counts).unwrap();
    assert!(r1.final_loss < r1.initial_loss);
    assert_eq!(r1.epochs.len(), 3);
    let (p2, r2) = train_lnw(&train, &cfg, Variant::Counts).unwrap();
    assert_eq!(p1, p2);
    assert_eq!(r1, r2);
}

#[test]
fn training_on_one_language_beats_untrained_model() {
    // 0 -a-> 1, 1 -b-> 0 : strings alternate a, b
    let dfa = Dfa::new(2, vec![0, 1], &[(0, 0, 1), (1, 1, 0)], &[0, 1]).unwrap();
    let pfa = Pfa::from_dfa(dfa).unwrap();
    let mut rng = seeded(34);
    let shape = InstanceShape::default();
    let data: Vec<ProblemInstance> = (0..30)
        .map(|id| build_instance(id, pfa.clone(), &shape, &mut rng))
        .collect();
    let (train, test) = data.split_at(25);
    let cfg = TrainConfig { epochs: 3, hidden: 32, seed: 1, ..TrainConfig::default() };
    let (trained, _) = train_lnw(train, &cfg, Variant::Frequencies).unwrap();
    let untrained = MlpParams::init(FEATURE_DIM, 32, VOCAB_SIZE, &mut seeded(1));
    let before = tvd(&Lnw { params: untrained, variant: Variant::Frequencies }, test).unwrap();
    let after = tvd(&Lnw { params: trained.clone(), variant: Variant::Frequencies }, test).unwrap();
    assert!(after < before, "{after} >= {before}");
    for inst in test {
        for d in lnw_predict_sequence(&trained, &inst.tokens, Variant::Frequencies) {
            assert!((d.sum() - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn empty_training_set_is_rejected() {
    assert!(train_lnw(&[], &TrainConfig::default(), Variant::Binary).is_err());
}
