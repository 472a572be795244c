use icll_core::automata::{sample_pfa, Hmm, SamplerParams};
use icll_core::baumwelch::{
    backward, bw_predict_sequence, em_step, forward, log_likelihood, BwConfig, Cadence, MaskedHmm,
};
use icll_core::rng::seeded;
use icll_core::{Token, DELIMITER};
use proptest::prelude::*;
use rand::Rng as _;

/// Likelihood by summing over every hidden path.
fn brute_force_likelihood(hmm: &Hmm, obs: &[Token]) -> f64 {
    let n = hmm.num_states();
    let mut total = 0.0;
    let mut path = vec![0usize; obs.len()];
    loop {
        let mut p = hmm.pi[path[0]] * hmm.b[[path[0], obs[0] as usize]];
        for t in 1..obs.len() {
            p *= hmm.a[[path[t - 1], path[t]]] * hmm.b[[path[t], obs[t] as usize]];
        }
        total += p;
        // odometer increment
        let mut k = 0;
        loop {
            if k == path.len() {
                return total;
            }
            path[k] += 1;
            if path[k] < n {
                break;
            }
            path[k] = 0;
            k += 1;
        }
    }
}

fn random_obs(rng: &mut icll_core::rng::Rng, len: usize, symbols: u8) -> Vec<Token> {
    (0..len).map(|_| rng.random_range(0..symbols)).collect()
}

#[test]
fn forward_matches_path_sum() {
    let mut rng = seeded(21);
    for _ in 0..20 {
        let m = MaskedHmm::random(3, &mut rng);
        let len = rng.random_range(1..=5);
        let obs = random_obs(&mut rng, len, 4);
        let expected = brute_force_likelihood(m.hmm(), &obs);
        let got = forward(m.hmm(), &obs).log_likelihood.exp();
        assert!((got - expected).abs() <= 1e-12 * expected.max(1e-300) + 1e-300, "{got} vs {expected}");
    }
}

#[test]
fn scaled_alpha_beta_sum_to_one() {
    let mut rng = seeded(22);
    let m = MaskedHmm::random(4, &mut rng);
    let obs = random_obs(&mut rng, 60, 18);
    let f = forward(m.hmm(), &obs);
    let beta = backward(m.hmm(), &obs).unwrap();
    for t in 0..obs.len() {
        let s: f64 = f.alpha.row(t).iter().zip(beta.row(t)).map(|(a, b)| a * b).sum();
        assert!((s - 1.0).abs() < 1e-9, "t = {t}: {s}");
    }
    let log_from_scale: f64 = f.scale.iter().map(|c| c.ln()).sum();
    assert!((log_from_scale - f.log_likelihood).abs() < 1e-9);
}

#[test]
fn embedded_pfa_reproduces_string_probabilities() {
    let mut rng = seeded(23);
    let params = SamplerParams::default();
    let mut checked = 0;
    while checked < 30 {
        let pfa = sample_pfa(&params, &mut rng);
        let Ok(m) = MaskedHmm::from_pfa(&pfa, 12) else { continue };
        assert!(m.hmm().masks_respected());
        let s = pfa.sample_string(&mut rng, 1, 30);
        let diff = forward(m.hmm(), &s).log_likelihood - pfa.string_logprob(&s);
        assert!(diff.abs() < 1e-9);
        checked += 1;
    }
}

#[test]
fn em_never_decreases_likelihood_at_full_size() {
    let mut rng = seeded(24);
    let pfa = sample_pfa(&SamplerParams::default(), &mut rng);
    let data: Vec<Vec<Token>> = (0..12).map(|_| pfa.sample_string(&mut rng, 1, 50)).collect();
    let mut model = MaskedHmm::random(12, &mut rng);
    let mut prev = f64::NEG_INFINITY;
    for _ in 0..10 {
        let (next, stats) = em_step(&model, &data);
        assert!(stats.log_likelihood >= prev - 1e-8);
        assert!(next.hmm().masks_respected());
        assert!(next.hmm().max_stochasticity_error() < 1e-9);
        prev = stats.log_likelihood;
        model = next;
    }
    assert!(log_likelihood(model.hmm(), &data) >= prev - 1e-8);
}

#[test]
fn predictions_are_normalized_for_both_cadences() {
    let mut rng = seeded(25);
    let pfa = sample_pfa(&SamplerParams::default(), &mut rng);
    let strings: Vec<Vec<Token>> = (0..4).map(|_| pfa.sample_string(&mut rng, 1, 8)).collect();
    let tokens = icll_core::corpus::join_strings(&strings);
    for cadence in [Cadence::EveryString, Cadence::EveryToken] {
        let cfg = BwConfig { side: 4, cadence, max_iters: 3, ..BwConfig::default() };
        let preds = bw_predict_sequence(&tokens, &cfg);
        assert_eq!(preds.len(), tokens.len());
        for (j, p) in preds.iter().enumerate() {
            assert!((p.sum() - 1.0).abs() < 1e-9, "position {j}");
            if j > 0 && tokens[j - 1] == DELIMITER {
                assert_eq!(p.prob(DELIMITER), 0.0, "empty string predicted at {j}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn em_is_monotone_and_masked(seed in any::<u64>(), side in 2usize..6) {
        let mut rng = seeded(seed);
        let data: Vec<Vec<Token>> = (0..rng.random_range(1..5))
            .map(|_| {
                let len = rng.random_range(1..12);
                random_obs(&mut rng, len, 5)
            })
            .collect();
        let mut model = MaskedHmm::random(side, &mut rng);
        let mut prev = f64::NEG_INFINITY;
        for _ in 0..8 {
            let (next, stats) = em_step(&model, &data);
            prop_assert!(stats.log_likelihood >= prev - 1e-8);
            prop_assert!(next.hmm().masks_respected());
            prev = stats.log_likelihood;
            model = next;
        }
    }
}
