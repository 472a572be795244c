use ndarray::Array2;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::features::{extract_features, sequence_features, Variant, FEATURE_DIM};
use super::mlp::{lm_loss_and_grads, mlp_forward, Adam, MlpParams};
use crate::corpus::ProblemInstance;
use crate::distribution::{Distribution, Token, VOCAB_SIZE};
use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub lr: f64,
    pub betas: (f64, f64),
    pub eps: f64,
    pub patience: usize,
    pub factor: f64,
    pub min_lr: f64,
    pub hidden: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 50,
            batch_size: 32,
            lr: 1e-3,
            betas: (0.9, 0.99),
            eps: 1e-8,
            patience: 5,
            factor: 0.5,
            min_lr: 1e-5,
            hidden: 1024,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(m.to_string()));
        if self.epochs == 0 || self.batch_size == 0 || self.hidden == 0 {
            return bad("epochs, batch size and hidden size must be positive");
        }
        if !(self.lr > 0.0 && self.min_lr > 0.0 && self.eps > 0.0) {
            return bad("learning rates and eps must be positive");
        }
        if !(self.factor > 0.0 && self.factor < 1.0) {
            return bad("factor must lie in (0, 1)");
        }
        let (b1, b2) = self.betas;
        if !((0.0..1.0).contains(&b1) && (0.0..1.0).contains(&b2)) {
            return bad("betas must lie in [0, 1)");
        }
        Ok(())
    }
}

/// Reduce-on-plateau in "min" mode with a relative improvement threshold.
#[derive(Debug, Clone)]
pub struct PlateauScheduler {
    lr: f64,
    factor: f64,
    min_lr: f64,
    patience: usize,
    threshold: f64,
    best: f64,
    bad_epochs: usize,
}

impl PlateauScheduler {
    pub fn new(lr: f64, factor: f64, patience: usize, min_lr: f64) -> Self {
        PlateauScheduler {
            lr,
            factor,
            min_lr,
            patience,
            threshold: 1e-4,
            best: f64::INFINITY,
            bad_epochs: 0,
        }
    }

    pub fn lr(&self) -> f64 {
        self.lr
    }

    /// Records an epoch's metric; returns the learning rate for the next epoch.
    pub fn step(&mut self, metric: f64) -> f64 {
        if metric < self.best * (1.0 - self.threshold) {
            self.best = metric;
            self.bad_epochs = 0;
        } else {
            self.bad_epochs += 1;
        }
        if self.bad_epochs > self.patience {
            self.lr = (self.lr * self.factor).max(self.min_lr);
            self.bad_epochs = 0;
        }
        self.lr
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochLog {
    pub epoch: usize,
    pub mean_loss: f64,
    pub lr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub samples: usize,
    /// Mean loss of the initialized model over all samples.
    pub initial_loss: f64,
    /// Mean loss of the returned model over all samples.
    pub final_loss: f64,
    pub epochs: Vec<EpochLog>,
}

struct Samples {
    features: Vec<[f64; FEATURE_DIM]>,
    targets: Vec<usize>,
}

impl Samples {
    fn build(train: &[ProblemInstance], variant: Variant) -> Self {
        let mut features = Vec::new();
        let mut targets = Vec::new();
        for inst in train {
            features.extend(sequence_features(&inst.tokens, variant));
            targets.extend(inst.tokens.iter().map(|&t| t as usize));
        }
        Samples { features, targets }
    }

    fn batch(&self, idx: &[usize]) -> (Array2<f64>, Vec<usize>) {
        let mut x = Array2::zeros((idx.len(), FEATURE_DIM));
        for (row, &i) in idx.iter().enumerate() {
            x.row_mut(row)
                .as_slice_mut()
                .expect("standard layout")
                .copy_from_slice(&self.features[i]);
        }
        (x, idx.iter().map(|&i| self.targets[i]).collect())
    }

    fn mean_loss(&self, params: &MlpParams) -> f64 {
        let order: Vec<usize> = (0..self.targets.len()).collect();
        let mut total = 0.0;
        for chunk in order.chunks(1024) {
            let (x, y) = self.batch(chunk);
            let logits = mlp_forward(params, x.view()).logits;
            for (row, &t) in logits.rows().into_iter().zip(&y) {
                let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let lse = max + row.iter().map(|z| (z - max).exp()).sum::<f64>().ln();
                total += lse - row[t];
            }
        }
        total / self.targets.len() as f64
    }
}

/// Trains an MLP on every (prefix features, next token) pair of the
/// training instances.
pub fn train_lnw(
    train: &[ProblemInstance],
    cfg: &TrainConfig,
    variant: Variant,
) -> Result<(MlpParams, TrainReport)> {
    cfg.validate()?;
    let samples = Samples::build(train, variant);
    if samples.targets.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut rng = rng::seeded(cfg.seed);
    let mut params = MlpParams::init(FEATURE_DIM, cfg.hidden, VOCAB_SIZE, &mut rng);
    let mut adam = Adam::new(&params, cfg.lr, cfg.betas.0, cfg.betas.1, cfg.eps);
    let mut sched = PlateauScheduler::new(cfg.lr, cfg.factor, cfg.patience, cfg.min_lr);
    let initial_loss = samples.mean_loss(&params);

    let mut order: Vec<usize> = (0..samples.targets.len()).collect();
    let mut epochs = Vec::with_capacity(cfg.epochs);
    for epoch in 0..cfg.epochs {
        order.shuffle(&mut rng);
        let lr = sched.lr();
        adam.lr = lr;
        let mut total = 0.0;
        for (b, chunk) in order.chunks(cfg.batch_size).enumerate() {
            let (x, y) = samples.batch(chunk);
            let (loss, grads) = lm_loss_and_grads(&params, x.view(), &y);
            if !loss.is_finite() {
                return Err(Error::NonFiniteLoss { epoch, batch: b, loss });
            }
            total += loss * chunk.len() as f64;
            adam.update(&mut params, &grads);
        }
        let mean_loss = total / samples.targets.len() as f64;
        epochs.push(EpochLog { epoch, mean_loss, lr });
        sched.step(mean_loss);
    }
    let final_loss = samples.mean_loss(&params);
    Ok((
        params,
        TrainReport {
            samples: samples.targets.len(),
            initial_loss,
            final_loss,
            epochs,
        },
    ))
}

fn predict(params: &MlpParams, features: &[f64; FEATURE_DIM]) -> Distribution {
    let x = ndarray::ArrayView2::from_shape((1, FEATURE_DIM), features).expect("shape");
    let logits = mlp_forward(params, x).logits;
    Distribution::softmax(logits.as_slice().expect("standard layout"))
}

/// Prediction of `tokens[j]` from `tokens[..j]`.
pub fn lnw_predictor(params: &MlpParams, tokens: &[Token], j: usize, variant: Variant) -> Distribution {
    predict(params, &extract_features(tokens, j, variant))
}

/// Predictions at every position of `tokens`.
pub fn lnw_predict_sequence(params: &MlpParams, tokens: &[Token], variant: Variant) -> Vec<Distribution> {
    let feats = sequence_features(tokens, variant);
    if feats.is_empty() {
        return Vec::new();
    }
    let x = Array2::from_shape_vec(
        (feats.len(), FEATURE_DIM),
        feats.iter().flatten().copied().collect(),
    )
    .expect("shape");
    let logits = mlp_forward(params, x.view()).logits;
    logits
        .rows()
        .into_iter()
        .map(|r| Distribution::softmax(&r.to_vec()))
        .collect()
}
