//! Accuracy and total variation distance of next-token predictors against
//! the ground-truth automaton of each instance.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baumwelch::{bw_predict_sequence, BwConfig};
use crate::corpus::ProblemInstance;
use crate::distribution::{half_l1, Distribution, Token, DELIMITER, NUM_SYMBOLS, VOCAB_SIZE};
use crate::error::{Error, Result};
use crate::lnw::{lnw_predict_sequence, MlpParams, Variant};
use crate::ngram::{ngram_predict_sequence, NgramConfig};

/// A next-token model evaluated on whole instances.
pub trait Predictor: Sync {
    fn name(&self) -> String;

    /// Predicted distribution of `tokens[j]` given `tokens[..j]`, for every `j`.
    fn predict_instance(&self, inst: &ProblemInstance) -> Result<Vec<Distribution>>;

    /// Settings echoed into reports.
    fn config(&self) -> serde_json::Value {
        serde_json::Value::Null
    }
}

/// The ground-truth automaton of each instance.
pub struct Oracle;

impl Predictor for Oracle {
    fn name(&self) -> String {
        "oracle".into()
    }

    fn predict_instance(&self, inst: &ProblemInstance) -> Result<Vec<Distribution>> {
        let mut out = Vec::with_capacity(inst.tokens.len());
        let mut start = 0;
        for (j, &t) in inst.tokens.iter().enumerate() {
            let d = inst
                .pfa
                .next_token_distribution(&inst.tokens[start..j])
                .ok_or(Error::OracleReject {
                    instance: inst.language_id,
                    position: j,
                })?;
            out.push(d);
            if t == DELIMITER {
                start = j + 1;
            }
        }
        Ok(out)
    }
}

pub struct Ngram(pub NgramConfig);

impl Predictor for Ngram {
    fn name(&self) -> String {
        format!("ngram-{}", self.0.max_order)
    }

    fn predict_instance(&self, inst: &ProblemInstance) -> Result<Vec<Distribution>> {
        Ok(ngram_predict_sequence(&inst.tokens, &self.0))
    }

    fn config(&self) -> serde_json::Value {
        serde_json::to_value(self.0).unwrap_or_default()
    }
}

pub struct BaumWelch(pub BwConfig);

impl Predictor for BaumWelch {
    fn name(&self) -> String {
        "bw".into()
    }

    fn predict_instance(&self, inst: &ProblemInstance) -> Result<Vec<Distribution>> {
        Ok(bw_predict_sequence(&inst.tokens, &self.0))
    }

    fn config(&self) -> serde_json::Value {
        serde_json::to_value(self.0).unwrap_or_default()
    }
}

pub struct Lnw {
    pub params: MlpParams,
    pub variant: Variant,
}

impl Predictor for Lnw {
    fn name(&self) -> String {
        self.variant.name().into()
    }

    fn predict_instance(&self, inst: &ProblemInstance) -> Result<Vec<Distribution>> {
        Ok(lnw_predict_sequence(&self.params, &inst.tokens, self.variant))
    }

    fn config(&self) -> serde_json::Value {
        serde_json::json!({ "variant": self.variant, "hidden": self.params.hidden_dim() })
    }
}

/// A scored position: index into the token stream and the number of
/// symbols of the current string that precede it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScoredPosition {
    pub index: usize,
    pub string_offset: usize,
}

/// All symbol positions of a token stream; delimiter positions are skipped.
pub fn scored_positions(tokens: &[Token]) -> Vec<ScoredPosition> {
    let mut out = Vec::new();
    let mut offset = 0;
    for (index, &t) in tokens.iter().enumerate() {
        if t == DELIMITER {
            offset = 0;
        } else {
            out.push(ScoredPosition { index, string_offset: offset });
            offset += 1;
        }
    }
    out
}

/// Whether the predicted argmax is allowed at this position.
pub fn position_correct(pred: &Distribution, oracle: &Distribution, string_offset: usize) -> bool {
    let top = pred.argmax();
    if top == DELIMITER {
        string_offset >= 1
    } else {
        oracle.prob(top) > 0.0
    }
}

/// Half-L1 between the prediction restricted to symbols and the oracle.
pub fn position_tvd(pred: &Distribution, oracle: &Distribution) -> f64 {
    match pred.symbols_only() {
        Some(p) => half_l1(&p, &oracle.probs()[..NUM_SYMBOLS]).min(1.0),
        None => 1.0,
    }
}

fn symbol_view(d: &Distribution) -> [f64; VOCAB_SIZE] {
    let mut out = [0.0; VOCAB_SIZE];
    match d.symbols_only() {
        Some(s) => out[..NUM_SYMBOLS].copy_from_slice(&s),
        None => out[DELIMITER as usize] = 1.0,
    }
    out
}

/// Half-L1 between two predictions after the same symbol renormalization
/// used for [`position_tvd`]; an all-delimiter prediction stays a point mass.
pub fn pair_tvd(a: &Distribution, b: &Distribution) -> f64 {
    half_l1(&symbol_view(a), &symbol_view(b)).min(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceScore {
    pub language_id: u64,
    pub nt: usize,
    pub correct: usize,
    pub accuracy: f64,
    pub tvd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub predictor: String,
    pub config: serde_json::Value,
    pub n_train: usize,
    pub n_test: usize,
    pub nt: usize,
    pub accuracy: f64,
    pub tvd: f64,
    pub instances: Vec<InstanceScore>,
    #[serde(skip)]
    pub wall_seconds: f64,
}

pub const CSV_HEADER: &str = "predictor,n_train,accuracy,tvd,nt,wall_seconds";

impl EvalReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.3}",
            self.predictor, self.n_train, self.accuracy, self.tvd, self.nt, self.wall_seconds
        )
    }
}

/// Scores one instance. Returns the per-instance summary and the sum of
/// position TVDs.
pub fn score_instance(pred: &dyn Predictor, inst: &ProblemInstance) -> Result<(InstanceScore, f64)> {
    let oracle = Oracle.predict_instance(inst)?;
    let preds = pred.predict_instance(inst)?;
    if preds.len() != inst.tokens.len() {
        return Err(Error::InvalidParams(format!(
            "{} produced {} predictions for {} tokens",
            pred.name(),
            preds.len(),
            inst.tokens.len()
        )));
    }
    let mut correct = 0;
    let mut tvd_sum = 0.0;
    let positions = scored_positions(&inst.tokens);
    for pos in &positions {
        let (p, o) = (&preds[pos.index], &oracle[pos.index]);
        correct += position_correct(p, o, pos.string_offset) as usize;
        tvd_sum += position_tvd(p, o);
    }
    let nt = positions.len();
    let denom = nt.max(1) as f64;
    Ok((
        InstanceScore {
            language_id: inst.language_id,
            nt,
            correct,
            accuracy: correct as f64 / denom,
            tvd: tvd_sum / denom,
        },
        tvd_sum,
    ))
}

/// Accuracy and TVD over a test set, instances scored in parallel.
pub fn evaluate(pred: &dyn Predictor, test: &[ProblemInstance], n_train: usize) -> Result<EvalReport> {
    let started = Instant::now();
    let scored: Vec<(InstanceScore, f64)> = test
        .par_iter()
        .map(|inst| score_instance(pred, inst))
        .collect::<Result<_>>()?;
    let nt: usize = scored.iter().map(|(s, _)| s.nt).sum();
    let correct: usize = scored.iter().map(|(s, _)| s.correct).sum();
    let tvd_sum: f64 = scored.iter().map(|(_, t)| t).sum();
    let denom = nt.max(1) as f64;
    Ok(EvalReport {
        predictor: pred.name(),
        config: pred.config(),
        n_train,
        n_test: test.len(),
        nt,
        accuracy: correct as f64 / denom,
        tvd: tvd_sum / denom,
        instances: scored.into_iter().map(|(s, _)| s).collect(),
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}

pub fn accuracy(pred: &dyn Predictor, test: &[ProblemInstance]) -> Result<f64> {
    Ok(evaluate(pred, test, 0)?.accuracy)
}

pub fn tvd(pred: &dyn Predictor, test: &[ProblemInstance]) -> Result<f64> {
    Ok(evaluate(pred, test, 0)?.tvd)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseReport {
    pub a: String,
    pub b: String,
    pub config_a: serde_json::Value,
    pub config_b: serde_json::Value,
    pub max_positions: usize,
    pub positions: usize,
    pub tvd: f64,
}

/// Mean distance between two predictors over the first `max_positions`
/// scored positions of every instance.
pub fn compare(
    a: &dyn Predictor,
    b: &dyn Predictor,
    test: &[ProblemInstance],
    max_positions: usize,
) -> Result<PairwiseReport> {
    let per: Vec<(usize, f64)> = test
        .par_iter()
        .map(|inst| {
            let pa = a.predict_instance(inst)?;
            let pb = b.predict_instance(inst)?;
            let positions = scored_positions(&inst.tokens);
            let take = positions.len().min(max_positions);
            let sum = positions[..take]
                .iter()
                .map(|p| pair_tvd(&pa[p.index], &pb[p.index]))
                .sum::<f64>();
            Ok((take, sum))
        })
        .collect::<Result<_>>()?;
    let positions: usize = per.iter().map(|p| p.0).sum();
    let total: f64 = per.iter().map(|p| p.1).sum();
    Ok(PairwiseReport {
        a: a.name(),
        b: b.name(),
        config_a: a.config(),
        config_b: b.config(),
        max_positions,
        positions,
        tvd: total / positions.max(1) as f64,
    })
}

pub fn pairwise_tvd(
    a: &dyn Predictor,
    b: &dyn Predictor,
    test: &[ProblemInstance],
    max_positions: usize,
) -> Result<f64> {
    Ok(compare(a, b, test, max_positions)?.tvd)
}
