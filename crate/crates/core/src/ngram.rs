//! In-context n-gram model with backoff.
//!
//! The model is refit from the prefix alone at every position. For a
//! context `h` with counts `c(h·w)`, seen continuations get
//! `c(h·w) / c*(h)` and the reserved mass `β(h)` is spread over unseen
//! continuations in proportion to the next-shorter context's estimate,
//! scaled by `α(h) = β(h) / Σ_{unseen w} p(w | shorter h)`. Below the
//! unigram level the estimate is uniform over the token space.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::distribution::{Distribution, Token, VOCAB_SIZE};

/// Longest context the table can key (contexts are packed into a `u64`).
pub const MAX_CONTEXT: usize = 12;

/// How probability mass is held back for unseen continuations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reservation {
    /// One phantom count per context, `c*(h) = c(h) + 1`, applied whenever
    /// some continuation of `h` is unseen.
    Phantom,
    /// Plain relative frequencies; nothing is passed to shorter contexts
    /// once a context has been observed.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NgramConfig {
    /// N: the context is the previous `N − 1` tokens.
    pub max_order: usize,
    pub reservation: Reservation,
}

impl Default for NgramConfig {
    fn default() -> Self {
        NgramConfig {
            max_order: 3,
            reservation: Reservation::Phantom,
        }
    }
}

fn pack(ctx: &[Token]) -> u64 {
    ctx.iter().fold(0u64, |k, &t| (k << 5) | (t as u64 + 1))
}

/// Continuation counts for every context of length `0..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct NgramTable {
    order: usize,
    counts: Vec<HashMap<u64, [u32; VOCAB_SIZE]>>,
}

impl NgramTable {
    pub fn new(order: usize) -> Self {
        assert!(
            (1..=MAX_CONTEXT + 1).contains(&order),
            "n-gram order must be in 1..={}",
            MAX_CONTEXT + 1
        );
        NgramTable {
            order,
            counts: vec![HashMap::new(); order],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Counts the windows ending at the last token of `history`.
    pub fn observe(&mut self, history: &[Token]) {
        let Some((&next, before)) = history.split_last() else {
            return;
        };
        for k in 0..self.order.min(before.len() + 1) {
            let ctx = &before[before.len() - k..];
            self.counts[k].entry(pack(ctx)).or_insert([0; VOCAB_SIZE])[next as usize] += 1;
        }
    }

    /// Continuation counts of `ctx` (all zero if never seen).
    pub fn continuations(&self, ctx: &[Token]) -> [u32; VOCAB_SIZE] {
        assert!(ctx.len() < self.order, "context longer than N - 1");
        self.counts[ctx.len()]
            .get(&pack(ctx))
            .copied()
            .unwrap_or([0; VOCAB_SIZE])
    }

    pub fn count(&self, ctx: &[Token], next: Token) -> u32 {
        self.continuations(ctx)[next as usize]
    }

    /// Number of times `ctx` occurred followed by some token.
    pub fn context_count(&self, ctx: &[Token]) -> u32 {
        self.continuations(ctx).iter().sum()
    }
}

/// Counts all n-grams (context lengths `0..N`) in `prefix`.
pub fn count_ngrams(prefix: &[Token], order: usize) -> NgramTable {
    let mut table = NgramTable::new(order);
    for end in 1..=prefix.len() {
        table.observe(&prefix[..end]);
    }
    table
}

/// Quantities at one backoff level, longest context first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackoffLevel {
    pub context_len: usize,
    /// `c(h)`; zero means the level deferred entirely to the shorter context.
    pub context_count: u32,
    /// `Σ_{seen w} c*(h·w) / c*(h)`
    pub seen_mass: f64,
    pub beta: f64,
    pub alpha: f64,
    /// `Σ_{unseen w} α(h) · p(w | shorter h)`
    pub unseen_mass: f64,
}

fn level(
    table: &NgramTable,
    ctx: &[Token],
    reservation: Reservation,
    trace: &mut Vec<BackoffLevel>,
) -> [f64; VOCAB_SIZE] {
    let lower = if ctx.is_empty() {
        [1.0 / VOCAB_SIZE as f64; VOCAB_SIZE]
    } else {
        level(table, &ctx[1..], reservation, trace)
    };
    let counts = table.continuations(ctx);
    let total: u32 = counts.iter().sum();
    if total == 0 {
        trace.push(BackoffLevel {
            context_len: ctx.len(),
            context_count: 0,
            seen_mass: 0.0,
            beta: 1.0,
            alpha: 1.0,
            unseen_mass: 1.0,
        });
        return lower;
    }
    let any_unseen = counts.contains(&0);
    let denom = match reservation {
        Reservation::Phantom if any_unseen => total as f64 + 1.0,
        _ => total as f64,
    };
    let seen_mass: f64 = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| c as f64 / denom)
        .sum();
    let beta = if any_unseen { 1.0 - seen_mass } else { 0.0 };
    let unseen_lower: f64 = counts
        .iter()
        .zip(&lower)
        .filter(|(&c, _)| c == 0)
        .map(|(_, &p)| p)
        .sum();
    let alpha = if unseen_lower > 0.0 { beta / unseen_lower } else { 0.0 };
    let mut out = [0.0; VOCAB_SIZE];
    let mut unseen_mass = 0.0;
    for w in 0..VOCAB_SIZE {
        out[w] = if counts[w] > 0 {
            counts[w] as f64 / denom
        } else {
            let p = alpha * lower[w];
            unseen_mass += p;
            p
        };
    }
    trace.push(BackoffLevel {
        context_len: ctx.len(),
        context_count: total,
        seen_mass,
        beta,
        alpha,
        unseen_mass,
    });
    out
}

/// Backoff estimate after `context` (its last `N − 1` tokens are used),
/// together with the per-level quantities, longest context first.
pub fn backoff_predict_traced(
    table: &NgramTable,
    context: &[Token],
    reservation: Reservation,
) -> (Distribution, Vec<BackoffLevel>) {
    let k = context.len().min(table.order() - 1);
    let ctx = &context[context.len() - k..];
    let mut trace = Vec::with_capacity(k + 1);
    let probs = level(table, ctx, reservation, &mut trace);
    trace.reverse();
    (Distribution::from_vec(probs.to_vec()), trace)
}

pub fn backoff_predict(table: &NgramTable, context: &[Token], reservation: Reservation) -> Distribution {
    backoff_predict_traced(table, context, reservation).0
}

/// Prediction of `tokens[j]` from a table recounted over `tokens[..j]`.
pub fn ngram_predictor(tokens: &[Token], j: usize, cfg: &NgramConfig) -> Distribution {
    assert!(j < tokens.len(), "position out of range");
    let table = count_ngrams(&tokens[..j], cfg.max_order);
    backoff_predict(&table, &tokens[..j], cfg.reservation)
}

/// Predictions at every position, updating one table incrementally.
pub fn ngram_predict_sequence(tokens: &[Token], cfg: &NgramConfig) -> Vec<Distribution> {
    let mut table = NgramTable::new(cfg.max_order);
    let mut out = Vec::with_capacity(tokens.len());
    for j in 0..tokens.len() {
        out.push(backoff_predict(&table, &tokens[..j], cfg.reservation));
        table.observe(&tokens[..=j]);
    }
    out
}
