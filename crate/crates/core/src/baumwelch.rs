//! In-context Baum–Welch predictor.
//!
//! A pair-state HMM (hidden state `(i, j)` stands for "just moved from
//! automaton state `i` to `j`") is fitted by EM to the strings seen so far
//! in a problem instance, and the next token is predicted by forward
//! inference over the current partial string. Transition and initial
//! probabilities are structurally masked so that only automaton-shaped
//! models are reachable.

use ndarray::{Array1, Array2};
use rand::Rng as _;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::automata::{Hmm, Pfa};
use crate::corpus::STRING_LEN_MAX;
use crate::distribution::{Distribution, Token, DELIMITER, NUM_SYMBOLS, VOCAB_SIZE};
use crate::error::{Error, Result};
use crate::rng::{self, Rng};

/// Scaled forward variables.
#[derive(Debug, Clone)]
pub struct ForwardPass {
    pub log_likelihood: f64,
    /// `T × S`, each row normalized to sum 1 (zero rows after a dead step).
    pub alpha: Array2<f64>,
    /// Per-step normalizers; their logs sum to the log-likelihood.
    pub scale: Vec<f64>,
}

impl ForwardPass {
    pub fn is_degenerate(&self) -> bool {
        self.log_likelihood == f64::NEG_INFINITY
    }
}

/// Nonzero transitions in row-compressed form.
struct Successors {
    rows: Vec<Vec<(usize, f64)>>,
}

impl Successors {
    fn of(hmm: &Hmm) -> Self {
        let rows = hmm
            .a
            .rows()
            .into_iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &p)| p != 0.0)
                    .map(|(j, &p)| (j, p))
                    .collect()
            })
            .collect();
        Successors { rows }
    }
}

fn emission(hmm: &Hmm, state: usize, token: Token) -> f64 {
    if (token as usize) < NUM_SYMBOLS {
        hmm.b[[state, token as usize]]
    } else {
        0.0
    }
}

fn forward_with(hmm: &Hmm, succ: &Successors, obs: &[Token]) -> ForwardPass {
    let s = hmm.num_states();
    let t_len = obs.len();
    let mut alpha = Array2::zeros((t_len, s));
    let mut scale = vec![0.0; t_len];
    let mut log_likelihood = 0.0;
    for (t, &o) in obs.iter().enumerate() {
        let mut row = vec![0.0; s];
        if t == 0 {
            for (i, r) in row.iter_mut().enumerate() {
                *r = hmm.pi[i] * emission(hmm, i, o);
            }
        } else {
            for i in 0..s {
                let a_prev = alpha[[t - 1, i]];
                if a_prev == 0.0 {
                    continue;
                }
                for &(j, p) in &succ.rows[i] {
                    row[j] += a_prev * p;
                }
            }
            for (j, r) in row.iter_mut().enumerate() {
                *r *= emission(hmm, j, o);
            }
        }
        let c: f64 = row.iter().sum();
        scale[t] = c;
        if c <= 0.0 {
            log_likelihood = f64::NEG_INFINITY;
            break;
        }
        log_likelihood += c.ln();
        for (j, r) in row.into_iter().enumerate() {
            alpha[[t, j]] = r / c;
        }
    }
    ForwardPass {
        log_likelihood,
        alpha,
        scale,
    }
}

fn backward_with(hmm: &Hmm, succ: &Successors, obs: &[Token], scale: &[f64]) -> Array2<f64> {
    let s = hmm.num_states();
    let t_len = obs.len();
    let mut beta = Array2::zeros((t_len, s));
    if t_len == 0 {
        return beta;
    }
    beta.row_mut(t_len - 1).fill(1.0);
    for t in (0..t_len - 1).rev() {
        let o = obs[t + 1];
        for i in 0..s {
            let mut acc = 0.0;
            for &(j, p) in &succ.rows[i] {
                acc += p * emission(hmm, j, o) * beta[[t + 1, j]];
            }
            beta[[t, i]] = acc / scale[t + 1];
        }
    }
    beta
}

/// Forward recursion with per-step scaling.
pub fn forward(hmm: &Hmm, obs: &[Token]) -> ForwardPass {
    forward_with(hmm, &Successors::of(hmm), obs)
}

/// Backward recursion scaled by the forward normalizers, so that
/// `Σ_s alpha[t][s] · beta[t][s] = 1` for every `t`. `None` when the
/// observations have zero likelihood.
pub fn backward(hmm: &Hmm, obs: &[Token]) -> Option<Array2<f64>> {
    let succ = Successors::of(hmm);
    let fw = forward_with(hmm, &succ, obs);
    if fw.is_degenerate() {
        return None;
    }
    Some(backward_with(hmm, &succ, obs, &fw.scale))
}

/// Total log-likelihood of several independent sequences.
pub fn log_likelihood(hmm: &Hmm, obs_list: &[Vec<Token>]) -> f64 {
    let succ = Successors::of(hmm);
    obs_list
        .iter()
        .map(|o| forward_with(hmm, &succ, o).log_likelihood)
        .sum()
}

/// HMM over `side × side` pair states with the automaton-shaped masks:
/// the chain starts in some `(0, j)` and moves from `(i, j)` to `(j, m)`,
/// never through a pair with equal components.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskedHmm {
    side: usize,
    hmm: Hmm,
}

fn pair_masks(side: usize) -> (Array1<bool>, Array2<bool>) {
    let n = side * side;
    let pi_mask = Array1::from_shape_fn(n, |p| p / side == 0 && p % side != 0);
    let a_mask = Array2::from_shape_fn((n, n), |(p, q)| {
        let (i, j) = (p / side, p % side);
        let (l, m) = (q / side, q % side);
        j == l && i != j && l != m
    });
    (pi_mask, a_mask)
}

fn uniform_over(mask: impl Iterator<Item = bool>, out: &mut [f64]) -> bool {
    let allowed: Vec<bool> = mask.collect();
    let k = allowed.iter().filter(|&&m| m).count();
    for (o, &m) in out.iter_mut().zip(&allowed) {
        *o = if m && k > 0 { 1.0 / k as f64 } else { 0.0 };
    }
    k > 0
}

fn dirichlet_row(rng: &mut Rng, mask: &[bool], out: &mut [f64]) {
    let mut total = 0.0;
    for (o, &m) in out.iter_mut().zip(mask) {
        *o = if m { rng.sample::<f64, _>(Exp1) } else { 0.0 };
        total += *o;
    }
    if total > 0.0 {
        out.iter_mut().for_each(|o| *o /= total);
    }
}

impl MaskedHmm {
    /// Parameters drawn from a symmetric Dirichlet(1) over each row's
    /// allowed entries.
    pub fn random(side: usize, rng: &mut Rng) -> Self {
        let n = side * side;
        let (pi_mask, a_mask) = pair_masks(side);
        let mut pi = Array1::zeros(n);
        dirichlet_row(
            rng,
            pi_mask.as_slice().unwrap(),
            pi.as_slice_mut().unwrap(),
        );
        let mut a = Array2::zeros((n, n));
        for p in 0..n {
            let mask: Vec<bool> = a_mask.row(p).to_vec();
            let mut row = vec![0.0; n];
            dirichlet_row(rng, &mask, &mut row);
            a.row_mut(p).assign(&Array1::from(row));
        }
        let mut b = Array2::zeros((n, NUM_SYMBOLS));
        let all = [true; NUM_SYMBOLS];
        for p in 0..n {
            let mut row = [0.0; NUM_SYMBOLS];
            dirichlet_row(rng, &all, &mut row);
            b.row_mut(p).assign(&Array1::from(row.to_vec()));
        }
        MaskedHmm {
            side,
            hmm: Hmm {
                pi,
                a,
                b,
                pi_mask,
                a_mask,
            },
        }
    }

    /// Embeds the generator of `pfa` into the masked parameterization,
    /// placing automaton state `s` at pair index `s`. Pairs that are not
    /// automaton edges get uniform rows; they are never visited.
    pub fn from_pfa(pfa: &Pfa, side: usize) -> Result<Self> {
        let n = pfa.num_states();
        if n > side {
            return Err(Error::TooManyStates(n, side));
        }
        let dfa = pfa.dfa();
        let mut weight = vec![vec![0.0; side]; side];
        let mut symbols = vec![vec![Vec::new(); side]; side];
        for (i, x, j) in dfa.edges() {
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            weight[i as usize][j as usize] += pfa.trans_prob(i, x);
            symbols[i as usize][j as usize].push(x);
        }
        let total = side * side;
        let (pi_mask, a_mask) = pair_masks(side);
        let mut pi = Array1::zeros(total);
        for j in 0..side {
            pi[j] = weight[0][j];
        }
        let mut a = Array2::zeros((total, total));
        let mut b = Array2::zeros((total, NUM_SYMBOLS));
        for p in 0..total {
            let (i, j) = (p / side, p % side);
            let is_edge = !symbols[i][j].is_empty();
            if is_edge {
                for m in 0..side {
                    a[[p, j * side + m]] = weight[j][m];
                }
                let share = 1.0 / symbols[i][j].len() as f64;
                for &x in &symbols[i][j] {
                    b[[p, x as usize]] = share;
                }
            } else {
                let mut row = vec![0.0; total];
                uniform_over(a_mask.row(p).iter().copied(), &mut row);
                a.row_mut(p).assign(&Array1::from(row));
                b.row_mut(p).fill(1.0 / NUM_SYMBOLS as f64);
            }
        }
        Ok(MaskedHmm {
            side,
            hmm: Hmm {
                pi,
                a,
                b,
                pi_mask,
                a_mask,
            },
        })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn hmm(&self) -> &Hmm {
        &self.hmm
    }

    /// Mixes every row with `eps` of the uniform distribution over its
    /// allowed entries, so no observation has zero likelihood.
    pub fn smoothed(&self, eps: f64) -> Self {
        let mut out = self.clone();
        let h = &mut out.hmm;
        let mut u = vec![0.0; h.pi.len()];
        if uniform_over(h.pi_mask.iter().copied(), &mut u) {
            for (p, q) in h.pi.iter_mut().zip(&u) {
                *p = (1.0 - eps) * *p + eps * q;
            }
        }
        let n = h.a.nrows();
        for p in 0..n {
            let mut u = vec![0.0; n];
            if uniform_over(h.a_mask.row(p).iter().copied(), &mut u) {
                for (x, q) in h.a.row_mut(p).iter_mut().zip(&u) {
                    *x = (1.0 - eps) * *x + eps * q;
                }
            }
        }
        h.b.mapv_inplace(|x| (1.0 - eps) * x + eps / NUM_SYMBOLS as f64);
        out
    }
}

/// Bookkeeping from one EM iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmStats {
    /// Log-likelihood of the data under the input model.
    pub log_likelihood: f64,
    /// Rows re-initialized because they received no expected counts.
    pub repaired_rows: usize,
    /// Sequences skipped because they had zero likelihood.
    pub skipped: usize,
}

/// One multi-sequence Baum–Welch re-estimation of `pi`, `A` and `B`.
pub fn em_step(model: &MaskedHmm, obs_list: &[Vec<Token>]) -> (MaskedHmm, EmStats) {
    let hmm = &model.hmm;
    let n = hmm.num_states();
    let succ = Successors::of(hmm);
    let mut pi_num = vec![0.0; n];
    let mut a_num = Array2::<f64>::zeros((n, n));
    let mut b_num = Array2::<f64>::zeros((n, NUM_SYMBOLS));
    let mut stats = EmStats {
        log_likelihood: 0.0,
        repaired_rows: 0,
        skipped: 0,
    };

    for obs in obs_list.iter().filter(|o| !o.is_empty()) {
        let fw = forward_with(hmm, &succ, obs);
        if fw.is_degenerate() {
            stats.skipped += 1;
            stats.log_likelihood = f64::NEG_INFINITY;
            continue;
        }
        stats.log_likelihood += fw.log_likelihood;
        let beta = backward_with(hmm, &succ, obs, &fw.scale);
        let alpha = &fw.alpha;
        for (t, &o) in obs.iter().enumerate() {
            for s in 0..n {
                let g = alpha[[t, s]] * beta[[t, s]];
                if g != 0.0 {
                    b_num[[s, o as usize]] += g;
                    if t == 0 {
                        pi_num[s] += g;
                    }
                }
            }
            if t + 1 < obs.len() {
                let o_next = obs[t + 1];
                let c = fw.scale[t + 1];
                for s in 0..n {
                    let a_t = alpha[[t, s]];
                    if a_t == 0.0 {
                        continue;
                    }
                    for &(j, p) in &succ.rows[s] {
                        let xi = a_t * p * emission(hmm, j, o_next) * beta[[t + 1, j]] / c;
                        a_num[[s, j]] += xi;
                    }
                }
            }
        }
    }

    let mut next = model.clone();
    let h = &mut next.hmm;

    let pi_total: f64 = pi_num
        .iter()
        .zip(&h.pi_mask)
        .filter(|(_, &m)| m)
        .map(|(&v, _)| v)
        .sum();
    if pi_total > 0.0 {
        for (s, p) in h.pi.iter_mut().enumerate() {
            *p = if h.pi_mask[s] { pi_num[s] / pi_total } else { 0.0 };
        }
    } else {
        let mut u = vec![0.0; n];
        uniform_over(h.pi_mask.iter().copied(), &mut u);
        h.pi.assign(&Array1::from(u));
        stats.repaired_rows += 1;
    }

    for s in 0..n {
        let mask = h.a_mask.row(s).to_vec();
        if !mask.iter().any(|&m| m) {
            h.a.row_mut(s).fill(0.0);
            continue;
        }
        let total: f64 = (0..n).filter(|&j| mask[j]).map(|j| a_num[[s, j]]).sum();
        if total > 0.0 {
            for j in 0..n {
                h.a[[s, j]] = if mask[j] { a_num[[s, j]] / total } else { 0.0 };
            }
        } else {
            let mut u = vec![0.0; n];
            uniform_over(mask.into_iter(), &mut u);
            h.a.row_mut(s).assign(&Array1::from(u));
            stats.repaired_rows += 1;
        }
    }

    for s in 0..n {
        let total: f64 = b_num.row(s).sum();
        if total > 0.0 {
            for x in 0..NUM_SYMBOLS {
                h.b[[s, x]] = b_num[[s, x]] / total;
            }
        } else {
            h.b.row_mut(s).fill(1.0 / NUM_SYMBOLS as f64);
            stats.repaired_rows += 1;
        }
    }
    (next, stats)
}

/// When the predictor refits its HMM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cadence {
    /// Refit after each completed string, on the completed strings.
    EveryString,
    /// Refit before every prediction, on the completed strings plus the
    /// current partial one.
    EveryToken,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BwConfig {
    /// Pair-index side length; the HMM has `side²` states.
    pub side: usize,
    pub max_iters: usize,
    /// Stop early when the relative log-likelihood gain drops below this.
    pub tol: f64,
    pub cadence: Cadence,
    pub seed: u64,
    /// Uniform mass mixed into a warm-started model before refitting.
    pub smoothing: f64,
}

impl Default for BwConfig {
    fn default() -> Self {
        BwConfig {
            side: 12,
            max_iters: 5,
            tol: 1e-4,
            cadence: Cadence::EveryString,
            seed: 0,
            smoothing: 1e-3,
        }
    }
}

impl BwConfig {
    pub fn num_states(&self) -> usize {
        self.side * self.side
    }
}

/// Runs up to `max_iters` EM steps, returning the fitted model and the
/// log-likelihood trace (the value before each step, then the final one).
pub fn fit(model: MaskedHmm, obs_list: &[Vec<Token>], cfg: &BwConfig) -> (MaskedHmm, Vec<f64>) {
    let mut model = model;
    let mut trace = Vec::new();
    for _ in 0..cfg.max_iters {
        let (next, stats) = em_step(&model, obs_list);
        if let Some(&prev) = trace.last() {
            let gain = stats.log_likelihood - prev;
            trace.push(stats.log_likelihood);
            model = next;
            if gain.abs() <= cfg.tol * f64::abs(prev) {
                break;
            }
        } else {
            trace.push(stats.log_likelihood);
            model = next;
        }
    }
    trace.push(log_likelihood(model.hmm(), obs_list));
    (model, trace)
}

/// Probability that a string stops right after `len` symbols, estimated from
/// completed string lengths with one pseudo-observation drawn from the
/// uniform length law on `[1, STRING_LEN_MAX]`.
fn stop_rate(lengths: &[usize], len: usize) -> f64 {
    if len == 0 {
        return 0.0;
    }
    let prior = if len >= STRING_LEN_MAX {
        1.0
    } else {
        1.0 / (STRING_LEN_MAX + 1 - len) as f64
    };
    let ended = lengths.iter().filter(|&&l| l == len).count() as f64;
    let reached = lengths.iter().filter(|&&l| l >= len).count() as f64;
    ((ended + prior) / (reached + 1.0)).min(1.0)
}

/// Next-symbol distribution (over symbols only) after the partial string
/// `current`. `None` if the partial string has zero likelihood.
fn symbol_mixture(hmm: &Hmm, current: &[Token]) -> Option<[f64; NUM_SYMBOLS]> {
    let n = hmm.num_states();
    let state: Vec<f64> = if current.is_empty() {
        hmm.pi.to_vec()
    } else {
        let fw = forward(hmm, current);
        if fw.is_degenerate() {
            return None;
        }
        let last = fw.alpha.row(current.len() - 1);
        let mut next = vec![0.0; n];
        for (i, &w) in last.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for (j, &p) in hmm.a.row(i).iter().enumerate() {
                next[j] += w * p;
            }
        }
        next
    };
    let mut out = [0.0; NUM_SYMBOLS];
    for (s, &w) in state.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        for (x, o) in out.iter_mut().enumerate() {
            *o += w * hmm.b[[s, x]];
        }
    }
    let total: f64 = out.iter().sum();
    if total <= 0.0 || !total.is_finite() {
        return None;
    }
    out.iter_mut().for_each(|o| *o /= total);
    Some(out)
}

fn combine(symbols: [f64; NUM_SYMBOLS], stop: f64) -> Distribution {
    let mut probs = vec![0.0; VOCAB_SIZE];
    for (p, s) in probs.iter_mut().zip(symbols) {
        *p = (1.0 - stop) * s;
    }
    probs[DELIMITER as usize] = stop;
    Distribution::from_scores(probs)
}

/// Predictions at every position of `tokens`: entry `j` is the predicted
/// distribution of `tokens[j]` given `tokens[..j]`.
pub fn bw_predict_sequence(tokens: &[Token], cfg: &BwConfig) -> Vec<Distribution> {
    let mut rng = rng::seeded(cfg.seed);
    let mut model = MaskedHmm::random(cfg.side, &mut rng);
    let mut complete: Vec<Vec<Token>> = Vec::new();
    let mut lengths: Vec<usize> = Vec::new();
    let mut current: Vec<Token> = Vec::new();
    let mut out = Vec::with_capacity(tokens.len());

    for (j, &tok) in tokens.iter().enumerate() {
        if j == 0 {
            out.push(Distribution::uniform());
        } else {
            let refit_data: Option<Vec<Vec<Token>>> = match cfg.cadence {
                Cadence::EveryString if tokens[j - 1] == DELIMITER && !complete.is_empty() => {
                    Some(complete.clone())
                }
                Cadence::EveryToken => {
                    let mut data = complete.clone();
                    if !current.is_empty() {
                        data.push(current.clone());
                    }
                    (!data.is_empty()).then_some(data)
                }
                _ => None,
            };
            if let Some(data) = refit_data {
                let warm = model.smoothed(cfg.smoothing);
                model = fit(warm, &data, cfg).0;
            }
            let symbols = symbol_mixture(model.hmm(), &current)
                .or_else(|| symbol_mixture(model.smoothed(cfg.smoothing).hmm(), &current))
                .unwrap_or([1.0 / NUM_SYMBOLS as f64; NUM_SYMBOLS]);
            out.push(combine(symbols, stop_rate(&lengths, current.len())));
        }
        if tok == DELIMITER {
            if !current.is_empty() {
                lengths.push(current.len());
                complete.push(std::mem::take(&mut current));
            }
        } else {
            current.push(tok);
        }
    }
    out
}

/// Prediction of `tokens[j]` from `tokens[..j]`.
pub fn bw_predictor(tokens: &[Token], j: usize, cfg: &BwConfig) -> Distribution {
    assert!(j < tokens.len(), "position out of range");
    bw_predict_sequence(&tokens[..=j], cfg).pop().unwrap()
}

/// Splits a token stream into its strings; the trailing partial string is
/// kept if non-empty.
pub fn split_strings(tokens: &[Token]) -> Vec<Vec<Token>> {
    tokens
        .split(|&t| t == DELIMITER)
        .filter(|s| !s.is_empty())
        .map(|s| s.to_vec())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn small_hmm() -> Hmm {
        Hmm {
            pi: array![0.6, 0.4],
            a: array![[0.7, 0.3], [0.2, 0.8]],
            b: {
                let mut b = Array2::zeros((2, NUM_SYMBOLS));
                b[[0, 0]] = 0.5;
                b[[0, 1]] = 0.5;
                b[[1, 0]] = 0.1;
                b[[1, 2]] = 0.9;
                b
            },
            pi_mask: Array1::from_elem(2, true),
            a_mask: Array2::from_elem((2, 2), true),
        }
    }

    #[test]
    fn single_state_loglik_is_sum_of_emissions() {
        let mut b = Array2::zeros((1, NUM_SYMBOLS));
        b[[0, 0]] = 0.25;
        b[[0, 3]] = 0.75;
        let hmm = Hmm {
            pi: array![1.0],
            a: array![[1.0]],
            b,
            pi_mask: array![true],
            a_mask: array![[true]],
        };
        let obs = [0, 3, 3, 0, 3];
        let expected = 2.0 * 0.25f64.ln() + 3.0 * 0.75f64.ln();
        assert!((forward(&hmm, &obs).log_likelihood - expected).abs() < 1e-12);
    }

    #[test]
    fn last_beta_row_is_ones() {
        let hmm = small_hmm();
        let beta = backward(&hmm, &[0, 2, 1]).unwrap();
        assert!(beta.row(2).iter().all(|&b| b == 1.0));
    }

    #[test]
    fn zero_likelihood_is_flagged() {
        let hmm = small_hmm();
        assert!(forward(&hmm, &[5]).is_degenerate());
        assert!(backward(&hmm, &[0, 5]).is_none());
        assert!(forward(&hmm, &[DELIMITER]).is_degenerate());
    }

    #[test]
    fn masks_follow_pair_structure() {
        let (pi_mask, a_mask) = pair_masks(3);
        // (0,1), (0,2) may start
        assert_eq!(pi_mask.to_vec(), vec![false, true, true, false, false, false, false, false, false]);
        // (0,1) -> (1,0), (1,2)
        assert!(a_mask[[1, 3]] && a_mask[[1, 5]]);
        assert!(!a_mask[[1, 4]]);
        // diagonal pairs are inert
        assert!(!a_mask.row(4).iter().any(|&m| m));
        assert!(!a_mask.column(4).iter().any(|&m| m));
    }

    #[test]
    fn em_keeps_masks_and_rows() {
        let mut rng = rng::seeded(4);
        let model = MaskedHmm::random(4, &mut rng);
        assert!(model.hmm().masks_respected());
        let data = vec![vec![0, 1, 2, 1], vec![2, 2, 0], vec![1]];
        let (next, stats) = em_step(&model, &data);
        assert!(next.hmm().masks_respected());
        assert!(next.hmm().max_stochasticity_error() < 1e-9);
        let after = log_likelihood(next.hmm(), &data);
        assert!(after >= stats.log_likelihood - 1e-8);
    }

    #[test]
    fn stop_rate_prior() {
        assert_eq!(stop_rate(&[], 0), 0.0);
        assert!((stop_rate(&[], 1) - 1.0 / 50.0).abs() < 1e-15);
        assert_eq!(stop_rate(&[], 50), 1.0);
        // one string of length 3 observed
        assert!((stop_rate(&[3], 3) - (1.0 + 1.0 / 48.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn first_position_is_uniform() {
        let cfg = BwConfig {
            side: 3,
            ..Default::default()
        };
        assert_eq!(bw_predictor(&[0, 1], 0, &cfg), Distribution::uniform());
    }

    #[test]
    fn split_keeps_partial_string() {
        let t = [0, 1, DELIMITER, 2, DELIMITER, 3];
        assert_eq!(split_strings(&t), vec![vec![0, 1], vec![2], vec![3]]);
    }
}
