use ndarray::{Array1, Array2};

use super::pfa::Pfa;
use crate::distribution::NUM_SYMBOLS;
use crate::error::{Error, Result};

/// Largest PFA (in live states) that [`pfa_to_hmm`] accepts.
pub const MAX_PAIR_STATES: usize = 12;

/// Discrete-emission hidden Markov model over the symbol set.
///
/// Emission happens on entering a state: the first observation is drawn
/// from the state chosen by `pi`. The masks mark structurally allowed
/// entries; a masked-out entry is always exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Hmm {
    pub pi: Array1<f64>,
    pub a: Array2<f64>,
    /// `num_states × NUM_SYMBOLS`
    pub b: Array2<f64>,
    pub pi_mask: Array1<bool>,
    pub a_mask: Array2<bool>,
}

impl Hmm {
    pub fn num_states(&self) -> usize {
        self.pi.len()
    }

    /// True when every masked entry is exactly zero.
    pub fn masks_respected(&self) -> bool {
        self.pi.iter().zip(&self.pi_mask).all(|(&p, &m)| m || p == 0.0)
            && self.a.iter().zip(&self.a_mask).all(|(&p, &m)| m || p == 0.0)
    }

    /// Largest deviation from 1 over `pi`, every row of `b`, and every row
    /// of `a` that has at least one allowed entry.
    pub fn max_stochasticity_error(&self) -> f64 {
        let mut worst = (self.pi.sum() - 1.0).abs();
        for (row, mask) in self.a.rows().into_iter().zip(self.a_mask.rows()) {
            if mask.iter().any(|&m| m) {
                worst = worst.max((row.sum() - 1.0).abs());
            }
        }
        for row in self.b.rows() {
            worst = worst.max((row.sum() - 1.0).abs());
        }
        worst
    }
}

/// Builds the pair-state HMM that assigns every string the same probability
/// as `pfa`.
///
/// There is one hidden state per ordered pair `(i, j)` of PFA states joined
/// by at least one live edge; it emits the symbol(s) on the edges from `i`
/// to `j`. A minimized automaton may join `i` to `j` by more than one symbol,
/// in which case the emission splits evenly across them and the transition
/// mass into `(j, m)` sums over all symbols from `j` to `m`.
pub fn pfa_to_hmm(pfa: &Pfa) -> Result<Hmm> {
    let n = pfa.num_states();
    if n > MAX_PAIR_STATES {
        return Err(Error::TooManyStates(n, MAX_PAIR_STATES));
    }
    let dfa = pfa.dfa();

    // weight[i][j] = total probability of moving from i to j
    let mut weight = vec![vec![0.0; n]; n];
    let mut symbols = vec![vec![Vec::new(); n]; n];
    for (i, x, j) in dfa.edges() {
        weight[i as usize][j as usize] += pfa.trans_prob(i, x);
        symbols[i as usize][j as usize].push(x);
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !symbols[i][j].is_empty())
        .collect();
    let k = pairs.len();

    let mut pi = Array1::zeros(k);
    let mut pi_mask = Array1::from_elem(k, false);
    let mut a = Array2::zeros((k, k));
    let mut a_mask = Array2::from_elem((k, k), false);
    let mut b = Array2::zeros((k, NUM_SYMBOLS));
    for (p, &(i, j)) in pairs.iter().enumerate() {
        if i == 0 {
            pi_mask[p] = true;
            pi[p] = weight[0][j];
        }
        for (q, &(l, m)) in pairs.iter().enumerate() {
            if j == l {
                a_mask[[p, q]] = true;
                a[[p, q]] = weight[l][m];
            }
        }
        let share = 1.0 / symbols[i][j].len() as f64;
        for &x in &symbols[i][j] {
            b[[p, x as usize]] = share;
        }
    }
    Ok(Hmm {
        pi,
        a,
        b,
        pi_mask,
        a_mask,
    })
}
