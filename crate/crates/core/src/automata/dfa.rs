use std::collections::{HashSet, VecDeque};

use crate::distribution::{Token, NUM_SYMBOLS};
use crate::error::{Error, Result};

pub type StateId = u32;

/// A deterministic automaton over a subset of the shared symbol set.
///
/// State 0 is the start state. Missing transitions lead to an implicit,
/// absorbing, non-accepting dead state, represented as `None`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dfa {
    num_states: usize,
    alphabet: Vec<Token>,
    /// Row-major `num_states × alphabet.len()`.
    delta: Vec<Option<StateId>>,
    accepting: Vec<bool>,
}

impl Dfa {
    /// Builds an automaton from `(src, symbol, dst)` edges. Every symbol must
    /// belong to `alphabet`, which must be strictly increasing.
    pub fn new(
        num_states: usize,
        alphabet: Vec<Token>,
        edges: &[(StateId, Token, StateId)],
        accepting: &[StateId],
    ) -> Result<Self> {
        if num_states == 0 {
            return Err(Error::MalformedDfa("automaton needs at least one state".into()));
        }
        if alphabet.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::MalformedDfa("alphabet must be strictly increasing".into()));
        }
        if let Some(&s) = alphabet.iter().find(|&&s| s as usize >= NUM_SYMBOLS) {
            return Err(Error::MalformedDfa(format!("symbol {s} outside the symbol set")));
        }
        let width = alphabet.len();
        let mut delta = vec![None; num_states * width];
        for &(src, sym, dst) in edges {
            if src as usize >= num_states || dst as usize >= num_states {
                return Err(Error::MalformedDfa(format!("edge ({src}, {sym}, {dst}) out of range")));
            }
            let col = alphabet
                .binary_search(&sym)
                .map_err(|_| Error::MalformedDfa(format!("symbol {sym} not in alphabet")))?;
            let slot = &mut delta[src as usize * width + col];
            if slot.is_some() {
                return Err(Error::MalformedDfa(format!("duplicate transition ({src}, {sym})")));
            }
            *slot = Some(dst);
        }
        let mut acc = vec![false; num_states];
        for &s in accepting {
            if s as usize >= num_states {
                return Err(Error::MalformedDfa(format!("accepting state {s} out of range")));
            }
            acc[s as usize] = true;
        }
        Ok(Dfa {
            num_states,
            alphabet,
            delta,
            accepting: acc,
        })
    }

    pub(crate) fn from_parts(
        alphabet: Vec<Token>,
        delta: Vec<Option<StateId>>,
        accepting: Vec<bool>,
    ) -> Self {
        let num_states = accepting.len();
        debug_assert_eq!(delta.len(), num_states * alphabet.len());
        Dfa {
            num_states,
            alphabet,
            delta,
            accepting,
        }
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn alphabet(&self) -> &[Token] {
        &self.alphabet
    }

    pub fn is_accepting(&self, state: StateId) -> bool {
        self.accepting[state as usize]
    }

    pub fn accepting_states(&self) -> Vec<StateId> {
        (0..self.num_states as StateId)
            .filter(|&s| self.accepting[s as usize])
            .collect()
    }

    pub(crate) fn row(&self, state: StateId) -> &[Option<StateId>] {
        let w = self.alphabet.len();
        &self.delta[state as usize * w..(state as usize + 1) * w]
    }

    /// One transition; `None` means the dead state.
    pub fn step(&self, state: StateId, symbol: Token) -> Option<StateId> {
        let col = self.alphabet.binary_search(&symbol).ok()?;
        self.delta[state as usize * self.alphabet.len() + col]
    }

    /// Runs `word` from the start state.
    pub fn walk(&self, word: &[Token]) -> Option<StateId> {
        word.iter().try_fold(0, |s, &x| self.step(s, x))
    }

    pub fn accepts(&self, word: &[Token]) -> bool {
        self.walk(word).is_some_and(|s| self.is_accepting(s))
    }

    /// Live (non-dead) outgoing edges of `state` in symbol order.
    pub fn live_edges(&self, state: StateId) -> impl Iterator<Item = (Token, StateId)> + '_ {
        self.alphabet
            .iter()
            .zip(self.row(state))
            .filter_map(|(&sym, dst)| dst.map(|d| (sym, d)))
    }

    pub fn out_degree(&self, state: StateId) -> usize {
        self.row(state).iter().filter(|d| d.is_some()).count()
    }

    /// All live edges, ordered by `(src, symbol)`.
    pub fn edges(&self) -> Vec<(StateId, Token, StateId)> {
        (0..self.num_states as StateId)
            .flat_map(|s| self.live_edges(s).map(move |(x, d)| (s, x, d)))
            .collect()
    }

    /// True if some edge leads from a state back to itself.
    pub fn has_self_loop(&self) -> bool {
        self.edges().iter().any(|&(s, _, d)| s == d)
    }

    /// States reachable from the start state.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(s) = queue.pop_front() {
            for (_, d) in self.live_edges(s) {
                if !seen[d as usize] {
                    seen[d as usize] = true;
                    queue.push_back(d);
                }
            }
        }
        seen
    }
}

/// Language equality by breadth-first search over the product automaton.
///
/// The two automata may have different alphabets; a symbol missing from one
/// of them leads that side to the dead state.
pub fn dfa_equivalent(a: &Dfa, b: &Dfa) -> bool {
    let accepts = |d: &Dfa, s: Option<StateId>| s.is_some_and(|s| d.is_accepting(s));
    let mut symbols: Vec<Token> = a.alphabet().iter().chain(b.alphabet()).copied().collect();
    symbols.sort_unstable();
    symbols.dedup();

    let start = (Some(0), Some(0));
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some((p, q)) = queue.pop_front() {
        if accepts(a, p) != accepts(b, q) {
            return false;
        }
        for &x in &symbols {
            let next = (p.and_then(|s| a.step(s, x)), q.and_then(|s| b.step(s, x)));
            if next != (None, None) && seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    true
}
