//! Hopcroft partition refinement.

use std::collections::VecDeque;

use super::dfa::{Dfa, StateId};

/// Returns the minimal automaton for the language of `dfa`.
///
/// Unreachable states are dropped, states with an empty residual language are
/// folded into the dead state, and the survivors are renumbered in
/// breadth-first order from the start state (symbols visited in increasing
/// order). Two automata over the same alphabet accept the same language iff
/// their minimized forms are equal, so the result doubles as a canonical form.
pub fn minimize_dfa(dfa: &Dfa) -> Dfa {
    let width = dfa.alphabet().len();

    // Compact the reachable part and complete it with an explicit sink.
    let reachable = dfa.reachable();
    let mut index = vec![usize::MAX; dfa.num_states()];
    let mut order = Vec::new();
    for (s, &r) in reachable.iter().enumerate() {
        if r {
            index[s] = order.len();
            order.push(s as StateId);
        }
    }
    let n = order.len() + 1;
    let sink = n - 1;
    let mut delta = vec![sink; n * width];
    let mut accepting = vec![false; n];
    for (i, &s) in order.iter().enumerate() {
        accepting[i] = dfa.is_accepting(s);
        for (c, dst) in dfa.row(s).iter().enumerate() {
            if let Some(d) = dst {
                delta[i * width + c] = index[*d as usize];
            }
        }
    }

    // inverse[c][q] = states p with delta(p, c) = q
    let mut inverse = vec![vec![Vec::new(); n]; width];
    for p in 0..n {
        for c in 0..width {
            inverse[c][delta[p * width + c]].push(p);
        }
    }

    let (acc, rej): (Vec<usize>, Vec<usize>) = (0..n).partition(|&q| accepting[q]);
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut block_of = vec![0usize; n];
    for part in [acc, rej] {
        if !part.is_empty() {
            for &q in &part {
                block_of[q] = blocks.len();
            }
            blocks.push(part);
        }
    }

    let mut queued: Vec<Vec<bool>> = vec![vec![false; width]; blocks.len()];
    let mut work = VecDeque::new();
    if blocks.len() == 2 {
        let smaller = if blocks[0].len() <= blocks[1].len() { 0 } else { 1 };
        for c in 0..width {
            queued[smaller][c] = true;
            work.push_back((smaller, c));
        }
    }

    let mut marked = vec![false; n];
    let mut touched: Vec<usize> = Vec::new();
    while let Some((splitter, c)) = work.pop_front() {
        queued[splitter][c] = false;
        // Predecessors of the splitter under symbol c.
        let mut preds = Vec::new();
        for &q in &blocks[splitter] {
            for &p in &inverse[c][q] {
                if !marked[p] {
                    marked[p] = true;
                    preds.push(p);
                    let b = block_of[p];
                    if !touched.contains(&b) {
                        touched.push(b);
                    }
                }
            }
        }
        for b in touched.drain(..) {
            let (inside, outside): (Vec<usize>, Vec<usize>) =
                blocks[b].iter().partition(|&&q| marked[q]);
            if outside.is_empty() {
                continue;
            }
            let new_id = blocks.len();
            // Keep the larger half under the old id.
            let (keep, moved) = if inside.len() >= outside.len() {
                (inside, outside)
            } else {
                (outside, inside)
            };
            for &q in &moved {
                block_of[q] = new_id;
            }
            blocks[b] = keep;
            blocks.push(moved);
            queued.push(vec![false; width]);
            for d in 0..width {
                if queued[b][d] {
                    queued[new_id][d] = true;
                    work.push_back((new_id, d));
                } else {
                    let pick = if blocks[b].len() <= blocks[new_id].len() { b } else { new_id };
                    queued[pick][d] = true;
                    work.push_back((pick, d));
                }
            }
        }
        for p in preds {
            marked[p] = false;
        }
    }

    // Breadth-first renumbering of the quotient, skipping the sink's block.
    let dead = block_of[sink];
    let start = block_of[0];
    if start == dead {
        return Dfa::from_parts(dfa.alphabet().to_vec(), vec![None; width], vec![false]);
    }
    let mut new_id = vec![None; blocks.len()];
    new_id[start] = Some(0 as StateId);
    let mut queue = VecDeque::from([start]);
    let mut out_delta = Vec::new();
    let mut out_acc = Vec::new();
    let mut count = 1;
    while let Some(b) = queue.pop_front() {
        let rep = blocks[b][0];
        out_acc.push(accepting[rep]);
        for c in 0..width {
            let tb = block_of[delta[rep * width + c]];
            if tb == dead {
                out_delta.push(None);
                continue;
            }
            let id = *new_id[tb].get_or_insert_with(|| {
                queue.push_back(tb);
                count += 1;
                (count - 1) as StateId
            });
            out_delta.push(Some(id));
        }
    }
    Dfa::from_parts(dfa.alphabet().to_vec(), out_delta, out_acc)
}
