//! Exhaustive best response on three vertices.
//!
//! With source 0 the random-path distribution on `K_3` has two equally
//! likely weightings, the zero paths `0 -> 1 -> 2` and `0 -> 2 -> 1`. The
//! search finds the schedule correct on both with the least average reduced
//! cost.

use crate::adversary::zero_path_weights;
use crate::error::{Error, Result};
use crate::graph::{complete_digraph, Dist, Instance};
use crate::oracle::oracle_distances;
use crate::relax::{initial_distances, relax_step};

pub const MINIMAX_MAX_LEN: usize = 8;

struct Search {
    instances: Vec<Instance>,
    targets: Vec<Vec<Dist>>,
    edge_count: usize,
    max_len: usize,
    best: Option<(usize, Vec<usize>)>,
}

impl Search {
    /// `done[i]` is the step instance `i` became correct.
    fn go(
        &mut self,
        dists: &[Vec<Dist>],
        done: &[Option<usize>],
        steps: &mut Vec<usize>,
    ) -> Result<()> {
        if done.iter().all(Option::is_some) {
            let total: usize = done.iter().flatten().sum();
            if self.best.as_ref().is_none_or(|(b, _)| total < *b) {
                self.best = Some((total, steps.clone()));
            }
            return Ok(());
        }
        if steps.len() == self.max_len {
            return Ok(());
        }
        for e in 0..self.edge_count {
            steps.push(e);
            let mut next = dists.to_vec();
            let mut next_done = done.to_vec();
            for (i, d) in next.iter_mut().enumerate() {
                relax_step(d, e, &self.instances[i])?;
                if next_done[i].is_none() && *d == self.targets[i] {
                    next_done[i] = Some(steps.len());
                }
            }
            self.go(&next, &next_done, steps)?;
            steps.pop();
        }
        Ok(())
    }
}

/// Minimum over all edge sequences of length at most `max_len` that are
/// correct on both weightings of their average reduced cost, with the first
/// minimizing sequence in lexicographic order. `None` if no sequence that
/// short is correct.
pub fn bruteforce_min_expected_cost(n: usize, max_len: usize) -> Result<Option<(f64, Vec<usize>)>> {
    if n != 3 {
        return Err(Error::InvalidParameter(format!(
            "exhaustive search supports n = 3 only, got {n}"
        )));
    }
    if max_len > MINIMAX_MAX_LEN {
        return Err(Error::InvalidParameter(format!(
            "max_len {max_len} exceeds {MINIMAX_MAX_LEN}"
        )));
    }
    let digraph = complete_digraph(n)?;
    let instances = [[0, 1, 2], [0, 2, 1]]
        .iter()
        .map(|path| Instance::new(digraph.clone(), 0, zero_path_weights(n, path)))
        .collect::<Result<Vec<_>>>()?;
    let targets = instances
        .iter()
        .map(oracle_distances)
        .collect::<Result<Vec<_>>>()?;
    let dists: Vec<Vec<Dist>> = instances.iter().map(initial_distances).collect();
    let done: Vec<Option<usize>> = dists
        .iter()
        .zip(&targets)
        .map(|(d, t)| (d == t).then_some(0))
        .collect();
    let mut search = Search {
        edge_count: digraph.edge_count(),
        instances,
        targets,
        max_len,
        best: None,
    };
    search.go(&dists, &done, &mut Vec::new())?;
    let count = search.instances.len() as f64;
    Ok(search
        .best
        .map(|(total, steps)| (total as f64 / count, steps)))
}
