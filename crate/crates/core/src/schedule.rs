//! Non-adaptive relaxation schedules and the families that generate them.
//!
//! A schedule is a fixed list of edge indices. It depends only on the graph
//! structure, never on weights or on intermediate distances.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{seeded_rng, Digraph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelaxationSchedule {
    graph_fingerprint: String,
    steps: Vec<usize>,
}

impl RelaxationSchedule {
    pub fn new(digraph: &Digraph, steps: Vec<usize>) -> Result<Self> {
        let m = digraph.edge_count();
        if let Some(&bad) = steps.iter().find(|&&e| e >= m) {
            return Err(Error::EdgeOutOfRange {
                edge: bad,
                edge_count: m,
            });
        }
        Ok(RelaxationSchedule {
            graph_fingerprint: digraph.fingerprint().to_owned(),
            steps,
        })
    }

    pub fn empty(digraph: &Digraph) -> Self {
        RelaxationSchedule {
            graph_fingerprint: digraph.fingerprint().to_owned(),
            steps: Vec::new(),
        }
    }

    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn graph_fingerprint(&self) -> &str {
        &self.graph_fingerprint
    }

    /// Fails unless this schedule was built for `digraph`.
    pub fn check_matches(&self, digraph: &Digraph) -> Result<()> {
        if self.graph_fingerprint != digraph.fingerprint() {
            return Err(Error::ScheduleMismatch {
                expected: digraph.fingerprint().to_owned(),
                found: self.graph_fingerprint.clone(),
            });
        }
        Ok(())
    }

    /// Re-validates step indices after deserialization.
    pub fn validate(&self, digraph: &Digraph) -> Result<()> {
        self.check_matches(digraph)?;
        let m = digraph.edge_count();
        match self.steps.iter().find(|&&e| e >= m) {
            Some(&bad) => Err(Error::EdgeOutOfRange {
                edge: bad,
                edge_count: m,
            }),
            None => Ok(()),
        }
    }

    pub fn prefix(&self, len: usize) -> Self {
        RelaxationSchedule {
            graph_fingerprint: self.graph_fingerprint.clone(),
            steps: self.steps[..len.min(self.steps.len())].to_vec(),
        }
    }
}

fn check_permutation(values: &[usize], size: usize, what: &str) -> Result<()> {
    if values.len() != size {
        return Err(Error::InvalidPermutation(format!(
            "{what} has {} entries, expected {size}",
            values.len()
        )));
    }
    let mut seen = vec![false; size];
    for &v in values {
        if v >= size || std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidPermutation(format!(
                "{what} repeats or exceeds entry {v}"
            )));
        }
    }
    Ok(())
}

/// `rounds` repetitions of one pass over every edge, in `order` or index order.
pub fn round_robin_schedule(
    digraph: &Digraph,
    rounds: usize,
    order: Option<&[usize]>,
) -> Result<RelaxationSchedule> {
    let m = digraph.edge_count();
    let pass: Vec<usize> = match order {
        Some(order) => {
            check_permutation(order, m, "edge order")?;
            order.to_vec()
        }
        None => (0..m).collect(),
    };
    let steps = pass
        .iter()
        .copied()
        .cycle()
        .take(pass.len() * rounds)
        .collect();
    Ok(RelaxationSchedule {
        graph_fingerprint: digraph.fingerprint().to_owned(),
        steps,
    })
}

/// Position of each vertex in `vertex_order` (which lists vertices first to last).
pub fn positions(vertex_order: &[usize]) -> Vec<usize> {
    let mut pos = vec![0; vertex_order.len()];
    for (i, &v) in vertex_order.iter().enumerate() {
        pos[v] = i;
    }
    pos
}

/// One round of Yen's two-DAG order: forward edges by ascending
/// `(pos(tail), pos(head))`, then backward edges by descending `(pos(tail), pos(head))`.
pub fn yen_round(digraph: &Digraph, vertex_order: &[usize]) -> Result<Vec<usize>> {
    check_permutation(vertex_order, digraph.vertex_count(), "vertex order")?;
    let pos = positions(vertex_order);
    let key = |e: usize| {
        let (t, h) = digraph.edges()[e];
        (pos[t], pos[h])
    };
    let (mut forward, mut backward): (Vec<usize>, Vec<usize>) = (0..digraph.edge_count())
        .partition(|&e| {
            let (t, h) = key(e);
            t < h
        });
    forward.sort_by_key(|&e| key(e));
    backward.sort_by_key(|&e| std::cmp::Reverse(key(e)));
    forward.extend(backward);
    Ok(forward)
}

pub fn yen_schedule(
    digraph: &Digraph,
    vertex_order: &[usize],
    rounds: usize,
) -> Result<RelaxationSchedule> {
    let round = yen_round(digraph, vertex_order)?;
    round_robin_schedule(digraph, rounds, Some(&round))
}

/// Uniform permutation of `0..n` (Fisher-Yates over the seeded generator).
pub fn random_permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut seeded_rng(seed));
    perm
}

/// Yen's schedule over a uniformly random vertex order; returns the order too.
pub fn randomized_yen_schedule(
    digraph: &Digraph,
    rounds: usize,
    seed: u64,
) -> Result<(RelaxationSchedule, Vec<usize>)> {
    let perm = random_permutation(digraph.vertex_count(), seed);
    let schedule = yen_schedule(digraph, &perm, rounds)?;
    Ok((schedule, perm))
}

/// `schedule` followed by `n-1` index-order rounds, which makes it correct
/// for every negative-cycle-free weighting.
pub fn append_fallback(
    schedule: &RelaxationSchedule,
    digraph: &Digraph,
) -> Result<RelaxationSchedule> {
    schedule.check_matches(digraph)?;
    let rounds = digraph.vertex_count().saturating_sub(1);
    let tail = round_robin_schedule(digraph, rounds, None)?;
    let mut steps = schedule.steps.clone();
    steps.extend_from_slice(tail.steps());
    Ok(RelaxationSchedule {
        graph_fingerprint: schedule.graph_fingerprint.clone(),
        steps,
    })
}

/// Number of maximal same-direction runs along `path`, where an edge is
/// forward when it goes from an earlier to a later vertex of `vertex_order`.
pub fn alternation_count(path: &[usize], vertex_order: &[usize]) -> Result<usize> {
    if path.len() < 2 {
        return Ok(0);
    }
    let pos = positions(vertex_order);
    let mut blocks = 0;
    let mut previous = None;
    for pair in path.windows(2) {
        let (u, v) = (pair[0], pair[1]);
        if u == v {
            return Err(Error::InvalidParameter(format!(
                "path repeats vertex {u} consecutively"
            )));
        }
        let (&pu, &pv) = match (pos.get(u), pos.get(v)) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::InvalidParameter(
                    "path vertex outside ordering".into(),
                ))
            }
        };
        let forward = pu < pv;
        if previous != Some(forward) {
            blocks += 1;
            previous = Some(forward);
        }
    }
    Ok(blocks)
}
