//! Hard weightings of the complete digraph.
//!
//! Both generators hide a single zero-weight Hamiltonian path from the source
//! among weight-one edges. Under such a weighting vertex `v_k` of the path
//! becomes correct exactly at the first relaxation of `(v_{k-1}, v_k)` after
//! `v_{k-1}` became correct, so completion times can be read off the schedule
//! without simulating it.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    complete_digraph, complete_edge_index, seeded_rng, GraphJson, Instance, WeightAssignment,
};
use crate::schedule::RelaxationSchedule;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversaryResult {
    /// Hamiltonian path starting at the source.
    pub path: Vec<usize>,
    /// 0 on path edges, 1 elsewhere.
    pub weights: WeightAssignment,
    /// Completion steps `s_2, s_4, ...` of the even-position path edges. For
    /// even `n` the last entry is the completion step of the final (odd) edge.
    pub milestones: Vec<usize>,
    pub instance: Instance,
}

/// Wire form: graph JSON plus `path` and `milestones`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdversaryJson {
    #[serde(flatten)]
    pub graph: GraphJson,
    pub path: Vec<usize>,
    pub milestones: Vec<usize>,
}

impl AdversaryResult {
    pub fn to_json(&self) -> AdversaryJson {
        AdversaryJson {
            graph: self.instance.to_json(),
            path: self.path.clone(),
            milestones: self.milestones.clone(),
        }
    }
}

/// Sorted 1-based positions of each edge in a schedule.
struct Occurrences {
    by_edge: Vec<Vec<usize>>,
}

impl Occurrences {
    fn new(schedule: &RelaxationSchedule, edge_count: usize) -> Self {
        let mut by_edge = vec![Vec::new(); edge_count];
        for (k, &e) in schedule.steps().iter().enumerate() {
            by_edge[e].push(k + 1);
        }
        Occurrences { by_edge }
    }

    /// First position of `edge` strictly after `after`.
    fn next_after(&self, edge: usize, after: usize) -> Option<usize> {
        let positions = &self.by_edge[edge];
        let i = positions.partition_point(|&p| p <= after);
        positions.get(i).copied()
    }
}

/// Builds a 0/1 weighting of the complete digraph on which `schedule` is slow.
///
/// The path is fixed two edges at a time. With the path so far ending at
/// `last` (correct at step `s`), every ordered pair `(a, b)` of unused
/// vertices is scored by when `b` would become correct if the path continued
/// `last -> a -> b`; the latest pair wins, ties going to the smallest `(a, b)`.
/// The winning score is the next milestone. If some pair would never be
/// completed, the schedule fails on that weighting and the path is returned as
/// a witness instead.
pub fn greedy_adversary_complete(
    n: usize,
    source: usize,
    schedule: &RelaxationSchedule,
) -> Result<AdversaryResult> {
    let digraph = complete_digraph(n)?;
    if source >= n {
        return Err(Error::InvalidParameter(format!(
            "source {source} outside 0..{n}"
        )));
    }
    schedule.check_matches(&digraph)?;
    let occ = Occurrences::new(schedule, digraph.edge_count());
    let edge = |a: usize, b: usize| complete_edge_index(n, a, b);

    let mut used = vec![false; n];
    used[source] = true;
    let mut path = vec![source];
    let mut remaining: Vec<usize> = (0..n).filter(|&v| v != source).collect();
    let mut milestones = Vec::new();
    let mut last = source;
    let mut s = 0usize;

    let witness = |path: &[usize], extra: &[usize], used: &[bool]| {
        let mut w: Vec<usize> = path.to_vec();
        w.extend_from_slice(extra);
        w.extend((0..n).filter(|v| !used[*v] && !extra.contains(v)));
        Error::NotGuaranteedCorrect { witness_path: w }
    };

    while remaining.len() >= 2 {
        let mut best: Option<(usize, usize, usize)> = None;
        for &a in &remaining {
            let Some(first) = occ.next_after(edge(last, a), s) else {
                let b = *remaining.iter().find(|&&b| b != a).expect("two remain");
                return Err(witness(&path, &[a, b], &used));
            };
            for &b in &remaining {
                if b == a {
                    continue;
                }
                let Some(t) = occ.next_after(edge(a, b), first) else {
                    return Err(witness(&path, &[a, b], &used));
                };
                // `remaining` is ascending, so strict > keeps the smallest (a, b) on ties.
                if best.is_none_or(|(bt, _, _)| t > bt) {
                    best = Some((t, a, b));
                }
            }
        }
        let (t, a, b) = best.expect("at least one pair");
        path.extend([a, b]);
        used[a] = true;
        used[b] = true;
        remaining.retain(|&v| v != a && v != b);
        milestones.push(t);
        last = b;
        s = t;
    }
    if let Some(&z) = remaining.first() {
        let Some(t) = occ.next_after(edge(last, z), s) else {
            return Err(witness(&path, &[z], &used));
        };
        path.push(z);
        milestones.push(t);
    }

    let weights = zero_path_weights(n, &path);
    let instance = Instance::new(digraph, source, weights.clone())?;
    Ok(AdversaryResult {
        path,
        weights,
        milestones,
        instance,
    })
}

/// Weights on the complete digraph: 0 along `path`, 1 on every other edge.
pub fn zero_path_weights(n: usize, path: &[usize]) -> WeightAssignment {
    let mut w = vec![1; n * n.saturating_sub(1)];
    for p in path.windows(2) {
        w[complete_edge_index(n, p[0], p[1])] = 0;
    }
    WeightAssignment(w)
}

/// `(n^3 - n) / 6`, the sum of `(n - i + 1)^2` over even `i >= 2`.
pub fn deterministic_floor(n: u64) -> u64 {
    (n * n * n - n) / 6
}

/// `binomial(n - i - 1, 2)`, zero when `n - i - 1 < 2`.
pub fn increment_floor(n: u64, i: u64) -> u64 {
    match n.checked_sub(i + 1) {
        Some(k) if k >= 2 => k * (k - 1) / 2,
        _ => 0,
    }
}

/// Draws a uniformly random Hamiltonian path from `source` and weights it
/// zero, with every other edge weight one.
pub fn sample_random_path_instance(
    n: usize,
    source: usize,
    seed: u64,
) -> Result<(Instance, Vec<usize>)> {
    let digraph = complete_digraph(n)?;
    if source >= n {
        return Err(Error::InvalidParameter(format!(
            "source {source} outside 0..{n}"
        )));
    }
    let mut rest: Vec<usize> = (0..n).filter(|&v| v != source).collect();
    rest.shuffle(&mut seeded_rng(seed));
    let mut path = Vec::with_capacity(n);
    path.push(source);
    path.extend(rest);
    let weights = zero_path_weights(n, &path);
    Ok((Instance::new(digraph, source, weights)?, path))
}
