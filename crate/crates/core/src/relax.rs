//! Executing a schedule and measuring its reduced cost.
//!
//! Steps are numbered from 1. Step 0 stands for "before any relaxation", which
//! is when the source (and every unreachable vertex) is already correct.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Result;
use crate::graph::{Dist, Instance};
use crate::oracle::oracle_distances;
use crate::schedule::RelaxationSchedule;

/// Number of steps until every distance is final, or `Never` when the
/// schedule ends first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ReducedCost {
    Steps(usize),
    Never,
}

impl ReducedCost {
    pub fn steps(self) -> Option<usize> {
        match self {
            ReducedCost::Steps(s) => Some(s),
            ReducedCost::Never => None,
        }
    }

    pub fn is_never(self) -> bool {
        self == ReducedCost::Never
    }
}

impl fmt::Display for ReducedCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReducedCost::Steps(s) => write!(f, "{s}"),
            ReducedCost::Never => f.write_str("NEVER"),
        }
    }
}

impl Serialize for ReducedCost {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.steps().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ReducedCost {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(Option::<usize>::deserialize(deserializer)?
            .map_or(ReducedCost::Never, ReducedCost::Steps))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecutionResult {
    pub final_distances: Vec<Dist>,
    pub reduced_cost: ReducedCost,
    /// First step after which each vertex holds its exact distance; `None` if never.
    pub correct_at_step: Vec<Option<usize>>,
}

/// The initial tentative distances: 0 at the source, unreachable elsewhere.
pub fn initial_distances(instance: &Instance) -> Vec<Dist> {
    let mut d = vec![Dist::Unreachable; instance.digraph().vertex_count()];
    d[instance.source()] = Dist::Finite(0);
    d
}

/// `D[head] = min(D[head], D[tail] + w(edge))`. Returns whether `D[head]` dropped.
pub fn relax_step(distances: &mut [Dist], edge: usize, instance: &Instance) -> Result<bool> {
    let (tail, head) = instance.digraph().edge(edge)?;
    let candidate = distances[tail].checked_add(instance.weight(edge))?;
    if candidate < distances[head] {
        distances[head] = candidate;
        Ok(true)
    } else {
        Ok(false)
    }
}

/// Runs `schedule` from the initial distances and records when each vertex
/// becomes correct.
///
/// Tentative distances never drop below the true ones, so a vertex that
/// reaches its true distance keeps it. Once every vertex is correct no later
/// step can change anything, and the run stops early.
pub fn execute_schedule(
    instance: &Instance,
    schedule: &RelaxationSchedule,
) -> Result<ExecutionResult> {
    schedule.check_matches(instance.digraph())?;
    let target = oracle_distances(instance)?;
    let mut dist = initial_distances(instance);
    let mut correct_at_step = vec![None; dist.len()];
    let mut pending = 0usize;
    for (v, slot) in correct_at_step.iter_mut().enumerate() {
        if dist[v] == target[v] {
            *slot = Some(0);
        } else {
            pending += 1;
        }
    }
    let mut finished_at = 0;
    if pending > 0 {
        for (k, &edge) in schedule.steps().iter().enumerate() {
            if relax_step(&mut dist, edge, instance)? {
                let head = instance.digraph().edges()[edge].1;
                if dist[head] == target[head] {
                    correct_at_step[head] = Some(k + 1);
                    pending -= 1;
                    if pending == 0 {
                        finished_at = k + 1;
                        break;
                    }
                }
            }
        }
    }
    let reduced_cost = if pending == 0 {
        ReducedCost::Steps(finished_at)
    } else {
        ReducedCost::Never
    };
    Ok(ExecutionResult {
        final_distances: dist,
        reduced_cost,
        correct_at_step,
    })
}
