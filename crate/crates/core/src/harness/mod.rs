//! Seeded Monte-Carlo estimates of reduced cost.
//!
//! Trial `k` uses seed `base_seed + k` for its instance, so any single trial
//! can be replayed on its own. Trials run in parallel and are collected in
//! trial order.

mod minimax;

pub use minimax::{bruteforce_min_expected_cost, MINIMAX_MAX_LEN};

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adversary::sample_random_path_instance;
use crate::error::{Error, Result};
use crate::graph::{complete_digraph, potential_weights, Digraph, Instance};
use crate::relax::{execute_schedule, ReducedCost};
use crate::schedule::{
    append_fallback, randomized_yen_schedule, round_robin_schedule, yen_schedule,
    RelaxationSchedule,
};
use crate::sparse::{
    assemble_hard_graph, assemble_with_core, sample_hard_instance, Regime, SparseHardGraph,
};

/// Mixed into trial seeds for schedule randomness, so the schedule and the
/// instance do not share a random stream.
const SCHEDULE_SEED_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    /// Complete digraph with a uniformly random zero-weight Hamiltonian path
    /// from vertex 0.
    RandomPath { n: usize },
    /// Complete digraph with random potential-reweighted weights, source 0.
    Potential {
        n: usize,
        slack_max: i64,
        potential_max: i64,
    },
    /// Sample from a sparse hard graph; capacity and degree are chosen
    /// automatically unless both are given.
    SparseHard {
        n: usize,
        m: usize,
        regime: Regime,
        #[serde(default)]
        capacity: Option<usize>,
        #[serde(default)]
        degree: Option<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScheduleSpec {
    /// Index-order rounds; `n - 1` by default.
    RoundRobin {
        #[serde(default)]
        rounds: Option<usize>,
    },
    /// Yen rounds over the identity order; `ceil(n/2)` by default.
    Yen {
        #[serde(default)]
        rounds: Option<usize>,
    },
    /// Yen rounds over a random order; `ceil(n/2)` by default. Without a
    /// fixed seed every trial draws its own order.
    RandomizedYen {
        #[serde(default)]
        rounds: Option<usize>,
        #[serde(default)]
        seed: Option<u64>,
    },
    /// The empty schedule with the `n - 1` round fallback appended.
    Fallback,
}

impl ScheduleSpec {
    /// Builds the schedule for `digraph`; `trial_seed` feeds randomized
    /// orders without a fixed seed.
    pub fn build(&self, digraph: &Digraph, trial_seed: u64) -> Result<RelaxationSchedule> {
        let n = digraph.vertex_count();
        match *self {
            ScheduleSpec::RoundRobin { rounds } => {
                round_robin_schedule(digraph, rounds.unwrap_or(n - 1), None)
            }
            ScheduleSpec::Yen { rounds } => {
                let identity: Vec<usize> = (0..n).collect();
                yen_schedule(digraph, &identity, rounds.unwrap_or(n.div_ceil(2)))
            }
            ScheduleSpec::RandomizedYen { rounds, seed } => {
                let seed = seed.unwrap_or(trial_seed ^ SCHEDULE_SEED_SALT);
                Ok(randomized_yen_schedule(digraph, rounds.unwrap_or(n.div_ceil(2)), seed)?.0)
            }
            ScheduleSpec::Fallback => append_fallback(&RelaxationSchedule::empty(digraph), digraph),
        }
    }

    fn varies_per_trial(&self) -> bool {
        matches!(self, ScheduleSpec::RandomizedYen { seed: None, .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub generator: GeneratorSpec,
    pub schedule: ScheduleSpec,
    pub trials: usize,
    pub base_seed: u64,
    /// Record wall time per trial. Off keeps records a pure function of the
    /// config.
    #[serde(default)]
    pub timing: bool,
    #[serde(default)]
    pub out: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_seed: u64,
    pub n: usize,
    pub m: usize,
    pub schedule_len: usize,
    pub reduced_cost: ReducedCost,
    /// Path milestones where the generator has them; empty otherwise.
    pub milestones: Vec<usize>,
    pub millis: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    /// Mean over trials that finished; `None` when none did.
    pub mean: Option<f64>,
    /// Sample standard deviation over the same trials.
    pub stddev: Option<f64>,
    pub never_count: usize,
    pub records: Vec<TrialRecord>,
}

impl Summary {
    fn from_records(records: Vec<TrialRecord>) -> Self {
        let costs: Vec<f64> = records
            .iter()
            .filter_map(|r| r.reduced_cost.steps())
            .map(|s| s as f64)
            .collect();
        let never_count = records.len() - costs.len();
        let mean = (!costs.is_empty()).then(|| costs.iter().sum::<f64>() / costs.len() as f64);
        let stddev = mean.filter(|_| costs.len() >= 2).map(|mu| {
            let ss: f64 = costs.iter().map(|c| (c - mu).powi(2)).sum();
            (ss / (costs.len() - 1) as f64).sqrt()
        });
        Summary {
            mean,
            stddev,
            never_count,
            records,
        }
    }
}

enum Prepared {
    Complete(Digraph),
    Sparse(Box<SparseHardGraph>),
}

impl Prepared {
    fn new(spec: &GeneratorSpec) -> Result<Self> {
        Ok(match *spec {
            GeneratorSpec::RandomPath { n } | GeneratorSpec::Potential { n, .. } => {
                Prepared::Complete(complete_digraph(n)?)
            }
            GeneratorSpec::SparseHard {
                n,
                m,
                regime,
                capacity,
                degree,
            } => Prepared::Sparse(Box::new(match (capacity, degree) {
                (Some(c), Some(d)) => assemble_with_core(n, m, regime, c, d)?,
                (None, None) => assemble_hard_graph(n, m, regime)?,
                _ => {
                    return Err(Error::InvalidParameter(
                        "give both capacity and degree, or neither".into(),
                    ))
                }
            })),
        })
    }

    fn digraph(&self) -> &Digraph {
        match self {
            Prepared::Complete(g) => g,
            Prepared::Sparse(g) => g.digraph(),
        }
    }

    fn instance(&self, spec: &GeneratorSpec, seed: u64) -> Result<(Instance, Vec<usize>)> {
        match (self, spec) {
            (Prepared::Complete(g), GeneratorSpec::RandomPath { n }) => {
                debug_assert_eq!(g.vertex_count(), *n);
                sample_random_path_instance(*n, 0, seed)
            }
            (
                Prepared::Complete(g),
                GeneratorSpec::Potential {
                    slack_max,
                    potential_max,
                    ..
                },
            ) => {
                let weights = potential_weights(g, seed, *slack_max, *potential_max);
                Ok((Instance::new(g.clone(), 0, weights)?, Vec::new()))
            }
            (Prepared::Sparse(g), _) => {
                let sample = sample_hard_instance(g, seed);
                Ok((sample.instance, sample.assembled_path))
            }
            _ => unreachable!("prepared from the same spec"),
        }
    }
}

/// Completion step of each path vertex after the first, read from the
/// per-vertex correctness steps.
fn path_milestones(path: &[usize], correct_at: &[Option<usize>]) -> Vec<usize> {
    path.iter().skip(1).filter_map(|&v| correct_at[v]).collect()
}

/// Runs `config.trials` seeded trials and summarizes their reduced costs.
/// Trials that never finish are counted, not averaged.
pub fn estimate_mean_reduced_cost(config: &ExperimentConfig) -> Result<Summary> {
    if config.trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let prepared = Prepared::new(&config.generator)?;
    let digraph = prepared.digraph();
    let shared = if config.schedule.varies_per_trial() {
        None
    } else {
        Some(config.schedule.build(digraph, config.base_seed)?)
    };

    let run_trial = |k: usize| -> Result<TrialRecord> {
        let trial_seed = config.base_seed.wrapping_add(k as u64);
        let start = Instant::now();
        let (instance, path) = prepared.instance(&config.generator, trial_seed)?;
        let owned;
        let schedule = match &shared {
            Some(s) => s,
            None => {
                owned = config.schedule.build(digraph, trial_seed)?;
                &owned
            }
        };
        let result = execute_schedule(&instance, schedule)?;
        let millis = if config.timing {
            start.elapsed().as_millis() as u64
        } else {
            0
        };
        Ok(TrialRecord {
            trial_seed,
            n: digraph.vertex_count(),
            m: digraph.edge_count(),
            schedule_len: schedule.len(),
            reduced_cost: result.reduced_cost,
            milestones: path_milestones(&path, &result.correct_at_step),
            millis,
        })
    };

    let records = (0..config.trials)
        .into_par_iter()
        .map(|k| {
            run_trial(k).map_err(|source| Error::Trial {
                seed: config.base_seed.wrapping_add(k as u64),
                source: Box::new(source),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Summary::from_records(records))
}
