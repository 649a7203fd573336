use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use relaxlab::adversary::{greedy_adversary_complete, sample_random_path_instance};
use relaxlab::graph::{complete_digraph, potential_weights, GraphJson, Instance, WeightAssignment};
use relaxlab::harness::{estimate_mean_reduced_cost, ExperimentConfig, Summary};
use relaxlab::network::{
    complete_bipartite_network, route_pairs, sparse_nonblocking, verify_rearrangeable_bruteforce,
    NetworkJson, NonBlockingNetwork,
};
use relaxlab::schedule::{
    append_fallback, randomized_yen_schedule, round_robin_schedule, yen_schedule,
};
use relaxlab::sparse::{
    assemble_hard_graph, assemble_with_core, sample_hard_instance, Regime, SparseHardGraph,
    SparseHardGraphJson,
};
use relaxlab::{execute_schedule, RelaxationSchedule};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "relaxlab",
    version,
    about = "Relaxation schedules, hard instances and experiments"
)]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a graph JSON.
    GenGraph {
        #[command(subcommand)]
        kind: GraphKind,
    },
    /// Write a schedule JSON for a graph.
    GenSchedule {
        kind: ScheduleKind,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        rounds: Option<usize>,
        /// Seed for the random vertex order.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated vertex order for yen; identity by default.
        #[arg(long)]
        order: Option<String>,
        /// Schedule to extend with fallback rounds; empty by default.
        #[arg(long)]
        base: Option<PathBuf>,
    },
    /// Execute a schedule on a weighted graph.
    Run {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
    },
    /// Build the greedy hard weighting of the complete digraph for a schedule.
    Adversary {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        source: usize,
        #[arg(long)]
        schedule: PathBuf,
    },
    /// Draw an instance from a hard distribution.
    Sample {
        #[command(subcommand)]
        kind: SampleKind,
    },
    /// Build, route through, or exhaustively check a non-blocking network.
    Network {
        #[command(subcommand)]
        action: NetworkAction,
    },
    /// Run a seeded experiment described by a config JSON.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Override the trial count.
        #[arg(long)]
        trials: Option<usize>,
        /// Override the base seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Record wall time per trial.
        #[arg(long)]
        timing: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum GraphKind {
    /// Complete digraph, unit weights unless --seed asks for potential weights.
    Complete {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        source: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 10)]
        slack_max: i64,
        #[arg(long, default_value_t = 50)]
        potential_max: i64,
    },
    /// Sparse hard graph with exactly n vertices and m edges.
    SparseHard {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = RegimeKind::CompleteBipartite)]
        regime: RegimeKind,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long, requires = "degree")]
        capacity: Option<usize>,
        #[arg(long, requires = "capacity")]
        degree: Option<usize>,
    },
    /// Validate a graph JSON (rejecting negative cycles) and write it back.
    FromFile { path: PathBuf },
}

#[derive(Subcommand)]
enum SampleKind {
    /// Complete digraph with a random zero-weight Hamiltonian path.
    RandomPath {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        source: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Weighting of a sparse hard graph written by `gen-graph sparse-hard`.
    SparseHard {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum NetworkAction {
    Build {
        #[arg(long)]
        capacity: usize,
        #[arg(long, value_enum, default_value_t = RegimeKind::DenseClos)]
        kind: RegimeKind,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
    },
    /// Route a request such as `0:3,2:1` (input:output pairs).
    Route {
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        request: String,
    },
    /// Route every partial injection (capacity at most 5).
    Verify {
        #[arg(long)]
        network: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ScheduleKind {
    RoundRobin,
    Yen,
    RandomizedYen,
    Fallback,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeKind {
    CompleteBipartite,
    DenseClos,
}

impl RegimeKind {
    fn regime(self, eps: f64) -> Regime {
        match self {
            RegimeKind::CompleteBipartite => Regime::CompleteBipartite,
            RegimeKind::DenseClos => Regime::DenseClos { eps },
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Serialize)]
struct PathSampleJson {
    #[serde(flatten)]
    graph: GraphJson,
    path: Vec<usize>,
}

#[derive(Serialize)]
struct CsvRow {
    trial_seed: u64,
    n: usize,
    m: usize,
    schedule_len: usize,
    reduced_cost: Option<usize>,
    never_flag: bool,
    millis: u64,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_instance(path: &Path) -> Result<Instance> {
    Ok(Instance::from_json(&read_json::<GraphJson>(path)?)?)
}

fn read_schedule(path: &Path, instance: &Instance) -> Result<RelaxationSchedule> {
    let schedule: RelaxationSchedule = read_json(path)?;
    schedule.validate(instance.digraph())?;
    Ok(schedule)
}

fn parse_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .with_context(|| format!("bad vertex {s:?}"))
        })
        .collect()
}

fn parse_request(text: &str) -> Result<Vec<(usize, usize)>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let (i, o) = pair
                .split_once(':')
                .with_context(|| format!("expected input:output, got {pair:?}"))?;
            Ok((i.trim().parse()?, o.trim().parse()?))
        })
        .collect()
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

fn summary_csv(summary: &Summary) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for r in &summary.records {
        writer.serialize(CsvRow {
            trial_seed: r.trial_seed,
            n: r.n,
            m: r.m,
            schedule_len: r.schedule_len,
            reduced_cost: r.reduced_cost.steps(),
            never_flag: r.reduced_cost.is_never(),
            millis: r.millis,
        })?;
    }
    Ok(String::from_utf8(writer.into_inner()?)?)
}

fn gen_graph(kind: GraphKind) -> Result<String> {
    match kind {
        GraphKind::Complete {
            n,
            source,
            seed,
            slack_max,
            potential_max,
        } => {
            let g = complete_digraph(n)?;
            let weights = match seed {
                Some(seed) => potential_weights(&g, seed, slack_max, potential_max),
                None => WeightAssignment::uniform(g.edge_count(), 1),
            };
            to_json(&Instance::new(g, source, weights)?.to_json())
        }
        GraphKind::SparseHard {
            n,
            m,
            regime,
            eps,
            capacity,
            degree,
        } => {
            let regime = regime.regime(eps);
            let graph = match (capacity, degree) {
                (Some(c), Some(d)) => assemble_with_core(n, m, regime, c, d)?,
                _ => assemble_hard_graph(n, m, regime)?,
            };
            to_json(&graph.to_json())
        }
        GraphKind::FromFile { path } => {
            let instance = read_instance(&path)?;
            let checked = Instance::checked(
                instance.digraph().clone(),
                instance.source(),
                instance.weights().clone(),
            )?;
            to_json(&checked.to_json())
        }
    }
}

fn gen_schedule(
    kind: ScheduleKind,
    graph: &Path,
    rounds: Option<usize>,
    seed: u64,
    order: Option<&str>,
    base: Option<&Path>,
) -> Result<String> {
    let instance = read_instance(graph)?;
    let g = instance.digraph();
    let n = g.vertex_count();
    let schedule = match kind {
        ScheduleKind::RoundRobin => round_robin_schedule(g, rounds.unwrap_or(n - 1), None)?,
        ScheduleKind::Yen => {
            let order = match order {
                Some(text) => parse_list(text)?,
                None => (0..n).collect(),
            };
            yen_schedule(g, &order, rounds.unwrap_or(n.div_ceil(2)))?
        }
        ScheduleKind::RandomizedYen => {
            randomized_yen_schedule(g, rounds.unwrap_or(n.div_ceil(2)), seed)?.0
        }
        ScheduleKind::Fallback => {
            let start = match base {
                Some(path) => read_schedule(path, &instance)?,
                None => RelaxationSchedule::empty(g),
            };
            append_fallback(&start, g)?
        }
    };
    to_json(&schedule)
}

fn sample(kind: SampleKind) -> Result<String> {
    match kind {
        SampleKind::RandomPath { n, source, seed } => {
            let (instance, path) = sample_random_path_instance(n, source, seed)?;
            to_json(&PathSampleJson {
                graph: instance.to_json(),
                path,
            })
        }
        SampleKind::SparseHard { graph, seed } => {
            let graph = SparseHardGraph::from_json(&read_json::<SparseHardGraphJson>(&graph)?)?;
            to_json(&sample_hard_instance(&graph, seed).to_json())
        }
    }
}

fn network(action: NetworkAction) -> Result<String> {
    let load = |path: &Path| -> Result<NonBlockingNetwork> {
        Ok(NonBlockingNetwork::from_json(&read_json::<NetworkJson>(
            path,
        )?)?)
    };
    match action {
        NetworkAction::Build {
            capacity,
            kind,
            eps,
        } => {
            let net = match kind {
                RegimeKind::CompleteBipartite => complete_bipartite_network(capacity)?,
                RegimeKind::DenseClos => sparse_nonblocking(capacity, eps)?,
            };
            to_json(&net.to_json())
        }
        NetworkAction::Route { network, request } => {
            let net = load(&network)?;
            let request = parse_request(&request)?;
            to_json(&serde_json::json!({ "paths": route_pairs(&net, &request)? }))
        }
        NetworkAction::Verify { network } => {
            let report = verify_rearrangeable_bruteforce(&load(&network)?)?;
            to_json(&serde_json::json!({
                "rearrangeable": report.rearrangeable,
                "checked": report.checked,
                "counterexample": report.counterexample,
            }))
        }
    }
}

fn experiment(
    config: &Path,
    trials: Option<usize>,
    seed: Option<u64>,
    timing: bool,
    format: Format,
) -> Result<(String, Option<PathBuf>)> {
    let mut config: ExperimentConfig = read_json(config)?;
    if let Some(t) = trials {
        config.trials = t;
    }
    if let Some(s) = seed {
        config.base_seed = s;
    }
    config.timing |= timing;
    let summary = estimate_mean_reduced_cost(&config)?;
    if summary.never_count > 0 {
        eprintln!(
            "warning: {} of {} trials never finished",
            summary.never_count,
            summary.records.len()
        );
    }
    let text = match format {
        Format::Json => to_json(&summary)?,
        Format::Csv => summary_csv(&summary)?,
    };
    Ok((text, config.out.map(PathBuf::from)))
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let mut out = cli.out;
    let text = match cli.command {
        Command::GenGraph { kind } => gen_graph(kind)?,
        Command::GenSchedule {
            kind,
            graph,
            rounds,
            seed,
            order,
            base,
        } => gen_schedule(
            kind,
            &graph,
            rounds,
            seed,
            order.as_deref(),
            base.as_deref(),
        )?,
        Command::Run { graph, schedule } => {
            let instance = read_instance(&graph)?;
            let schedule = read_schedule(&schedule, &instance)?;
            to_json(&execute_schedule(&instance, &schedule)?)?
        }
        Command::Adversary {
            n,
            source,
            schedule,
        } => {
            let schedule: RelaxationSchedule = read_json(&schedule)?;
            schedule.validate(&complete_digraph(n)?)?;
            to_json(&greedy_adversary_complete(n, source, &schedule)?.to_json())?
        }
        Command::Sample { kind } => sample(kind)?,
        Command::Network { action } => network(action)?,
        Command::Experiment {
            config,
            trials,
            seed,
            timing,
            format,
        } => {
            let (text, config_out) = experiment(&config, trials, seed, timing, format)?;
            out = out.or(config_out);
            text
        }
    };
    emit(out.as_deref(), &text)
}
