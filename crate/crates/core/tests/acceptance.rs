//! End-to-end checks at full scale. Prints one PASS/FAIL line per check and
//! exits nonzero if any fails. Expected values are recomputed here without
//! going through the library's oracle or verifiers.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relaxlab::adversary::greedy_adversary_complete;
use relaxlab::graph::{complete_digraph, potential_weights, Digraph, Instance};
use relaxlab::harness::{
    bruteforce_min_expected_cost, estimate_mean_reduced_cost, ExperimentConfig, GeneratorSpec,
    ScheduleSpec,
};
use relaxlab::network::{
    clos_compose, complete_bipartite_network, konig_edge_coloring, route_pairs,
    BipartiteMultigraph, NonBlockingNetwork,
};
use relaxlab::schedule::{
    alternation_count, random_permutation, randomized_yen_schedule, round_robin_schedule,
    yen_schedule,
};
use relaxlab::sparse::Regime;
use relaxlab::{execute_schedule, Dist, Error, RelaxationSchedule};

/// Value found by the first exhaustive run; later runs must reproduce it.
const MINIMAX_VALUE_N3: f64 = 3.0;

const INF: i64 = i64::MAX;

/// Textbook Bellman-Ford: `n - 1` passes over all edges.
fn reference_distances(g: &Digraph, source: usize, w: &[i64]) -> Vec<i64> {
    let mut d = vec![INF; g.vertex_count()];
    d[source] = 0;
    for _ in 1..g.vertex_count() {
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if d[u] != INF && d[u] + w[e] < d[v] {
                d[v] = d[u] + w[e];
            }
        }
    }
    d
}

/// Step (1-based, 0 if already) at which each vertex reaches its target, and
/// the step all have, by replaying the schedule literally.
fn simulate(
    g: &Digraph,
    source: usize,
    w: &[i64],
    steps: &[usize],
    target: &[i64],
) -> (Vec<Option<usize>>, Option<usize>) {
    let mut d = vec![INF; g.vertex_count()];
    d[source] = 0;
    let mut at: Vec<Option<usize>> = d
        .iter()
        .zip(target)
        .map(|(a, b)| (a == b).then_some(0))
        .collect();
    for (k, &e) in steps.iter().enumerate() {
        let (u, v) = g.edges()[e];
        if d[u] != INF && d[u] + w[e] < d[v] {
            d[v] = d[u] + w[e];
            if d[v] == target[v] && at[v].is_none() {
                at[v] = Some(k + 1);
            }
        }
    }
    let all = at
        .iter()
        .copied()
        .collect::<Option<Vec<_>>>()
        .map(|v| v.into_iter().max().unwrap_or(0));
    (at, all)
}

fn to_i64(d: &[Dist]) -> Vec<i64> {
    d.iter().map(|x| x.finite().unwrap_or(INF)).collect()
}

fn deterministic_schedules(g: &Digraph, n: usize) -> Vec<(String, RelaxationSchedule)> {
    let identity: Vec<usize> = (0..n).collect();
    let mut out = vec![
        (
            "round-robin".to_string(),
            round_robin_schedule(g, n - 1, None).unwrap(),
        ),
        (
            "yen".to_string(),
            yen_schedule(g, &identity, n.div_ceil(2)).unwrap(),
        ),
    ];
    for seed in 0..5 {
        out.push((
            format!("randomized-yen/{seed}"),
            randomized_yen_schedule(g, n, seed).unwrap().0,
        ));
    }
    out
}

fn adversary_floor() -> Result<String, String> {
    let mut checked = 0;
    for n in 3..=10usize {
        let g = complete_digraph(n).unwrap();
        let floor = (n * n * n - n) / 6;
        for (name, sched) in deterministic_schedules(&g, n) {
            let adv = greedy_adversary_complete(n, 0, &sched)
                .map_err(|e| format!("n={n} {name}: {e}"))?;
            let w = adv.weights.as_slice();
            if w.iter().filter(|&&x| x == 0).count() != n - 1 || w.iter().any(|&x| x != 0 && x != 1)
            {
                return Err(format!("n={n} {name}: not a zero-path weighting"));
            }
            let target = vec![0; n];
            let (at, cost) = simulate(&g, 0, w, sched.steps(), &target);
            let cost = cost.ok_or(format!("n={n} {name}: schedule never finished"))?;
            if cost < floor {
                return Err(format!("n={n} {name}: cost {cost} < {floor}"));
            }
            let mut expected = Vec::new();
            for i in (2..n).step_by(2) {
                expected.push(at[adv.path[i]].unwrap());
            }
            if n % 2 == 0 {
                expected.push(at[adv.path[n - 1]].unwrap());
            }
            if expected != adv.milestones {
                return Err(format!(
                    "n={n} {name}: milestones {:?} != replay {expected:?}",
                    adv.milestones
                ));
            }
            let mut prev = 0;
            for (k, &s) in adv.milestones.iter().enumerate() {
                let i = 2 * (k + 1);
                if s - prev < (n + 1 - i).pow(2) {
                    return Err(format!("n={n} {name}: gap at {i} is {}", s - prev));
                }
                prev = s;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} schedules, n = 3..10"))
}

fn yen_upper_bound() -> Result<String, String> {
    for n in 2..=12usize {
        let g = complete_digraph(n).unwrap();
        let identity: Vec<usize> = (0..n).collect();
        let sched = yen_schedule(&g, &identity, n.div_ceil(2)).unwrap();
        for k in 0..500u64 {
            let seed = 1000 * n as u64 + k;
            let w = potential_weights(&g, seed, 10, 50);
            let inst = Instance::new(g.clone(), 0, w.clone()).unwrap();
            let r = execute_schedule(&inst, &sched).map_err(|e| e.to_string())?;
            let target = reference_distances(&g, 0, w.as_slice());
            if r.reduced_cost.is_never() || to_i64(&r.final_distances) != target {
                return Err(format!("n={n} seed={seed}: {:?}", r.reduced_cost));
            }
        }
    }
    Ok("5500 instances, n = 2..12".into())
}

fn random_path_floor() -> Result<String, String> {
    let n = 8usize;
    let floor: usize = (0..n)
        .step_by(2)
        .map(|i| n.saturating_sub(i + 1))
        .map(|k| k * k.saturating_sub(1) / 2)
        .sum();
    if floor != 34 {
        return Err(format!("floor sum is {floor}"));
    }
    let threshold = floor as f64 * 0.95;
    let families = [
        (
            "round-robin",
            ScheduleSpec::RoundRobin {
                rounds: Some(n - 1),
            },
        ),
        (
            "yen",
            ScheduleSpec::Yen {
                rounds: Some(n.div_ceil(2)),
            },
        ),
        (
            "randomized-yen",
            ScheduleSpec::RandomizedYen {
                rounds: Some(n),
                seed: None,
            },
        ),
    ];
    let g = complete_digraph(n).unwrap();
    let mut report = Vec::new();
    for (name, schedule) in families {
        let cfg = ExperimentConfig {
            generator: GeneratorSpec::RandomPath { n },
            schedule: schedule.clone(),
            trials: 2000,
            base_seed: 0x5eed,
            timing: false,
            out: None,
        };
        let s = estimate_mean_reduced_cost(&cfg).map_err(|e| e.to_string())?;
        let mean = s.mean.ok_or("no finished trials")?;
        if s.never_count > 0 || mean < threshold {
            return Err(format!(
                "{name}: mean {mean:.2} (threshold {threshold}), {} NEVER",
                s.never_count
            ));
        }
        // replay a slice of trials with the local simulator
        for r in s.records.iter().step_by(40) {
            let (inst, _) =
                relaxlab::adversary::sample_random_path_instance(n, 0, r.trial_seed).unwrap();
            let sched = schedule.build(&g, r.trial_seed).unwrap();
            let (_, cost) = simulate(&g, 0, inst.weights().as_slice(), sched.steps(), &vec![0; n]);
            if cost != r.reduced_cost.steps() {
                return Err(format!(
                    "{name}: trial {} replays to {cost:?}",
                    r.trial_seed
                ));
            }
        }
        report.push(format!("{name} {mean:.2}"));
    }
    Ok(format!("means {} >= {threshold}", report.join(", ")))
}

fn alternation() -> Result<String, String> {
    let n = 2000usize;
    let nf = n as f64;
    let bound = 2.0 * nf / 3.0 + 4.0 * (nf * nf.ln()).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut path: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        path.swap(i, rng.gen_range(0..=i));
    }
    let mut within = 0;
    let mut total = 0.0;
    for seed in 0..200 {
        let order = random_permutation(n, seed);
        let count = alternation_count(&path, &order).map_err(|e| e.to_string())?;
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let dirs: Vec<bool> = path.windows(2).map(|p| pos[p[0]] < pos[p[1]]).collect();
        let blocks = 1 + dirs.windows(2).filter(|d| d[0] != d[1]).count();
        if blocks != count {
            return Err(format!("seed {seed}: {count} blocks, recount {blocks}"));
        }
        within += usize::from((count as f64) <= bound);
        total += count as f64;
    }
    let mean = total / 200.0;
    let center = 2.0 * nf / 3.0;
    if within < 190 || (mean - center).abs() > 0.03 * center {
        return Err(format!("{within}/200 within {bound:.1}, mean {mean:.1}"));
    }
    Ok(format!(
        "{within}/200 within {bound:.1}, mean {mean:.1} vs {center:.1}"
    ))
}

fn check_paths(net: &NonBlockingNetwork, request: &[(usize, usize)], paths: &[Vec<usize>]) -> bool {
    let edges: HashSet<(usize, usize)> = net.graph().edges().iter().copied().collect();
    let mut seen = HashSet::new();
    paths.len() == request.len()
        && request.iter().zip(paths).all(|(&(i, o), p)| {
            p.first() == Some(&net.inputs()[i])
                && p.last() == Some(&net.outputs()[o])
                && p.windows(2).all(|h| edges.contains(&(h[0], h[1])))
                && p.iter().all(|v| seen.insert(*v))
        })
}

/// Every map from a subset of inputs to outputs; `(routed, rejected)` counts
/// for injective and non-injective maps.
fn exhaustive(net: &NonBlockingNetwork) -> Result<(usize, usize), String> {
    let c = net.capacity();
    let (mut routed, mut rejected) = (0, 0);
    for code in 0..(c + 1).pow(c as u32) {
        let mut x = code;
        let mut request = Vec::new();
        for i in 0..c {
            if x % (c + 1) < c {
                request.push((i, x % (c + 1)));
            }
            x /= c + 1;
        }
        let injective = request.iter().map(|p| p.1).collect::<HashSet<_>>().len() == request.len();
        match route_pairs(net, &request) {
            Ok(paths) if injective && check_paths(net, &request, &paths) => routed += 1,
            Err(Error::MalformedRequest(_)) if !injective => rejected += 1,
            other => {
                return Err(format!(
                    "request {request:?}: {:?}",
                    other.map(|_| "bad paths")
                ))
            }
        }
    }
    Ok((routed, rejected))
}

fn clos_identities() -> Result<String, String> {
    let k4 = complete_bipartite_network(4).unwrap();
    let clos = clos_compose(&k4).unwrap();
    if (clos.vertex_count(), clos.edge_count(), clos.capacity()) != (64, 192, 16) {
        return Err(format!(
            "clos(K44): {} vertices, {} edges",
            clos.vertex_count(),
            clos.edge_count()
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for t in 0..1000 {
        let mut perm: Vec<usize> = (0..16).collect();
        for i in (1..16).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let request: Vec<(usize, usize)> = perm.into_iter().enumerate().collect();
        let paths = route_pairs(&clos, &request).map_err(|e| format!("permutation {t}: {e}"))?;
        if !check_paths(&clos, &request, &paths) {
            return Err(format!("permutation {t}: invalid paths"));
        }
    }
    let small = clos_compose(&complete_bipartite_network(2).unwrap()).unwrap();
    let (r4, x4) = exhaustive(&small)?;
    let (r2, x2) = exhaustive(&complete_bipartite_network(2).unwrap())?;
    if r4 != 209 || r2 != 7 || r2 + x2 != 9 {
        return Err(format!(
            "capacity 4: {r4} routed; K22: {r2} routed, {x2} rejected"
        ));
    }
    Ok(format!(
        "64/192, 1000 permutations at capacity 16, capacity 4: {r4} injections routed ({x4} non-injective rejected), K22: {r2} routed + {x2} rejected = 9 maps"
    ))
}

fn coloring() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for t in 0..10_000 {
        let (l, r, cap) = (
            rng.gen_range(1..=40),
            rng.gen_range(1..=40),
            rng.gen_range(1..=8),
        );
        let (mut dl, mut dr) = (vec![0; l], vec![0; r]);
        let mut edges = Vec::new();
        for _ in 0..rng.gen_range(0..=l * cap) {
            let (a, b) = (rng.gen_range(0..l), rng.gen_range(0..r));
            if dl[a] < cap && dr[b] < cap {
                dl[a] += 1;
                dr[b] += 1;
                edges.push((a, b));
            }
        }
        let delta = dl.iter().chain(&dr).copied().max().unwrap_or(0);
        let g = BipartiteMultigraph::new(l, r, edges.clone()).unwrap();
        let colors = konig_edge_coloring(&g).colors;
        let mut used = HashSet::new();
        let ok = colors.len() == edges.len()
            && edges
                .iter()
                .zip(&colors)
                .all(|(&(a, b), &c)| c < delta && used.insert((0, a, c)) && used.insert((1, b, c)));
        if !ok {
            return Err(format!("graph {t} improperly colored"));
        }
    }
    Ok("10000 multigraphs properly colored with max-degree colors".into())
}

fn sparse_floor_check() -> Result<String, String> {
    let (n, m, c, d) = (72usize, 1300usize, 32usize, 8usize);
    let cfg = ExperimentConfig {
        generator: GeneratorSpec::SparseHard {
            n,
            m,
            regime: Regime::CompleteBipartite,
            capacity: Some(c),
            degree: Some(d),
        },
        schedule: ScheduleSpec::RoundRobin {
            rounds: Some(n - 1),
        },
        trials: 200,
        base_seed: 0xfeed,
        timing: false,
        out: None,
    };
    let s = estimate_mean_reduced_cost(&cfg).map_err(|e| e.to_string())?;
    let floor = (c / 4) * (m / 8);
    let threshold = 0.95 * floor as f64;
    let mean = s.mean.ok_or("no finished trials")?;
    if s.never_count > 0 || mean < threshold {
        return Err(format!(
            "mean {mean:.1} vs {threshold:.1}, {} NEVER",
            s.never_count
        ));
    }
    Ok(format!(
        "n={n} m={m} c={c} d={d}: mean {mean:.1} >= {threshold:.1}, 0 NEVER"
    ))
}

fn minimax() -> Result<String, String> {
    let (value, steps) = bruteforce_min_expected_cost(3, 6)
        .map_err(|e| e.to_string())?
        .ok_or("no correct schedule")?;
    let g = complete_digraph(3).unwrap();
    let mut total = 0;
    for path in [[0, 1, 2], [0, 2, 1]] {
        let mut w = vec![1; g.edge_count()];
        for p in path.windows(2) {
            w[g.find_edge(p[0], p[1]).unwrap()] = 0;
        }
        total += simulate(&g, 0, &w, &steps, &[0, 0, 0])
            .1
            .ok_or("argmin is not correct")?;
    }
    let replay = total as f64 / 2.0;
    if !(1.0..=4.0).contains(&value) || value != replay || value != MINIMAX_VALUE_N3 {
        return Err(format!(
            "value {value}, replay {replay}, frozen {MINIMAX_VALUE_N3}"
        ));
    }
    Ok(format!("value {value} with {steps:?}"))
}

fn main() -> ExitCode {
    type Check = fn() -> Result<String, String>;
    let checks: [(&str, Check, u64); 8] = [
        ("adversary-floor", adversary_floor, 10),
        ("yen-upper-bound", yen_upper_bound, 30),
        ("random-path-floor", random_path_floor, 60),
        ("alternation", alternation, 10),
        ("clos-identities", clos_identities, 20),
        ("konig-coloring", coloring, 20),
        ("sparse-floor", sparse_floor_check, 120),
        ("minimax-n3", minimax, 60),
    ];
    let mut failed = 0;
    for (name, check, limit) in checks {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > Duration::from_secs(limit) => {
                Err(format!("{msg}; took {elapsed:.1?} > {limit}s"))
            }
            other => other,
        };
        match outcome {
            Ok(msg) => println!("[PASS] {name}: {msg} ({elapsed:.2?})"),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] {name}: {msg} ({elapsed:.2?})");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
