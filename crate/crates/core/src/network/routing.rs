use std::collections::HashSet;

use super::coloring::{konig_edge_coloring, BipartiteMultigraph};
use super::{NonBlockingNetwork, Structure};
use crate::error::{Error, Result};

pub const BRUTEFORCE_CAPACITY_LIMIT: usize = 5;

fn check_request(capacity: usize, request: &[(usize, usize)]) -> Result<()> {
    let mut ins = vec![false; capacity];
    let mut outs = vec![false; capacity];
    for &(i, o) in request {
        if i >= capacity || o >= capacity {
            return Err(Error::MalformedRequest(format!(
                "pair ({i}, {o}) outside capacity {capacity}"
            )));
        }
        if std::mem::replace(&mut ins[i], true) {
            return Err(Error::MalformedRequest(format!("input {i} used twice")));
        }
        if std::mem::replace(&mut outs[o], true) {
            return Err(Error::MalformedRequest(format!("output {o} used twice")));
        }
    }
    Ok(())
}

/// Vertex-disjoint paths for `(input index, output index)` pairs, one per
/// pair, in request order.
pub fn route_pairs(
    network: &NonBlockingNetwork,
    request: &[(usize, usize)],
) -> Result<Vec<Vec<usize>>> {
    check_request(network.capacity(), request)?;
    route(network, request)
}

fn route(network: &NonBlockingNetwork, request: &[(usize, usize)]) -> Result<Vec<Vec<usize>>> {
    match &network.structure {
        Structure::Base => request
            .iter()
            .map(|&(i, o)| {
                let (a, b) = (network.inputs[i], network.outputs[o]);
                if network.graph.has_edge(a, b) {
                    Ok(vec![a, b])
                } else {
                    Err(Error::RoutingFailed(format!(
                        "no edge from input {i} to output {o}"
                    )))
                }
            })
            .collect(),
        Structure::Trimmed { inner, vertex_map } => route(inner, request)?
            .into_iter()
            .map(|path| {
                path.into_iter()
                    .map(|v| {
                        vertex_map[v].ok_or_else(|| {
                            Error::RoutingFailed(format!("path uses deleted vertex {v}"))
                        })
                    })
                    .collect()
            })
            .collect(),
        Structure::Clos { base, subunit_maps } => route_clos(base, subunit_maps, request),
    }
}

fn route_clos(
    base: &NonBlockingNetwork,
    maps: &[Vec<usize>],
    request: &[(usize, usize)],
) -> Result<Vec<Vec<usize>>> {
    let c = base.capacity();
    let demand =
        BipartiteMultigraph::new(c, c, request.iter().map(|&(i, o)| (i / c, o / c)).collect())?;
    let degree = demand.max_degree();
    assert!(
        degree <= c,
        "subunit demand degree {degree} exceeds capacity {c}"
    );
    let middle = konig_edge_coloring(&demand).colors;

    // Per subunit: (pair index, local input, local output).
    let mut sub: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); 3 * c];
    for (k, (&(i, o), &m)) in request.iter().zip(&middle).enumerate() {
        let (first, p) = (i / c, i % c);
        let (last, q) = (o / c, o % c);
        sub[first].push((k, p, m));
        sub[c + m].push((k, first, last));
        sub[2 * c + last].push((k, m, q));
    }

    let mut pieces: Vec<Vec<Vec<usize>>> = vec![Vec::with_capacity(3); request.len()];
    for (unit, pairs) in sub.iter().enumerate() {
        if pairs.is_empty() {
            continue;
        }
        let local: Vec<(usize, usize)> = pairs.iter().map(|&(_, a, b)| (a, b)).collect();
        let paths = route(base, &local)?;
        for (&(k, _, _), path) in pairs.iter().zip(paths) {
            pieces[k].push(path.into_iter().map(|v| maps[unit][v]).collect());
        }
    }
    // Subunits were visited stage by stage, so each pair's pieces are in order.
    Ok(pieces
        .into_iter()
        .map(|segments| {
            let mut path: Vec<usize> = Vec::new();
            for seg in segments {
                match path.last() {
                    Some(&end) => {
                        debug_assert_eq!(end, seg[0]);
                        path.extend_from_slice(&seg[1..]);
                    }
                    None => path = seg,
                }
            }
            path
        })
        .collect())
}

/// Checks that `paths` realize `request` in `network`: right endpoints, every
/// hop an edge, and no vertex shared between paths.
pub fn verify_paths(
    network: &NonBlockingNetwork,
    request: &[(usize, usize)],
    paths: &[Vec<usize>],
) -> Result<(), String> {
    if paths.len() != request.len() {
        return Err(format!("{} paths for {} pairs", paths.len(), request.len()));
    }
    let mut used = HashSet::new();
    for (&(i, o), path) in request.iter().zip(paths) {
        if path.first() != Some(&network.inputs[i]) || path.last() != Some(&network.outputs[o]) {
            return Err(format!("path for ({i}, {o}) has wrong endpoints: {path:?}"));
        }
        for hop in path.windows(2) {
            if !network.graph.has_edge(hop[0], hop[1]) {
                return Err(format!("path for ({i}, {o}) uses non-edge {hop:?}"));
            }
        }
        for &v in path {
            if !used.insert(v) {
                return Err(format!("vertex {v} shared between paths"));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RearrangeabilityReport {
    pub rearrangeable: bool,
    /// Requests tried, including the failing one.
    pub checked: usize,
    pub counterexample: Option<Vec<(usize, usize)>>,
}

/// Number of partial injections between two `c`-sets: `sum_k C(c,k)^2 k!`.
pub fn partial_injection_count(c: usize) -> u64 {
    let mut total = 0u64;
    let mut binom = 1u64;
    let mut fact = 1u64;
    for k in 0..=c as u64 {
        if let Some(prev) = k.checked_sub(1) {
            binom = binom * (c as u64 - prev) / k;
            fact *= k;
        }
        total += binom * binom * fact;
    }
    total
}

/// Routes every partial injection of inputs into outputs, smallest requests
/// first, and reports the first one that cannot be routed or verified.
pub fn verify_rearrangeable_bruteforce(
    network: &NonBlockingNetwork,
) -> Result<RearrangeabilityReport> {
    let c = network.capacity();
    if c > BRUTEFORCE_CAPACITY_LIMIT {
        return Err(Error::CapacityGuard {
            capacity: c,
            limit: BRUTEFORCE_CAPACITY_LIMIT,
        });
    }
    let mut checked = 0;
    for k in 0..=c {
        for ins in combinations(c, k) {
            let mut outs = Vec::with_capacity(k);
            let mut taken = vec![false; c];
            let mut failure = None;
            for_each_arrangement(c, k, &mut outs, &mut taken, &mut |outs| {
                if failure.is_some() {
                    return;
                }
                checked += 1;
                let request: Vec<(usize, usize)> =
                    ins.iter().copied().zip(outs.iter().copied()).collect();
                let ok = route_pairs(network, &request)
                    .ok()
                    .is_some_and(|paths| verify_paths(network, &request, &paths).is_ok());
                if !ok {
                    failure = Some(request);
                }
            });
            if let Some(request) = failure {
                return Ok(RearrangeabilityReport {
                    rearrangeable: false,
                    checked,
                    counterexample: Some(request),
                });
            }
        }
    }
    Ok(RearrangeabilityReport {
        rearrangeable: true,
        checked,
        counterexample: None,
    })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

fn for_each_arrangement(
    n: usize,
    k: usize,
    cur: &mut Vec<usize>,
    taken: &mut [bool],
    f: &mut impl FnMut(&[usize]),
) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for x in 0..n {
        if !taken[x] {
            taken[x] = true;
            cur.push(x);
            for_each_arrangement(n, k, cur, taken, f);
            cur.pop();
            taken[x] = false;
        }
    }
}
