//! Exact single-source distances used as ground truth.
//!
//! This is ordinary adaptive Bellman-Ford: passes stop as soon as nothing
//! changes. It is never itself measured, only compared against.

use crate::error::{Error, Result};
use crate::graph::{Dist, Instance};

/// Shortest-path distances from the instance source.
///
/// Fails with [`Error::NegativeCycle`] when a negative cycle is reachable,
/// naming the cycle's vertices in traversal order.
pub fn oracle_distances(instance: &Instance) -> Result<Vec<Dist>> {
    let g = instance.digraph();
    let n = g.vertex_count();
    let mut dist = vec![Dist::Unreachable; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    dist[instance.source()] = Dist::Finite(0);

    // Converged after at most n-1 passes unless a negative cycle is reachable;
    // a change during pass n leaves a cycle on the predecessor graph.
    let mut last_changed = None;
    for _ in 0..n {
        last_changed = None;
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let candidate = dist[u].checked_add(instance.weight(e))?;
            if candidate < dist[v] {
                dist[v] = candidate;
                pred[v] = Some(u);
                last_changed = Some(v);
            }
        }
        if last_changed.is_none() {
            return Ok(dist);
        }
    }
    let x = last_changed.expect("loop exits early on convergence");
    Err(Error::NegativeCycle {
        cycle: extract_cycle(&pred, x, n),
    })
}

fn extract_cycle(pred: &[Option<usize>], start: usize, n: usize) -> Vec<usize> {
    let mut v = start;
    for _ in 0..n {
        if let Some(p) = pred[v] {
            v = p;
        }
    }
    let anchor = v;
    let mut cycle = vec![anchor];
    let mut u = pred[anchor].unwrap_or(anchor);
    while u != anchor {
        cycle.push(u);
        u = match pred[u] {
            Some(p) => p,
            None => break,
        };
    }
    cycle.reverse();
    cycle
}
