//! Rearrangeable non-blocking networks.
//!
//! A network of capacity `c` is a digraph with `c` inputs and `c` outputs in
//! which every partial matching of inputs to outputs can be realized by
//! vertex-disjoint paths. Three shapes are built here:
//!
//! * [`Structure::Base`]: every pair is routed over a direct input-to-output
//!   edge, as in the complete bipartite network.
//! * [`Structure::Clos`]: three stages of `c` copies of a capacity-`c` network,
//!   with adjacent stages sharing one vertex per pair of copies. Capacity `c^2`.
//! * [`Structure::Trimmed`]: a larger network with surplus inputs, outputs and
//!   dead vertices removed.
//!
//! Inputs always have in-degree 0 and outputs out-degree 0, so deleting
//! unused inputs or outputs never breaks a path between the remaining ones.

mod coloring;
mod routing;

pub use coloring::{is_proper_coloring, konig_edge_coloring, BipartiteMultigraph, EdgeColoring};
pub use routing::{
    partial_injection_count, route_pairs, verify_paths, verify_rearrangeable_bruteforce,
    RearrangeabilityReport, BRUTEFORCE_CAPACITY_LIMIT,
};

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Digraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonBlockingNetwork {
    graph: Digraph,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    structure: Structure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structure {
    Base,
    Clos {
        base: Box<NonBlockingNetwork>,
        /// `3c` maps from base vertices to this network's vertices, ordered
        /// input stage, middle stage, output stage.
        subunit_maps: Vec<Vec<usize>>,
    },
    Trimmed {
        inner: Box<NonBlockingNetwork>,
        /// Inner vertex to vertex of this network, `None` when deleted.
        vertex_map: Vec<Option<usize>>,
    },
}

impl NonBlockingNetwork {
    /// A network routed over direct input-to-output edges. Does not check
    /// that it is actually rearrangeable.
    pub fn direct(graph: Digraph, inputs: Vec<usize>, outputs: Vec<usize>) -> Result<Self> {
        check_terminals(&graph, &inputs, &outputs)?;
        Ok(NonBlockingNetwork {
            graph,
            inputs,
            outputs,
            structure: Structure::Base,
        })
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn capacity(&self) -> usize {
        self.inputs.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// Number of Clos levels down to the base network.
    pub fn depth(&self) -> usize {
        match &self.structure {
            Structure::Base => 0,
            Structure::Clos { base, .. } => 1 + base.depth(),
            Structure::Trimmed { inner, .. } => inner.depth(),
        }
    }
}

fn check_terminals(graph: &Digraph, inputs: &[usize], outputs: &[usize]) -> Result<()> {
    if inputs.len() != outputs.len() {
        return Err(Error::InvalidGraph(format!(
            "{} inputs but {} outputs",
            inputs.len(),
            outputs.len()
        )));
    }
    let n = graph.vertex_count();
    let mut seen = vec![false; n];
    for &v in inputs.iter().chain(outputs) {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidGraph(format!(
                "terminal {v} repeated or out of range"
            )));
        }
    }
    let indeg = graph.in_degrees();
    if let Some(&v) = inputs.iter().find(|&&v| indeg[v] != 0) {
        return Err(Error::InvalidGraph(format!("input {v} has incoming edges")));
    }
    if let Some(&v) = outputs.iter().find(|&&v| graph.out_degree(v) != 0) {
        return Err(Error::InvalidGraph(format!(
            "output {v} has outgoing edges"
        )));
    }
    Ok(())
}

/// `K_{c,c}` directed from inputs `0..c` to outputs `c..2c`.
pub fn complete_bipartite_network(c: usize) -> Result<NonBlockingNetwork> {
    if c == 0 {
        return Err(Error::InvalidParameter(
            "capacity must be at least 1".into(),
        ));
    }
    let edges = (0..c)
        .flat_map(|i| (0..c).map(move |j| (i, c + j)))
        .collect();
    let graph = Digraph::new(2 * c, edges)?;
    NonBlockingNetwork::direct(graph, (0..c).collect(), (c..2 * c).collect())
}

/// Three-stage Clos composition of `base` (capacity `c`, `n0` vertices, `m0`
/// edges) into a capacity `c^2` network with `3c*n0 - 2c^2` vertices and
/// `3c*m0` edges.
///
/// Output `j` of input-stage copy `i` is the same vertex as input `i` of
/// middle copy `j`; output `k` of middle copy `j` is input `j` of output-stage
/// copy `k`. Global input `i*c + p` is input `p` of input-stage copy `i`, and
/// global output `k*c + q` is output `q` of output-stage copy `k`.
pub fn clos_compose(base: &NonBlockingNetwork) -> Result<NonBlockingNetwork> {
    let c = base.capacity();
    if c == 0 {
        return Err(Error::InvalidParameter(
            "cannot compose a capacity-0 network".into(),
        ));
    }
    let n0 = base.vertex_count();
    let mut input_slot = vec![None; n0];
    for (p, &v) in base.inputs.iter().enumerate() {
        input_slot[v] = Some(p);
    }

    let mut maps = vec![vec![usize::MAX; n0]; 3 * c];
    let mut next = 0usize;
    let mut fresh = || {
        next += 1;
        next - 1
    };
    for map in maps.iter_mut().take(c) {
        for slot in map.iter_mut() {
            *slot = fresh();
        }
    }
    for stage in 1..3 {
        for j in 0..c {
            let unit = stage * c + j;
            for v in 0..n0 {
                maps[unit][v] = match input_slot[v] {
                    // input i of copy j in this stage == output j of copy i in the previous stage
                    Some(i) => maps[(stage - 1) * c + i][base.outputs[j]],
                    None => fresh(),
                };
            }
        }
    }
    let vertex_count = next;
    debug_assert_eq!(vertex_count, 3 * c * n0 - 2 * c * c);

    let mut edges = Vec::with_capacity(3 * c * base.edge_count());
    for map in &maps {
        edges.extend(base.graph.edges().iter().map(|&(a, b)| (map[a], map[b])));
    }
    let inputs: Vec<usize> = (0..c)
        .flat_map(|i| base.inputs.iter().map(|&v| maps[i][v]).collect::<Vec<_>>())
        .collect();
    let outputs: Vec<usize> = (0..c)
        .flat_map(|k| {
            base.outputs
                .iter()
                .map(|&v| maps[2 * c + k][v])
                .collect::<Vec<_>>()
        })
        .collect();
    let graph = Digraph::new(vertex_count, edges)?;
    check_terminals(&graph, &inputs, &outputs)?;
    Ok(NonBlockingNetwork {
        graph,
        inputs,
        outputs,
        structure: Structure::Clos {
            base: Box::new(base.clone()),
            subunit_maps: maps,
        },
    })
}

/// Keeps the first `c` inputs and outputs and every vertex lying on some
/// path between them; vertices keep their relative order.
pub fn trim_capacity(net: NonBlockingNetwork, c: usize) -> Result<NonBlockingNetwork> {
    if c == net.capacity() {
        return Ok(net);
    }
    if c > net.capacity() {
        return Err(Error::InvalidParameter(format!(
            "cannot trim capacity {} up to {c}",
            net.capacity()
        )));
    }
    let g = &net.graph;
    let n = g.vertex_count();
    let forward = reach(n, &net.inputs[..c], |v| {
        g.out_edges(v).iter().map(|&e| g.edges()[e].1).collect()
    });
    let mut preds = vec![Vec::new(); n];
    for &(t, h) in g.edges() {
        preds[h].push(t);
    }
    let backward = reach(n, &net.outputs[..c], |v| preds[v].clone());

    let mut vertex_map = vec![None; n];
    let mut next = 0;
    for v in 0..n {
        if forward[v] && backward[v] {
            vertex_map[v] = Some(next);
            next += 1;
        }
    }
    let mut keep_terminal = |v: usize| -> usize {
        if vertex_map[v].is_none() {
            // an isolated kept terminal; cannot happen for a rearrangeable network
            vertex_map[v] = Some(next);
            next += 1;
        }
        vertex_map[v].unwrap()
    };
    let inputs: Vec<usize> = net.inputs[..c].iter().map(|&v| keep_terminal(v)).collect();
    let outputs: Vec<usize> = net.outputs[..c].iter().map(|&v| keep_terminal(v)).collect();
    let edges = g
        .edges()
        .iter()
        .filter_map(|&(a, b)| Some((vertex_map[a]?, vertex_map[b]?)))
        .collect();
    let graph = Digraph::new(next, edges)?;
    check_terminals(&graph, &inputs, &outputs)?;
    Ok(NonBlockingNetwork {
        graph,
        inputs,
        outputs,
        structure: Structure::Trimmed {
            inner: Box::new(net),
            vertex_map,
        },
    })
}

fn reach(n: usize, starts: &[usize], next: impl Fn(usize) -> Vec<usize>) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut queue: VecDeque<usize> = starts.iter().copied().collect();
    for &s in starts {
        seen[s] = true;
    }
    while let Some(v) = queue.pop_front() {
        for w in next(v) {
            if !std::mem::replace(&mut seen[w], true) {
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Smallest `i >= 0` with `eps * 2^i >= 1`, i.e. `ceil(log2(1/eps))`.
pub fn clos_levels(eps: f64) -> Result<usize> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "eps = {eps} is outside (0, 1]"
        )));
    }
    let mut levels = 0;
    let mut x = eps;
    while x < 1.0 {
        x *= 2.0;
        levels += 1;
    }
    Ok(levels)
}

fn ceil_sqrt(c: usize) -> usize {
    let mut r = (c as f64).sqrt() as usize;
    while r * r < c {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= c {
        r -= 1;
    }
    r
}

/// Capacity-`c` network with `O(c)` vertices and `O(c^(1+eps))` edges:
/// complete bipartite when `eps = 1`, otherwise a Clos composition of the
/// capacity-`ceil(sqrt c)` network for `2*eps`, trimmed back to `c`.
pub fn sparse_nonblocking(c: usize, eps: f64) -> Result<NonBlockingNetwork> {
    if c == 0 {
        return Err(Error::InvalidParameter(
            "capacity must be at least 1".into(),
        ));
    }
    build_levels(c, clos_levels(eps)?)
}

fn build_levels(c: usize, levels: usize) -> Result<NonBlockingNetwork> {
    if levels == 0 {
        return complete_bipartite_network(c);
    }
    let inner = build_levels(ceil_sqrt(c), levels - 1)?;
    trim_capacity(clos_compose(&inner)?, c)
}

/// Wire form: graph JSON (unit weights, source = first input) plus terminals
/// and the recursive structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkJson {
    pub n: usize,
    pub source: usize,
    pub edges: Vec<(usize, usize, i64)>,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    pub structure: StructureJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StructureJson {
    Base,
    Clos {
        base_capacity: usize,
        base: Box<NetworkJson>,
        subunit_maps: Vec<Vec<usize>>,
    },
    Trimmed {
        inner: Box<NetworkJson>,
        vertex_map: Vec<Option<usize>>,
    },
}

impl NonBlockingNetwork {
    pub fn to_json(&self) -> NetworkJson {
        let structure = match &self.structure {
            Structure::Base => StructureJson::Base,
            Structure::Clos { base, subunit_maps } => StructureJson::Clos {
                base_capacity: base.capacity(),
                base: Box::new(base.to_json()),
                subunit_maps: subunit_maps.clone(),
            },
            Structure::Trimmed { inner, vertex_map } => StructureJson::Trimmed {
                inner: Box::new(inner.to_json()),
                vertex_map: vertex_map.clone(),
            },
        };
        NetworkJson {
            n: self.vertex_count(),
            source: self.inputs.first().copied().unwrap_or(0),
            edges: self.graph.edges().iter().map(|&(t, h)| (t, h, 1)).collect(),
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            structure,
        }
    }

    /// Rebuilds a network, checking terminals, structure maps and the Clos
    /// vertex/edge counts.
    pub fn from_json(json: &NetworkJson) -> Result<Self> {
        let graph = Digraph::new(json.n, json.edges.iter().map(|&(t, h, _)| (t, h)).collect())?;
        check_terminals(&graph, &json.inputs, &json.outputs)?;
        let bad = |msg: String| Error::InvalidGraph(msg);
        let structure = match &json.structure {
            StructureJson::Base => Structure::Base,
            StructureJson::Clos {
                base_capacity,
                base,
                subunit_maps,
            } => {
                let base = NonBlockingNetwork::from_json(base)?;
                let c = base.capacity();
                if c != *base_capacity {
                    return Err(bad(format!(
                        "base capacity {c} != declared {base_capacity}"
                    )));
                }
                if graph.vertex_count() != 3 * c * base.vertex_count() - 2 * c * c
                    || graph.edge_count() != 3 * c * base.edge_count()
                {
                    return Err(bad("Clos vertex/edge counts do not match its base".into()));
                }
                if subunit_maps.len() != 3 * c
                    || subunit_maps.iter().any(|m| {
                        m.len() != base.vertex_count()
                            || m.iter().any(|&v| v >= graph.vertex_count())
                    })
                {
                    return Err(bad("malformed Clos subunit maps".into()));
                }
                for (k, &(a, b)) in base.graph.edges().iter().enumerate() {
                    for (u, map) in subunit_maps.iter().enumerate() {
                        if graph.edges()[u * base.edge_count() + k] != (map[a], map[b]) {
                            return Err(bad(format!(
                                "subunit {u} edge {k} disagrees with its map"
                            )));
                        }
                    }
                }
                Structure::Clos {
                    base: Box::new(base),
                    subunit_maps: subunit_maps.clone(),
                }
            }
            StructureJson::Trimmed { inner, vertex_map } => {
                let inner = NonBlockingNetwork::from_json(inner)?;
                if vertex_map.len() != inner.vertex_count()
                    || vertex_map
                        .iter()
                        .flatten()
                        .any(|&v| v >= graph.vertex_count())
                    || json.inputs.len() > inner.capacity()
                {
                    return Err(bad("malformed trimming map".into()));
                }
                let maps_to = |inner_v: usize, v: usize| vertex_map[inner_v] == Some(v);
                let terminals_ok = json
                    .inputs
                    .iter()
                    .zip(&inner.inputs)
                    .all(|(&v, &iv)| maps_to(iv, v))
                    && json
                        .outputs
                        .iter()
                        .zip(&inner.outputs)
                        .all(|(&v, &iv)| maps_to(iv, v));
                if !terminals_ok {
                    return Err(bad(
                        "trimmed terminals do not match the inner network".into()
                    ));
                }
                Structure::Trimmed {
                    inner: Box::new(inner),
                    vertex_map: vertex_map.clone(),
                }
            }
        };
        Ok(NonBlockingNetwork {
            graph,
            inputs: json.inputs.clone(),
            outputs: json.outputs.clone(),
            structure,
        })
    }
}
