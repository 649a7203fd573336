//! Hard instances on graphs with a prescribed number of vertices and edges.
//!
//! The graph has two `c`-vertex sets `S` (holding the source) and `T`. A
//! `d`-biregular digraph runs from `T` to `S`, and a rearrangeable
//! non-blocking network runs from `S` to `T`. Whatever disjoint sequence of
//! biregular edges is drawn, the network can link it into one path starting
//! at the source. Padding vertices and edges fill the budget exactly; padding
//! edges are weighted `n + m` so no shortest path among the construction
//! vertices ever uses them.

use std::collections::HashSet;
use std::ops::Range;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{seeded_rng, Digraph, GraphJson, Instance, WeightAssignment};
use crate::network::{
    complete_bipartite_network, route_pairs, sparse_nonblocking, NetworkJson, NonBlockingNetwork,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Regime {
    CompleteBipartite,
    /// Network from [`sparse_nonblocking`] with the given `eps`.
    DenseClos {
        eps: f64,
    },
}

impl Regime {
    pub fn network(self, c: usize) -> Result<NonBlockingNetwork> {
        match self {
            Regime::CompleteBipartite => complete_bipartite_network(c),
            Regime::DenseClos { eps } => sparse_nonblocking(c, eps),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeClass {
    Network,
    Biregular,
    Padding,
}

/// `T[j] -> S[(j + k) mod c]` for `k < d`, with `S = 0..c` and `T = c..2c`.
pub fn biregular_digraph(c: usize, d: usize) -> Result<Digraph> {
    if c == 0 || d == 0 || d > c {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= d <= c, got c={c} d={d}"
        )));
    }
    let edges = biregular_pairs(c, d).map(|(j, s)| (c + j, s)).collect();
    Digraph::new(2 * c, edges)
}

/// `(T index, S index)` pairs of the circulant biregular graph.
fn biregular_pairs(c: usize, d: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..c).flat_map(move |j| (0..d).map(move |k| (j, (j + k) % c)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseHardGraph {
    digraph: Digraph,
    network: NonBlockingNetwork,
    degree: usize,
    network_edges: Range<usize>,
    biregular_edges: Range<usize>,
    padding_edges: Range<usize>,
    regime: Regime,
}

impl SparseHardGraph {
    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    /// `S[0]`.
    pub fn source(&self) -> usize {
        self.network.inputs()[0]
    }

    pub fn s(&self) -> &[usize] {
        self.network.inputs()
    }

    pub fn t(&self) -> &[usize] {
        self.network.outputs()
    }

    pub fn capacity(&self) -> usize {
        self.network.capacity()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// Network vertex `v` is vertex `v` of the whole graph.
    pub fn network(&self) -> &NonBlockingNetwork {
        &self.network
    }

    pub fn network_edges(&self) -> Range<usize> {
        self.network_edges.clone()
    }

    pub fn biregular_edges(&self) -> Range<usize> {
        self.biregular_edges.clone()
    }

    pub fn padding_edges(&self) -> Range<usize> {
        self.padding_edges.clone()
    }

    pub fn edge_class(&self, edge: usize) -> EdgeClass {
        if self.network_edges.contains(&edge) {
            EdgeClass::Network
        } else if self.biregular_edges.contains(&edge) {
            EdgeClass::Biregular
        } else {
            EdgeClass::Padding
        }
    }

    pub fn padding_weight(&self) -> i64 {
        (self.digraph.vertex_count() + self.digraph.edge_count()) as i64
    }

    /// Biregular edges a sample may choose: those not entering the source.
    pub fn eligible_edges(&self) -> impl Iterator<Item = usize> + '_ {
        let source = self.source();
        self.biregular_edges()
            .filter(move |&e| self.digraph.edges()[e].1 != source)
    }

    /// Unit weights on construction edges, `n + m` on padding.
    pub fn base_weights(&self) -> WeightAssignment {
        let pad = self.padding_weight();
        WeightAssignment(
            (0..self.digraph.edge_count())
                .map(|e| {
                    if self.edge_class(e) == EdgeClass::Padding {
                        pad
                    } else {
                        1
                    }
                })
                .collect(),
        )
    }

    pub fn to_json(&self) -> SparseHardGraphJson {
        let instance = Instance::new(self.digraph.clone(), self.source(), self.base_weights())
            .expect("source and weights match the digraph");
        SparseHardGraphJson {
            graph: instance.to_json(),
            s: self.s().to_vec(),
            t: self.t().to_vec(),
            capacity: self.capacity(),
            degree: self.degree,
            regime: self.regime,
            edge_classes: (0..self.digraph.edge_count())
                .map(|e| self.edge_class(e))
                .collect(),
            network: self.network.to_json(),
        }
    }

    pub fn from_json(json: &SparseHardGraphJson) -> Result<Self> {
        let network = NonBlockingNetwork::from_json(&json.network)?;
        let classes = &json.edge_classes;
        let count = |class| classes.iter().filter(|&&c| c == class).count();
        let (ne, nb) = (count(EdgeClass::Network), count(EdgeClass::Biregular));
        let graph = assemble_core(
            json.graph.n,
            json.graph.edges.len(),
            network,
            json.degree,
            json.regime,
        )?;
        let same_edges = graph
            .digraph
            .edges()
            .iter()
            .zip(&json.graph.edges)
            .all(|(&(t, h), &(jt, jh, _))| (t, h) == (jt, jh));
        if !same_edges
            || ne != graph.network_edges.len()
            || nb != graph.biregular_edges.len()
            || json.s != graph.s()
            || json.t != graph.t()
        {
            return Err(Error::InvalidGraph(
                "sparse hard graph does not match its parameters".into(),
            ));
        }
        Ok(graph)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SparseHardGraphJson {
    #[serde(flatten)]
    pub graph: GraphJson,
    #[serde(rename = "S")]
    pub s: Vec<usize>,
    #[serde(rename = "T")]
    pub t: Vec<usize>,
    pub capacity: usize,
    pub degree: usize,
    pub regime: Regime,
    pub edge_classes: Vec<EdgeClass>,
    pub network: NetworkJson,
}

fn check_budget(n: usize, m: usize) -> Result<()> {
    if n < 2 || m < n || m > n * (n - 1) {
        return Err(Error::Infeasible(format!(
            "need n <= m <= n(n-1), got n={n} m={m}"
        )));
    }
    Ok(())
}

/// Picks the largest capacity whose network fits in `n` vertices and `m/2`
/// edges, gives the biregular part degree `min(c, (m - network edges) / c)`,
/// and pads to exactly `n` vertices and `m` edges.
pub fn assemble_hard_graph(n: usize, m: usize, regime: Regime) -> Result<SparseHardGraph> {
    check_budget(n, m)?;
    for c in (2..=n / 2).rev() {
        if regime == Regime::CompleteBipartite && (2 * c > n || 2 * c * c > m) {
            continue;
        }
        let network = regime.network(c)?;
        let (nv, ne) = (network.vertex_count(), network.edge_count());
        if nv > n || 2 * ne > m {
            continue;
        }
        let d = c.min((m - ne) / c);
        if d == 0 {
            continue;
        }
        return assemble_core(n, m, network, d, regime);
    }
    Err(Error::Infeasible(format!(
        "no capacity c >= 2 fits n={n} m={m}"
    )))
}

/// Like [`assemble_hard_graph`] but with capacity and degree given.
pub fn assemble_with_core(
    n: usize,
    m: usize,
    regime: Regime,
    c: usize,
    d: usize,
) -> Result<SparseHardGraph> {
    check_budget(n, m)?;
    if d == 0 || d > c {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= d <= c, got c={c} d={d}"
        )));
    }
    assemble_core(n, m, regime.network(c)?, d, regime)
}

fn assemble_core(
    n: usize,
    m: usize,
    network: NonBlockingNetwork,
    d: usize,
    regime: Regime,
) -> Result<SparseHardGraph> {
    let c = network.capacity();
    let (nv, ne) = (network.vertex_count(), network.edge_count());
    let core_edges = ne + c * d;
    if nv > n || core_edges > m {
        return Err(Error::Infeasible(format!(
            "core needs {nv} vertices and {core_edges} edges, budget is n={n} m={m}"
        )));
    }
    let (s, t) = (network.inputs(), network.outputs());
    let mut edges: Vec<(usize, usize)> = network.graph().edges().to_vec();
    edges.extend(biregular_pairs(c, d).map(|(j, k)| (t[j], s[k])));

    let mut present: HashSet<(usize, usize)> = edges.iter().copied().collect();
    let mut push = |edges: &mut Vec<(usize, usize)>, e: (usize, usize)| {
        if edges.len() < m && e.0 != e.1 && present.insert(e) {
            edges.push(e);
        }
    };
    // padding vertices nv..n form a chain, then absent pairs in scan order
    for v in nv..n.saturating_sub(1) {
        push(&mut edges, (v, v + 1));
    }
    'scan: for u in 0..n {
        for v in 0..n {
            if edges.len() >= m {
                break 'scan;
            }
            push(&mut edges, (u, v));
        }
    }
    if edges.len() != m {
        return Err(Error::Infeasible(format!(
            "could only place {} of {m} edges",
            edges.len()
        )));
    }
    let digraph = Digraph::new(n, edges)?;
    Ok(SparseHardGraph {
        digraph,
        network,
        degree: d,
        network_edges: 0..ne,
        biregular_edges: ne..core_edges,
        padding_edges: core_edges..m,
        regime,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseHardSample {
    pub weights: WeightAssignment,
    /// Biregular edges in the order drawn.
    pub chosen_edges: Vec<usize>,
    /// Zero-weight path from the source through every chosen edge.
    pub assembled_path: Vec<usize>,
    pub instance: Instance,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SparseHardSampleJson {
    #[serde(flatten)]
    pub graph: GraphJson,
    pub chosen_edges: Vec<usize>,
    pub path: Vec<usize>,
}

impl SparseHardSample {
    pub fn to_json(&self) -> SparseHardSampleJson {
        SparseHardSampleJson {
            graph: self.instance.to_json(),
            chosen_edges: self.chosen_edges.clone(),
            path: self.assembled_path.clone(),
        }
    }
}

/// Draws vertex-disjoint biregular edges uniformly one at a time until none
/// are left, routes the connecting pairs through the network, and weights
/// the resulting path 0, other construction edges 1 and padding `n + m`.
///
/// # Panics
///
/// If the network fails to route a valid request, which would mean it is not
/// rearrangeable.
pub fn sample_hard_instance(graph: &SparseHardGraph, seed: u64) -> SparseHardSample {
    let mut rng = seeded_rng(seed);
    let g = &graph.digraph;
    let mut used = vec![false; g.vertex_count()];
    let mut chosen = Vec::new();
    let mut candidates: Vec<usize> = graph.eligible_edges().collect();
    loop {
        candidates.retain(|&e| {
            let (tail, head) = g.edges()[e];
            !used[tail] && !used[head]
        });
        if candidates.is_empty() {
            break;
        }
        let e = candidates.swap_remove(rng.gen_range(0..candidates.len()));
        let (tail, head) = g.edges()[e];
        used[tail] = true;
        used[head] = true;
        chosen.push(e);
    }

    let mut s_index = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in graph.s().iter().enumerate() {
        s_index[v] = i;
    }
    let mut t_index = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in graph.t().iter().enumerate() {
        t_index[v] = i;
    }
    let mut from = graph.source();
    let mut request = Vec::with_capacity(chosen.len());
    for &e in &chosen {
        let (tail, head) = g.edges()[e];
        request.push((s_index[from], t_index[tail]));
        from = head;
    }
    let segments = route_pairs(&graph.network, &request)
        .unwrap_or_else(|err| panic!("network failed to route {request:?}: {err}"));

    let mut path = vec![graph.source()];
    for (segment, &e) in segments.iter().zip(&chosen) {
        path.extend_from_slice(&segment[1..]);
        path.push(g.edges()[e].1);
    }

    let mut weights = graph.base_weights();
    for hop in path.windows(2) {
        let e = g
            .find_edge(hop[0], hop[1])
            .expect("assembled path follows edges");
        weights.0[e] = 0;
    }
    let instance = Instance::new(g.clone(), graph.source(), weights.clone())
        .expect("weights match the digraph");
    SparseHardSample {
        weights,
        chosen_edges: chosen,
        assembled_path: path,
        instance,
    }
}

/// `floor(c/4) * floor(m/8)`: a quarter of the capacity in draws, each
/// expected to wait for half of at least `m/4` available edges.
pub fn sparse_floor(c: u64, m: u64) -> u64 {
    (c / 4) * (m / 8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Dist;
    use crate::oracle::oracle_distances;
    use crate::relax::execute_schedule;
    use crate::schedule::{append_fallback, RelaxationSchedule};

    #[test]
    fn biregular_examples() {
        let g = biregular_digraph(4, 2).unwrap();
        assert_eq!(g.edge_count(), 8);
        let indeg = g.in_degrees();
        for j in 0..4 {
            assert_eq!(g.out_degree(4 + j), 2);
        }
        assert_eq!(indeg[..4], [2; 4]);
        assert_eq!(biregular_digraph(1, 1).unwrap().edges(), &[(1, 0)]);
        let full = biregular_digraph(5, 5).unwrap();
        for j in 0..5 {
            for s in 0..5 {
                assert!(full.has_edge(5 + j, s));
            }
        }
        assert!(biregular_digraph(3, 4).is_err());
        assert!(biregular_digraph(3, 0).is_err());
    }

    #[test]
    fn explicit_core_padding_accounting() {
        let g = assemble_with_core(10, 30, Regime::CompleteBipartite, 4, 2).unwrap();
        assert_eq!(g.digraph().vertex_count(), 10);
        assert_eq!(g.digraph().edge_count(), 30);
        assert_eq!(g.network_edges().len(), 16);
        assert_eq!(g.biregular_edges().len(), 8);
        assert_eq!(g.padding_edges().len(), 6);
        assert_eq!(g.digraph().vertex_count() - g.network().vertex_count(), 2);
        assert_eq!(g.source(), 0);
        assert_eq!(g.eligible_edges().count(), 6);
    }

    fn check_partition(g: &SparseHardGraph) {
        let m = g.digraph().edge_count();
        assert_eq!(
            g.network_edges().len() + g.biregular_edges().len() + g.padding_edges().len(),
            m
        );
        assert_eq!(g.network_edges().start, 0);
        assert_eq!(g.network_edges().end, g.biregular_edges().start);
        assert_eq!(g.biregular_edges().end, g.padding_edges().start);
        let (s, t, d) = (g.s(), g.t(), g.degree());
        let mut out = vec![0; g.digraph().vertex_count()];
        let mut inn = vec![0; g.digraph().vertex_count()];
        for e in g.biregular_edges() {
            let (tail, head) = g.digraph().edges()[e];
            assert!(t.contains(&tail) && s.contains(&head));
            out[tail] += 1;
            inn[head] += 1;
        }
        assert!(t.iter().all(|&v| out[v] == d));
        assert!(s.iter().all(|&v| inn[v] == d));
        for e in g.network_edges() {
            assert_eq!(g.digraph().edges()[e], {
                let (a, b) = g.network().graph().edges()[e];
                (a, b)
            });
        }
    }

    #[test]
    fn budgets_are_met_exactly_across_a_grid() {
        let mut built = 0;
        for n in 4..=24 {
            for m in (n..=n * (n - 1)).step_by(7) {
                for regime in [Regime::CompleteBipartite, Regime::DenseClos { eps: 0.5 }] {
                    match assemble_hard_graph(n, m, regime) {
                        Ok(g) => {
                            assert_eq!(g.digraph().vertex_count(), n);
                            assert_eq!(g.digraph().edge_count(), m);
                            assert!(2 * g.network_edges().len() <= m);
                            check_partition(&g);
                            built += 1;
                        }
                        Err(Error::Infeasible(_)) => {}
                        Err(other) => panic!("n={n} m={m}: {other}"),
                    }
                }
            }
        }
        assert!(built > 100);
        assert!(matches!(
            assemble_hard_graph(3, 2, Regime::CompleteBipartite),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(
            assemble_hard_graph(5, 5, Regime::CompleteBipartite),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn dense_clos_with_eps_one_is_complete_bipartite() {
        for (n, m) in [(12, 80), (20, 200), (30, 400)] {
            let a = assemble_hard_graph(n, m, Regime::CompleteBipartite).unwrap();
            let b = assemble_hard_graph(n, m, Regime::DenseClos { eps: 1.0 }).unwrap();
            assert!(2 * a.capacity() * a.capacity() <= m);
            assert_eq!(a.digraph(), b.digraph());
            assert_eq!(a.degree(), b.degree());
        }
    }

    #[test]
    fn samples_are_valid() {
        let g = assemble_with_core(40, 400, Regime::DenseClos { eps: 0.5 }, 9, 4).unwrap();
        check_partition(&g);
        let c = g.capacity();
        let d = g.degree();
        for seed in 0..40 {
            let sample = sample_hard_instance(&g, seed);
            assert!(2 * sample.chosen_edges.len() + 2 >= c);
            let mut seen = HashSet::new();
            for &e in &sample.chosen_edges {
                let (t, h) = g.digraph().edges()[e];
                assert_ne!(h, g.source());
                assert!(seen.insert(t) && seen.insert(h));
            }
            let mut on_path = HashSet::new();
            assert!(sample.assembled_path.iter().all(|v| on_path.insert(*v)));
            let target = oracle_distances(&sample.instance).unwrap();
            for &v in &sample.assembled_path {
                assert_eq!(target[v], Dist::Finite(0));
            }
            for e in 0..g.digraph().edge_count() {
                let w = sample.weights.as_slice()[e];
                match g.edge_class(e) {
                    EdgeClass::Padding => assert_eq!(w, g.padding_weight()),
                    _ => assert!(w == 0 || w == 1),
                }
            }
            let zeros = sample
                .weights
                .as_slice()
                .iter()
                .filter(|&&w| w == 0)
                .count();
            assert_eq!(zeros, sample.assembled_path.len() - 1);
            let fb = append_fallback(&RelaxationSchedule::empty(g.digraph()), g.digraph()).unwrap();
            let r = execute_schedule(&sample.instance, &fb).unwrap();
            assert_eq!(r.final_distances, target);
            assert!(d >= 1);
        }
        assert_eq!(sample_hard_instance(&g, 5), sample_hard_instance(&g, 5));
    }

    #[test]
    fn each_draw_removes_few_edges() {
        let g = assemble_with_core(70, 1300, Regime::CompleteBipartite, 32, 8).unwrap();
        let d = g.degree();
        for seed in 0..20 {
            let sample = sample_hard_instance(&g, seed);
            let mut used = HashSet::new();
            let available = |used: &HashSet<usize>| {
                g.eligible_edges()
                    .filter(|&e| {
                        let (t, h) = g.digraph().edges()[e];
                        !used.contains(&t) && !used.contains(&h)
                    })
                    .count()
            };
            for &e in &sample.chosen_edges {
                let before = available(&used);
                let (t, h) = g.digraph().edges()[e];
                used.insert(t);
                used.insert(h);
                let after = available(&used);
                assert!(before - after - 1 <= 2 * (d - 1));
            }
            assert_eq!(available(&used), 0);
            assert!(2 * sample.chosen_edges.len() + 2 >= g.capacity());
        }
    }

    #[test]
    fn padding_weight_is_neutral() {
        let g = assemble_with_core(30, 200, Regime::CompleteBipartite, 6, 3).unwrap();
        let sample = sample_hard_instance(&g, 3);
        let base = oracle_distances(&sample.instance).unwrap();
        let mut heavier = sample.weights.clone();
        for e in g.padding_edges() {
            heavier.0[e] *= 5;
        }
        let inst = Instance::new(g.digraph().clone(), g.source(), heavier).unwrap();
        let d = oracle_distances(&inst).unwrap();
        for v in 0..g.network().vertex_count() {
            assert_eq!(d[v], base[v]);
        }
    }

    #[test]
    fn json_round_trip() {
        let g = assemble_hard_graph(30, 150, Regime::DenseClos { eps: 0.5 }).unwrap();
        let text = serde_json::to_string(&g.to_json()).unwrap();
        assert!(text.contains(r#""S":["#));
        let back: SparseHardGraphJson = serde_json::from_str(&text).unwrap();
        assert_eq!(SparseHardGraph::from_json(&back).unwrap(), g);
    }

    #[test]
    fn sparse_floor_examples() {
        assert_eq!(sparse_floor(32, 1024), 1024);
        assert_eq!(sparse_floor(4, 8), 1);
        assert_eq!(sparse_floor(3, 7), 0);
    }
}
