//! Directed graphs, integer weightings and tentative-distance arithmetic.
//!
//! A [`Digraph`] is simple (no loops, no parallel edges) and its edge indices
//! never move: edge `i` is the `i`-th entry of the list it was built from.
//! Schedules refer to edges by these indices.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::oracle::oracle_distances;

/// Seeded generator used everywhere a seed appears in the public API.
pub(crate) fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    out_edges: Vec<Vec<usize>>,
    fingerprint: String,
}

impl Digraph {
    /// Builds a digraph, rejecting out-of-range endpoints, self-loops and
    /// duplicate `(tail, head)` pairs.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        for (i, &(tail, head)) in edges.iter().enumerate() {
            if tail >= vertex_count || head >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "edge {i} = ({tail}, {head}) has an endpoint outside 0..{vertex_count}"
                )));
            }
            if tail == head {
                return Err(Error::InvalidGraph(format!(
                    "edge {i} is a self-loop at {tail}"
                )));
            }
            if !seen.insert((tail, head)) {
                return Err(Error::InvalidGraph(format!(
                    "edge {i} duplicates ({tail}, {head})"
                )));
            }
        }
        let mut out_edges = vec![Vec::new(); vertex_count];
        for (i, &(tail, _)) in edges.iter().enumerate() {
            out_edges[tail].push(i);
        }
        let fingerprint = fingerprint_of(vertex_count, &edges);
        Ok(Digraph {
            vertex_count,
            edges,
            out_edges,
            fingerprint,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> Result<(usize, usize)> {
        self.edges.get(index).copied().ok_or(Error::EdgeOutOfRange {
            edge: index,
            edge_count: self.edges.len(),
        })
    }

    /// Indices of the edges leaving `vertex`, in index order.
    pub fn out_edges(&self, vertex: usize) -> &[usize] {
        &self.out_edges[vertex]
    }

    pub fn find_edge(&self, tail: usize, head: usize) -> Option<usize> {
        self.out_edges
            .get(tail)?
            .iter()
            .copied()
            .find(|&e| self.edges[e].1 == head)
    }

    pub fn has_edge(&self, tail: usize, head: usize) -> bool {
        self.find_edge(tail, head).is_some()
    }

    pub fn out_degree(&self, vertex: usize) -> usize {
        self.out_edges[vertex].len()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for &(_, head) in &self.edges {
            deg[head] += 1;
        }
        deg
    }

    /// `"<n>-<m>-<hash>"`, where the hash covers the ordered edge list.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph")
            .field("vertex_count", &self.vertex_count)
            .field("edge_count", &self.edges.len())
            .field("fingerprint", &self.fingerprint)
            .finish()
    }
}

fn fingerprint_of(vertex_count: usize, edges: &[(usize, usize)]) -> String {
    let mut hasher = Sha256::new();
    hasher.update((vertex_count as u64).to_le_bytes());
    for &(t, h) in edges {
        hasher.update((t as u64).to_le_bytes());
        hasher.update((h as u64).to_le_bytes());
    }
    let digest = hasher.finalize();
    let hash: String = digest[..8].iter().map(|b| format!("{b:02x}")).collect();
    format!("{}-{}-{}", vertex_count, edges.len(), hash)
}

/// All `n(n-1)` ordered pairs, in lexicographic `(tail, head)` order.
pub fn complete_digraph(n: usize) -> Result<Digraph> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "complete digraph needs n >= 1".into(),
        ));
    }
    let mut edges = Vec::with_capacity(n * (n - 1));
    for tail in 0..n {
        for head in 0..n {
            if tail != head {
                edges.push((tail, head));
            }
        }
    }
    Digraph::new(n, edges)
}

/// Index of edge `(tail, head)` in [`complete_digraph`]`(n)`.
pub fn complete_edge_index(n: usize, tail: usize, head: usize) -> usize {
    debug_assert!(tail != head && tail < n && head < n);
    tail * (n - 1) + if head < tail { head } else { head - 1 }
}

/// A tentative or exact distance: a finite integer or unreachable (`+inf`).
///
/// The derived order places every finite value below `Unreachable`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dist {
    Finite(i64),
    Unreachable,
}

impl Dist {
    pub fn is_finite(self) -> bool {
        matches!(self, Dist::Finite(_))
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Dist::Finite(d) => Some(d),
            Dist::Unreachable => None,
        }
    }

    /// `self + weight`, with `Unreachable` absorbing and finite overflow reported.
    pub fn checked_add(self, weight: i64) -> Result<Dist> {
        match self {
            Dist::Finite(d) => d
                .checked_add(weight)
                .map(Dist::Finite)
                .ok_or(Error::Overflow),
            Dist::Unreachable => Ok(Dist::Unreachable),
        }
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::Finite(d) => write!(f, "{d}"),
            Dist::Unreachable => f.write_str("inf"),
        }
    }
}

impl Serialize for Dist {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.finite().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Dist {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(Option::<i64>::deserialize(deserializer)?.map_or(Dist::Unreachable, Dist::Finite))
    }
}

/// One signed integer length per edge index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightAssignment(pub Vec<i64>);

impl WeightAssignment {
    pub fn uniform(edge_count: usize, weight: i64) -> Self {
        WeightAssignment(vec![weight; edge_count])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

/// Weights `r(u->v) + p(u) - p(v)` for explicit potentials `p` and slacks `r`.
///
/// Any cycle weighs the sum of its slacks, so non-negative slacks rule out
/// negative cycles while still allowing negative edges.
pub fn potential_reweight(
    digraph: &Digraph,
    potentials: &[i64],
    slacks: &[i64],
) -> Result<WeightAssignment> {
    if potentials.len() != digraph.vertex_count() {
        return Err(Error::InvalidParameter(format!(
            "{} potentials for {} vertices",
            potentials.len(),
            digraph.vertex_count()
        )));
    }
    if slacks.len() != digraph.edge_count() {
        return Err(Error::InvalidParameter(format!(
            "{} slacks for {} edges",
            slacks.len(),
            digraph.edge_count()
        )));
    }
    digraph
        .edges()
        .iter()
        .zip(slacks)
        .map(|(&(u, v), &r)| {
            r.checked_add(potentials[u])
                .and_then(|x| x.checked_sub(potentials[v]))
                .ok_or(Error::Overflow)
        })
        .collect::<Result<Vec<_>>>()
        .map(WeightAssignment)
}

/// Random negative-cycle-free weights: potentials in `[0, potential_max]`,
/// slacks in `[0, slack_max]`.
pub fn potential_weights(
    digraph: &Digraph,
    seed: u64,
    slack_max: i64,
    potential_max: i64,
) -> WeightAssignment {
    let mut rng = seeded_rng(seed);
    let slack_max = slack_max.max(0);
    let potential_max = potential_max.max(0);
    let potentials: Vec<i64> = (0..digraph.vertex_count())
        .map(|_| rng.gen_range(0..=potential_max))
        .collect();
    let weights = digraph
        .edges()
        .iter()
        .map(|&(u, v)| rng.gen_range(0..=slack_max) + potentials[u] - potentials[v])
        .collect();
    WeightAssignment(weights)
}

/// A digraph with a source vertex and one weight per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    digraph: Digraph,
    source: usize,
    weights: WeightAssignment,
}

impl Instance {
    pub fn new(digraph: Digraph, source: usize, weights: WeightAssignment) -> Result<Self> {
        if source >= digraph.vertex_count() {
            return Err(Error::InvalidParameter(format!(
                "source {source} outside 0..{}",
                digraph.vertex_count()
            )));
        }
        if weights.len() != digraph.edge_count() {
            return Err(Error::InvalidParameter(format!(
                "{} weights for {} edges",
                weights.len(),
                digraph.edge_count()
            )));
        }
        Ok(Instance {
            digraph,
            source,
            weights,
        })
    }

    /// Like [`Instance::new`], but also rejects negative cycles reachable from the source.
    pub fn checked(digraph: Digraph, source: usize, weights: WeightAssignment) -> Result<Self> {
        let instance = Instance::new(digraph, source, weights)?;
        oracle_distances(&instance)?;
        Ok(instance)
    }

    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn weights(&self) -> &WeightAssignment {
        &self.weights
    }

    pub fn weight(&self, edge: usize) -> i64 {
        self.weights.0[edge]
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: self.digraph.vertex_count(),
            source: self.source,
            edges: self
                .digraph
                .edges()
                .iter()
                .zip(self.weights.as_slice())
                .map(|(&(t, h), &w)| (t, h, w))
                .collect(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self> {
        let edges = json.edges.iter().map(|&(t, h, _)| (t, h)).collect();
        let weights = json.edges.iter().map(|&(_, _, w)| w).collect();
        Instance::new(
            Digraph::new(json.n, edges)?,
            json.source,
            WeightAssignment(weights),
        )
    }
}

/// Wire form of an [`Instance`]: `{"n", "source", "edges": [[tail, head, weight], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub source: usize,
    pub edges: Vec<(usize, usize, i64)>,
}
