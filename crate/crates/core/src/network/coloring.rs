//! Proper edge coloring of bipartite multigraphs with max-degree many colors.

use crate::error::{Error, Result};

/// Bipartite multigraph; parallel edges allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteMultigraph {
    left_count: usize,
    right_count: usize,
    edges: Vec<(usize, usize)>,
}

impl BipartiteMultigraph {
    pub fn new(left_count: usize, right_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(l, r)) = edges
            .iter()
            .find(|&&(l, r)| l >= left_count || r >= right_count)
        {
            return Err(Error::InvalidParameter(format!(
                "multiedge ({l}, {r}) outside {left_count} x {right_count}"
            )));
        }
        Ok(BipartiteMultigraph {
            left_count,
            right_count,
            edges,
        })
    }

    pub fn left_count(&self) -> usize {
        self.left_count
    }

    pub fn right_count(&self) -> usize {
        self.right_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn max_degree(&self) -> usize {
        let mut left = vec![0; self.left_count];
        let mut right = vec![0; self.right_count];
        for &(l, r) in &self.edges {
            left[l] += 1;
            right[r] += 1;
        }
        left.into_iter().chain(right).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColoring {
    pub colors: Vec<usize>,
}

impl EdgeColoring {
    /// Number of distinct colors used.
    pub fn color_count(&self) -> usize {
        let mut seen: Vec<usize> = self.colors.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }
}

/// Colors every multiedge with one of `max_degree` colors so that no two
/// multiedges sharing an endpoint match.
///
/// Edges are inserted one at a time. When the colors free at the two
/// endpoints differ, the two-colored chain leaving the left endpoint is
/// swapped, which frees a common color (the chain can never reach the right
/// endpoint in a bipartite graph).
pub fn konig_edge_coloring(g: &BipartiteMultigraph) -> EdgeColoring {
    let delta = g.max_degree();
    let mut at_left: Vec<Vec<Option<usize>>> = vec![vec![None; delta]; g.left_count];
    let mut at_right: Vec<Vec<Option<usize>>> = vec![vec![None; delta]; g.right_count];
    let mut colors = vec![usize::MAX; g.edges.len()];

    for (e, &(u, v)) in g.edges.iter().enumerate() {
        let alpha = free_color(&at_left[u]);
        let beta = free_color(&at_right[v]);
        let color = if at_right[v][alpha].is_none() {
            alpha
        } else if at_left[u][beta].is_none() {
            beta
        } else {
            // alpha is free at u and taken at v; beta is free at v and taken at u.
            let mut chain = Vec::new();
            let (mut x, mut on_left, mut want) = (u, true, beta);
            loop {
                let slot = if on_left {
                    at_left[x][want]
                } else {
                    at_right[x][want]
                };
                let Some(f) = slot else { break };
                chain.push(f);
                let (fl, fr) = g.edges[f];
                x = if on_left { fr } else { fl };
                on_left = !on_left;
                want = if want == alpha { beta } else { alpha };
            }
            for &f in &chain {
                let (fl, fr) = g.edges[f];
                at_left[fl][colors[f]] = None;
                at_right[fr][colors[f]] = None;
            }
            for &f in &chain {
                let (fl, fr) = g.edges[f];
                let swapped = if colors[f] == alpha { beta } else { alpha };
                colors[f] = swapped;
                at_left[fl][swapped] = Some(f);
                at_right[fr][swapped] = Some(f);
            }
            beta
        };
        debug_assert!(at_left[u][color].is_none() && at_right[v][color].is_none());
        colors[e] = color;
        at_left[u][color] = Some(e);
        at_right[v][color] = Some(e);
    }
    EdgeColoring { colors }
}

fn free_color(slots: &[Option<usize>]) -> usize {
    slots
        .iter()
        .position(Option::is_none)
        .expect("a vertex below max degree has a free color")
}

/// True when `coloring` is proper for `g` and uses colors below `palette`.
pub fn is_proper_coloring(
    g: &BipartiteMultigraph,
    coloring: &EdgeColoring,
    palette: usize,
) -> bool {
    if coloring.colors.len() != g.edges.len() {
        return false;
    }
    let mut left = std::collections::HashSet::new();
    let mut right = std::collections::HashSet::new();
    g.edges
        .iter()
        .zip(&coloring.colors)
        .all(|(&(l, r), &c)| c < palette && left.insert((l, c)) && right.insert((r, c)))
}
