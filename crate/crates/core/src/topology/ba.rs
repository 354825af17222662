//! Barabási–Albert preferential attachment.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Undirected simple graph on nodes `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    /// `(u, v)` with `u < v`, in creation order.
    edges: Vec<(usize, usize)>,
    /// Ascending neighbor lists.
    adjacency: Vec<Vec<usize>>,
}

impl SimpleGraph {
    /// Builds a graph from an edge list; rejects self-loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        let mut normalized = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b || a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("bad edge ({a}, {b})")));
            }
            let (u, v) = (a.min(b), a.max(b));
            if adjacency[u].contains(&v) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
            normalized.push((u, v));
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        Ok(Self {
            n,
            edges: normalized,
            adjacency,
        })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }
}

/// Seeds a clique on the first `m` nodes, then attaches every further node to
/// `m` distinct earlier nodes drawn with probability proportional to degree.
/// While no edge exists yet (`m = 1`), the draw is uniform.
pub fn generate_ba(node_count: usize, m: usize, seed: u64) -> Result<SimpleGraph> {
    if m == 0 {
        return Err(Error::InvalidConfig {
            field: "attachment",
            reason: "must be at least 1".into(),
        });
    }
    if m >= node_count {
        return Err(Error::InvalidConfig {
            field: "attachment",
            reason: format!("must be below the node count {node_count}"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(m * (m.saturating_sub(1)) / 2 + m * (node_count - m));
    // every edge endpoint once, so uniform picks are degree-proportional
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * edges.capacity());
    for v in 0..m {
        for u in 0..v {
            edges.push((u, v));
            endpoints.extend([u, v]);
        }
    }
    let mut chosen = Vec::with_capacity(m);
    for v in m..node_count {
        chosen.clear();
        while chosen.len() < m {
            let t = if endpoints.is_empty() {
                rng.gen_range(0..v)
            } else {
                endpoints[rng.gen_range(0..endpoints.len())]
            };
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            edges.push((t, v));
            endpoints.extend([t, v]);
        }
    }
    SimpleGraph::from_edges(node_count, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn attachment_one_gives_a_tree() {
        let g = generate_ba(8, 1, 7).unwrap();
        assert_eq!(g.edges().len(), 7);
    }

    #[test]
    fn edge_count_formula() {
        for (n, m) in [(64, 4), (20, 2), (33, 32), (10, 9)] {
            let g = generate_ba(n, m, 3).unwrap();
            assert_eq!(g.edges().len(), m * (m - 1) / 2 + m * (n - m));
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        assert_eq!(generate_ba(50, 3, 11).unwrap(), generate_ba(50, 3, 11).unwrap());
        assert_ne!(generate_ba(50, 3, 11).unwrap(), generate_ba(50, 3, 12).unwrap());
    }

    #[test]
    fn attachment_must_fit() {
        assert!(generate_ba(8, 8, 1).is_err());
        assert!(generate_ba(8, 0, 1).is_err());
    }
}
