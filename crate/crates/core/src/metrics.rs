//! α-cover: the share of destinations a source reaches with an aggregated
//! multipath GMA allocation strictly above α.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::allocators::gma_direct;
use crate::error::Result;
use crate::graph::{path_view, AllocationGraph, NodeId};
use crate::resource::{Rational, Resource};
use crate::topology::{k_shortest_node_paths, node_path_to_path};

/// Sum of GMA allocations over the `k` shortest paths from `src` to `dst`;
/// zero when unreachable.
pub fn pair_allocation_sum<R: Resource>(graph: &AllocationGraph<R>, src: NodeId, dst: NodeId, k: usize) -> Result<R> {
    let adjacency = graph.adjacency();
    let sums = pair_sums(graph, &adjacency, src, dst, k)?;
    Ok(sums.last().cloned().unwrap_or_else(R::zero))
}

/// Cumulative allocation with the first `1..=k_max` paths. Path sets are
/// nested, so entry `k-1` is the sum for `k`. Missing paths add nothing.
fn pair_sums<R: Resource>(
    graph: &AllocationGraph<R>,
    adjacency: &[Vec<usize>],
    src: NodeId,
    dst: NodeId,
    k_max: usize,
) -> Result<Vec<R>> {
    let paths = k_shortest_node_paths(adjacency, src.0, dst.0, k_max)?;
    let mut out = Vec::with_capacity(k_max);
    let mut total = R::zero();
    for k in 0..k_max {
        if let Some(nodes) = paths.get(k) {
            let path = node_path_to_path(graph, nodes)?;
            total = total + gma_direct(&path_view(graph, &path)?).value;
        }
        out.push(total.clone());
    }
    Ok(out)
}

/// Covered destinations out of all other nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Cover {
    pub reached: usize,
    pub total: usize,
}

impl Cover {
    pub fn fraction(self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.reached as f64 / self.total as f64
        }
    }

    pub fn exact(self) -> Rational {
        if self.total == 0 {
            Rational::from_u64(0)
        } else {
            Rational::from_ratio(self.reached as i64, self.total as i64)
        }
    }
}

/// Fraction of destinations whose `k`-path allocation sum is strictly above `alpha`.
pub fn alpha_cover<R: Resource>(graph: &AllocationGraph<R>, src: NodeId, alpha: &R, k: usize) -> Result<Cover> {
    let covers = source_covers(graph, &graph.adjacency(), src, alpha, &[k])?;
    Ok(covers[0])
}

fn source_covers<R: Resource>(
    graph: &AllocationGraph<R>,
    adjacency: &[Vec<usize>],
    src: NodeId,
    alpha: &R,
    ks: &[usize],
) -> Result<Vec<Cover>> {
    let k_max = ks.iter().copied().max().unwrap_or(0);
    let total = graph.node_count() - 1;
    let mut reached = vec![0usize; ks.len()];
    for dst in graph.node_ids().filter(|&d| d != src) {
        let sums = pair_sums(graph, adjacency, src, dst, k_max)?;
        for (slot, &k) in ks.iter().enumerate() {
            if k > 0 && sums[k - 1] > *alpha {
                reached[slot] += 1;
            }
        }
    }
    Ok(reached.into_iter().map(|reached| Cover { reached, total }).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NodeCover {
    pub node: NodeId,
    pub degree: usize,
    pub cover: Cover,
}

/// Per-node covers for one `k` with their order statistics. The median of an
/// even count is the lower middle element.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverStats {
    pub k: usize,
    pub per_node: Vec<NodeCover>,
    pub min: Cover,
    pub median: Cover,
    pub max: Cover,
}

impl CoverStats {
    fn from_nodes(k: usize, per_node: Vec<NodeCover>) -> Self {
        let mut sorted: Vec<Cover> = per_node.iter().map(|n| n.cover).collect();
        // every cover of a graph shares the denominator
        sorted.sort_by_key(|c| c.reached);
        let empty = Cover { reached: 0, total: 0 };
        let min = sorted.first().copied().unwrap_or(empty);
        let max = sorted.last().copied().unwrap_or(empty);
        let median = if sorted.is_empty() { empty } else { sorted[(sorted.len() - 1) / 2] };
        Self {
            k,
            per_node,
            min,
            median,
            max,
        }
    }
}

/// Cover statistics for each `k` in `ks`, computing the paths once per pair.
pub fn graph_cover_stats<R: Resource>(graph: &AllocationGraph<R>, alpha: &R, ks: &[usize]) -> Result<Vec<CoverStats>> {
    let adjacency = graph.adjacency();
    let per_source: Vec<Vec<Cover>> = graph
        .node_ids()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|src| source_covers(graph, &adjacency, src, alpha, ks))
        .collect::<Result<_>>()?;
    Ok(ks
        .iter()
        .enumerate()
        .map(|(slot, &k)| {
            let per_node = per_source
                .iter()
                .enumerate()
                .map(|(v, covers)| NodeCover {
                    node: NodeId(v),
                    degree: graph.node(NodeId(v)).degree(),
                    cover: covers[slot],
                })
                .collect();
            CoverStats::from_nodes(k, per_node)
        })
        .collect())
}

/// Relative change of the median cover from `base` to `other`; `None` when
/// the base median is zero.
pub fn improvement(base: &CoverStats, other: &CoverStats) -> Option<f64> {
    let b = base.median.fraction();
    (b > 0.0).then(|| (other.median.fraction() - b) / b)
}

/// Largest relative difference between float and exact pair allocation sums.
/// A zero exact value must come out as exactly zero in float mode.
pub fn float_exact_disagreement(
    exact: &AllocationGraph<Rational>,
    float: &AllocationGraph<f64>,
    pairs: &[(NodeId, NodeId)],
    k: usize,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &(s, d) in pairs {
        let e = pair_allocation_sum(exact, s, d, k)?.to_f64();
        let f = pair_allocation_sum(float, s, d, k)?;
        let rel = if e == 0.0 {
            if f == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            ((f - e) / e).abs()
        };
        worst = worst.max(rel);
    }
    Ok(worst)
}

/// Cover results of one graph across several `k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphCoverReport {
    pub graph: String,
    pub nodes: usize,
    pub diameter: usize,
    pub avg_degree: f64,
    pub alpha: String,
    pub stats: Vec<CoverStats>,
}

impl GraphCoverReport {
    /// Improvement of `k` over `k = 1`, if both were computed.
    pub fn improvement(&self, k: usize) -> Option<f64> {
        let base = self.stats.iter().find(|s| s.k == 1)?;
        let other = self.stats.iter().find(|s| s.k == k)?;
        improvement(base, other)
    }
}

#[derive(Serialize)]
struct NodeRow<'a> {
    graph: &'a str,
    node: usize,
    degree: usize,
    k: usize,
    alpha: &'a str,
    cover: f64,
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    graph: &'a str,
    nodes: usize,
    diameter: usize,
    avg_degree: f64,
    k: usize,
    alpha: &'a str,
    min: f64,
    median: f64,
    max: f64,
    improvement_pct: Option<f64>,
}

/// Columns `graph,node,degree,k,alpha,cover`.
pub fn write_node_csv<W: Write>(out: W, reports: &[GraphCoverReport]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        for s in &r.stats {
            for n in &s.per_node {
                w.serialize(NodeRow {
                    graph: &r.graph,
                    node: n.node.0,
                    degree: n.degree,
                    k: s.k,
                    alpha: &r.alpha,
                    cover: n.cover.fraction(),
                })?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Columns `graph,nodes,diameter,avg_degree,k,alpha,min,median,max,improvement_pct`.
/// The improvement is relative to `k = 1` in percent, empty when undefined.
pub fn write_summary_csv<W: Write>(out: W, reports: &[GraphCoverReport]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        for s in &r.stats {
            w.serialize(SummaryRow {
                graph: &r.graph,
                nodes: r.nodes,
                diameter: r.diameter,
                avg_degree: r.avg_degree,
                k: s.k,
                alpha: &r.alpha,
                min: s.min.fraction(),
                median: s.median.fraction(),
                max: s.max.fraction(),
                improvement_pct: r.improvement(s.k).map(|i| i * 100.0),
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;

    #[test]
    fn fixture_pair_sums() {
        let g = fixture::example_graph();
        let a1 = g.find_node("A1").unwrap();
        let c = g.find_node("C").unwrap();
        // the line graph has one path: pi1
        let one = pair_allocation_sum(&g, a1, c, 1).unwrap();
        assert_eq!(one, Rational::from_ratio(1, 16));
        assert_eq!(pair_allocation_sum(&g, a1, c, 3).unwrap(), one);
    }

    #[test]
    fn cover_extremes() {
        let g = fixture::example_graph();
        let a1 = g.find_node("A1").unwrap();
        let huge = Rational::from_u64(1000);
        assert_eq!(alpha_cover(&g, a1, &huge, 1).unwrap().reached, 0);
        let tiny = Rational::from_ratio(1, 1_000_000);
        // every node on the line gets a positive share from A1
        assert_eq!(alpha_cover(&g, a1, &tiny, 1).unwrap(), Cover { reached: 4, total: 4 });
    }

    #[test]
    fn lower_median() {
        let cover = |reached| NodeCover {
            node: NodeId(0),
            degree: 1,
            cover: Cover { reached, total: 4 },
        };
        let s = CoverStats::from_nodes(1, vec![cover(4), cover(1), cover(3), cover(2)]);
        assert_eq!(s.median.reached, 2);
        assert_eq!((s.min.reached, s.max.reached), (1, 4));
    }
}
