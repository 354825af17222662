//! Exhaustive, lazy path enumeration, loops included.

use std::collections::VecDeque;

use crate::graph::{AllocationGraph, Hop, InterfaceId, NodeId, Path};
use crate::resource::Resource;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumerationMode {
    /// Terminated paths of length `1..=max_len`.
    Terminated { max_len: usize },
    /// Non-terminated paths of length exactly `len`.
    Preliminary { len: usize },
}

impl EnumerationMode {
    pub fn bound(self) -> usize {
        match self {
            EnumerationMode::Terminated { max_len } => max_len,
            EnumerationMode::Preliminary { len } => len,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PathFilter {
    /// First hop enters at this `(node, ingress)`. Without it, paths start at
    /// the local interface of every node.
    pub start: Option<(NodeId, InterfaceId)>,
    /// Only paths containing this hop at least once.
    pub through: Option<Hop>,
    /// Skip paths with a zero pair allocation. Every allocator gives them zero.
    pub valid_only: bool,
}

impl PathFilter {
    pub fn valid() -> Self {
        Self {
            valid_only: true,
            ..Self::default()
        }
    }

    pub fn from_local(node: NodeId) -> Self {
        Self {
            start: Some((node, InterfaceId::Local)),
            ..Self::default()
        }
    }

    pub fn start(mut self, node: NodeId, ingress: InterfaceId) -> Self {
        self.start = Some((node, ingress));
        self
    }

    pub fn through(mut self, hop: Hop) -> Self {
        self.through = Some(hop);
        self
    }

    pub fn valid_only(mut self) -> Self {
        self.valid_only = true;
        self
    }
}

struct Frame {
    hops: Vec<Hop>,
    next: usize,
}

/// Depth-first stream of the paths selected by a mode and a filter. Each path
/// is produced once.
pub struct PathEnumeration<'g, R> {
    graph: &'g AllocationGraph<R>,
    mode: EnumerationMode,
    filter: PathFilter,
    /// Hop distance of every node to the node in front of the through-hop ingress.
    through_dist: Option<Vec<usize>>,
    stack: Vec<Frame>,
    path: Vec<Hop>,
    through_hits: usize,
    zero_hops: usize,
    truncated: bool,
}

/// Streams the requested path set. A bound of zero yields nothing.
pub fn enumerate_paths<R: Resource>(
    graph: &AllocationGraph<R>,
    mode: EnumerationMode,
    filter: PathFilter,
) -> PathEnumeration<'_, R> {
    let roots: Vec<Hop> = match filter.start {
        Some((node, ingress)) => graph
            .node(node)
            .matrix()
            .interfaces()
            .map(|egress| Hop::new(node, ingress, egress))
            .collect(),
        None => graph
            .node_ids()
            .flat_map(|n| {
                graph
                    .node(n)
                    .matrix()
                    .interfaces()
                    .map(move |egress| Hop::new(n, InterfaceId::Local, egress))
            })
            .collect(),
    };
    let through_dist = match filter.through {
        Some(Hop {
            node,
            ingress: InterfaceId::External(e),
            ..
        }) => Some(distances_to(graph, graph.peer(node, e).node)),
        _ => None,
    };
    let stack = if mode.bound() == 0 {
        Vec::new()
    } else {
        vec![Frame { hops: roots, next: 0 }]
    };
    PathEnumeration {
        graph,
        mode,
        filter,
        through_dist,
        stack,
        path: Vec::new(),
        through_hits: 0,
        zero_hops: 0,
        truncated: false,
    }
}

fn distances_to<R: Resource>(graph: &AllocationGraph<R>, target: NodeId) -> Vec<usize> {
    let mut dist = vec![usize::MAX; graph.node_count()];
    dist[target.0] = 0;
    let mut queue = VecDeque::from([target]);
    while let Some(v) = queue.pop_front() {
        for w in graph.neighbors(v) {
            if dist[w.0] == usize::MAX {
                dist[w.0] = dist[v.0] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

impl<R: Resource> PathEnumeration<'_, R> {
    /// `true` once some valid path was cut at the length bound while a positive
    /// continuation existed, so longer valid paths exist. Only final after the
    /// stream is exhausted.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Earliest hop number at which the through-hop can still occur after the
    /// current path leaves `v` through external interface `e`.
    fn earliest_through(&self, v: NodeId, e: usize) -> Option<usize> {
        let through = self.filter.through?;
        let len = self.path.len();
        let InterfaceId::External(ti) = through.ingress else {
            // a local ingress only occurs on the first hop
            return Some(usize::MAX);
        };
        let peer = self.graph.peer(v, e);
        if peer.node == through.node && peer.interface == ti {
            return Some(len + 1);
        }
        let d = self.through_dist.as_ref().expect("set with through")[peer.node.0];
        Some(if d == usize::MAX { usize::MAX } else { len + 2 + d })
    }

    fn has_positive_continuation(&self, v: NodeId, e: usize) -> bool {
        let peer = self.graph.peer(v, e);
        let m = self.graph.node(peer.node).matrix();
        m.interfaces()
            .any(|j| m.get(InterfaceId::External(peer.interface), j).is_positive())
    }

    fn children(&mut self, hop: Hop) -> Vec<Hop> {
        let InterfaceId::External(e) = hop.egress else {
            return Vec::new();
        };
        let bound = self.mode.bound();
        if self.path.len() >= bound {
            if matches!(self.mode, EnumerationMode::Terminated { .. })
                && self.zero_hops == 0
                && self.has_positive_continuation(hop.node, e)
            {
                self.truncated = true;
            }
            return Vec::new();
        }
        if self.through_hits == 0 {
            if let Some(earliest) = self.earliest_through(hop.node, e) {
                if earliest > bound {
                    return Vec::new();
                }
            }
        }
        let peer = self.graph.peer(hop.node, e);
        let ingress = InterfaceId::External(peer.interface);
        self.graph
            .node(peer.node)
            .matrix()
            .interfaces()
            .map(|egress| Hop::new(peer.node, ingress, egress))
            .collect()
    }

    fn pop_hop(&mut self) {
        if let Some(h) = self.path.pop() {
            if Some(h) == self.filter.through {
                self.through_hits -= 1;
            }
            if !self.pair_of(h).is_positive() {
                self.zero_hops -= 1;
            }
        }
    }

    fn pair_of(&self, h: Hop) -> &R {
        self.graph.node(h.node).matrix().get(h.ingress, h.egress)
    }
}

impl<R: Resource> Iterator for PathEnumeration<'_, R> {
    type Item = Path;

    fn next(&mut self) -> Option<Path> {
        loop {
            let frame = self.stack.last_mut()?;
            if frame.next == frame.hops.len() {
                self.stack.pop();
                self.pop_hop();
                continue;
            }
            let hop = frame.hops[frame.next];
            frame.next += 1;

            let positive = self.pair_of(hop).is_positive();
            if self.filter.valid_only && !positive {
                continue;
            }
            self.path.push(hop);
            if !positive {
                self.zero_hops += 1;
            }
            if Some(hop) == self.filter.through {
                self.through_hits += 1;
            }
            let children = self.children(hop);
            self.stack.push(Frame { hops: children, next: 0 });

            let hit = self.filter.through.is_none() || self.through_hits > 0;
            let terminated = self.path[0].ingress.is_local() && hop.egress.is_local();
            let emit = hit
                && match self.mode {
                    EnumerationMode::Terminated { .. } => terminated,
                    EnumerationMode::Preliminary { len } => !terminated && self.path.len() == len,
                };
            if emit {
                return Some(Path::new(self.path.clone()));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;

    #[test]
    fn single_hop_preliminaries_from_a1() {
        let g = fixture::example_graph();
        let a1 = g.find_node("A1").unwrap();
        let paths: Vec<Path> =
            enumerate_paths(&g, EnumerationMode::Preliminary { len: 1 }, PathFilter::from_local(a1)).collect();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].hops, vec![Hop::new(a1, InterfaceId::Local, InterfaceId::External(0))]);
    }

    #[test]
    fn zero_bound_is_empty() {
        let g = fixture::example_graph();
        assert_eq!(enumerate_paths(&g, EnumerationMode::Terminated { max_len: 0 }, PathFilter::default()).count(), 0);
    }

    #[test]
    fn through_filter_matches_post_hoc_filter() {
        let g = fixture::example_graph();
        let p = fixture::pi1(&g);
        for hop in p.hops {
            let mode = EnumerationMode::Terminated { max_len: 6 };
            let filtered: Vec<Path> = enumerate_paths(&g, mode, PathFilter::default().through(hop)).collect();
            let post: Vec<Path> = enumerate_paths(&g, mode, PathFilter::default())
                .filter(|p| p.hops.contains(&hop))
                .collect();
            assert_eq!(filtered, post);
            assert!(!filtered.is_empty());
        }
    }

    #[test]
    fn truncation_is_reported() {
        let g = fixture::example_graph();
        let mut e = enumerate_paths(&g, EnumerationMode::Terminated { max_len: 2 }, PathFilter::valid());
        e.by_ref().for_each(drop);
        assert!(e.truncated());
    }
}
