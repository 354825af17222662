//! k shortest simple paths by hop count (Yen), ties broken by the
//! lexicographic order of the node sequence.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{AllocationGraph, Hop, InterfaceId, NodeId, Path};
use crate::resource::Resource;

/// Lexicographically smallest among the shortest `src -> dst` paths that avoid
/// `banned_nodes` and never step from `src` to a node in `banned_next`.
fn smallest_shortest(
    adjacency: &[Vec<usize>],
    src: usize,
    dst: usize,
    banned_nodes: &[bool],
    banned_next: &[usize],
) -> Option<Vec<usize>> {
    if banned_nodes[src] || banned_nodes[dst] {
        return None;
    }
    let allowed = |v: usize, w: usize| !banned_nodes[w] && !(v == src && banned_next.contains(&w));
    // distances towards dst over allowed edges, walked backwards; nodes at or
    // beyond the distance of src never lie on a shortest path from it
    let mut dist = vec![usize::MAX; adjacency.len()];
    dist[dst] = 0;
    let mut queue = VecDeque::from([dst]);
    while let Some(w) = queue.pop_front() {
        if dist[src] != usize::MAX && dist[w] >= dist[src] {
            break;
        }
        for &v in &adjacency[w] {
            if dist[v] == usize::MAX && !banned_nodes[v] && allowed(v, w) {
                dist[v] = dist[w] + 1;
                queue.push_back(v);
            }
        }
    }
    if dist[src] == usize::MAX {
        return None;
    }
    let mut path = vec![src];
    let mut v = src;
    while v != dst {
        v = *adjacency[v]
            .iter()
            .find(|&&w| dist[w] != usize::MAX && dist[w] + 1 == dist[v] && allowed(v, w))
            .expect("a shortest-path successor exists");
        path.push(v);
    }
    Some(path)
}

/// Up to `k` simple node paths from `src` to `dst`, ordered by length then
/// lexicographically. `adjacency` lists must be sorted ascending.
pub fn k_shortest_node_paths(adjacency: &[Vec<usize>], src: usize, dst: usize, k: usize) -> Result<Vec<Vec<usize>>> {
    if src == dst {
        return Err(Error::Precondition("source and destination coincide".into()));
    }
    let n = adjacency.len();
    if src >= n || dst >= n {
        return Err(Error::Precondition(format!("node out of range 0..{n}")));
    }
    let mut found: Vec<Vec<usize>> = Vec::new();
    if k == 0 {
        return Ok(found);
    }
    let none_banned = vec![false; n];
    let Some(first) = smallest_shortest(adjacency, src, dst, &none_banned, &[]) else {
        return Ok(found);
    };
    found.push(first);
    let mut candidates: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    while found.len() < k {
        let last = found.last().expect("non-empty").clone();
        for i in 0..last.len() - 1 {
            let spur = last[i];
            let root = &last[..=i];
            let banned_next: Vec<usize> = found
                .iter()
                .filter(|p| p.len() > i + 1 && p[..=i] == *root)
                .map(|p| p[i + 1])
                .collect();
            let mut banned_nodes = vec![false; n];
            for &v in &root[..i] {
                banned_nodes[v] = true;
            }
            if let Some(tail) = smallest_shortest(adjacency, spur, dst, &banned_nodes, &banned_next) {
                let mut candidate = root[..i].to_vec();
                candidate.extend(tail);
                if !found.contains(&candidate) {
                    candidates.insert((candidate.len(), candidate));
                }
            }
        }
        let Some((_, next)) = candidates.pop_first() else {
            break;
        };
        found.push(next);
    }
    Ok(found)
}

/// Terminated interface path along a node path: local into the first node,
/// local out of the last one.
pub fn node_path_to_path<R: Resource>(graph: &AllocationGraph<R>, nodes: &[usize]) -> Result<Path> {
    if nodes.is_empty() {
        return Err(Error::MalformedPath {
            hop: 0,
            reason: "empty node path".into(),
        });
    }
    let towards = |k: usize, other: usize| -> Result<InterfaceId> {
        graph
            .interface_towards(NodeId(nodes[k]), NodeId(other))
            .map(InterfaceId::External)
            .ok_or_else(|| Error::MalformedPath {
                hop: k + 1,
                reason: format!("nodes #{} and #{other} are not adjacent", nodes[k]),
            })
    };
    let mut hops = Vec::with_capacity(nodes.len());
    for k in 0..nodes.len() {
        let ingress = if k == 0 { InterfaceId::Local } else { towards(k, nodes[k - 1])? };
        let egress = if k + 1 == nodes.len() { InterfaceId::Local } else { towards(k, nodes[k + 1])? };
        hops.push(Hop::new(NodeId(nodes[k]), ingress, egress));
    }
    Ok(Path::new(hops))
}

/// [`k_shortest_node_paths`] on an allocation graph, as terminated paths.
pub fn k_shortest_paths<R: Resource>(graph: &AllocationGraph<R>, src: NodeId, dst: NodeId, k: usize) -> Result<Vec<Path>> {
    k_shortest_node_paths(&graph.adjacency(), src.0, dst.0, k)?
        .iter()
        .map(|p| node_path_to_path(graph, p))
        .collect()
}
