//! Degree-gravity capacities and the proportional sharing policy.

use crate::graph::{AllocationGraph, AllocationMatrix, Endpoint, GraphBuilder, NodeId};
use crate::resource::Resource;

use super::ba::SimpleGraph;

/// The ten capacity levels 40, 80, ..., 400.
pub const DEFAULT_LEVELS: [u64; 10] = [40, 80, 120, 160, 200, 240, 280, 320, 360, 400];

/// Capacity per edge, in edge order. The product of the endpoint degrees is
/// min-max normalized and cut into `levels.len()` equal bins; bin `b` gets
/// `levels[b]`. A constant product maps to the first level.
pub fn assign_capacities(graph: &SimpleGraph, levels: &[u64]) -> Vec<u64> {
    let products: Vec<u64> = graph
        .edges()
        .iter()
        .map(|&(u, v)| (graph.degree(u) * graph.degree(v)) as u64)
        .collect();
    let (Some(&lo), Some(&hi)) = (products.iter().min(), products.iter().max()) else {
        return Vec::new();
    };
    let bins = levels.len() as u64;
    products
        .iter()
        .map(|&p| {
            let bin = if hi == lo { 0 } else { (bins * (p - lo) / (hi - lo)).min(bins - 1) };
            levels[bin as usize]
        })
        .collect()
}

/// Matrix of one node by the three policy steps, given the capacities of its
/// external interfaces. The local interface is treated as having the largest
/// of those capacities. Local-to-local and u-turn entries stay zero.
///
/// (i) `M_ij = cap_i`; (ii) `M_ij *= cap_j / conv_j`; (iii) with divergents of
/// the result of (ii), `M_ij *= cap_i / div_i` when `div_i > cap_j` (`strict`)
/// or when `div_i > cap_i` (otherwise).
pub fn sharing_matrix<R: Resource>(caps: &[R], strict: bool) -> AllocationMatrix<R> {
    let size = caps.len() + 1;
    let local_cap = caps
        .iter()
        .cloned()
        .reduce(|a, b| if b > a { b } else { a })
        .unwrap_or_else(R::zero);
    let cap = |slot: usize| if slot == 0 { local_cap.clone() } else { caps[slot - 1].clone() };
    let idx = |i: usize, j: usize| i * size + j;

    let mut m = vec![R::zero(); size * size];
    for i in 0..size {
        for j in 0..size {
            if i == j {
                continue;
            }
            m[idx(i, j)] = if i == 0 || j == 0 { local_cap.clone() } else { cap(i) };
        }
    }
    let conv: Vec<R> = (0..size)
        .map(|j| (0..size).fold(R::zero(), |acc, i| acc + m[idx(i, j)].clone()))
        .collect();
    for j in 0..size {
        if !conv[j].is_positive() {
            continue;
        }
        let factor = cap(j) / conv[j].clone();
        for i in 0..size {
            m[idx(i, j)] = m[idx(i, j)].clone() * factor.clone();
        }
    }
    let div: Vec<R> = (0..size)
        .map(|i| (0..size).fold(R::zero(), |acc, j| acc + m[idx(i, j)].clone()))
        .collect();
    for i in 0..size {
        if !div[i].is_positive() {
            continue;
        }
        let factor = cap(i) / div[i].clone();
        for j in 0..size {
            let limit = if strict { cap(j) } else { cap(i) };
            if div[i] > limit {
                m[idx(i, j)] = m[idx(i, j)].clone() * factor.clone();
            }
        }
    }
    AllocationMatrix::from_dense(size, m).expect("square and non-negative")
}

/// Allocation graph over `graph` with symmetric link capacities `caps` (edge
/// order) and policy matrices. Node `v` is named `v{v}`; its external
/// interfaces are named after the neighbor and ordered by neighbor id.
pub fn proportional_sharing_matrices<R: Resource>(graph: &SimpleGraph, caps: &[u64], strict: bool) -> AllocationGraph<R> {
    let mut b = GraphBuilder::<R>::new();
    for v in 0..graph.node_count() {
        b.add_node(&node_name(v)).expect("fresh names");
    }
    for (v, adj) in graph.adjacency().iter().enumerate() {
        for &w in adj {
            b.add_interface(NodeId(v), &node_name(w)).expect("fresh names");
        }
    }
    let slot = |v: usize, w: usize| graph.adjacency()[v].binary_search(&w).expect("adjacent");
    for (&(u, v), &c) in graph.edges().iter().zip(caps) {
        b.link(
            Endpoint { node: NodeId(u), interface: slot(u, v) },
            Endpoint { node: NodeId(v), interface: slot(v, u) },
            R::from_u64(c),
            R::from_u64(c),
        )
        .expect("simple graph with positive capacities");
    }
    let mut g = b.build().expect("every interface linked");
    for v in 0..graph.node_count() {
        let node = NodeId(v);
        let iface_caps: Vec<R> = (0..g.node(node).degree())
            .map(|e| g.capacity_in(node, e).clone())
            .collect();
        g.set_matrix(node, sharing_matrix(&iface_caps, strict)).expect("sizes match");
    }
    g
}

pub fn node_name(v: usize) -> String {
    format!("v{v}")
}
