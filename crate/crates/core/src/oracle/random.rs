//! Random small instances for the exact oracles.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::allocators::{HopRecord, PathView};
use crate::graph::{AllocationGraph, AllocationMatrix, Endpoint, GraphBuilder, Hop, InterfaceId, NodeId, Path};
use crate::resource::{Rational, Resource};

#[derive(Clone, Debug, PartialEq)]
pub struct RandomGraphConfig {
    pub min_nodes: usize,
    pub max_nodes: usize,
    /// Upper bound on external interfaces per node.
    pub max_degree: usize,
    /// Probability that a matrix entry is zero.
    pub zero_probability: f64,
    /// Allow positive entries `M_{e,e}` on external interfaces.
    pub u_turns: bool,
    /// Entries are `p/q` with `p <= max_numerator`, `q <= max_denominator`.
    pub max_numerator: i64,
    pub max_denominator: i64,
}

impl Default for RandomGraphConfig {
    fn default() -> Self {
        Self {
            min_nodes: 2,
            max_nodes: 8,
            max_degree: 3,
            zero_probability: 0.25,
            u_turns: true,
            max_numerator: 9,
            max_denominator: 4,
        }
    }
}

fn random_amount<G: Rng>(rng: &mut G, cfg: &RandomGraphConfig) -> Rational {
    Rational::from_ratio(
        rng.gen_range(1..=cfg.max_numerator),
        rng.gen_range(1..=cfg.max_denominator),
    )
}

/// Connected random graph with random rational matrices. Link capacities are
/// the larger of the two sums they bound plus a random slack, so the graph
/// always satisfies the capacity constraints.
pub fn random_graph<G: Rng>(rng: &mut G, cfg: &RandomGraphConfig) -> AllocationGraph<Rational> {
    let n = rng.gen_range(cfg.min_nodes.max(2)..=cfg.max_nodes.max(2));
    let max_degree = cfg.max_degree.max(2);
    let mut degree = vec![0usize; n];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    // random spanning tree under the degree cap
    for v in 1..n {
        let open: Vec<usize> = (0..v).filter(|&u| degree[u] < max_degree).collect();
        let u = *open.choose(rng).expect("a path always leaves room");
        edges.push((u, v));
        degree[u] += 1;
        degree[v] += 1;
    }
    let extra = rng.gen_range(0..=n);
    for _ in 0..extra {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        let (u, v) = (u.min(v), u.max(v));
        if u == v || degree[u] >= max_degree || degree[v] >= max_degree || edges.contains(&(u, v)) {
            continue;
        }
        edges.push((u, v));
        degree[u] += 1;
        degree[v] += 1;
    }

    // interfaces in edge order; matrices sized accordingly
    let mut ports: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, &(u, v)) in edges.iter().enumerate() {
        ports[u].push(k);
        ports[v].push(k);
    }
    let matrices: Vec<AllocationMatrix<Rational>> = ports
        .iter()
        .map(|p| {
            let size = p.len() + 1;
            let mut dense = Vec::with_capacity(size * size);
            for i in 0..size {
                for j in 0..size {
                    let uturn = i == j && i != 0;
                    let zero = (uturn && !cfg.u_turns) || rng.gen_bool(cfg.zero_probability);
                    dense.push(if zero { Rational::from_u64(0) } else { random_amount(rng, cfg) });
                }
            }
            AllocationMatrix::from_dense(size, dense).expect("square and non-negative")
        })
        .collect();

    let mut b = GraphBuilder::<Rational>::new();
    for v in 0..n {
        b.add_node(&format!("n{v}")).expect("fresh names");
    }
    let mut slot_of = vec![(0usize, 0usize); edges.len()];
    for (v, p) in ports.iter().enumerate() {
        for (s, &edge) in p.iter().enumerate() {
            b.add_interface(NodeId(v), &format!("e{edge}")).expect("fresh names");
            if edges[edge].0 == v {
                slot_of[edge].0 = s;
            } else {
                slot_of[edge].1 = s;
            }
        }
    }
    for (k, &(u, v)) in edges.iter().enumerate() {
        let (su, sv) = slot_of[k];
        let (eu, ev) = (InterfaceId::External(su), InterfaceId::External(sv));
        // u -> v carries conv at u's side and div at v's side
        let need_uv = max_r(matrices[u].convergent(eu).clone(), matrices[v].divergent(ev).clone());
        let need_vu = max_r(matrices[v].convergent(ev).clone(), matrices[u].divergent(eu).clone());
        let cap_uv = need_uv + Rational::from_u64(rng.gen_range(0..=3));
        let cap_vu = need_vu + Rational::from_u64(rng.gen_range(0..=3));
        b.link(
            Endpoint { node: NodeId(u), interface: su },
            Endpoint { node: NodeId(v), interface: sv },
            positive(cap_uv),
            positive(cap_vu),
        )
        .expect("simple graph");
    }
    let mut g = b.build().expect("all interfaces linked");
    for (v, m) in matrices.into_iter().enumerate() {
        g.set_matrix(NodeId(v), m).expect("sizes match");
    }
    g
}

fn max_r(a: Rational, b: Rational) -> Rational {
    if a > b {
        a
    } else {
        b
    }
}

fn positive(r: Rational) -> Rational {
    if r.is_positive() {
        r
    } else {
        Rational::from_u64(1)
    }
}

/// Random view of the given length. Sums exceed the pair allocation by a
/// random non-negative slack; with `allow_zero`, some pair allocations are zero.
pub fn random_view<G: Rng>(rng: &mut G, len: usize, allow_zero: bool) -> PathView<Rational> {
    let hops = (0..len.max(1))
        .map(|_| {
            let m = if allow_zero && rng.gen_bool(0.1) {
                Rational::from_u64(0)
            } else {
                Rational::from_ratio(rng.gen_range(1..=12), rng.gen_range(1..=4))
            };
            let mut slack = || {
                if rng.gen_bool(0.2) {
                    Rational::from_u64(0)
                } else {
                    Rational::from_ratio(rng.gen_range(1..=20), rng.gen_range(1..=4))
                }
            };
            let conv = m.clone() + slack();
            let div = m.clone() + slack();
            HopRecord::new(m, conv, div)
        })
        .collect();
    PathView::new(hops).expect("sums dominate the pair allocation")
}

/// Random walk from a random local interface that ends at a local interface
/// after at most `max_len` hops, using only positive pair allocations.
/// With `simple`, nodes are not revisited. `None` if no attempt succeeds.
pub fn random_valid_path<G: Rng, R: Resource>(
    rng: &mut G,
    graph: &AllocationGraph<R>,
    max_len: usize,
    simple: bool,
) -> Option<Path> {
    'attempt: for _ in 0..64 {
        let target = rng.gen_range(1..=max_len.max(1));
        let mut node = NodeId(rng.gen_range(0..graph.node_count()));
        let mut ingress = InterfaceId::Local;
        let mut hops = Vec::new();
        let mut visited = vec![false; graph.node_count()];
        loop {
            visited[node.0] = true;
            let m = graph.node(node).matrix();
            let can_end = m.get(ingress, InterfaceId::Local).is_positive();
            if hops.len() + 1 == target {
                if !can_end {
                    continue 'attempt;
                }
                hops.push(Hop::new(node, ingress, InterfaceId::Local));
                return Some(Path::new(hops));
            }
            let next: Vec<usize> = (0..graph.node(node).degree())
                .filter(|&e| m.get(ingress, InterfaceId::External(e)).is_positive())
                .filter(|&e| !simple || !visited[graph.peer(node, e).node.0])
                .collect();
            let Some(&e) = next.choose(rng) else {
                if can_end {
                    hops.push(Hop::new(node, ingress, InterfaceId::Local));
                    return Some(Path::new(hops));
                }
                continue 'attempt;
            };
            hops.push(Hop::new(node, ingress, InterfaceId::External(e)));
            let peer = graph.peer(node, e);
            node = peer.node;
            ingress = InterfaceId::External(peer.interface);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{classify_path, validate_graph, Shape, Termination, Validity};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_graphs_are_legal() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let g = random_graph(&mut rng, &RandomGraphConfig::default());
            assert!(validate_graph(&g).is_empty());
            assert!(g.nodes().iter().all(|n| n.degree() <= 3 && n.degree() >= 1));
        }
    }

    #[test]
    fn generated_paths_are_valid_and_terminated() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut found = 0;
        for _ in 0..50 {
            let g = random_graph(&mut rng, &RandomGraphConfig::default());
            if let Some(p) = random_valid_path(&mut rng, &g, 6, true) {
                let c = classify_path(&g, &p).unwrap();
                assert_eq!(c.termination, Termination::Terminated);
                assert_eq!(c.validity, Validity::Valid);
                assert_eq!(c.shape, Shape::Simple);
                found += 1;
            }
        }
        assert!(found > 25);
    }
}
