mod common;

use gma_core::graph::{classify_path, Termination, Validity};
use gma_core::topology::{k_shortest_node_paths, k_shortest_paths};
use gma_core::topology::{generate_topology, TopologyConfig};
use gma_core::{NodeId, Rational};
use proptest::prelude::*;

/// Every simple `src -> dst` path with at most `max_nodes` nodes.
fn simple_paths(adj: &[Vec<usize>], src: usize, dst: usize, max_nodes: usize) -> Vec<Vec<usize>> {
    fn dfs(adj: &[Vec<usize>], dst: usize, max_nodes: usize, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let v = *stack.last().unwrap();
        if v == dst {
            out.push(stack.clone());
            return;
        }
        if stack.len() == max_nodes {
            return;
        }
        for &w in &adj[v] {
            if !stack.contains(&w) {
                stack.push(w);
                dfs(adj, dst, max_nodes, stack, out);
                stack.pop();
            }
        }
    }
    let mut out = Vec::new();
    dfs(adj, dst, max_nodes, &mut vec![src], &mut out);
    out
}

/// Exact k shortest by deepening until `k` paths fit, then `(len, lex)`.
fn oracle(adj: &[Vec<usize>], src: usize, dst: usize, k: usize) -> Vec<Vec<usize>> {
    let mut limit = 2;
    loop {
        let mut all = simple_paths(adj, src, dst, limit);
        if all.len() >= k || limit >= adj.len() {
            all.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
            all.truncate(k);
            return all;
        }
        limit += 1;
    }
}

fn ba(n: usize, m: usize, seed: u64) -> gma_core::AllocationGraph<Rational> {
    generate_topology::<Rational>(&TopologyConfig::new(n, m, seed)).unwrap().graph
}

#[test]
fn trees_have_one_path_per_pair() {
    let g = ba(24, 1, 3);
    let adj = g.adjacency();
    for s in 0..24 {
        for d in 0..24 {
            if s != d {
                assert_eq!(k_shortest_node_paths(&adj, s, d, 3).unwrap().len(), 1);
            }
        }
    }
}

#[test]
fn rejects_equal_endpoints() {
    let g = ba(8, 2, 1);
    assert!(k_shortest_node_paths(&g.adjacency(), 2, 2, 1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn matches_exhaustive_oracle(seed in 0u64..1000, s in 0usize..32, d in 0usize..32, k in 1usize..=4) {
        prop_assume!(s != d);
        let g = ba(32, 2, seed);
        let adj = g.adjacency();
        prop_assert_eq!(k_shortest_node_paths(&adj, s, d, k).unwrap(), oracle(&adj, s, d, k));
    }

    #[test]
    fn paths_are_simple_sorted_and_valid(seed in 0u64..1000, s in 0usize..48, d in 0usize..48, m in 1usize..=4) {
        prop_assume!(s != d);
        let g = ba(48, m, seed);
        let nodes = k_shortest_node_paths(&g.adjacency(), s, d, 3).unwrap();
        prop_assert!(!nodes.is_empty());
        prop_assert!(nodes.windows(2).all(|w| (w[0].len(), &w[0]) < (w[1].len(), &w[1])));
        for p in &nodes {
            let mut sorted = p.clone();
            sorted.sort_unstable();
            sorted.dedup();
            prop_assert_eq!(sorted.len(), p.len());
            prop_assert_eq!((p[0], *p.last().unwrap()), (s, d));
        }
        for p in k_shortest_paths(&g, NodeId(s), NodeId(d), 3).unwrap() {
            let class = classify_path(&g, &p).unwrap();
            prop_assert_eq!(class.termination, Termination::Terminated);
            prop_assert_eq!(class.validity, Validity::Valid);
        }
    }
}
