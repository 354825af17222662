//! Scale-free experiment topologies: Barabási–Albert graphs, degree-gravity
//! capacities, proportional sharing matrices and k-shortest paths.

mod ba;
mod ksp;
mod policy;

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

pub use ba::{generate_ba, SimpleGraph};
pub use ksp::{k_shortest_node_paths, k_shortest_paths, node_path_to_path};
pub use policy::{assign_capacities, node_name, proportional_sharing_matrices, sharing_matrix, DEFAULT_LEVELS};

use crate::error::{Error, Result};
use crate::graph::{validate_graph, AllocationGraph};
use crate::resource::Resource;

/// Name of the pseudo-random generator, recorded in every metadata block.
pub const GENERATOR: &str = "ChaCha8Rng";

fn default_levels() -> Vec<u64> {
    DEFAULT_LEVELS.to_vec()
}

fn default_k() -> usize {
    3
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyConfig {
    pub node_count: usize,
    pub attachment: usize,
    pub seed: u64,
    #[serde(default = "default_levels")]
    pub capacity_levels: Vec<u64>,
    #[serde(default = "default_k")]
    pub k_paths: usize,
    /// Step (iii) of the sharing policy compares `div_i` against `cap_j` when
    /// set, against `cap_i` otherwise.
    #[serde(default = "default_true")]
    pub policy_step3_strict: bool,
}

impl TopologyConfig {
    pub fn new(node_count: usize, attachment: usize, seed: u64) -> Self {
        Self {
            node_count,
            attachment,
            seed,
            capacity_levels: default_levels(),
            k_paths: default_k(),
            policy_step3_strict: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field, reason: String| Err(Error::InvalidConfig { field, reason });
        if !(8..=2048).contains(&self.node_count) {
            return bad("node_count", format!("{} outside 8..=2048", self.node_count));
        }
        if !(1..=32).contains(&self.attachment) {
            return bad("attachment", format!("{} outside 1..=32", self.attachment));
        }
        if self.attachment >= self.node_count {
            return bad("attachment", format!("{} must be below node_count {}", self.attachment, self.node_count));
        }
        if self.capacity_levels.is_empty()
            || self.capacity_levels[0] == 0
            || self.capacity_levels.windows(2).any(|w| w[0] >= w[1])
        {
            return bad("capacity_levels", "need strictly increasing positive levels".into());
        }
        if !(1..=3).contains(&self.k_paths) {
            return bad("k_paths", format!("{} outside 1..=3", self.k_paths));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopologyMetadata {
    pub generator: String,
    pub model: String,
    pub config: TopologyConfig,
    pub nodes: usize,
    pub edges: usize,
    pub diameter: usize,
    pub avg_degree: f64,
    pub min_degree: usize,
    pub max_degree: usize,
    /// Capacity level to number of links.
    pub capacity_histogram: BTreeMap<u64, usize>,
    /// Capacity-constraint violations left by the sharing policy.
    pub policy_violations: usize,
}

#[derive(Clone, Debug)]
pub struct Topology<R> {
    pub simple: SimpleGraph,
    pub capacities: Vec<u64>,
    pub graph: AllocationGraph<R>,
    pub metadata: TopologyMetadata,
}

/// Runs the full pipeline for one configuration.
pub fn generate_topology<R: Resource>(config: &TopologyConfig) -> Result<Topology<R>> {
    config.validate()?;
    let simple = generate_ba(config.node_count, config.attachment, config.seed)?;
    let capacities = assign_capacities(&simple, &config.capacity_levels);
    let graph = proportional_sharing_matrices::<R>(&simple, &capacities, config.policy_step3_strict);
    let degrees: Vec<usize> = (0..simple.node_count()).map(|v| simple.degree(v)).collect();
    let mut capacity_histogram = BTreeMap::new();
    for &c in &capacities {
        *capacity_histogram.entry(c).or_insert(0) += 1;
    }
    let metadata = TopologyMetadata {
        generator: GENERATOR.to_string(),
        model: "barabasi-albert, clique seed".to_string(),
        config: config.clone(),
        nodes: simple.node_count(),
        edges: simple.edges().len(),
        diameter: diameter(simple.adjacency()),
        avg_degree: 2.0 * simple.edges().len() as f64 / simple.node_count() as f64,
        min_degree: degrees.iter().copied().min().unwrap_or(0),
        max_degree: degrees.iter().copied().max().unwrap_or(0),
        capacity_histogram,
        policy_violations: validate_graph(&graph).len(),
    };
    Ok(Topology {
        simple,
        capacities,
        graph,
        metadata,
    })
}

/// Largest finite hop distance between two nodes.
pub fn diameter(adjacency: &[Vec<usize>]) -> usize {
    let n = adjacency.len();
    let mut best = 0;
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            best = best.max(dist[v]);
            for &w in &adjacency[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    best
}

/// Deterministic seed for one sweep point: SplitMix64 folded over `parts`.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    parts.iter().fold(mix(base), |acc, &p| mix(acc ^ p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resource::Rational;

    #[test]
    fn config_ranges() {
        assert!(TopologyConfig::new(8, 1, 0).validate().is_ok());
        assert!(TopologyConfig::new(7, 1, 0).validate().is_err());
        assert!(TopologyConfig::new(8, 8, 0).validate().is_err());
        assert!(TopologyConfig::new(64, 33, 0).validate().is_err());
        let mut c = TopologyConfig::new(8, 1, 0);
        c.k_paths = 4;
        assert!(matches!(c.validate(), Err(Error::InvalidConfig { field: "k_paths", .. })));
    }

    #[test]
    fn config_json_round_trip() {
        let c = TopologyConfig::new(64, 2, 99);
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<TopologyConfig>(&text).unwrap(), c);
        let minimal: TopologyConfig = serde_json::from_str(r#"{"node_count":8,"attachment":1,"seed":3}"#).unwrap();
        assert_eq!(minimal, TopologyConfig::new(8, 1, 3));
    }

    #[test]
    fn pipeline_is_deterministic() {
        let c = TopologyConfig::new(32, 2, 5);
        let a = generate_topology::<Rational>(&c).unwrap();
        let b = generate_topology::<Rational>(&c).unwrap();
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.metadata, b.metadata);
        assert_eq!(a.metadata.generator, GENERATOR);
    }

    #[test]
    fn diameter_of_a_line() {
        let g = SimpleGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(diameter(g.adjacency()), 3);
    }

    #[test]
    fn seeds_differ_per_point() {
        assert_ne!(derive_seed(1, &[8, 1]), derive_seed(1, &[8, 2]));
        assert_eq!(derive_seed(1, &[8, 1]), derive_seed(1, &[8, 1]));
    }
}
