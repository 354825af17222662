//! Experiment configuration: sweeps of topologies, cover parameters and the
//! verification budget.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use gma_core::resource::{Rational, Resource};
use gma_core::topology::{derive_seed, TopologyConfig, DEFAULT_LEVELS};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ArithmeticMode {
    Exact,
    Float,
}

fn default_levels() -> Vec<u64> {
    DEFAULT_LEVELS.to_vec()
}

fn default_true() -> bool {
    true
}

/// Cross product of node counts, attachments and seeds. Points with
/// `attachment >= nodes` are skipped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub node_counts: Vec<usize>,
    pub attachments: Vec<usize>,
    pub seeds: Vec<u64>,
    #[serde(default = "default_levels")]
    pub capacity_levels: Vec<u64>,
    #[serde(default = "default_true")]
    pub policy_step3_strict: bool,
}

/// One generated graph of a sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepPoint {
    pub id: String,
    pub base_seed: u64,
    pub topology: TopologyConfig,
}

impl SweepPoint {
    /// The point for `(nodes, attachment, seed)`. The generator seed mixes all three.
    pub fn new(nodes: usize, attachment: usize, seed: u64) -> Self {
        Self {
            id: format!("ba-n{nodes}-m{attachment}-s{seed}"),
            base_seed: seed,
            topology: TopologyConfig::new(nodes, attachment, derive_seed(seed, &[nodes as u64, attachment as u64])),
        }
    }
}

impl SweepSpec {
    pub fn points(&self) -> Vec<SweepPoint> {
        let mut out = Vec::new();
        for &n in &self.node_counts {
            for &m in &self.attachments {
                if m >= n {
                    continue;
                }
                for &s in &self.seeds {
                    let mut p = SweepPoint::new(n, m, s);
                    p.topology.capacity_levels = self.capacity_levels.clone();
                    p.topology.policy_step3_strict = self.policy_step3_strict;
                    out.push(p);
                }
            }
        }
        out
    }
}

/// Limits enforced before any exhaustive oracle runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyBudget {
    pub max_nodes: usize,
    pub max_len: usize,
    /// Upper bound on the number of interface walks the enumeration may visit.
    pub max_walks: u64,
}

impl Default for VerifyBudget {
    fn default() -> Self {
        Self {
            max_nodes: 8,
            max_len: 6,
            max_walks: 2_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub sweeps: Vec<SweepSpec>,
    /// Cover thresholds as exact amounts (`p/q` or decimals).
    pub alphas: Vec<String>,
    pub ks: Vec<usize>,
    pub output_dir: PathBuf,
    pub mode: ArithmeticMode,
    pub budget: VerifyBudget,
    /// Worker threads for sweep points; 0 lets the pool decide.
    #[serde(default)]
    pub threads: usize,
}

impl Default for ExperimentConfig {
    /// Desk-scale sweep: 8 to 256 nodes, attachment 1 to 32, one seed.
    fn default() -> Self {
        Self {
            sweeps: vec![SweepSpec {
                node_counts: vec![8, 16, 32, 64, 128, 256],
                attachments: vec![1, 2, 4, 8, 16, 32],
                seeds: vec![1],
                capacity_levels: default_levels(),
                policy_step3_strict: true,
            }],
            alphas: vec!["1/10000".into()],
            ks: vec![1, 2, 3],
            output_dir: PathBuf::from("gma-out"),
            mode: ArithmeticMode::Float,
            budget: VerifyBudget::default(),
            threads: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn points(&self) -> Vec<SweepPoint> {
        self.sweeps.iter().flat_map(SweepSpec::points).collect()
    }

    pub fn alpha_values(&self) -> CliResult<Vec<Rational>> {
        self.alphas.iter().map(|a| parse_alpha(a)).collect()
    }

    /// Checks every field; errors name the offending field.
    pub fn validate(&self) -> CliResult<()> {
        if self.sweeps.is_empty() {
            return Err(CliError::Usage("sweeps: at least one sweep is required".into()));
        }
        let points = self.points();
        if points.is_empty() {
            return Err(CliError::Usage("sweeps: the cross product has no point with attachment < nodes".into()));
        }
        for p in &points {
            p.topology.validate()?;
        }
        if self.alphas.is_empty() {
            return Err(CliError::Usage("alphas: at least one threshold is required".into()));
        }
        self.alpha_values()?;
        if self.ks.is_empty() || self.ks.iter().any(|k| !(1..=3).contains(k)) {
            return Err(CliError::Usage(format!("ks: {:?} must be a non-empty subset of 1..=3", self.ks)));
        }
        if self.budget.max_len == 0 || self.budget.max_nodes < 2 {
            return Err(CliError::Usage("budget: need max_len >= 1 and max_nodes >= 2".into()));
        }
        Ok(())
    }
}

/// Parses a cover threshold; it must be positive.
pub fn parse_alpha(text: &str) -> CliResult<Rational> {
    let a = Rational::parse_amount(text)?;
    if !a.is_positive() {
        return Err(CliError::Usage(format!("alpha `{text}` must be positive")));
    }
    Ok(a)
}
