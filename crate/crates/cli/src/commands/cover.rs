use std::path::Path;

use gma_core::graph::{AllocationGraph, NodeId};
use gma_core::metrics::{float_exact_disagreement, graph_cover_stats, write_node_csv, write_summary_csv, GraphCoverReport};
use gma_core::topology::diameter;
use gma_core::{Rational, Resource};

use crate::config::ArithmeticMode;
use crate::error::{CliError, CliResult};
use crate::io::write_atomic;

/// Largest tolerated relative float error on spot-checked pairs.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

pub const NODE_CSV: &str = "cover_nodes.csv";
pub const SUMMARY_CSV: &str = "cover_summary.csv";
pub const META_JSON: &str = "cover_meta.json";

/// Up to eight spread-out ordered pairs.
pub fn spot_pairs(n: usize) -> Vec<(NodeId, NodeId)> {
    if n < 2 {
        return Vec::new();
    }
    let count = n.min(8);
    (0..count)
        .map(|i| {
            let s = i * n / count;
            let mut d = (s + n / 2 + i) % n;
            if d == s {
                d = (s + 1) % n;
            }
            (NodeId(s), NodeId(d))
        })
        .collect()
}

/// Cover of one graph for one threshold. Float mode checks spot pairs
/// against exact arithmetic first.
pub fn cover_report(
    id: &str,
    exact: &AllocationGraph<Rational>,
    alpha: &Rational,
    ks: &[usize],
    mode: ArithmeticMode,
) -> CliResult<GraphCoverReport> {
    let adjacency = exact.adjacency();
    let links: usize = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
    let n = exact.node_count();
    let stats = match mode {
        ArithmeticMode::Exact => graph_cover_stats(exact, alpha, ks)?,
        ArithmeticMode::Float => {
            let float = exact.map_amounts(Resource::to_f64);
            let k_max = ks.iter().copied().max().unwrap_or(1);
            let worst = float_exact_disagreement(exact, &float, &spot_pairs(n), k_max)?;
            if worst > FLOAT_TOLERANCE {
                return Err(CliError::Failure(format!(
                    "{id}: float allocations deviate from exact ones by {worst:e} (limit {FLOAT_TOLERANCE:e})"
                )));
            }
            graph_cover_stats(&float, &alpha.to_f64(), ks)?
        }
    };
    Ok(GraphCoverReport {
        graph: id.to_string(),
        nodes: n,
        diameter: diameter(&adjacency),
        avg_degree: if n == 0 { 0.0 } else { 2.0 * links as f64 / n as f64 },
        alpha: alpha.to_text(),
        stats,
    })
}

/// Conventions behind the CSV numbers.
pub fn report_metadata(mode: ArithmeticMode) -> serde_json::Value {
    serde_json::json!({
        "cover": "fraction of other nodes whose k-path allocation sum is strictly greater than alpha",
        "median": "lower middle element for even node counts",
        "improvement_pct": "100 * (median_k - median_1) / median_1, empty when median_1 is 0",
        "mode": mode,
        "float_tolerance": FLOAT_TOLERANCE,
    })
}

/// Writes both CSV files and the metadata file into `dir`.
pub fn write_reports(dir: &Path, reports: &[GraphCoverReport], mode: ArithmeticMode) -> CliResult<()> {
    let mut nodes = Vec::new();
    write_node_csv(&mut nodes, reports).map_err(|e| CliError::Failure(e.to_string()))?;
    write_atomic(&dir.join(NODE_CSV), &nodes)?;
    let mut summary = Vec::new();
    write_summary_csv(&mut summary, reports).map_err(|e| CliError::Failure(e.to_string()))?;
    write_atomic(&dir.join(SUMMARY_CSV), &summary)?;
    let meta = serde_json::to_string_pretty(&report_metadata(mode)).expect("json values serialize") + "\n";
    write_atomic(&dir.join(META_JSON), meta.as_bytes())?;
    Ok(())
}
