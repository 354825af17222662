use std::path::{Path, PathBuf};

use serde_json::Value;

use gma_core::graph::write_graph_json;
use gma_core::topology::{generate_topology, Topology};
use gma_core::{Rational, Resource};

use crate::config::{ArithmeticMode, SweepPoint};
use crate::error::CliResult;
use crate::io::write_atomic;

/// Topology of one sweep point, always built in exact arithmetic.
pub fn build_point(point: &SweepPoint) -> CliResult<Topology<Rational>> {
    Ok(generate_topology::<Rational>(&point.topology)?)
}

/// Topology metadata plus the point's identity.
pub fn point_metadata(point: &SweepPoint, topo: &Topology<Rational>) -> Value {
    let mut meta = serde_json::to_value(&topo.metadata).expect("metadata serializes");
    let map = meta.as_object_mut().expect("metadata is an object");
    map.insert("graph_id".into(), Value::from(point.id.clone()));
    map.insert("base_seed".into(), Value::from(point.base_seed));
    meta
}

/// Graph document of a point in the requested arithmetic mode.
pub fn render_point(point: &SweepPoint, topo: &Topology<Rational>, mode: ArithmeticMode) -> String {
    let meta = Some(point_metadata(point, topo));
    match mode {
        ArithmeticMode::Exact => write_graph_json(&topo.graph, meta),
        ArithmeticMode::Float => write_graph_json(&topo.graph.map_amounts(Resource::to_f64), meta),
    }
}

pub fn graph_file(dir: &Path, point: &SweepPoint) -> PathBuf {
    dir.join(format!("{}.json", point.id))
}

/// Builds and writes one point; returns the file written.
pub fn write_point(point: &SweepPoint, mode: ArithmeticMode, out: &Path) -> CliResult<(PathBuf, Topology<Rational>)> {
    let topo = build_point(point)?;
    write_atomic(out, render_point(point, &topo, mode).as_bytes())?;
    Ok((out.to_path_buf(), topo))
}
