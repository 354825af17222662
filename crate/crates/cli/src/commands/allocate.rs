use std::fmt::Write as _;

use serde_json::{json, Value};

use gma_core::graph::{classify_path, parse_path, path_view, Shape, Termination, Validity};
use gma_core::relay::{run_reservation, Reservation};
use gma_core::{alloc_a1, alloc_a2, gma_direct, gma_recursive, AllocationGraph, Rational, Resource};

use crate::error::{CliError, CliResult};

/// Allocation report of one path as JSON.
pub fn allocation_report(graph: &AllocationGraph<Rational>, spec: &str) -> CliResult<Value> {
    let path = parse_path(graph, spec)?;
    let class = classify_path(graph, &path)?;
    let view = path_view(graph, &path)?;
    let direct = gma_direct(&view);
    let recursive = gma_recursive(&view);
    if direct.value != recursive.value {
        return Err(CliError::Failure(format!(
            "direct value {} differs from recursive value {}",
            direct.value.to_text(),
            recursive.value.to_text()
        )));
    }
    let list = |v: &[Rational]| v.iter().map(Resource::to_json).collect::<Vec<_>>();
    Ok(json!({
        "path": path.display(graph).to_string(),
        "hops": path.len(),
        "terminated": class.termination == Termination::Terminated,
        "valid": class.validity == Validity::Valid,
        "simple": class.shape == Shape::Simple,
        "a1": alloc_a1(&view).to_json(),
        "a2": alloc_a2(&view).to_json(),
        "gma": direct.value.to_json(),
        "gma_recursive": recursive.value.to_json(),
        "argmin": direct.argmin_index,
        "scaling_factors": list(&direct.scaling_factors),
        "prefix_allocations": list(&direct.prefix_allocs),
    }))
}

fn text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn joined(v: &Value) -> String {
    v.as_array()
        .map(|a| a.iter().map(text).collect::<Vec<_>>().join(" "))
        .unwrap_or_default()
}

/// Aligned plain-text form of [`allocation_report`].
pub fn render_text(report: &Value) -> String {
    let flag = |name: &str, yes: &str, no: &str| if report[name] == true { yes.to_string() } else { no.to_string() };
    let mut out = String::new();
    let mut line = |k: &str, v: String| writeln!(out, "{k:<9}{v}").expect("writing to a string");
    line("path", text(&report["path"]));
    line(
        "class",
        format!(
            "{} {} {}",
            flag("terminated", "terminated", "preliminary"),
            flag("valid", "valid", "invalid"),
            flag("simple", "simple", "looping")
        ),
    );
    line("A1", text(&report["a1"]));
    line("A2", text(&report["a2"]));
    line("GMA", format!("{} (recursive {})", text(&report["gma"]), text(&report["gma_recursive"])));
    line("argmin", text(&report["argmin"]));
    line("scaling", joined(&report["scaling_factors"]));
    line("prefix", joined(&report["prefix_allocations"]));
    out
}

/// Relay trace and outcome of one reservation, as text.
pub fn reservation_text(graph: &AllocationGraph<Rational>, spec: &str, threshold: Rational) -> CliResult<String> {
    let path = parse_path(graph, spec)?;
    let outcome = run_reservation(graph, &path, threshold)?;
    let mut out = String::new();
    for (k, line) in outcome.trace().iter().enumerate() {
        writeln!(out, "hop {} {line}", k + 1).expect("writing to a string");
    }
    match outcome {
        Reservation::Granted { value, .. } => writeln!(out, "granted {}", value.to_text()),
        Reservation::Dropped {
            hop_index,
            preliminary_value,
            ..
        } => writeln!(out, "dropped at hop {hop_index} with {}", preliminary_value.to_text()),
    }
    .expect("writing to a string");
    Ok(out)
}
