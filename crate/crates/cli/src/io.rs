//! File helpers: atomic writes, output directory resolution, graph loading.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use gma_core::graph::read_graph_json;
use gma_core::{AllocationGraph, Resource};
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "GMA_OUT_DIR";

/// Explicit directory, else `$GMA_OUT_DIR`, else `gma-out`.
pub fn output_dir(explicit: Option<&Path>) -> PathBuf {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("gma-out"))
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> CliResult<()> {
    let fail = |source| CliError::Output {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(fail)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(contents).map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

pub fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

pub fn load_graph<R: Resource>(path: &Path) -> CliResult<(AllocationGraph<R>, Option<Value>)> {
    let text = read_text(path)?;
    read_graph_json(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Graph identifier: `graph_id` from the metadata, else the file stem.
pub fn graph_id(path: &Path, metadata: Option<&Value>) -> String {
    metadata
        .and_then(|m| m.get("graph_id"))
        .and_then(Value::as_str)
        .map(str::to_string)
        .unwrap_or_else(|| {
            path.file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "graph".into())
        })
}
