//! Stage manifests: every pipeline output directory carries a
//! `manifest.json` tying its files to the exact command, configuration, and
//! seed that produced them.

use crate::error::{CliError, CliResult};
use satprobe::pairing::{EditKind, PairSetStats};
use satprobe::reductions::{PackingInstance, VertexCoverInstance};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const MANIFEST_FILE: &str = "manifest.json";

/// Common manifest header plus the stage-specific payload.
#[derive(Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub created_unix: u64,
    /// Effective configuration snapshot (flags > config file > defaults).
    pub config: serde_json::Value,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    #[serde(flatten)]
    pub stage: StagePayload,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "stage", rename_all = "kebab-case")]
pub enum StagePayload {
    Gen { instances: Vec<GenInstanceEntry> },
    Pair {
        k: u32,
        n: u32,
        pairs: Vec<PairEntry>,
        stats: PairSetStats,
    },
    Reduce {
        target: String,
        items: Vec<ReduceEntry>,
    },
    Eval {
        backend: String,
        records_file: String,
        record_count: u64,
        completion_rate: f64,
    },
}

/// One generated instance: its file plus the solver certification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenInstanceEntry {
    pub id: String,
    pub file: String,
    pub seed: u64,
    pub k: u32,
    pub n: u32,
    pub alpha: f64,
    /// Solver label: SAT, UNSAT, or UNKNOWN under a budget.
    pub label: String,
    pub decisions: u64,
    pub conflicts: u64,
}

/// One verified pair, DIMACS blocks embedded.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairEntry {
    pub id: String,
    pub n: u32,
    pub alpha_unsat: f64,
    pub alpha_sat: f64,
    pub edits: Vec<EditKind>,
    pub unsat_dimacs: String,
    pub sat_dimacs: String,
    /// Solver certifications for the two members.
    pub unsat_label: String,
    pub sat_label: String,
}

/// One reduced instance, JSON-embedded.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReduceEntry {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair_id: Option<String>,
    pub label: String,
    pub n: u32,
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_cover: Option<VertexCoverInstance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub packing: Option<PackingInstance>,
}

pub fn now_unix() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

pub fn tool_version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

pub fn write_manifest(dir: &Path, manifest: &Manifest) -> CliResult<()> {
    let text = serde_json::to_string_pretty(manifest)
        .map_err(|e| CliError::Data(format!("cannot serialize manifest: {e}")))?;
    std::fs::write(dir.join(MANIFEST_FILE), text)
        .map_err(|e| CliError::Data(format!("cannot write manifest: {e}")))?;
    Ok(())
}

/// Loads a manifest given either the manifest file itself or its directory.
pub fn load_manifest(path: &Path) -> CliResult<(Manifest, PathBuf)> {
    let file = if path.is_dir() {
        path.join(MANIFEST_FILE)
    } else {
        path.to_path_buf()
    };
    let text = std::fs::read_to_string(&file).map_err(|e| {
        CliError::Data(format!(
            "cannot read manifest {} (expected output of an earlier stage): {e}",
            file.display()
        ))
    })?;
    let manifest: Manifest = serde_json::from_str(&text)
        .map_err(|e| CliError::Data(format!("malformed manifest {}: {e}", file.display())))?;
    let dir = file.parent().unwrap_or(Path::new(".")).to_path_buf();
    Ok((manifest, dir))
}

/// Creates the output directory. A non-empty existing directory is refused
/// unless `force` is set; nothing is silently overwritten.
pub fn prepare_out_dir(dir: &Path, force: bool) -> CliResult<()> {
    if dir.exists() {
        let non_empty = std::fs::read_dir(dir)
            .map_err(|e| CliError::Data(format!("cannot inspect {}: {e}", dir.display())))?
            .next()
            .is_some();
        if non_empty && !force {
            return Err(CliError::Usage(format!(
                "output directory {} exists and is not empty; pass --force to overwrite",
                dir.display()
            )));
        }
    }
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Data(format!("cannot create {}: {e}", dir.display())))?;
    Ok(())
}
