//! Output files and the run manifest written beside them.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

use crate::inputs::{digest, InputDigest};

/// Everything needed to replay a run. Written to `<out>.manifest.json` so
/// the primary output stays byte-identical across replays.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub argv: Vec<String>,
    pub config: Value,
    pub inputs: Vec<InputDigest>,
    pub seed: Option<u64>,
    pub version: &'static str,
    pub wall_time_ms: f64,
    pub output_sha256: Option<String>,
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn pretty(value: &impl Serialize) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

/// Writes `body` to `out` (or stdout) and, with `out`, the manifest.
pub fn emit(out: Option<&Path>, body: &str, mut manifest: RunManifest) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
            manifest.output_sha256 = Some(digest(body.as_bytes()));
            let side = manifest_path(path);
            fs::write(&side, pretty(&manifest)?).with_context(|| format!("writing {}", side.display()))?;
        }
        None => print!("{body}"),
    }
    Ok(())
}

pub fn emit_json(out: Option<&Path>, value: &impl Serialize, manifest: RunManifest) -> Result<()> {
    emit(out, &pretty(value)?, manifest)
}
