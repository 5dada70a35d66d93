//! Output plumbing: directory resolution, the run manifest, and the CSV files
//! consumed by external plotting.

use std::env;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use chrono::Utc;
use cosserat_core::{DiagnosticsRow, ReducedState};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

/// Environment variable that overrides the configured output directory.
pub const OUTPUT_DIR_ENV: &str = "COSSERAT_OUTPUT_DIR";

pub const SNAPSHOT_HEADER: &str = "t,z,phi,psi,phi_t,psi_t";
pub const DIAGNOSTICS_HEADER: &str = "t,energy,l2_phi,l2_psi";

/// The environment override wins over the resolved config.
pub fn resolve_output_dir(config: &RunConfig) -> PathBuf {
    match env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => config.output_path.clone(),
    }
}

/// Hex SHA-256 digest of a file, recorded in the manifest so a run can be
/// traced back to the exact config that produced it.
pub fn file_digest(path: &Path) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("digesting {}", path.display()))?;
    Ok(format!("sha256:{:x}", Sha256::digest(&bytes)))
}

/// Writes the run manifest: run metadata under `meta.` keys followed by the
/// fully resolved configuration, in the config format itself so the file can
/// be replayed with `--config`.
pub fn write_manifest(dir: &Path, config: &RunConfig, config_digest: &str) -> Result<PathBuf> {
    let path = dir.join("manifest.txt");
    let mut text = String::new();
    text.push_str("# resolved run manifest; pass back via --config to replay this run\n");
    text.push_str(&format!("meta.version={}\n", env!("CARGO_PKG_VERSION")));
    text.push_str(&format!("meta.timestamp={}\n", Utc::now().to_rfc3339()));
    text.push_str(&format!("meta.digest.config={config_digest}\n"));
    text.push_str(&config.to_key_values());
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// One CSV block per snapshot, blank-line separated, single header on top.
/// Numbers use round-trip precision.
pub fn write_snapshots(dir: &Path, snapshots: &[ReducedState]) -> Result<PathBuf> {
    let path = dir.join("snapshots.csv");
    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "{SNAPSHOT_HEADER}")?;
    for (block, state) in snapshots.iter().enumerate() {
        if block > 0 {
            writeln!(w)?;
        }
        for i in 0..state.len() {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                state.t,
                state.z(i),
                state.phi[i],
                state.psi[i],
                state.phi_t[i],
                state.psi_t[i]
            )?;
        }
    }
    w.flush()?;
    Ok(path)
}

/// Energy and (when a reference wave exists) error time series; absent errors
/// are written as NaN so the column layout is fixed.
pub fn write_diagnostics(dir: &Path, rows: &[DiagnosticsRow]) -> Result<PathBuf> {
    let path = dir.join("diagnostics.csv");
    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "{DIAGNOSTICS_HEADER}")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{}",
            row.t,
            row.energy,
            row.l2_phi.unwrap_or(f64::NAN),
            row.l2_psi.unwrap_or(f64::NAN)
        )?;
    }
    w.flush()?;
    Ok(path)
}

/// One snapshot block read back from `snapshots.csv`.
pub struct SnapshotBlock {
    pub t: f64,
    pub z: Vec<f64>,
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
}

/// Parses a snapshot file written by [`write_snapshots`].
pub fn read_snapshot_blocks(path: &Path) -> Result<Vec<SnapshotBlock>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| anyhow!("empty snapshot file"))?;
    if header.trim_end() != SNAPSHOT_HEADER {
        bail!("unrecognized snapshot header '{header}' (expected '{SNAPSHOT_HEADER}')");
    }
    let mut blocks = Vec::new();
    let mut current: Option<SnapshotBlock> = None;
    for (offset, raw) in lines.enumerate() {
        let line = raw.trim_end();
        if line.is_empty() {
            if let Some(block) = current.take() {
                blocks.push(block);
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            bail!(
                "line {}: expected 6 columns, got {}",
                offset + 2,
                fields.len()
            );
        }
        let parse = |f: &str| {
            f.parse::<f64>()
                .with_context(|| format!("line {}: bad number '{f}'", offset + 2))
        };
        let t = parse(fields[0])?;
        let z = parse(fields[1])?;
        let phi = parse(fields[2])?;
        let psi = parse(fields[3])?;
        let block = current.get_or_insert_with(|| SnapshotBlock {
            t,
            z: Vec::new(),
            phi: Vec::new(),
            psi: Vec::new(),
        });
        block.t = t;
        block.z.push(z);
        block.phi.push(phi);
        block.psi.push(psi);
    }
    if let Some(block) = current.take() {
        blocks.push(block);
    }
    if blocks.is_empty() {
        bail!("snapshot file holds no data rows");
    }
    Ok(blocks)
}
