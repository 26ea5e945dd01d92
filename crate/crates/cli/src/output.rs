//! File output helpers: 17-significant-digit CSV, JSON files, and the
//! optional run manifest.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use xilab::{Real, RunConfig};

/// Decimal rendering with 17 significant digits (round-trip exact for
/// binary64).
pub fn fmt_sig(v: Real) -> String {
    format!("{v:.16e}")
}

pub fn write_text(path: &Path, content: &str) -> std::io::Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    out.write_all(content.as_bytes())?;
    if !content.ends_with('\n') {
        out.write_all(b"\n")?;
    }
    out.flush()
}

/// Minimal CSV writer: header row always present, numeric cells at full
/// precision.
pub struct CsvWriter {
    out: BufWriter<fs::File>,
}

impl CsvWriter {
    pub fn create(path: &Path, header: &str) -> std::io::Result<Self> {
        let mut out = BufWriter::new(fs::File::create(path)?);
        writeln!(out, "{header}")?;
        Ok(CsvWriter { out })
    }

    pub fn row(&mut self, cells: &[Real]) -> std::io::Result<()> {
        let rendered: Vec<String> = cells.iter().map(|&c| fmt_sig(c)).collect();
        writeln!(self.out, "{}", rendered.join(","))
    }

    pub fn done(mut self) -> std::io::Result<()> {
        self.out.flush()
    }
}

#[derive(Serialize)]
struct RunManifest<'a> {
    command: String,
    config: &'a RunConfig,
    started_at: String,
    finished_at: String,
    artifact_version: &'static str,
    outputs: Vec<String>,
}

/// Collects manifest data over a run and writes it on success when a
/// manifest path was requested.
pub struct ManifestBuilder {
    path: Option<PathBuf>,
    command: String,
    started_at: String,
    config: Option<RunConfig>,
    outputs: Vec<String>,
}

impl ManifestBuilder {
    pub fn start(path: Option<&Path>) -> Self {
        ManifestBuilder {
            path: path.map(Path::to_path_buf),
            command: std::env::args().collect::<Vec<_>>().join(" "),
            started_at: chrono::Utc::now().to_rfc3339(),
            config: None,
            outputs: Vec::new(),
        }
    }

    pub fn set_config(&mut self, config: &RunConfig) {
        self.config = Some(config.clone());
    }

    pub fn add_output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    pub fn finish(self) -> std::io::Result<()> {
        let Some(path) = self.path else {
            return Ok(());
        };
        let config = self.config.unwrap_or_default();
        let manifest = RunManifest {
            command: self.command,
            config: &config,
            started_at: self.started_at,
            finished_at: chrono::Utc::now().to_rfc3339(),
            artifact_version: env!("CARGO_PKG_VERSION"),
            outputs: self.outputs,
        };
        write_text(
            &path,
            &serde_json::to_string_pretty(&manifest).expect("manifest serializes"),
        )
    }
}
