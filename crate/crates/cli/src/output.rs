use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use ricci_gap::Rational;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    Rational,
    Float,
}

/// Provenance written next to every output.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub input_hashes: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub tool_version: &'static str,
    pub arithmetic: Arithmetic,
    pub wall_time_seconds: f64,
}

pub struct RunContext {
    started: Instant,
    command_line: Vec<String>,
    inputs: BTreeMap<String, String>,
    seed: Option<u64>,
    arithmetic: Arithmetic,
}

impl RunContext {
    pub fn new(command_line: Vec<String>) -> Self {
        RunContext {
            started: Instant::now(),
            command_line,
            inputs: BTreeMap::new(),
            seed: None,
            arithmetic: Arithmetic::Rational,
        }
    }

    pub fn record_input(&mut self, path: &Path, bytes: &[u8]) {
        let digest = Sha256::digest(bytes);
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.inputs.insert(path.display().to_string(), hex);
    }

    pub fn set_seed(&mut self, seed: Option<u64>) {
        if seed.is_some() {
            self.seed = seed;
        }
    }

    pub fn set_arithmetic(&mut self, arithmetic: Arithmetic) {
        self.arithmetic = arithmetic;
    }

    pub fn manifest(&self) -> RunManifest {
        RunManifest {
            command_line: self.command_line.clone(),
            input_hashes: self.inputs.clone(),
            seed: self.seed,
            tool_version: env!("CARGO_PKG_VERSION"),
            arithmetic: self.arithmetic,
            wall_time_seconds: self.started.elapsed().as_secs_f64(),
        }
    }
}

/// Where the primary output, the summary and the manifest go.
pub struct Sinks {
    pub out: Option<PathBuf>,
    pub summary: Option<PathBuf>,
    pub run_manifest: Option<PathBuf>,
}

fn write_file(path: &Path, content: &str) -> CliResult<()> {
    std::fs::write(path, content).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn io_err(source: std::io::Error) -> CliError {
    CliError::Io { path: "<stdio>".into(), source }
}

impl Sinks {
    pub fn primary(&self, content: &str) -> CliResult<()> {
        match &self.out {
            Some(path) => write_file(path, content),
            None => std::io::stdout().lock().write_all(content.as_bytes()).map_err(io_err),
        }
    }

    pub fn summary(&self, value: &impl Serialize) -> CliResult<()> {
        let text = serde_json::to_string_pretty(value)? + "\n";
        match &self.summary {
            Some(path) => write_file(path, &text),
            None => std::io::stderr().lock().write_all(text.as_bytes()).map_err(io_err),
        }
    }

    pub fn manifest(&self, ctx: &RunContext) -> CliResult<()> {
        let text = serde_json::to_string_pretty(&ctx.manifest())? + "\n";
        let target = self.run_manifest.clone().or_else(|| {
            self.out.as_ref().map(|p| {
                let mut s = p.clone().into_os_string();
                s.push(".manifest.json");
                PathBuf::from(s)
            })
        });
        match target {
            Some(path) => write_file(&path, &text),
            None => std::io::stderr().lock().write_all(text.as_bytes()).map_err(io_err),
        }
    }
}

/// `num/den`, also for integers.
pub fn rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io {
        path: "<csv buffer>".into(),
        source: e.into_error(),
    })?;
    Ok(String::from_utf8(bytes).expect("CSV fields are UTF-8"))
}
