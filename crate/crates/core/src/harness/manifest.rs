use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use super::config::ExperimentConfig;
use super::Check;
use crate::error::Result;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Running,
    Complete,
    Failed,
}

#[derive(Debug, Clone, Serialize)]
struct Document {
    tool: &'static str,
    version: &'static str,
    scenario: String,
    status: Status,
    seed: u64,
    config: ExperimentConfig,
    notes: Vec<String>,
    outputs: Vec<String>,
    checks: Vec<Check>,
    results: serde_json::Value,
    elapsed_s: f64,
}

/// Run manifest. Written with status `running` before any data so that an
/// interrupted run is detectable, then rewritten on completion.
#[derive(Debug)]
pub struct Manifest {
    path: PathBuf,
    doc: Document,
    started: Instant,
}

impl Manifest {
    pub fn begin(dir: &Path, config: &ExperimentConfig, notes: Vec<String>) -> Result<Self> {
        fs::create_dir_all(dir)?;
        let m = Self {
            path: dir.join(MANIFEST_FILE),
            doc: Document {
                tool: env!("CARGO_PKG_NAME"),
                version: env!("CARGO_PKG_VERSION"),
                scenario: config.scenario.to_string(),
                status: Status::Running,
                seed: config.seed,
                config: config.clone(),
                notes,
                outputs: Vec::new(),
                checks: Vec::new(),
                results: serde_json::Value::Null,
                elapsed_s: 0.0,
            },
            started: Instant::now(),
        };
        m.write()?;
        Ok(m)
    }

    pub fn record_output(&mut self, file: &Path) {
        let name = file
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        self.doc.outputs.push(name);
    }

    pub fn finish(mut self, checks: &[Check], results: serde_json::Value) -> Result<PathBuf> {
        self.doc.status = if checks.iter().all(|c| c.passed) {
            Status::Complete
        } else {
            Status::Failed
        };
        self.doc.checks = checks.to_vec();
        self.doc.results = results;
        self.doc.elapsed_s = self.started.elapsed().as_secs_f64();
        self.write()?;
        Ok(self.path)
    }

    fn write(&self) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.doc)?;
        fs::write(&self.path, text + "\n")?;
        Ok(())
    }
}
