//! Experiment orchestration behind the `visco` command line.
//!
//! Every scenario writes its manifest first, then CSV data and a plot
//! script, and finally rewrites the manifest with results and checks.

use std::path::PathBuf;

use serde::Serialize;

pub mod config;
pub mod manifest;
pub mod output;

mod fig1;
mod fig2;
mod fig3;
mod kk;
mod localize;
mod tools;

pub use fig1::run_fig1;
pub use fig2::{fwhm, run_fig2};
pub use fig3::{fig3_errors, loglog_slope, run_fig3};
pub use kk::run_kk_check;
pub use localize::{random_sources, run_localize, LocalizeOutcome, SourceOutcome};
pub use tools::{run_correct, run_green, CorrectRequest, GreenRequest};

use config::Scenario;

/// One pass/fail assertion of a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub scenario: Scenario,
    pub checks: Vec<Check>,
    pub manifest: PathBuf,
    pub results: serde_json::Value,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}
