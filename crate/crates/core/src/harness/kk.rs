use std::path::Path;

use serde::Serialize;

use super::config::ExperimentConfig;
use super::manifest::Manifest;
use super::output::write_csv;
use super::{Check, RunReport};
use crate::error::Result;
use crate::medium::{kramers_kronig_residual, Mode};
use crate::spectral::FrequencyGrid;

/// Residual bound for the Voigt model.
pub const VOIGT_LIMIT: f64 = 0.05;
/// Residual bound for other exponents.
pub const GENERAL_LIMIT: f64 = 0.1;

#[derive(Debug, Serialize)]
struct CaseResult {
    y: f64,
    nu_s: f64,
    band_edges: Vec<f64>,
    residuals: Vec<f64>,
}

fn list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(", ")
}

/// Kramers-Kronig residual of the shear dispersion under band doubling.
pub fn run_kk_check(config: &ExperimentConfig, out: &Path) -> Result<RunReport> {
    let s = &config.study;
    let mut manifest = Manifest::begin(
        out,
        config,
        vec![format!(
            "residual over |w| <= {} rad/s, d_omega = {}, shear mode",
            s.kk_omega, s.kk_d_omega
        )],
    )?;
    let mut checks = Vec::new();
    let mut cases = Vec::new();
    let mut rows = Vec::new();
    for case in &s.kk_cases {
        let medium = config.case_medium(*case)?;
        let mut edges = Vec::new();
        let mut residuals = Vec::new();
        for &f in &s.kk_band_factors {
            let w_max = f * s.kk_omega;
            let n = 2 * (w_max / s.kk_d_omega).round() as usize;
            let band = FrequencyGrid::new(n, s.kk_d_omega)?;
            let res = kramers_kronig_residual(&medium, Mode::S, &band, s.kk_omega)?;
            edges.push(band.omega_max());
            residuals.push(res);
            rows.push(vec![case.y, case.nu_s, band.omega_max(), res]);
        }
        let voigt = medium.is_voigt();
        let limit = if voigt { VOIGT_LIMIT } else { GENERAL_LIMIT };
        let widest = *residuals.last().unwrap_or(&f64::INFINITY);
        let label = format!("y={}, nu_s={}", case.y, case.nu_s);
        checks.push(Check::new(
            format!("residual bound ({label})"),
            residuals.iter().all(|&r| r < limit),
            format!("residuals {} vs {limit}", list(&residuals)),
        ));
        if voigt {
            checks.push(Check::new(
                format!("decreasing under band doubling ({label})"),
                residuals.windows(2).all(|w| w[1] < w[0]),
                format!("residuals {}, widest {widest:.3e}", list(&residuals)),
            ));
        }
        cases.push(CaseResult {
            y: case.y,
            nu_s: case.nu_s,
            band_edges: edges,
            residuals,
        });
    }
    let path = write_csv(&out.join("kk_residuals.csv"), &["y", "nu_s", "omega_max", "residual"], rows)?;
    manifest.record_output(&path);
    let results = serde_json::json!({ "cases": cases });
    let path = manifest.finish(&checks, results.clone())?;
    Ok(RunReport {
        scenario: config.scenario,
        checks,
        manifest: path,
        results,
    })
}
