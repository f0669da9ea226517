use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use super::config::ExperimentConfig;
use super::manifest::Manifest;
use super::output::{fig3_plot_script, write_csv, write_text};
use super::{Check, RunReport};
use crate::deatten::{l_tilde_at, ViscosityScale};
use crate::error::{invalid, Result};

pub const SLOPE_RANGE: (f64, f64) = (1.7, 2.3);
pub const RUNTIME_BUDGET_S: f64 = 30.0;
/// Error allowed at `eps = 0`, where the operator is the identity.
pub const ZERO_EPS_FLOOR: f64 = 1e-10;
/// Scale shown in the single-curve panel.
pub const CURVE_EPS: f64 = 1e-4;
const SAMPLES: usize = 2000;
const T_MAX: f64 = 2.0;

fn phi(t: f64) -> f64 {
    (-50.0 * (t - 1.0) * (t - 1.0)).exp()
}

fn phi_second(t: f64) -> f64 {
    let u = t - 1.0;
    (1e4 * u * u - 100.0) * phi(t)
}

/// `sup_t |Lt phi - (phi + eps/2 t phi'')|` on `(0, 2]` for each `eps`.
pub fn fig3_errors(eps: &[f64]) -> Result<Vec<f64>> {
    eps.iter()
        .map(|&e| {
            let scale = ViscosityScale::new(e)?;
            Ok((1..=SAMPLES)
                .map(|k| k as f64 * T_MAX / SAMPLES as f64)
                .map(|t| (l_tilde_at(scale, &phi, t) - phi(t) - 0.5 * e * t * phi_second(t)).abs())
                .fold(0.0, f64::max))
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 || x.iter().chain(y).any(|&v| !(v > 0.0)) {
        return Err(invalid("log-log fit needs >= 2 positive pairs"));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    Ok(sxy / sxx)
}

#[derive(Debug, Serialize)]
struct Row {
    eps: f64,
    error: f64,
}

/// Order of the Gaussian-kernel approximation for the Gaussian bump.
pub fn run_fig3(config: &ExperimentConfig, out: &Path) -> Result<RunReport> {
    let mut manifest = Manifest::begin(
        out,
        config,
        vec![
            "test function exp(-50 (t - 1)^2) on (0, 2], 2000 samples".into(),
            "eps = nu_s / c_s^2 in seconds".into(),
        ],
    )?;
    let started = Instant::now();
    let eps = &config.study.eps;
    let errors = fig3_errors(eps)?;
    let slope = loglog_slope(eps, &errors);
    let seconds = started.elapsed().as_secs_f64();
    let zero = fig3_errors(&[0.0])?[0];

    let path = write_csv(
        &out.join("fig3_errors.csv"),
        &["eps", "error"],
        eps.iter().zip(&errors).map(|(&e, &v)| vec![e, v]),
    )?;
    manifest.record_output(&path);
    let scale = ViscosityScale::new(CURVE_EPS)?;
    let path = write_csv(
        &out.join("fig3_curves.csv"),
        &["t", "phi", "l_tilde", "approximation"],
        (1..=SAMPLES).map(|k| {
            let t = k as f64 * T_MAX / SAMPLES as f64;
            vec![t, phi(t), l_tilde_at(scale, &phi, t), phi(t) + 0.5 * CURVE_EPS * t * phi_second(t)]
        }),
    )?;
    manifest.record_output(&path);
    let script = write_text(&out.join("fig3_plot.py"), &fig3_plot_script())?;
    manifest.record_output(&script);

    let mut checks = Vec::new();
    match &slope {
        Ok(s) => checks.push(Check::new(
            "log-log slope",
            (SLOPE_RANGE.0..=SLOPE_RANGE.1).contains(s),
            format!("slope {s:.4} (accepted {:?})", SLOPE_RANGE),
        )),
        Err(e) => checks.push(Check::new("log-log slope", false, e.to_string())),
    }
    checks.push(Check::new(
        "runtime",
        seconds < RUNTIME_BUDGET_S,
        format!("{seconds:.3} s"),
    ));
    checks.push(Check::new(
        "identity at zero viscosity",
        zero < ZERO_EPS_FLOOR,
        format!("error {zero:e}"),
    ));
    let rows: Vec<Row> = eps.iter().zip(&errors).map(|(&eps, &error)| Row { eps, error }).collect();
    let results = serde_json::json!({
        "slope": slope.ok(),
        "rows": rows,
        "seconds": seconds,
    });
    let path = manifest.finish(&checks, results.clone())?;
    Ok(RunReport {
        scenario: config.scenario,
        checks,
        manifest: path,
        results,
    })
}
