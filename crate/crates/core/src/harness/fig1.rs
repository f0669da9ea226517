use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use super::config::ExperimentConfig;
use super::manifest::Manifest;
use super::output::{fig1_plot_script, write_csv, write_text};
use super::{Check, RunReport};
use crate::error::{Error, Result};
use crate::green::{mode_series, temporal_profile, SynthesisOptions};
use crate::medium::Mode;

/// Runtime budget per case, in seconds.
pub const CASE_BUDGET_S: f64 = 10.0;
/// Traces are written up to this multiple of `r / c_s`.
pub const PLOT_SPAN: f64 = 4.0;

#[derive(Debug, Serialize)]
struct CaseResult {
    y: f64,
    nu_s: f64,
    elastic_peak: f64,
    viscous_peak: f64,
    viscous_peak_time: f64,
    edge_ratio: f64,
    non_perturbative: bool,
    seconds: f64,
    file: String,
}

fn peak(values: &[f64]) -> (usize, f64) {
    values
        .iter()
        .enumerate()
        .fold((0, 0.0), |(bi, bv), (i, v)| if v.abs() > bv { (i, v.abs()) } else { (bi, bv) })
}

/// Temporal overlays of the elastic reference and each viscous case.
pub fn run_fig1(config: &ExperimentConfig, out: &Path) -> Result<RunReport> {
    let grid = config.time_grid()?;
    let r = config.geometry.r;
    let c_s = config.medium.c_s;
    let w_needed = 40.0 * c_s / r;
    if grid.frequency_grid().omega_max() < w_needed || grid.duration() < 2.0 * r / c_s {
        return Err(Error::Config(format!(
            "grid too coarse: need omega_max >= {w_needed} and a window >= {}",
            2.0 * r / c_s
        )));
    }
    let opts = SynthesisOptions::default();
    let mut manifest = Manifest::begin(
        out,
        config,
        vec![
            "axes in SI units: t in s, trace in m/N".into(),
            format!("traces written for t <= {PLOT_SPAN} r/c_s; peaks use the full window"),
            format!(
                "band limit: omega_max = {:.6e} rad/s, raised-cosine taper over the top {}% on both traces",
                grid.frequency_grid().omega_max(),
                100.0 * opts.taper_fraction
            ),
        ],
    )?;
    let elastic_medium = config.elastic_medium()?;
    let elastic = temporal_profile(&elastic_medium, r, &grid, &opts)?;
    let (_, elastic_peak) = peak(&elastic);
    let shear = mode_series(&elastic_medium, Mode::S, r, &grid, &opts)?;
    let (arrival_idx, _) = peak(&shear.far);
    let arrival = grid.time(arrival_idx);

    let mut checks = vec![Check::new(
        "elastic shear arrival",
        (arrival - r / c_s).abs() <= grid.dt,
        format!("arrival {arrival:.6e} s vs r/c_s = {:.6e} s (dt {:.3e})", r / c_s, grid.dt),
    )];
    let plotted = grid.n.min((PLOT_SPAN * r / c_s / grid.dt).ceil() as usize + 1);
    let mut cases = Vec::new();
    let mut files = Vec::new();
    for (k, case) in config.cases.iter().enumerate() {
        let started = Instant::now();
        let medium = config.case_medium(*case)?;
        let viscous = temporal_profile(&medium, r, &grid, &opts)?;
        let edge = mode_series(&medium, Mode::S, r, &grid, &opts)?.edge_ratio;
        let seconds = started.elapsed().as_secs_f64();
        let (vi, viscous_peak) = peak(&viscous);
        let name = format!("fig1_case{}.csv", k + 1);
        let path = write_csv(
            &out.join(&name),
            &["t", "elastic", "viscous"],
            (0..plotted).map(|i| vec![grid.time(i), elastic[i], viscous[i]]),
        )?;
        manifest.record_output(&path);
        files.push(name.clone());
        let label = format!("y={}, nu_s={}", case.y, case.nu_s);
        checks.push(Check::new(
            format!("viscous peak below elastic ({label})"),
            viscous_peak < elastic_peak,
            format!("viscous {viscous_peak:.6e} vs elastic {elastic_peak:.6e}"),
        ));
        checks.push(Check::new(
            format!("runtime ({label})"),
            seconds < CASE_BUDGET_S,
            format!("{seconds:.3} s"),
        ));
        cases.push(CaseResult {
            y: case.y,
            nu_s: case.nu_s,
            elastic_peak,
            viscous_peak,
            viscous_peak_time: grid.time(vi),
            edge_ratio: edge,
            non_perturbative: !medium.is_perturbative(grid.frequency_grid().omega_max()),
            seconds,
            file: name,
        });
    }
    let script = write_text(&out.join("fig1_plot.py"), &fig1_plot_script(&files))?;
    manifest.record_output(&script);
    let results = serde_json::json!({
        "elastic_peak": elastic_peak,
        "elastic_shear_arrival": arrival,
        "dt": grid.dt,
        "cases": cases,
    });
    let path = manifest.finish(&checks, results.clone())?;
    Ok(RunReport {
        scenario: config.scenario,
        checks,
        manifest: path,
        results,
    })
}
