use std::path::{Path, PathBuf};

use super::config::ExperimentConfig;
use super::manifest::Manifest;
use super::output::{read_trace, write_csv};
use super::{Check, RunReport};
use crate::deatten::{apply_l_tilde_star, invert_attenuation, InversionMethod, SampledSignal, ViscosityScale};
use crate::error::{Error, Result};
use crate::green::{green_time_tensor, SourceReceiverGeometry, SynthesisOptions};

#[derive(Debug, Clone)]
pub struct GreenRequest {
    pub source: [f64; 3],
    pub receiver: [f64; 3],
}

/// Writes the nine tensor components at one source-receiver pair.
pub fn run_green(config: &ExperimentConfig, req: &GreenRequest, out: &Path) -> Result<RunReport> {
    let medium = config.base_medium()?;
    let grid = config.time_grid()?;
    let geo = SourceReceiverGeometry::new(req.source, req.receiver)?;
    let opts = SynthesisOptions::default();
    let mut manifest = Manifest::begin(
        out,
        config,
        vec![format!("source {:?}, receiver {:?}", req.source, req.receiver)],
    )?;
    let g = green_time_tensor(&medium, &geo, &grid, &opts)?;
    let path = write_csv(
        &out.join("green.csv"),
        &["t", "g11", "g12", "g13", "g21", "g22", "g23", "g31", "g32", "g33"],
        (0..grid.n).map(|k| {
            let mut row = vec![grid.time(k)];
            row.extend(g.g[k].iter().flatten());
            row
        }),
    )?;
    manifest.record_output(&path);
    if g.aliased {
        log::warn!(
            "spectrum not band-limited: untapered edge level {:.3e} above {:.1e}; arrivals are taper-shaped",
            g.edge_ratio,
            opts.alias_floor
        );
    }
    let asym = g.asymmetry();
    let checks = vec![Check::new(
        "tensor symmetry",
        asym <= 1e-12 * g.sup_norm(),
        format!("max |G_ij - G_ji| = {asym:.3e}, sup {:.3e}", g.sup_norm()),
    )];
    let results = serde_json::json!({
        "r": geo.r(),
        "edge_ratio": g.edge_ratio,
        "aliased": g.aliased,
        "asymmetry": g.asymmetry(),
        "sup_norm": g.sup_norm(),
    });
    let path = manifest.finish(&checks, results.clone())?;
    Ok(RunReport {
        scenario: config.scenario,
        checks,
        manifest: path,
        results,
    })
}

#[derive(Debug, Clone)]
pub struct CorrectRequest {
    pub input: PathBuf,
    pub method: InversionMethod,
}

/// Reads a uniformly sampled `(t, value)` trace and writes its de-attenuated
/// estimate to `corrected.csv`.
pub fn run_correct(config: &ExperimentConfig, req: &CorrectRequest, out: &Path) -> Result<RunReport> {
    let (t, v) = read_trace(&req.input)?;
    if t.len() < 4 {
        return Err(Error::Config(format!("{}: need at least 4 samples", req.input.display())));
    }
    let dt = t[1] - t[0];
    let uneven = t
        .windows(2)
        .any(|w| ((w[1] - w[0]) - dt).abs() > 1e-6 * dt.abs());
    if !(dt > 0.0) || uneven {
        return Err(Error::Config(format!("{}: samples must be uniformly spaced in t", req.input.display())));
    }
    let scale = ViscosityScale::from_voigt(config.medium.nu_s, config.medium.c_s)?;
    let signal = SampledSignal::new(t[0], dt, v)?;
    let mut manifest = Manifest::begin(
        out,
        config,
        vec![
            format!("input {}", req.input.display()),
            format!("eps = {} s, method {}", scale.eps(), req.method),
        ],
    )?;
    let adjoint = apply_l_tilde_star(scale, &signal);
    let corrected = invert_attenuation(scale, &adjoint, req.method)?;
    let path = write_csv(
        &out.join("corrected.csv"),
        &["t", "value"],
        (0..corrected.len()).map(|k| vec![corrected.time(k), corrected.values[k]]),
    )?;
    manifest.record_output(&path);
    let checks = vec![Check::new(
        "causal input",
        signal.is_causal(),
        "samples at t < 0 must vanish".to_string(),
    )];
    let results = serde_json::json!({
        "eps": scale.eps(),
        "samples": corrected.len(),
        "input_sup": signal.sup_norm(),
        "output_sup": corrected.sup_norm(),
    });
    let path = manifest.finish(&checks, results.clone())?;
    Ok(RunReport {
        scenario: config.scenario,
        checks,
        manifest: path,
        results,
    })
}
