use std::path::Path;

use serde::Serialize;

use super::config::ExperimentConfig;
use super::manifest::Manifest;
use super::output::{fig2_plot_script, write_csv, write_text};
use super::{Check, RunReport};
use crate::error::Result;
use crate::green::{spatial_profile, RadialSnapshot, SynthesisOptions};
use crate::medium::PowerLawMedium;

/// Full width at half maximum of `|values|` around its peak, in units of
/// the sample spacing `step`. Walks outward until the level drops below half.
pub fn fwhm(values: &[f64], step: f64) -> f64 {
    let (imax, vmax) = values
        .iter()
        .enumerate()
        .fold((0, 0.0), |(bi, bv), (i, v)| if v.abs() > bv { (i, v.abs()) } else { (bi, bv) });
    let half = 0.5 * vmax;
    let mut lo = imax;
    while lo > 0 && values[lo - 1].abs() >= half {
        lo -= 1;
    }
    let mut hi = imax;
    while hi + 1 < values.len() && values[hi + 1].abs() >= half {
        hi += 1;
    }
    (hi - lo + 1) as f64 * step
}

/// Half-width of the radial band, relative to `c_s t`, used for the diffusion checks.
pub const FRONT_BAND: f64 = 0.25;

#[derive(Debug, Serialize)]
struct FieldResult {
    label: String,
    y: f64,
    nu_s: f64,
    profile_max: f64,
    profile_fwhm: f64,
    field_file: String,
    profile_file: String,
}

fn argmax_abs(v: &[f64]) -> usize {
    (0..v.len()).fold(0, |b, i| if v[i].abs() > v[b].abs() { i } else { b })
}

/// Planar snapshots plus a transverse radial profile for each medium.
pub fn run_fig2(config: &ExperimentConfig, out: &Path) -> Result<RunReport> {
    let grid = config.time_grid()?;
    let opts = SynthesisOptions::default();
    let t = config.study.t_snapshot;
    let g = &config.grid;
    let mut manifest = Manifest::begin(
        out,
        config,
        vec![
            "axes in SI units: x, y in m; field in m/N".into(),
            "planar slice z = 0 of the scalar field with the point force along x".into(),
            "radial profile taken along the y axis (transverse to the force)".into(),
        ],
    )?;
    let mut media: Vec<(String, PowerLawMedium)> =
        vec![("elastic".to_string(), config.elastic_medium()?)];
    for c in &config.cases {
        media.push((format!("y{}_nu{}", c.y, c.nu_s), config.case_medium(*c)?));
    }

    // the profile covers the shear front with margin on both sides
    let r_lo = 0.1 * config.medium.c_s * t;
    let r_hi = 3.0 * config.medium.c_s * t;
    let radii: Vec<f64> = {
        let count = ((r_hi - r_lo) / g.profile_step).round() as usize + 1;
        (0..count).map(|k| r_lo + k as f64 * g.profile_step).collect()
    };
    // diffusion metrics only look at the band around the shear front; closer
    // to the origin the quasi-static r^-3 term dominates the viscous field
    let front_r = config.medium.c_s * t;
    let window = {
        let lo = radii.iter().position(|&r| r >= (1.0 - FRONT_BAND) * front_r).unwrap_or(0);
        let hi = radii
            .iter()
            .rposition(|&r| r <= (1.0 + FRONT_BAND) * front_r)
            .unwrap_or(radii.len() - 1);
        lo..hi + 1
    };

    let mut results = Vec::new();
    let mut files = Vec::new();
    let mut profiles = Vec::new();
    for (label, medium) in &media {
        let field = spatial_profile(medium, t, g.extent, g.points, g.radial_samples, &grid, &opts)?;
        let field_file = format!("fig2_{label}.csv");
        let path = write_csv(
            &out.join(&field_file),
            &["x", "y", "value"],
            field.xs.iter().enumerate().flat_map(|(ix, &x)| {
                let ys = &field.ys;
                let vals = &field.values;
                ys.iter()
                    .enumerate()
                    .map(move |(iy, &y)| vec![x, y, vals[ix * ys.len() + iy]])
            }),
        )?;
        manifest.record_output(&path);
        files.push(field_file.clone());

        let snap = RadialSnapshot::compute(medium, t, &radii, &grid, &opts)?;
        let profile: Vec<f64> = (0..radii.len()).map(|k| snap.planar_value(medium, k, 0.0)).collect();
        let profile_file = format!("fig2_{label}_profile.csv");
        let path = write_csv(
            &out.join(&profile_file),
            &["r", "value"],
            radii.iter().zip(&profile).map(|(&r, &v)| vec![r, v]),
        )?;
        manifest.record_output(&path);
        let front = &profile[window.clone()];
        let max = front[argmax_abs(front)].abs();
        let width = fwhm(front, g.profile_step);
        results.push(FieldResult {
            label: label.clone(),
            y: medium.y(),
            nu_s: medium.nu_s(),
            profile_max: max,
            profile_fwhm: width,
            field_file,
            profile_file,
        });
        profiles.push(snap);
    }

    let mut checks = Vec::new();
    // elastic fronts
    let elastic = &media[0].1;
    let s_front = radii[argmax_abs(&profiles[0].g_s)];
    let s_expected = elastic.c_s() * t;
    let s_tol = 2.0 * elastic.c_s() * grid.dt;
    checks.push(Check::new(
        "elastic shear front",
        (s_front - s_expected).abs() <= s_tol,
        format!("front at {s_front:.6e} m, expected {s_expected:.6e} m (tol {s_tol:.2e})"),
    ));
    let p_expected = elastic.c_p() * t;
    let p_step = elastic.c_p() * grid.dt / 4.0;
    let p_radii: Vec<f64> = {
        let lo = 0.9 * p_expected;
        let count = ((0.2 * p_expected) / p_step).round() as usize + 1;
        (0..count).map(|k| lo + k as f64 * p_step).collect()
    };
    let p_snap = RadialSnapshot::compute(elastic, t, &p_radii, &grid, &opts)?;
    let p_front = p_radii[argmax_abs(&p_snap.g_p)];
    let p_tol = 2.0 * elastic.c_p() * grid.dt;
    checks.push(Check::new(
        "elastic pressure front",
        (p_front - p_expected).abs() <= p_tol,
        format!("front at {p_front:.6e} m, expected {p_expected:.6e} m (tol {p_tol:.2e})"),
    ));
    for res in &results[1..] {
        checks.push(Check::new(
            format!("diffused front max ({})", res.label),
            res.profile_max < results[0].profile_max,
            format!("{:.6e} vs elastic {:.6e}", res.profile_max, results[0].profile_max),
        ));
        checks.push(Check::new(
            format!("diffused front width ({})", res.label),
            res.profile_fwhm > results[0].profile_fwhm,
            format!("{:.6e} m vs elastic {:.6e} m", res.profile_fwhm, results[0].profile_fwhm),
        ));
    }
    let script = write_text(&out.join("fig2_plot.py"), &fig2_plot_script(&files))?;
    manifest.record_output(&script);
    let results = serde_json::json!({
        "t": t,
        "front_band": [radii[window.start], radii[window.end - 1]],
        "shear_front": s_front,
        "pressure_front": p_front,
        "fields": results,
    });
    let path = manifest.finish(&checks, results.clone())?;
    Ok(RunReport {
        scenario: config.scenario,
        checks,
        manifest: path,
        results,
    })
}
