use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::config::ExperimentConfig;
use super::manifest::Manifest;
use super::output::{image_plot_script, write_csv, write_text};
use super::{Check, RunReport};
use crate::deatten::ViscosityScale;
use crate::error::{Error, Result};
use crate::green::SynthesisOptions;
use crate::imaging::{
    backpropagation_image, circular_array, correct_recordings, kirchhoff_image,
    simulate_recording, time_reversal_image, AnalysisBand, Channel, ImageGrid,
    SensorArrayRecording,
};

pub const RUNTIME_BUDGET_S: f64 = 120.0;
/// Allowed localization error after correction, in voxels.
pub const MAX_VOXEL_ERROR: usize = 1;
/// Fraction of sources whose corrected image must be sharper.
pub const SHARPER_FRACTION: f64 = 0.8;
pub const METHODS: [&str; 3] = ["kirchhoff", "time_reversal", "backpropagation"];

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MethodScore {
    pub error_voxels: usize,
    pub peak_to_median: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SourceOutcome {
    pub node: [usize; 3],
    pub position: [f64; 3],
    /// Indexed like [`METHODS`].
    pub raw: [MethodScore; 3],
    pub corrected: [MethodScore; 3],
}

#[derive(Debug, Clone)]
pub struct LocalizeOutcome {
    pub report: RunReport,
    pub sources: Vec<SourceOutcome>,
}

/// Distinct grid nodes in the `z = centre` plane within `radius` of `center`.
pub fn random_sources<R: Rng>(
    grid: &ImageGrid,
    center: [f64; 3],
    radius: f64,
    count: usize,
    rng: &mut R,
) -> Result<Vec<[usize; 3]>> {
    let mut out: Vec<[usize; 3]> = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > 1000 * count.max(1) {
            return Err(Error::Config("could not place distinct sources; widen source_radius".into()));
        }
        let x = center[0] + radius * (2.0 * rng.random::<f64>() - 1.0);
        let y = center[1] + radius * (2.0 * rng.random::<f64>() - 1.0);
        let Some(node) = grid.nearest([x, y, center[2]]) else {
            continue;
        };
        let p = grid.node(node);
        let d = ((p[0] - center[0]).powi(2) + (p[1] - center[1]).powi(2)).sqrt();
        if d <= radius && !out.contains(&node) {
            out.push(node);
        }
    }
    Ok(out)
}

fn score_all(
    rec: &SensorArrayRecording,
    grid: &ImageGrid,
    opts: &SynthesisOptions,
    truth: [usize; 3],
) -> Result<([MethodScore; 3], [ImageGrid; 3])> {
    let images = [
        kirchhoff_image(rec, grid),
        time_reversal_image(rec, grid, opts),
        backpropagation_image(rec, grid, opts, AnalysisBand::default())?,
    ];
    let scores = [0, 1, 2].map(|k| MethodScore {
        error_voxels: images[k].voxel_error(truth),
        peak_to_median: images[k].summary().peak_to_median,
    });
    Ok((scores, images))
}

fn write_image(path: &Path, img: &ImageGrid) -> Result<()> {
    write_csv(
        path,
        &["x", "y", "z", "score"],
        (0..img.len()).map(|i| {
            let p = img.node(img.unravel(i));
            vec![p[0], p[1], p[2], img.values[i]]
        }),
    )?;
    Ok(())
}

/// Forward-simulates viscous recordings from random sources, corrects them
/// and compares the three imaging functionals with and without correction.
pub fn run_localize(config: &ExperimentConfig, out: &Path) -> Result<LocalizeOutcome> {
    let started = Instant::now();
    let medium = config.base_medium()?;
    let scale = ViscosityScale::from_medium(&medium)?;
    let grid = config.time_grid()?;
    let geo = &config.geometry;
    let opts = SynthesisOptions::default();
    let search = ImageGrid::centered(
        geo.array_center,
        config.grid.voxel,
        [config.grid.search_half, config.grid.search_half, 0],
    )?;
    let mut manifest = Manifest::begin(
        out,
        config,
        vec![
            "recorded channel: transverse (shear far-field scalar G^s)".into(),
            format!("correction: Lt* followed by the {} inverse", config.study.method),
            "planar search grid in the array plane; errors are Chebyshev distances in voxels".into(),
        ],
    )?;
    let receivers = circular_array(geo.array_center, geo.array_radius, geo.receivers);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let nodes = random_sources(&search, geo.array_center, geo.source_radius, geo.sources, &mut rng)?;

    let mut sources = Vec::new();
    for (k, &node) in nodes.iter().enumerate() {
        let position = search.node(node);
        let mut rec =
            simulate_recording(&medium, position, &receivers, &grid, Channel::Transverse, &opts)?;
        if let Some(snr) = config.study.snr_db {
            rec = rec.with_noise(snr, &mut rng)?;
        }
        let corrected = correct_recordings(&rec, scale, config.study.method)?;
        let (raw, _) = score_all(&rec, &search, &opts, node)?;
        let (fixed, images) = score_all(&corrected, &search, &opts, node)?;
        if k == 0 {
            for (name, img) in METHODS.iter().zip(&images) {
                let path = out.join(format!("localize_image_{name}.csv"));
                write_image(&path, img)?;
                manifest.record_output(&path);
            }
        }
        log::info!("source {k} at {position:?}: raw {raw:?}, corrected {fixed:?}");
        sources.push(SourceOutcome {
            node,
            position,
            raw,
            corrected: fixed,
        });
    }
    let seconds = started.elapsed().as_secs_f64();

    let path = write_csv(
        &out.join("localize_sources.csv"),
        &[
            "x", "y", "z",
            "kirchhoff_err_raw", "kirchhoff_err_corrected", "kirchhoff_p2m_raw", "kirchhoff_p2m_corrected",
            "tr_err_raw", "tr_err_corrected", "tr_p2m_raw", "tr_p2m_corrected",
            "bp_err_raw", "bp_err_corrected", "bp_p2m_raw", "bp_p2m_corrected",
        ],
        sources.iter().map(|s| {
            let mut row = s.position.to_vec();
            for m in 0..3 {
                row.extend([
                    s.raw[m].error_voxels as f64,
                    s.corrected[m].error_voxels as f64,
                    s.raw[m].peak_to_median,
                    s.corrected[m].peak_to_median,
                ]);
            }
            row
        }),
    )?;
    manifest.record_output(&path);
    let script = write_text(
        &out.join("localize_plot.py"),
        &image_plot_script("localize_image_kirchhoff.csv"),
    )?;
    manifest.record_output(&script);

    let mut checks = Vec::new();
    let needed = (SHARPER_FRACTION * sources.len() as f64).ceil() as usize;
    for (m, name) in METHODS.iter().enumerate() {
        let worst = sources.iter().map(|s| s.corrected[m].error_voxels).max().unwrap_or(0);
        checks.push(Check::new(
            format!("{name} localization after correction"),
            worst <= MAX_VOXEL_ERROR,
            format!(
                "worst error {worst} voxels over {} sources (allowed {MAX_VOXEL_ERROR})",
                sources.len()
            ),
        ));
        let sharper = sources
            .iter()
            .filter(|s| s.corrected[m].peak_to_median > s.raw[m].peak_to_median)
            .count();
        checks.push(Check::new(
            format!("{name} peak-to-median gain"),
            sharper >= needed,
            format!("{sharper}/{} sources sharper after correction (need {needed})", sources.len()),
        ));
    }
    checks.push(Check::new(
        "runtime",
        seconds < RUNTIME_BUDGET_S,
        format!("{seconds:.2} s"),
    ));
    let results = serde_json::json!({
        "methods": METHODS,
        "sources": sources,
        "seconds": seconds,
        "eps": scale.eps(),
    });
    let path = manifest.finish(&checks, results.clone())?;
    Ok(LocalizeOutcome {
        report: RunReport {
            scenario: config.scenario,
            checks,
            manifest: path,
            results,
        },
        sources,
    })
}
