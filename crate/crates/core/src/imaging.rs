//! Source localization from array recordings.
//!
//! Three shear-wave functionals are evaluated on a voxel grid: Kirchhoff
//! travel-time stacking, time reversal (correlation with the band-limited
//! ideal Green function) and its frequency-domain twin, back-propagation.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::deatten::{
    apply_l_tilde_star_many, invert_attenuation, InversionMethod, SampledSignal, ViscosityScale,
};
use crate::error::{invalid, Error, Result};
use crate::green::{green_time_tensor, mode_series, SourceReceiverGeometry, SynthesisOptions};
use crate::medium::{Mode, PowerLawMedium};
use crate::spectral::{forward_transform, taper, TimeGrid};

/// Oversampling of the tabulated band-limited delta.
const DELTA_OVERSAMPLE: usize = 32;
/// Half-width, in samples, of the time-reversal correlation window.
const DELTA_HALF_WIDTH: usize = 128;

/// Which scalar is recorded at each receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    /// Shear far-field scalar `G^s(r, t)`.
    #[default]
    Transverse,
    /// One entry `G_ij` of the full tensor.
    Component(usize, usize),
}

impl std::fmt::Display for Channel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Transverse => f.write_str("transverse"),
            Self::Component(i, j) => write!(f, "g{}{}", i + 1, j + 1),
        }
    }
}

/// Receiver positions with one trace each, all on one time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorArrayRecording {
    receivers: Vec<[f64; 3]>,
    signals: Vec<SampledSignal>,
    speed: f64,
}

impl SensorArrayRecording {
    /// `speed` is the reference shear speed used for travel times.
    pub fn new(receivers: Vec<[f64; 3]>, signals: Vec<SampledSignal>, speed: f64) -> Result<Self> {
        if receivers.len() != signals.len() {
            return Err(invalid(format!(
                "{} receivers but {} signals",
                receivers.len(),
                signals.len()
            )));
        }
        if receivers.len() < 3 {
            return Err(invalid("need at least 3 receivers"));
        }
        if !(speed > 0.0 && speed.is_finite()) {
            return Err(invalid(format!("reference speed must be > 0, got {speed}")));
        }
        for s in &signals[1..] {
            signals[0].check_same_grid(s)?;
        }
        Ok(Self {
            receivers,
            signals,
            speed,
        })
    }

    pub fn receivers(&self) -> &[[f64; 3]] {
        &self.receivers
    }
    pub fn signals(&self) -> &[SampledSignal] {
        &self.signals
    }
    pub fn speed(&self) -> f64 {
        self.speed
    }
    pub fn len(&self) -> usize {
        self.receivers.len()
    }
    pub fn is_empty(&self) -> bool {
        self.receivers.is_empty()
    }

    pub fn with_signals(&self, signals: Vec<SampledSignal>) -> Result<Self> {
        Self::new(self.receivers.clone(), signals, self.speed)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let signals = self
            .signals
            .iter()
            .map(|s| SampledSignal {
                values: s.values.iter().map(|v| v * factor).collect(),
                ..s.clone()
            })
            .collect();
        Self {
            signals,
            ..self.clone()
        }
    }

    /// Adds white Gaussian noise at the given per-channel SNR in dB.
    pub fn with_noise<R: Rng>(&self, snr_db: f64, rng: &mut R) -> Result<Self> {
        let mut signals = Vec::with_capacity(self.len());
        for s in &self.signals {
            let power = s.values.iter().map(|v| v * v).sum::<f64>() / s.len() as f64;
            let sd = (power / 10f64.powf(snr_db / 10.0)).sqrt();
            let normal = Normal::new(0.0, sd).map_err(|e| invalid(e.to_string()))?;
            let values = s.values.iter().map(|v| v + normal.sample(rng)).collect();
            signals.push(SampledSignal {
                values,
                ..s.clone()
            });
        }
        self.with_signals(signals)
    }
}

/// Synthetic recordings of a point force at `source` in `medium`.
pub fn simulate_recording(
    medium: &PowerLawMedium,
    source: [f64; 3],
    receivers: &[[f64; 3]],
    grid: &TimeGrid,
    channel: Channel,
    opts: &SynthesisOptions,
) -> Result<SensorArrayRecording> {
    let signals = receivers
        .par_iter()
        .enumerate()
        .map(|(r, &x)| {
            let tag = |e: Error| Error::Channel {
                receiver: r,
                source: Box::new(e),
            };
            let geo = SourceReceiverGeometry::new(source, x).map_err(tag)?;
            let values = match channel {
                Channel::Transverse => {
                    mode_series(medium, Mode::S, geo.r(), grid, opts).map_err(tag)?.far
                }
                Channel::Component(i, j) => {
                    if i > 2 || j > 2 {
                        return Err(tag(invalid(format!("component ({i}, {j}) out of range"))));
                    }
                    green_time_tensor(medium, &geo, grid, opts).map_err(tag)?.component(i, j)
                }
            };
            SampledSignal::on_grid(grid, values).map_err(tag)
        })
        .collect::<Result<Vec<_>>>()?;
    SensorArrayRecording::new(receivers.to_vec(), signals, medium.c_s())
}

/// Applies `Lt*` and then the chosen inverse to every channel.
pub fn correct_recordings(
    recording: &SensorArrayRecording,
    scale: ViscosityScale,
    method: InversionMethod,
) -> Result<SensorArrayRecording> {
    let adjoint = apply_l_tilde_star_many(scale, &recording.signals)?;
    let corrected = adjoint
        .iter()
        .enumerate()
        .map(|(r, s)| {
            invert_attenuation(scale, s, method).map_err(|e| Error::Channel {
                receiver: r,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    recording.with_signals(corrected)
}

/// Axis-aligned voxel grid with one score per node.
///
/// Values are stored in lexicographic `(i, j, k)` order; the argmax takes the
/// lowest such index among ties.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageGrid {
    pub origin: [f64; 3],
    pub spacing: f64,
    pub shape: [usize; 3],
    pub values: Vec<f64>,
}

/// Peak location and sharpness of an image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImageSummary {
    pub argmax: [usize; 3],
    pub position: [f64; 3],
    pub peak: f64,
    pub peak_to_median: f64,
}

impl ImageGrid {
    pub fn new(origin: [f64; 3], spacing: f64, shape: [usize; 3]) -> Result<Self> {
        if !(spacing > 0.0 && spacing.is_finite()) || shape.contains(&0) {
            return Err(Error::InvalidGrid(format!(
                "bad image grid spacing={spacing} shape={shape:?}"
            )));
        }
        let len = shape[0] * shape[1] * shape[2];
        Ok(Self {
            origin,
            spacing,
            shape,
            values: vec![0.0; len],
        })
    }

    /// Grid of `2 * half_counts[a] + 1` nodes per axis centred on `center`.
    pub fn centered(center: [f64; 3], spacing: f64, half_counts: [usize; 3]) -> Result<Self> {
        let origin = [
            center[0] - half_counts[0] as f64 * spacing,
            center[1] - half_counts[1] as f64 * spacing,
            center[2] - half_counts[2] as f64 * spacing,
        ];
        Self::new(origin, spacing, half_counts.map(|h| 2 * h + 1))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn index(&self, ijk: [usize; 3]) -> usize {
        (ijk[0] * self.shape[1] + ijk[1]) * self.shape[2] + ijk[2]
    }

    pub fn unravel(&self, idx: usize) -> [usize; 3] {
        let k = idx % self.shape[2];
        let j = (idx / self.shape[2]) % self.shape[1];
        let i = idx / (self.shape[1] * self.shape[2]);
        [i, j, k]
    }

    pub fn node(&self, ijk: [usize; 3]) -> [f64; 3] {
        [
            self.origin[0] + ijk[0] as f64 * self.spacing,
            self.origin[1] + ijk[1] as f64 * self.spacing,
            self.origin[2] + ijk[2] as f64 * self.spacing,
        ]
    }

    /// Nearest node to a point, if inside the grid.
    pub fn nearest(&self, p: [f64; 3]) -> Option<[usize; 3]> {
        let mut out = [0; 3];
        for a in 0..3 {
            let f = ((p[a] - self.origin[a]) / self.spacing).round();
            if f < 0.0 || f >= self.shape[a] as f64 {
                return None;
            }
            out[a] = f as usize;
        }
        Some(out)
    }

    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = i;
            }
        }
        best
    }

    pub fn median(&self) -> f64 {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        if n % 2 == 1 {
            v[n / 2]
        } else {
            0.5 * (v[n / 2 - 1] + v[n / 2])
        }
    }

    pub fn summary(&self) -> ImageSummary {
        let idx = self.argmax();
        let ijk = self.unravel(idx);
        let peak = self.values[idx];
        let median = self.median();
        ImageSummary {
            argmax: ijk,
            position: self.node(ijk),
            peak,
            peak_to_median: if median > 0.0 { peak / median } else { f64::INFINITY },
        }
    }

    /// Number of nodes at or above half the peak score.
    pub fn half_max_count(&self) -> usize {
        let peak = self.values[self.argmax()];
        self.values.iter().filter(|&&v| v >= 0.5 * peak).count()
    }

    /// Nodes at or above half the peak that connect to the argmax through
    /// face neighbours.
    pub fn main_lobe_size(&self) -> usize {
        let start = self.argmax();
        let half = 0.5 * self.values[start];
        let mut seen = vec![false; self.len()];
        let mut stack = vec![start];
        seen[start] = true;
        let mut count = 0;
        while let Some(idx) = stack.pop() {
            count += 1;
            let p = self.unravel(idx);
            for a in 0..3 {
                for up in [false, true] {
                    let mut q = p;
                    if up {
                        if q[a] + 1 >= self.shape[a] {
                            continue;
                        }
                        q[a] += 1;
                    } else {
                        if q[a] == 0 {
                            continue;
                        }
                        q[a] -= 1;
                    }
                    let j = self.index(q);
                    if !seen[j] && self.values[j] >= half {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        count
    }

    /// Chebyshev distance in voxels between the argmax and a node.
    pub fn voxel_error(&self, truth: [usize; 3]) -> usize {
        let a = self.unravel(self.argmax());
        (0..3).map(|k| a[k].abs_diff(truth[k])).max().unwrap_or(0)
    }

    fn fill<F: Fn([f64; 3]) -> f64 + Sync>(mut self, score: F) -> Self {
        let nodes: Vec<[f64; 3]> = (0..self.len()).map(|i| self.node(self.unravel(i))).collect();
        self.values = nodes.par_iter().map(|&p| score(p)).collect();
        self
    }
}

fn distance(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// `|sum_r s_r(|x_r - y| / c) 4 pi |x_r - y||` with linear interpolation.
pub fn kirchhoff_image(recording: &SensorArrayRecording, grid: &ImageGrid) -> ImageGrid {
    let c = recording.speed;
    grid.clone().fill(|y| {
        recording
            .receivers
            .iter()
            .zip(&recording.signals)
            .map(|(&x, s)| {
                let d = distance(x, y);
                s.sample_linear(d / c) * 4.0 * PI * d
            })
            .sum::<f64>()
            .abs()
    })
}

/// Periodic band-limited delta of the synthesis grid, tabulated finely.
struct DeltaTable {
    step: f64,
    values: Vec<f64>,
    centre: usize,
}

impl DeltaTable {
    fn new(n: usize, dt: f64, taper_fraction: f64) -> Self {
        let m = n * DELTA_OVERSAMPLE;
        let d_omega = 2.0 * PI / (n as f64 * dt);
        let w_max = n as f64 / 2.0 * d_omega;
        let mut spec = vec![Complex64::new(0.0, 0.0); m];
        spec[0] = Complex64::new(1.0, 0.0);
        for j in 1..n / 2 {
            let v = Complex64::new(taper(j as f64 * d_omega, w_max, taper_fraction), 0.0);
            spec[j] = v;
            spec[m - j] = v;
        }
        FftPlanner::new().plan_fft_forward(m).process(&mut spec);
        let half = DELTA_HALF_WIDTH * DELTA_OVERSAMPLE;
        let values = (0..=2 * half)
            .map(|i| {
                let idx = (i + m - half) % m;
                spec[idx].re / (n as f64 * dt)
            })
            .collect();
        Self {
            step: dt / DELTA_OVERSAMPLE as f64,
            values,
            centre: half,
        }
    }

    fn at(&self, u: f64) -> f64 {
        let pos = u / self.step + self.centre as f64;
        if pos < 0.0 || pos >= (self.values.len() - 1) as f64 {
            return 0.0;
        }
        let k = pos.floor() as usize;
        let f = pos - k as f64;
        self.values[k] + f * (self.values[k + 1] - self.values[k])
    }
}

/// `|sum_r \int s_r(t) g(|x_r - y|, t) dt|` with `g` the band-limited
/// `delta(t - d/c) / (4 pi d)` of the synthesis grid.
pub fn time_reversal_image(
    recording: &SensorArrayRecording,
    grid: &ImageGrid,
    opts: &SynthesisOptions,
) -> ImageGrid {
    let first = &recording.signals[0];
    let table = DeltaTable::new(first.len(), first.dt, opts.taper_fraction);
    let c = recording.speed;
    let n = first.len();
    grid.clone().fill(|y| {
        let mut total = 0.0;
        for (&x, s) in recording.receivers.iter().zip(&recording.signals) {
            let d = distance(x, y);
            let tau = d / c;
            let centre = ((tau - s.t0) / s.dt).round() as i64;
            let lo = (centre - DELTA_HALF_WIDTH as i64).max(0) as usize;
            let hi = (centre + DELTA_HALF_WIDTH as i64).min(n as i64 - 1);
            if hi < lo as i64 {
                continue;
            }
            let mut acc = 0.0;
            for k in lo..=hi as usize {
                acc += s.values[k] * table.at(s.time(k) - tau);
            }
            total += acc * s.dt / (4.0 * PI * d);
        }
        total.abs()
    })
}

/// Frequency band for back-propagation, in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AnalysisBand {
    pub low: f64,
    pub high: Option<f64>,
}

/// `(dw/2pi) |sum_r sum_w s_r(w) conj(g(|x_r - y|, w))|` over the two-sided
/// analysis band, with `g` the tapered ideal Green function.
pub fn backpropagation_image(
    recording: &SensorArrayRecording,
    grid: &ImageGrid,
    opts: &SynthesisOptions,
    band: AnalysisBand,
) -> Result<ImageGrid> {
    let first = &recording.signals[0];
    let n = first.len();
    if !n.is_multiple_of(2) {
        return Err(Error::InvalidGrid("back-propagation needs an even sample count".into()));
    }
    let d_omega = 2.0 * PI / (n as f64 * first.dt);
    let w_max = n as f64 / 2.0 * d_omega;
    let high = band.high.unwrap_or(w_max);
    // weighted spectra over a contiguous run of non-negative bins
    let lo = (band.low / d_omega).ceil().max(0.0) as usize;
    let hi = ((high / d_omega).floor() as usize).min(n / 2 - 1);
    let bins: Vec<usize> = (lo..=hi).collect();
    let spectra: Vec<Vec<Complex64>> = recording
        .signals
        .iter()
        .map(|s| {
            let spec = forward_transform(&s.values, s.dt);
            bins.iter()
                .map(|&j| {
                    let w = j as f64 * d_omega;
                    let weight = taper(w, w_max, opts.taper_fraction) * if j == 0 { 1.0 } else { 2.0 };
                    spec[j] * Complex64::new(0.0, w * s.t0).exp() * weight
                })
                .collect()
        })
        .collect();
    let c = recording.speed;
    let scale = d_omega / (2.0 * PI);
    Ok(grid.clone().fill(|y| {
        let mut total = 0.0;
        for (&x, spec) in recording.receivers.iter().zip(&spectra) {
            let d = distance(x, y);
            let mut phase = Complex64::new(0.0, -(lo as f64) * d_omega * d / c).exp();
            let step = Complex64::new(0.0, -d_omega * d / c).exp();
            let mut acc = 0.0;
            for &v in spec {
                acc += (v * phase).re;
                phase *= step;
            }
            total += acc / (4.0 * PI * d);
        }
        (total * scale).abs()
    }))
}

/// Evenly spaced receivers on a horizontal circle.
pub fn circular_array(center: [f64; 3], radius: f64, count: usize) -> Vec<[f64; 3]> {
    (0..count)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / count as f64;
            [center[0] + radius * a.cos(), center[1] + radius * a.sin(), center[2]]
        })
        .collect()
}
