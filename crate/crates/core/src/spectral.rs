//! Time and frequency grids, FFT synthesis and the discrete Hilbert transform.
//!
//! Fourier convention, used throughout the crate:
//!
//! ```text
//!   forward:  f^(w) = \int f(t) e^{+i w t} dt
//!   inverse:  f(t)  = 1/(2 pi) \int f^(w) e^{-i w t} dw
//! ```
//!
//! With this choice the derivative d/dt has multiplier `-i w` and a delay
//! `delta(t - a)` transforms to `e^{i w a}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform time grid `t_k = t0 + k dt`, `k = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub n: usize,
    pub dt: f64,
    #[serde(default)]
    pub t0: f64,
}

impl TimeGrid {
    pub fn new(n: usize, dt: f64) -> Result<Self> {
        Self::with_origin(n, dt, 0.0)
    }

    pub fn with_origin(n: usize, dt: f64, t0: f64) -> Result<Self> {
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("n must be even and >= 4, got {n}")));
        }
        if !(dt > 0.0 && dt.is_finite()) || !t0.is_finite() {
            return Err(Error::InvalidGrid(format!("dt must be positive and finite, got {dt}")));
        }
        Ok(Self { n, dt, t0 })
    }

    /// Grid of `n` samples covering `[0, duration)`.
    pub fn covering(duration: f64, n: usize) -> Result<Self> {
        Self::new(n, duration / n as f64)
    }

    #[inline]
    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |k| self.time(k))
    }

    pub fn duration(&self) -> f64 {
        self.n as f64 * self.dt
    }

    /// Two-sided angular frequency grid dual to this time grid.
    pub fn frequency_grid(&self) -> FrequencyGrid {
        FrequencyGrid {
            n: self.n,
            d_omega: 2.0 * PI / (self.n as f64 * self.dt),
        }
    }
}

/// Symmetric two-sided angular-frequency grid covering `[-w_max, w_max)`.
///
/// Index `j` follows FFT order: `0..n/2` are the non-negative frequencies,
/// `n/2..n` the negative ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    pub n: usize,
    pub d_omega: f64,
}

impl FrequencyGrid {
    pub fn new(n: usize, d_omega: f64) -> Result<Self> {
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("n must be even and >= 4, got {n}")));
        }
        if !(d_omega > 0.0 && d_omega.is_finite()) {
            return Err(Error::InvalidGrid(format!("d_omega must be positive, got {d_omega}")));
        }
        Ok(Self { n, d_omega })
    }

    /// Grid with `n` samples spanning `[-omega_max, omega_max)`.
    pub fn with_band(omega_max: f64, n: usize) -> Result<Self> {
        Self::new(n, 2.0 * omega_max / n as f64)
    }

    #[inline]
    pub fn omega(&self, j: usize) -> f64 {
        let j = j as isize;
        let n = self.n as isize;
        let s = if j < n / 2 { j } else { j - n };
        s as f64 * self.d_omega
    }

    /// Frequency of the `i`-th sample in ascending order (`i = 0` is `-omega_max`).
    #[inline]
    pub fn omega_ascending(&self, i: usize) -> f64 {
        (i as f64 - (self.n / 2) as f64) * self.d_omega
    }

    pub fn omega_max(&self) -> f64 {
        (self.n / 2) as f64 * self.d_omega
    }

    /// Time step of the dual time grid.
    pub fn dt(&self) -> f64 {
        2.0 * PI / (self.n as f64 * self.d_omega)
    }
}

/// Raised-cosine taper: 1 below `(1 - fraction) * omega_max`, rolling to 0 at
/// `omega_max`.
pub fn taper(omega: f64, omega_max: f64, fraction: f64) -> f64 {
    let a = omega.abs();
    if fraction <= 0.0 {
        return if a <= omega_max { 1.0 } else { 0.0 };
    }
    let knee = (1.0 - fraction) * omega_max;
    if a <= knee {
        1.0
    } else if a >= omega_max {
        0.0
    } else {
        0.5 * (1.0 + (PI * (a - knee) / (fraction * omega_max)).cos())
    }
}

/// Complex samples paired to a [`FrequencyGrid`] in FFT order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSpectrum {
    pub grid: FrequencyGrid,
    pub values: Vec<Complex64>,
}

impl ComplexSpectrum {
    pub fn new(grid: FrequencyGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::InvalidGrid(format!(
                "spectrum has {} values for a grid of {}",
                values.len(),
                grid.n
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: FrequencyGrid, f: F) -> Self {
        let values = (0..grid.n).map(|j| f(grid.omega(j))).collect();
        Self { grid, values }
    }

    /// Largest violation of `X(-w) = conj(X(w))`, relative to the largest
    /// magnitude. The Nyquist bin has no partner and is skipped.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.grid.n;
        let scale = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = self.values[0].im.abs();
        for j in 1..n / 2 {
            let d = (self.values[j] - self.values[n - j].conj()).norm();
            worst = worst.max(d);
        }
        worst / scale
    }

    /// Inverse transform onto the dual time grid (`t0 = 0`), returning the
    /// real part and the relative size of the discarded imaginary part.
    pub fn synthesize(&self) -> (Vec<f64>, f64) {
        let n = self.grid.n;
        let dt = self.grid.dt();
        let mut buf = self.values.clone();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let scale = 1.0 / (n as f64 * dt);
        let mut re_norm = 0.0;
        let mut im_norm = 0.0;
        let out = buf
            .iter()
            .map(|v| {
                re_norm += v.re * v.re;
                im_norm += v.im * v.im;
                v.re * scale
            })
            .collect();
        let ratio = if re_norm > 0.0 {
            (im_norm / re_norm).sqrt()
        } else {
            im_norm.sqrt()
        };
        (out, ratio)
    }
}

/// Forward transform of real samples `f(t_k)`, `t_k = k dt`, onto the dual
/// frequency grid: `F(w_j) = dt * sum_k f_k e^{i w_j t_k}`.
pub fn forward_transform(samples: &[f64], dt: f64) -> Vec<Complex64> {
    let n = samples.len();
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    for v in &mut buf {
        *v *= dt;
    }
    buf
}

/// Discrete Hilbert transform of samples on an ascending uniform grid:
///
/// ```text
///   H[f](w) = 1/pi PV \int f(w') / (w' - w) dw'
/// ```
///
/// with `f` taken as zero outside the sampled band (the input is zero padded
/// to four times its length before the FFT, so nothing wraps around). With
/// this sign, a causal transfer function satisfies `Re F = H[Im F]`.
pub fn hilbert_truncated(samples: &[f64]) -> Vec<f64> {
    let n = samples.len();
    let m = (4 * n).next_power_of_two();
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for (b, &s) in buf.iter_mut().zip(samples) {
        b.re = s;
    }
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut buf);
    let i = Complex64::new(0.0, 1.0);
    for (k, v) in buf.iter_mut().enumerate() {
        if k == 0 || k == m / 2 {
            *v = Complex64::new(0.0, 0.0);
        } else if k < m / 2 {
            *v *= i;
        } else {
            *v *= -i;
        }
    }
    planner.plan_fft_inverse(m).process(&mut buf);
    buf[..n].iter().map(|v| v.re / m as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frequency_grid_fft_order() {
        let g = FrequencyGrid::new(8, 0.5).unwrap();
        let w: Vec<f64> = (0..8).map(|j| g.omega(j)).collect();
        assert_eq!(w, vec![0.0, 0.5, 1.0, 1.5, -2.0, -1.5, -1.0, -0.5]);
        assert_eq!(g.omega_ascending(0), -2.0);
        assert_eq!(g.omega_max(), 2.0);
    }

    #[test]
    fn rejects_odd_grids() {
        assert!(TimeGrid::new(7, 0.1).is_err());
        assert!(TimeGrid::new(8, 0.0).is_err());
        assert!(FrequencyGrid::new(8, -1.0).is_err());
    }

    #[test]
    fn delay_synthesizes_to_shifted_pulse() {
        // e^{i w a} is a delay by a under the crate convention
        let grid = TimeGrid::new(256, 0.01).unwrap();
        let fg = grid.frequency_grid();
        let a = 0.64;
        let spec = ComplexSpectrum::from_fn(fg, |w| {
            Complex64::new(0.0, w * a).exp() * taper(w, fg.omega_max(), 0.1)
        });
        assert!(spec.hermitian_defect() < 1e-14);
        let (sig, im) = spec.synthesize();
        assert!(im < 1e-12);
        let peak = sig
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        assert_eq!(peak, 64);
        let area: f64 = sig.iter().sum::<f64>() * grid.dt;
        assert!((area - 1.0).abs() < 1e-9);
    }

    #[test]
    fn forward_then_synthesize_roundtrip() {
        let grid = TimeGrid::new(128, 0.05).unwrap();
        let f: Vec<f64> = grid.times().map(|t| (-(t - 3.0).powi(2)).exp()).collect();
        let spec = ComplexSpectrum::new(grid.frequency_grid(), forward_transform(&f, grid.dt)).unwrap();
        let (back, _) = spec.synthesize();
        for (a, b) in f.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn hilbert_of_causal_transfer_function() {
        // F(w) = 1/(1 - i w) is the transform of e^{-t} H(t)
        let n = 40_000;
        let w_max = 200.0;
        let dw = 2.0 * w_max / n as f64;
        let w: Vec<f64> = (0..n).map(|i| (i as f64 - (n / 2) as f64) * dw).collect();
        let re: Vec<f64> = w.iter().map(|w| 1.0 / (1.0 + w * w)).collect();
        let im: Vec<f64> = w.iter().map(|w| w / (1.0 + w * w)).collect();
        let h = hilbert_truncated(&im);
        let worst = w
            .iter()
            .zip(re.iter().zip(&h))
            .filter(|(w, _)| w.abs() < 50.0)
            .map(|(_, (r, h))| (r - h).abs())
            .fold(0.0, f64::max);
        assert!(worst < 2e-2, "{worst}");
    }

    #[test]
    fn taper_shape() {
        assert_eq!(taper(0.0, 10.0, 0.1), 1.0);
        assert_eq!(taper(9.0, 10.0, 0.1), 1.0);
        assert!((taper(9.5, 10.0, 0.1) - 0.5).abs() < 1e-12);
        assert_eq!(taper(-10.0, 10.0, 0.1), 0.0);
    }
}
