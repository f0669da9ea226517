//! Attenuation operators and their inversion.
//!
//! `L` maps an ideal causal trace to its viscous counterpart through the
//! shear dispersion relation. For the Voigt model it is approximated by the
//! Gaussian-kernel operators
//!
//! ```text
//!   Lt  phi(t) = \int (t/tau) phi(tau) (2 pi eps tau)^{-1/2} e^{-(tau-t)^2/(2 eps tau)} dtau
//!   Lt* phi(t) = \int (tau/t) phi(tau) (2 pi eps t)^{-1/2}   e^{-(tau-t)^2/(2 eps t)}   dtau
//! ```
//!
//! with `eps = nu_s / c_s^2`, and `Lt* Lt phi ~ phi + eps d_t(t d_t phi)`.

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::green::amplitude_factor;
use crate::medium::{dispersion, Mode, PowerLawMedium};
use crate::quadrature::CompositeRule;
use crate::spectral::TimeGrid;

/// Kernel support is cut where the Gaussian exponent exceeds this (8 sigma).
const EXPONENT_CUTOFF: f64 = 32.0;
/// Rows whose kernel width is below this many samples are integrated on a
/// refined sub-grid.
const RESOLVED_SIGMAS: f64 = 1.5;
const BAND_WARN: f64 = 5e-3;

/// Uniformly sampled real trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledSignal {
    pub t0: f64,
    pub dt: f64,
    pub values: Vec<f64>,
}

impl SampledSignal {
    pub fn new(t0: f64, dt: f64, values: Vec<f64>) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) || !t0.is_finite() {
            return Err(Error::InvalidGrid(format!("bad sampling t0={t0}, dt={dt}")));
        }
        if values.len() < 4 {
            return Err(Error::InvalidGrid("need at least 4 samples".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("non-finite sample"));
        }
        Ok(Self { t0, dt, values })
    }

    pub fn on_grid(grid: &TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::InvalidGrid(format!(
                "{} samples for a grid of {}",
                values.len(),
                grid.n
            )));
        }
        Self::new(grid.t0, grid.dt, values)
    }

    pub fn from_fn<F: Fn(f64) -> f64>(t0: f64, dt: f64, n: usize, f: F) -> Result<Self> {
        Self::new(t0, dt, (0..n).map(|k| f(t0 + k as f64 * dt)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.time(k)).collect()
    }

    /// First sample that is not exactly zero.
    pub fn support_start(&self) -> Option<usize> {
        self.values.iter().position(|&v| v != 0.0)
    }

    /// True when every sample at negative time is zero.
    pub fn is_causal(&self) -> bool {
        (0..self.len()).all(|k| self.time(k) >= 0.0 || self.values[k] == 0.0)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Trapezoid inner product on the shared grid.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_same_grid(other)?;
        let n = self.len();
        let s: f64 = (0..n)
            .map(|k| {
                let w = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
                w * self.values[k] * other.values[k]
            })
            .sum();
        Ok(s * self.dt)
    }

    pub fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() || self.dt != other.dt || self.t0 != other.t0 {
            return Err(Error::InvalidGrid("signals live on different grids".into()));
        }
        Ok(())
    }

    /// Linear interpolation, zero outside the sampled span.
    pub fn sample_linear(&self, t: f64) -> f64 {
        let pos = (t - self.t0) / self.dt;
        if !(pos >= 0.0) || pos > (self.len() - 1) as f64 {
            return 0.0;
        }
        let k = (pos.floor() as usize).min(self.len() - 2);
        let frac = pos - k as f64;
        self.values[k] + frac * (self.values[k + 1] - self.values[k])
    }

    /// Four-point Lagrange interpolation, zero outside the sampled span.
    pub fn sample_cubic(&self, t: f64) -> f64 {
        let n = self.len();
        let pos = (t - self.t0) / self.dt;
        if !(pos >= 0.0) || pos > (n - 1) as f64 {
            return 0.0;
        }
        let k = (pos.floor() as usize).clamp(1, n - 3) - 1;
        let x = pos - k as f64;
        let v = &self.values[k..k + 4];
        // nodes at 0, 1, 2, 3
        let l0 = -(x - 1.0) * (x - 2.0) * (x - 3.0) / 6.0;
        let l1 = x * (x - 2.0) * (x - 3.0) / 2.0;
        let l2 = -x * (x - 1.0) * (x - 3.0) / 2.0;
        let l3 = x * (x - 1.0) * (x - 2.0) / 6.0;
        l0 * v[0] + l1 * v[1] + l2 * v[2] + l3 * v[3]
    }

    fn with_values(&self, values: Vec<f64>) -> Self {
        Self {
            t0: self.t0,
            dt: self.dt,
            values,
        }
    }
}

/// `eps = nu_s / c_s^2` of a Voigt medium, in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ViscosityScale {
    eps: f64,
}

impl ViscosityScale {
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(invalid(format!("viscosity scale must be >= 0, got {eps}")));
        }
        Ok(Self { eps })
    }

    pub fn from_voigt(nu_s: f64, c_s: f64) -> Result<Self> {
        if !(c_s > 0.0) {
            return Err(invalid(format!("c_s must be > 0, got {c_s}")));
        }
        Self::new(nu_s / (c_s * c_s))
    }

    pub fn from_medium(medium: &PowerLawMedium) -> Result<Self> {
        if !medium.is_voigt() {
            return Err(Error::NotVoigt(medium.y()));
        }
        Self::from_voigt(medium.nu_s(), medium.c_s())
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn halved(&self) -> Self {
        Self { eps: self.eps / 2.0 }
    }
}

/// Kernel of `Lt` at output `t` and source `tau`; `Lt*` uses it transposed.
fn kernel(eps: f64, t: f64, tau: f64) -> f64 {
    if tau <= 0.0 {
        return 0.0;
    }
    let e = (tau - t) * (tau - t) / (2.0 * eps * tau);
    if e > EXPONENT_CUTOFF {
        return 0.0;
    }
    (t / tau) * (-e).exp() / (2.0 * PI * eps * tau).sqrt()
}

/// Range of `tau` where `kernel(eps, t, tau)` is non-zero.
fn forward_window(eps: f64, t: f64) -> (f64, f64) {
    let c = EXPONENT_CUTOFF * eps;
    let half = (2.0 * c * t + c * c).sqrt();
    ((t + c - half).max(0.0), t + c + half)
}

/// Range of `tau` where `kernel(eps, tau, t)` is non-zero.
fn adjoint_window(eps: f64, t: f64) -> (f64, f64) {
    let half = (2.0 * EXPONENT_CUTOFF * eps * t).sqrt();
    ((t - half).max(0.0), t + half)
}

#[derive(Clone, Copy)]
enum Direction {
    Forward,
    Adjoint,
}

impl Direction {
    fn window(self, eps: f64, t: f64) -> (f64, f64) {
        match self {
            Self::Forward => forward_window(eps, t),
            Self::Adjoint => adjoint_window(eps, t),
        }
    }

    fn kernel(self, eps: f64, t: f64, tau: f64) -> f64 {
        match self {
            Self::Forward => kernel(eps, t, tau),
            Self::Adjoint => kernel(eps, tau, t),
        }
    }
}

fn analytic<F: Fn(f64) -> f64>(dir: Direction, eps: f64, f: &F, t: f64) -> f64 {
    if eps == 0.0 || t <= 0.0 {
        return f(t);
    }
    let (a, b) = dir.window(eps, t);
    CompositeRule::new(10).integrate(a, b, 24, |tau| dir.kernel(eps, t, tau) * f(tau))
}

/// `Lt f (t)` for a function given in closed form, by composite Gauss-Legendre.
pub fn l_tilde_at<F: Fn(f64) -> f64>(scale: ViscosityScale, f: &F, t: f64) -> f64 {
    analytic(Direction::Forward, scale.eps, f, t)
}

/// `Lt* f (t)` for a function given in closed form.
pub fn l_tilde_star_at<F: Fn(f64) -> f64>(scale: ViscosityScale, f: &F, t: f64) -> f64 {
    analytic(Direction::Adjoint, scale.eps, f, t)
}

fn sampled(dir: Direction, scale: ViscosityScale, signals: &[SampledSignal]) -> Result<Vec<SampledSignal>> {
    let Some(first) = signals.first() else {
        return Ok(Vec::new());
    };
    for s in signals {
        first.check_same_grid(s)?;
    }
    let eps = scale.eps;
    if eps == 0.0 {
        return Ok(signals.to_vec());
    }
    let n = first.len();
    let dt = first.dt;
    let c = signals.len();
    // one row per output sample, one column per channel
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let t = first.time(i);
            if t <= 0.0 {
                return signals.iter().map(|s| s.values[i]).collect();
            }
            let (a, b) = dir.window(eps, t);
            let sigma = (eps * t).sqrt();
            let mut acc = vec![0.0; c];
            if sigma >= RESOLVED_SIGMAS * dt {
                let lo = ((a - first.t0) / dt).floor().max(0.0) as usize;
                let hi = (((b - first.t0) / dt).ceil().max(0.0) as usize).min(n - 1);
                for k in lo..=hi {
                    let w = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
                    let kw = w * dir.kernel(eps, t, first.time(k)) * dt;
                    if kw != 0.0 {
                        for (a, s) in acc.iter_mut().zip(signals) {
                            *a += kw * s.values[k];
                        }
                    }
                }
            } else {
                let h = sigma / 2.0;
                let steps = ((b - a) / h).ceil().max(2.0) as usize;
                let h = (b - a) / steps as f64;
                for k in 0..=steps {
                    let tau = a + k as f64 * h;
                    let w = if k == 0 || k == steps { 0.5 } else { 1.0 };
                    let kw = w * dir.kernel(eps, t, tau) * h;
                    for (a, s) in acc.iter_mut().zip(signals) {
                        *a += kw * s.sample_cubic(tau);
                    }
                }
            }
            acc
        })
        .collect();
    Ok((0..c)
        .map(|ch| signals[ch].with_values(rows.iter().map(|r| r[ch]).collect()))
        .collect())
}

fn sampled_one(dir: Direction, scale: ViscosityScale, phi: &SampledSignal) -> SampledSignal {
    sampled(dir, scale, std::slice::from_ref(phi))
        .expect("single signal shares its own grid")
        .pop()
        .expect("one output per input")
}

/// `Lt phi` on the sample grid.
///
/// Rows whose kernel spans at least a couple of samples use the trapezoid
/// rule on the grid nodes (so the discrete adjoint of [`apply_l_tilde_star`]
/// is exact there); narrower rows are refined with cubic interpolation.
/// Samples at `t <= 0` pass through.
pub fn apply_l_tilde(scale: ViscosityScale, phi: &SampledSignal) -> SampledSignal {
    sampled_one(Direction::Forward, scale, phi)
}

/// `Lt* phi` on the sample grid; see [`apply_l_tilde`].
pub fn apply_l_tilde_star(scale: ViscosityScale, phi: &SampledSignal) -> SampledSignal {
    sampled_one(Direction::Adjoint, scale, phi)
}

/// [`apply_l_tilde`] over several channels on one grid, sharing kernel work.
pub fn apply_l_tilde_many(scale: ViscosityScale, signals: &[SampledSignal]) -> Result<Vec<SampledSignal>> {
    sampled(Direction::Forward, scale, signals)
}

/// [`apply_l_tilde_star`] over several channels on one grid.
pub fn apply_l_tilde_star_many(
    scale: ViscosityScale,
    signals: &[SampledSignal],
) -> Result<Vec<SampledSignal>> {
    sampled(Direction::Adjoint, scale, signals)
}

/// `d_t(t d_t phi)` with the conservative interior stencil and second-order
/// one-sided stencils at both ends.
pub fn radial_second_derivative(phi: &SampledSignal) -> Vec<f64> {
    let n = phi.len();
    let h = phi.dt;
    let v = &phi.values;
    let mut out = vec![0.0; n];
    for i in 1..n - 1 {
        let tp = phi.time(i) + 0.5 * h;
        let tm = phi.time(i) - 0.5 * h;
        out[i] = (tp * (v[i + 1] - v[i]) - tm * (v[i] - v[i - 1])) / (h * h);
    }
    let edge = |t: f64, d1: f64, d2: f64| d1 + t * d2;
    let d1 = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    let d2 = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / (h * h);
    out[0] = edge(phi.time(0), d1, d2);
    let d1 = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    let d2 = (2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]) / (h * h);
    out[n - 1] = edge(phi.time(n - 1), d1, d2);
    out
}

/// `phi + eps d_t(t d_t phi)`.
pub fn compose_correction(scale: ViscosityScale, phi: &SampledSignal) -> SampledSignal {
    if scale.eps == 0.0 {
        return phi.clone();
    }
    let d = radial_second_derivative(phi);
    phi.with_values(phi.values.iter().zip(d).map(|(v, d)| v + scale.eps * d).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InversionMethod {
    FirstOrder,
    Ode,
}

impl FromStr for InversionMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first_order" | "first-order" => Ok(Self::FirstOrder),
            "ode" => Ok(Self::Ode),
            other => Err(invalid(format!("unknown inversion method '{other}'"))),
        }
    }
}

impl std::fmt::Display for InversionMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::FirstOrder => "first_order",
            Self::Ode => "ode",
        })
    }
}

/// Recovers `phi` from `measured ~ phi + eps d_t(t d_t phi)`.
///
/// `FirstOrder` returns `measured - eps d_t(t d_t measured)`. `Ode` marches
/// `phi' = q / t`, `q' = (measured - phi) / eps` with the trapezoid rule from
/// `phi = q = 0` at the first positive sample; earlier samples are zero.
pub fn invert_attenuation(
    scale: ViscosityScale,
    measured: &SampledSignal,
    method: InversionMethod,
) -> Result<SampledSignal> {
    let eps = scale.eps;
    if eps == 0.0 {
        return Ok(measured.clone());
    }
    match method {
        InversionMethod::FirstOrder => {
            let d = radial_second_derivative(measured);
            Ok(measured.with_values(
                measured.values.iter().zip(d).map(|(v, d)| v - eps * d).collect(),
            ))
        }
        InversionMethod::Ode => ode_march(eps, measured),
    }
}

fn ode_march(eps: f64, m: &SampledSignal) -> Result<SampledSignal> {
    let n = m.len();
    let h = m.dt;
    let mut out = vec![0.0; n];
    let Some(start) = (0..n).find(|&k| m.time(k) > 0.0) else {
        return Ok(m.with_values(out));
    };
    let (mut phi, mut q) = (0.0, 0.0);
    let b = h / (2.0 * eps);
    for k in start..n - 1 {
        let (t0, t1) = (m.time(k), m.time(k + 1));
        let a = h / (2.0 * t1);
        let r1 = phi + h * q / (2.0 * t0);
        let r2 = q + b * (m.values[k] - phi + m.values[k + 1]);
        let det = 1.0 + a * b;
        let q1 = (r2 - b * r1) / det;
        let phi1 = r1 + a * q1;
        if !(phi1.is_finite() && q1.is_finite()) {
            return Err(Error::OdeFailure {
                index: k + 1,
                reason: format!("non-finite state at t={t1}"),
            });
        }
        phi = phi1;
        q = q1;
        out[k + 1] = phi;
    }
    Ok(m.with_values(out))
}

/// Result of the exact operator with its band-truncation estimate.
#[derive(Debug, Clone)]
pub struct ExactApplication {
    pub signal: SampledSignal,
    /// Relative sup-norm change when the band is halved.
    pub band_change: f64,
}

/// `L phi (t) = (1/2pi) \int\int A_s(w) phi(tau) e^{i K_s(w) tau} e^{-i w t} dtau dw`.
///
/// The `tau` transform is a direct sum over the (zero-padded, doubled) grid;
/// the `w` integral is an inverse FFT. Works for any exponent `y`.
pub fn apply_l_exact(medium: &PowerLawMedium, phi: &SampledSignal) -> Result<ExactApplication> {
    let n = phi.len();
    let m = 2 * n;
    let grid = TimeGrid::with_origin(m, phi.dt, phi.t0)?;
    let fg = grid.frequency_grid();
    if !medium.is_perturbative(fg.omega_max()) {
        return Err(invalid("medium is not perturbative over the sampling band"));
    }
    let i = Complex64::new(0.0, 1.0);
    // non-negative frequencies; the rest follows by conjugation
    let half: Vec<Complex64> = (0..=m / 2)
        .into_par_iter()
        .map(|j| {
            let w = j as f64 * fg.d_omega;
            let k = dispersion(medium, Mode::S, w).k;
            let step = (i * k * phi.dt).exp();
            let mut phase = (i * k * phi.t0).exp();
            let mut s = Complex64::new(0.0, 0.0);
            for &v in &phi.values {
                s += v * phase;
                phase *= step;
            }
            // shift so the inverse transform lands on t0 + k dt
            amplitude_factor(medium, Mode::S, w) * s * phi.dt * (-i * w * phi.t0).exp()
        })
        .collect();
    let synth = |cut: f64| -> Vec<f64> {
        let mut spec = vec![Complex64::new(0.0, 0.0); m];
        for (j, v) in half.iter().enumerate() {
            if j as f64 * fg.d_omega > cut {
                continue;
            }
            if j == m / 2 {
                spec[j] = Complex64::new(v.re, 0.0);
            } else {
                spec[j] = *v;
                if j > 0 {
                    spec[m - j] = v.conj();
                }
            }
        }
        FftPlanner::new().plan_fft_forward(m).process(&mut spec);
        spec.iter().take(n).map(|c| c.re / (m as f64 * phi.dt)).collect()
    };
    let full = synth(f64::INFINITY);
    let halved = synth(0.5 * fg.omega_max());
    let sup = full.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let diff = full
        .iter()
        .zip(&halved)
        .fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
    let band_change = if sup > 0.0 { diff / sup } else { 0.0 };
    if band_change > BAND_WARN {
        log::warn!("band truncation changes L phi by {:.2}%", 100.0 * band_change);
    }
    Ok(ExactApplication {
        signal: phi.with_values(full),
        band_change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss(t: f64) -> f64 {
        (-50.0 * (t - 1.0) * (t - 1.0)).exp()
    }

    fn gauss_signal(n: usize) -> SampledSignal {
        SampledSignal::from_fn(0.0, 2.0 / n as f64, n, gauss).unwrap()
    }

    #[test]
    fn scale_validation() {
        assert!(ViscosityScale::new(-1.0).is_err());
        assert!(ViscosityScale::new(f64::NAN).is_err());
        assert_eq!(ViscosityScale::from_voigt(0.2, 2.0).unwrap().eps(), 0.05);
        let m = PowerLawMedium::new(1000.0, 40.0, 1.0, 0.0, 4.0, 1.5).unwrap();
        assert!(matches!(ViscosityScale::from_medium(&m), Err(Error::NotVoigt(_))));
    }

    #[test]
    fn kernel_windows_cover_support() {
        let eps = 1e-3;
        let t = 0.7;
        let (a, b) = forward_window(eps, t);
        assert!(kernel(eps, t, a * 0.999) == 0.0 || a == 0.0);
        assert_eq!(kernel(eps, t, b * 1.001), 0.0);
        assert!(kernel(eps, t, t) > 0.0);
        let (a, b) = adjoint_window(eps, t);
        assert_eq!(kernel(eps, a - 1e-6, t), 0.0);
        assert_eq!(kernel(eps, b + 1e-6, t), 0.0);
    }

    #[test]
    fn zero_scale_is_identity() {
        let s = ViscosityScale::new(0.0).unwrap();
        let phi = gauss_signal(64);
        assert_eq!(apply_l_tilde(s, &phi), phi);
        assert_eq!(apply_l_tilde_star(s, &phi), phi);
        assert_eq!(compose_correction(s, &phi), phi);
        for m in [InversionMethod::FirstOrder, InversionMethod::Ode] {
            assert_eq!(invert_attenuation(s, &phi, m).unwrap(), phi);
        }
        assert_eq!(l_tilde_at(s, &gauss, 0.9), gauss(0.9));
    }

    #[test]
    fn correction_of_square() {
        let eps = 1e-3;
        let phi = SampledSignal::from_fn(0.0, 0.01, 101, |t| t * t).unwrap();
        let c = compose_correction(ViscosityScale::new(eps).unwrap(), &phi);
        for k in 0..phi.len() {
            let t = phi.time(k);
            assert!((c.values[k] - (t * t + 4.0 * eps * t)).abs() < 1e-12, "{k}");
        }
    }

    #[test]
    fn constants_and_lines_are_nearly_fixed() {
        let s = ViscosityScale::new(1e-4).unwrap();
        for t in [0.5, 1.0, 1.5] {
            assert!((l_tilde_at(s, &|_| 1.0, t) - 1.0).abs() < 1e-5);
            assert!((l_tilde_at(s, &|x| x, t) - t).abs() < 1e-5);
            assert!((l_tilde_star_at(s, &|_| 1.0, t) - 1.0).abs() < 1e-5);
        }
    }

    #[test]
    fn first_order_round_trip_is_second_order() {
        let phi = SampledSignal::from_fn(0.0, 1e-3, 2001, gauss).unwrap();
        let dev = |eps: f64| {
            let s = ViscosityScale::new(eps).unwrap();
            let back =
                invert_attenuation(s, &compose_correction(s, &phi), InversionMethod::FirstOrder)
                    .unwrap();
            back.values
                .iter()
                .zip(&phi.values)
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
        };
        let (a, b) = (dev(2e-4), dev(1e-4));
        let ratio = a / b;
        assert!((3.4..=4.6).contains(&ratio), "{ratio}");
    }

    #[test]
    fn ode_inverts_forward_model() {
        let eps = 1e-4;
        let phi = SampledSignal::from_fn(0.0, 1e-3, 2001, gauss).unwrap();
        let s = ViscosityScale::new(eps).unwrap();
        let measured = compose_correction(s, &phi);
        let back = invert_attenuation(s, &measured, InversionMethod::Ode).unwrap();
        let err = back
            .values
            .iter()
            .zip(&phi.values)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err < 1e-3, "{err}");
    }

    #[test]
    fn method_parsing() {
        assert_eq!("ode".parse::<InversionMethod>().unwrap(), InversionMethod::Ode);
        assert_eq!(
            "first-order".parse::<InversionMethod>().unwrap(),
            InversionMethod::FirstOrder
        );
        assert!("newton".parse::<InversionMethod>().is_err());
    }

    #[test]
    fn interpolation_exact_on_cubics() {
        let s = SampledSignal::from_fn(0.0, 0.1, 20, |t| t * t * t - t).unwrap();
        for t in [0.05, 0.93, 1.77] {
            assert!((s.sample_cubic(t) - (t * t * t - t)).abs() < 1e-12);
        }
        let l = SampledSignal::from_fn(0.0, 0.1, 20, |t| 3.0 * t + 1.0).unwrap();
        assert!((l.sample_linear(0.47) - 2.41).abs() < 1e-12);
        assert_eq!(l.sample_linear(-0.1), 0.0);
    }
}
