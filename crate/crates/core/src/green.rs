//! Viscoelastic Green's tensor in the frequency and time domains.
//!
//! The frequency-domain tensor is
//!
//! ```text
//!   G_ij = A_p/(rho c_p^2) g_i g_j g^p + A_s/(rho c_s^2) (d_ij - g_i g_j) g^s
//!        + 1/(4 pi rho r^3) (3 g_i g_j - d_ij) (I_s - I_p)
//! ```
//!
//! with `g^m = e^{i K_m r / c_m} / (4 pi r)` and `I_m` the radial moment. Time
//! series are synthesized by FFT over the two-sided grid dual to the requested
//! time grid, with a raised-cosine taper over the top of the band so that
//! the elastic arrivals render as band-limited deltas.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::medium::{dispersion, multiplier, Mode, PowerLawMedium};
use crate::spectral::{taper, ComplexSpectrum, TimeGrid};

pub type Tensor3 = [[f64; 3]; 3];
pub type ComplexTensor3 = [[Complex64; 3]; 3];

const DELTA: Tensor3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

/// Below this `|K| r / c` the radial moment is summed as a power series.
const SERIES_THRESHOLD: f64 = 1.0;

/// Source point, receiver point and the derived distance and direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SourceReceiverGeometry {
    xi: [f64; 3],
    x: [f64; 3],
    r: f64,
    gamma: [f64; 3],
}

impl SourceReceiverGeometry {
    pub fn new(xi: [f64; 3], x: [f64; 3]) -> Result<Self> {
        let d = [x[0] - xi[0], x[1] - xi[1], x[2] - xi[2]];
        let r = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        if !r.is_finite() {
            return Err(Error::InvalidParameter("non-finite coordinates".into()));
        }
        if r == 0.0 {
            return Err(Error::CoincidentPoints);
        }
        Ok(Self {
            xi,
            x,
            r,
            gamma: [d[0] / r, d[1] / r, d[2] / r],
        })
    }

    /// Receiver on the `e_1` axis at distance `r` from the origin.
    pub fn on_axis(r: f64) -> Result<Self> {
        Self::new([0.0; 3], [r, 0.0, 0.0])
    }

    pub fn source(&self) -> [f64; 3] {
        self.xi
    }
    pub fn receiver(&self) -> [f64; 3] {
        self.x
    }
    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn gamma(&self) -> [f64; 3] {
        self.gamma
    }

    /// Geometry with source and receiver exchanged.
    pub fn swapped(&self) -> Self {
        Self::new(self.x, self.xi).expect("distance already checked")
    }
}

/// `A_m(w) = 1 - nu_m M(w) / c_m^2`.
pub fn amplitude_factor(medium: &PowerLawMedium, mode: Mode, omega: f64) -> Complex64 {
    let c = medium.speed(mode);
    1.0 - medium.viscosity(mode) * multiplier(medium.y(), omega) / (c * c)
}

/// `\int_0^a z e^{i K z} dz`, evaluated in closed form or by series when
/// `|K| a` is small.
pub(crate) fn ramp_integral(k: Complex64, a: f64) -> Complex64 {
    let ka = k * a;
    if ka.norm() < SERIES_THRESHOLD {
        // sum_n (iKa)^n a^2 / (n! (n + 2))
        let x = Complex64::new(0.0, 1.0) * ka;
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.5, 0.0);
        for n in 1..40 {
            term *= x / n as f64;
            let add = term / (n as f64 + 2.0);
            sum += add;
            if add.norm() < 1e-18 * sum.norm() {
                break;
            }
        }
        sum * a * a
    } else {
        let i = Complex64::new(0.0, 1.0);
        let inv_k2 = 1.0 / (k * k);
        (i * ka).exp() * (a / (i * k) + inv_k2) - inv_k2
    }
}

/// `I_m(r, w) = A_m \int_0^{r/c_m} z e^{i K_m z} dz`.
pub fn radial_moment(medium: &PowerLawMedium, mode: Mode, omega: f64, r: f64) -> Complex64 {
    let k = dispersion(medium, mode, omega).k;
    amplitude_factor(medium, mode, omega) * ramp_integral(k, r / medium.speed(mode))
}

/// `E_m(r, w) = A_m e^{i K_m r / c_m}`.
pub fn phase_factor(medium: &PowerLawMedium, mode: Mode, omega: f64, r: f64) -> Complex64 {
    let k = dispersion(medium, mode, omega).k;
    let phase = Complex64::new(0.0, 1.0) * k * (r / medium.speed(mode));
    amplitude_factor(medium, mode, omega) * phase.exp()
}

fn assemble<T, F>(gamma: [f64; 3], far_p: T, far_s: T, near: T, mut out: F)
where
    T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
    F: FnMut(usize, usize, T),
{
    for i in 0..3 {
        for j in 0..3 {
            let gg = gamma[i] * gamma[j];
            let v = far_p * gg + far_s * (DELTA[i][j] - gg) + near * (3.0 * gg - DELTA[i][j]);
            out(i, j, v);
        }
    }
}

/// Frequency-domain Green's tensor at one angular frequency.
pub fn green_frequency_tensor(
    medium: &PowerLawMedium,
    geometry: &SourceReceiverGeometry,
    omega: f64,
) -> ComplexTensor3 {
    let r = geometry.r();
    let rho = medium.rho();
    let (cp, cs) = (medium.c_p(), medium.c_s());
    let far_p = phase_factor(medium, Mode::P, omega, r) / (4.0 * PI * r * rho * cp * cp);
    let far_s = phase_factor(medium, Mode::S, omega, r) / (4.0 * PI * r * rho * cs * cs);
    let near = (radial_moment(medium, Mode::S, omega, r) - radial_moment(medium, Mode::P, omega, r))
        / (4.0 * PI * rho * r.powi(3));
    let mut g = [[Complex64::new(0.0, 0.0); 3]; 3];
    assemble(geometry.gamma(), far_p, far_s, near, |i, j, v| g[i][j] = v);
    g
}

/// Knobs for time-domain synthesis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SynthesisOptions {
    /// Fraction of the band rolled off by the raised-cosine taper.
    pub taper_fraction: f64,
    /// Relative spectral level at the band edge above which a series is
    /// flagged as aliased.
    pub alias_floor: f64,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        Self {
            taper_fraction: 0.1,
            alias_floor: 1e-3,
        }
    }
}

/// Band-limited `G^m = F^-1[A_m g^m]` and `W_m = F^-1[I_m]` at one distance.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSeries {
    pub mode: Mode,
    pub r: f64,
    pub grid: TimeGrid,
    pub far: Vec<f64>,
    pub near: Vec<f64>,
    /// Untapered `|A_m g^m|` at the band edge relative to its maximum.
    pub edge_ratio: f64,
    /// Relative imaginary residue of the synthesis (Hermitian check).
    pub imag_ratio: f64,
}

impl ModeSeries {
    pub fn aliased(&self, opts: &SynthesisOptions) -> bool {
        self.edge_ratio > opts.alias_floor
    }
}

/// Synthesizes `G^m` and `W_m` at distance `r` on `grid` (which must start at 0).
pub fn mode_series(
    medium: &PowerLawMedium,
    mode: Mode,
    r: f64,
    grid: &TimeGrid,
    opts: &SynthesisOptions,
) -> Result<ModeSeries> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::CoincidentPoints);
    }
    if grid.t0 != 0.0 {
        return Err(Error::InvalidGrid("synthesis grids start at t = 0".into()));
    }
    let fg = grid.frequency_grid();
    let w_max = fg.omega_max();
    let n = fg.n;
    let mut far = Vec::with_capacity(n);
    let mut near = Vec::with_capacity(n);
    let mut peak: f64 = 0.0;
    let mut edge: f64 = 0.0;
    for j in 0..n {
        let w = fg.omega(j);
        let e = phase_factor(medium, mode, w, r) / (4.0 * PI * r);
        peak = peak.max(e.norm());
        if j == n / 2 {
            edge = e.norm();
        }
        let tw = taper(w, w_max, opts.taper_fraction);
        far.push(e * tw);
        near.push(radial_moment(medium, mode, w, r) * tw);
    }
    let (far, im_far) = ComplexSpectrum::new(fg, far)?.synthesize();
    let (near, im_near) = ComplexSpectrum::new(fg, near)?.synthesize();
    Ok(ModeSeries {
        mode,
        r,
        grid: *grid,
        far,
        near,
        edge_ratio: if peak > 0.0 { edge / peak } else { 0.0 },
        imag_ratio: im_far.max(im_near),
    })
}

/// 3x3 real tensor per time sample at a fixed source-receiver pair.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenTensorSeries {
    pub geometry: SourceReceiverGeometry,
    pub grid: TimeGrid,
    pub g: Vec<Tensor3>,
    pub edge_ratio: f64,
    pub aliased: bool,
}

impl GreenTensorSeries {
    pub fn component(&self, i: usize, j: usize) -> Vec<f64> {
        self.g.iter().map(|t| t[i][j]).collect()
    }

    pub fn sup_norm(&self) -> f64 {
        self.g
            .iter()
            .flat_map(|t| t.iter().flatten())
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest `|G_ij - G_ji|` over all samples.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for t in &self.g {
            for i in 0..3 {
                for j in 0..i {
                    worst = worst.max((t[i][j] - t[j][i]).abs());
                }
            }
        }
        worst
    }
}

/// Time-domain Green's tensor.
pub fn green_time_tensor(
    medium: &PowerLawMedium,
    geometry: &SourceReceiverGeometry,
    grid: &TimeGrid,
    opts: &SynthesisOptions,
) -> Result<GreenTensorSeries> {
    let r = geometry.r();
    let p = mode_series(medium, Mode::P, r, grid, opts)?;
    let s = mode_series(medium, Mode::S, r, grid, opts)?;
    let rho = medium.rho();
    let kp = 1.0 / (rho * medium.c_p().powi(2));
    let ks = 1.0 / (rho * medium.c_s().powi(2));
    let kn = 1.0 / (4.0 * PI * rho * r.powi(3));
    let g = (0..grid.n)
        .map(|k| {
            let mut t = [[0.0; 3]; 3];
            assemble(
                geometry.gamma(),
                kp * p.far[k],
                ks * s.far[k],
                kn * (s.near[k] - p.near[k]),
                |i, j, v| t[i][j] = v,
            );
            t
        })
        .collect();
    let edge_ratio = p.edge_ratio.max(s.edge_ratio);
    Ok(GreenTensorSeries {
        geometry: *geometry,
        grid: *grid,
        g,
        edge_ratio,
        aliased: edge_ratio > opts.alias_floor,
    })
}

/// Shear-only Green's tensor of the quasi-incompressible limit.
///
/// The radial integral `\int_0^r z^2 G^s dz` is taken as `c_s^2 W_s / (4 pi)`.
pub fn green_quasi_incompressible(
    medium: &PowerLawMedium,
    geometry: &SourceReceiverGeometry,
    grid: &TimeGrid,
    opts: &SynthesisOptions,
) -> Result<GreenTensorSeries> {
    let r = geometry.r();
    let s = mode_series(medium, Mode::S, r, grid, opts)?;
    let cs2 = medium.c_s().powi(2);
    let ks = 1.0 / (medium.rho() * cs2);
    let g = (0..grid.n)
        .map(|k| {
            let radial = cs2 * s.near[k] / (4.0 * PI);
            let mut t = [[0.0; 3]; 3];
            assemble(geometry.gamma(), 0.0, ks * s.far[k], ks * radial / r.powi(3), |i, j, v| {
                t[i][j] = v
            });
            t
        })
        .collect();
    Ok(GreenTensorSeries {
        geometry: *geometry,
        grid: *grid,
        g,
        edge_ratio: s.edge_ratio,
        aliased: s.aliased(opts),
    })
}

/// Scalar temporal trace
/// `(G^p + G^s) / (rho c_p^2) + (W_s - W_p) / (4 pi rho r^3)`.
pub fn temporal_profile(
    medium: &PowerLawMedium,
    r: f64,
    grid: &TimeGrid,
    opts: &SynthesisOptions,
) -> Result<Vec<f64>> {
    let p = mode_series(medium, Mode::P, r, grid, opts)?;
    let s = mode_series(medium, Mode::S, r, grid, opts)?;
    let kp = 1.0 / (medium.rho() * medium.c_p().powi(2));
    let kn = 1.0 / (4.0 * PI * medium.rho() * r.powi(3));
    Ok((0..grid.n)
        .map(|k| kp * (p.far[k] + s.far[k]) + kn * (s.near[k] - p.near[k]))
        .collect())
}

/// `G^p, G^s, W_p, W_s` at one instant as functions of distance.
#[derive(Debug, Clone)]
pub struct RadialSnapshot {
    pub t: f64,
    pub radii: Vec<f64>,
    pub g_p: Vec<f64>,
    pub g_s: Vec<f64>,
    pub w_p: Vec<f64>,
    pub w_s: Vec<f64>,
}

impl RadialSnapshot {
    /// Evaluates the four quantities at time `t` for each radius by direct
    /// summation over the frequency grid dual to `grid`.
    pub fn compute(
        medium: &PowerLawMedium,
        t: f64,
        radii: &[f64],
        grid: &TimeGrid,
        opts: &SynthesisOptions,
    ) -> Result<Self> {
        if radii.iter().any(|&r| !(r > 0.0)) {
            return Err(Error::CoincidentPoints);
        }
        let fg = grid.frequency_grid();
        let w_max = fg.omega_max();
        let half = fg.n / 2;
        // non-negative frequencies only; the negative half is the conjugate
        let per_mode = |mode: Mode| -> Vec<(f64, f64, Complex64, Complex64)> {
            (0..half)
                .map(|j| {
                    let w = fg.omega(j);
                    let weight = taper(w, w_max, opts.taper_fraction) * if j == 0 { 1.0 } else { 2.0 };
                    (
                        w,
                        weight,
                        dispersion(medium, mode, w).k,
                        amplitude_factor(medium, mode, w),
                    )
                })
                .collect()
        };
        let tables = [per_mode(Mode::P), per_mode(Mode::S)];
        let scale = fg.d_omega / (2.0 * PI);
        let eval = |mode_idx: usize, r: f64| -> (f64, f64) {
            let c = if mode_idx == 0 { medium.c_p() } else { medium.c_s() };
            let a = r / c;
            let i = Complex64::new(0.0, 1.0);
            let mut far = 0.0;
            let mut near = 0.0;
            for &(w, weight, k, amp) in &tables[mode_idx] {
                if weight == 0.0 {
                    continue;
                }
                let rot = Complex64::new(0.0, -w * t).exp();
                let e = amp * (i * k * a).exp() / (4.0 * PI * r);
                far += weight * (e * rot).re;
                near += weight * (amp * ramp_integral(k, a) * rot).re;
            }
            (far * scale, near * scale)
        };
        let vals: Vec<((f64, f64), (f64, f64))> = radii
            .par_iter()
            .map(|&r| (eval(0, r), eval(1, r)))
            .collect();
        Ok(Self {
            t,
            radii: radii.to_vec(),
            g_p: vals.iter().map(|v| v.0 .0).collect(),
            w_p: vals.iter().map(|v| v.0 .1).collect(),
            g_s: vals.iter().map(|v| v.1 .0).collect(),
            w_s: vals.iter().map(|v| v.1 .1).collect(),
        })
    }

    /// Planar field value at radius index `k` with direction cosine
    /// `cos_x = x / r`:
    /// `((x/r)^2 G^p + (1 - (x/r)^2) G^s)/(rho c_p^2) + (3 (x/r)^2 - 1)(W_s - W_p)/(4 pi rho r^3)`.
    pub fn planar_value(&self, medium: &PowerLawMedium, k: usize, cos_x: f64) -> f64 {
        let c2 = cos_x * cos_x;
        let r = self.radii[k];
        (c2 * self.g_p[k] + (1.0 - c2) * self.g_s[k]) / (medium.rho() * medium.c_p().powi(2))
            + (3.0 * c2 - 1.0) * (self.w_s[k] - self.w_p[k]) / (4.0 * PI * medium.rho() * r.powi(3))
    }
}

/// Planar slice of the scalar field on a square grid centred on the source.
#[derive(Debug, Clone)]
pub struct PlanarField {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Row-major over `(x, y)`: `values[ix * ys.len() + iy]`.
    pub values: Vec<f64>,
}

/// Spatial field at time `t` on `[-half_width, half_width]^2` with `points`
/// samples per axis. The field is tabulated on a radial grid with
/// `radial_samples` entries and interpolated linearly in `r`.
pub fn spatial_profile(
    medium: &PowerLawMedium,
    t: f64,
    half_width: f64,
    points: usize,
    radial_samples: usize,
    grid: &TimeGrid,
    opts: &SynthesisOptions,
) -> Result<PlanarField> {
    if points < 2 || radial_samples < 2 || !(half_width > 0.0) {
        return Err(Error::InvalidGrid("spatial grid needs >= 2 points and a positive extent".into()));
    }
    let h = 2.0 * half_width / (points - 1) as f64;
    let r_min = 0.5 * h;
    let r_max = half_width * std::f64::consts::SQRT_2 * 1.0001;
    let dr = (r_max - r_min) / (radial_samples - 1) as f64;
    let radii: Vec<f64> = (0..radial_samples).map(|k| r_min + k as f64 * dr).collect();
    let snap = RadialSnapshot::compute(medium, t, &radii, grid, opts)?;
    let axis: Vec<f64> = (0..points).map(|i| -half_width + i as f64 * h).collect();
    let mut values = Vec::with_capacity(points * points);
    for &x in &axis {
        for &y in &axis {
            let r = (x * x + y * y).sqrt().max(r_min);
            let cos_x = if r > 0.0 { x / r } else { 0.0 };
            let pos = ((r - r_min) / dr).min((radial_samples - 1) as f64);
            let k = (pos.floor() as usize).min(radial_samples - 2);
            let frac = pos - k as f64;
            let a = snap.planar_value(medium, k, cos_x);
            let b = snap.planar_value(medium, k + 1, cos_x);
            values.push(a + frac * (b - a));
        }
    }
    Ok(PlanarField {
        xs: axis.clone(),
        ys: axis,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn voigt(nu_s: f64) -> PowerLawMedium {
        PowerLawMedium::new(1000.0, 40.0, 1.0, 0.0, nu_s, 2.0).unwrap()
    }

    /// Composite Simpson on `[0, a]` of `z e^{i K z}`, the quadrature oracle.
    fn ramp_quadrature(k: Complex64, a: f64) -> Complex64 {
        let n = 20_000;
        let h = a / n as f64;
        let f = |z: f64| z * (Complex64::new(0.0, 1.0) * k * z).exp();
        let mut s = f(0.0) + f(a);
        for i in 1..n {
            s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn amplitude_factor_values() {
        let m = voigt(0.2);
        assert_eq!(amplitude_factor(&m, Mode::S, 1.0), Complex64::new(1.0, 0.2));
        assert_eq!(amplitude_factor(&m, Mode::P, 5.0), Complex64::new(1.0, 0.0));
        assert_eq!(amplitude_factor(&m, Mode::S, 0.0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn radial_moment_small_k_limit() {
        let m = voigt(0.0);
        let v = radial_moment(&m, Mode::S, 1e-9, 2.0);
        assert!((v - Complex64::new(2.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn radial_moment_matches_quadrature_inviscid() {
        let m = PowerLawMedium::new(1.0, 2.0, 1.0, 0.0, 0.0, 2.0).unwrap();
        let v = radial_moment(&m, Mode::S, 1.0, PI);
        let q = ramp_quadrature(Complex64::new(1.0, 0.0), PI);
        assert!((v - q).norm() < 1e-10, "{v} vs {q}");
        // int_0^pi z e^{iz} dz = -2 + i pi
        assert!((v - Complex64::new(-2.0, PI)).norm() < 1e-12);
    }

    #[test]
    fn radial_moment_matches_quadrature_voigt() {
        let m = voigt(0.2);
        let (w, r) = (5.0, 0.015);
        let k = dispersion(&m, Mode::S, w).k;
        let expect = amplitude_factor(&m, Mode::S, w) * ramp_quadrature(k, r);
        let v = radial_moment(&m, Mode::S, w, r);
        assert!((v - expect).norm() < 1e-9 * expect.norm().max(1e-12), "{v} vs {expect}");
    }

    #[test]
    fn ramp_integral_continuous_across_threshold() {
        for arg in [0.3, 1.1, 2.0] {
            let dir = Complex64::from_polar(1.0, arg);
            let a = 1.0;
            let below = dir * (SERIES_THRESHOLD * (1.0 - 1e-12));
            let above = dir * (SERIES_THRESHOLD * (1.0 + 1e-12));
            let d = (ramp_integral(below, a) - ramp_integral(above, a)).norm();
            assert!(d < 1e-10, "{d}");
        }
    }

    #[test]
    fn phase_factor_decay() {
        let m = voigt(0.0);
        assert!((phase_factor(&m, Mode::S, 3.0, 0.7).norm() - 1.0).abs() < 1e-14);
        let m = voigt(1e-3);
        let (w, r) = (10.0, 0.5);
        let e = phase_factor(&m, Mode::S, w, r);
        let expected = (-1e-3 * w * w * r / 2.0).exp() * amplitude_factor(&m, Mode::S, w).norm();
        assert!((e.norm() - expected).abs() < 1e-4 * expected);
        assert!(e.norm() <= amplitude_factor(&m, Mode::S, w).norm());
        assert_eq!(phase_factor(&voigt(0.2), Mode::S, 0.0, 1.0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn frequency_tensor_structure_on_axis() {
        let m = voigt(0.2);
        let geo = SourceReceiverGeometry::on_axis(0.015).unwrap();
        let g = green_frequency_tensor(&m, &geo, 7.0);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(g[i][j], Complex64::new(0.0, 0.0));
                }
            }
        }
        assert_eq!(g[1][1], g[2][2]);
        let gn = green_frequency_tensor(&m, &geo, -7.0);
        for i in 0..3 {
            for j in 0..3 {
                assert!((gn[i][j] - g[i][j].conj()).norm() <= 1e-15 * g[i][j].norm());
            }
        }
    }

    #[test]
    fn coincident_points_rejected() {
        assert!(matches!(
            SourceReceiverGeometry::new([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]),
            Err(Error::CoincidentPoints)
        ));
    }

    #[test]
    fn quasi_incompressible_transverse_on_axis() {
        let m = voigt(0.0);
        let geo = SourceReceiverGeometry::on_axis(0.015).unwrap();
        let grid = TimeGrid::covering(0.06, 1024).unwrap();
        let opts = SynthesisOptions::default();
        let q = green_quasi_incompressible(&m, &geo, &grid, &opts).unwrap();
        let s = mode_series(&m, Mode::S, 0.015, &grid, &opts).unwrap();
        let ks = 1.0 / (m.rho() * m.c_s().powi(2));
        let kn = 1.0 / (4.0 * PI * m.rho() * 0.015f64.powi(3));
        for k in 0..grid.n {
            let expect = ks * s.far[k] - kn * s.near[k];
            assert!((q.g[k][1][1] - expect).abs() <= 1e-12 * expect.abs().max(1e-6));
        }
        // transverse far-field peak at r / c_s
        let peak = (0..grid.n)
            .max_by(|&a, &b| s.far[a].partial_cmp(&s.far[b]).unwrap())
            .unwrap();
        assert!((grid.time(peak) - 0.015).abs() <= grid.dt);
    }
}
