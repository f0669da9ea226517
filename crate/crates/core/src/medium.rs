//! Power-law attenuating media: the attenuation multiplier, the dispersion
//! relation and a Kramers-Kronig consistency check.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
pub use crate::spectral::FrequencyGrid;
use crate::spectral::hilbert_truncated;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Wave mode: compressional (`P`) or shear (`S`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    P,
    S,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::P => f.write_str("p"),
            Mode::S => f.write_str("s"),
        }
    }
}

/// Raw medium parameters as they appear in config files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumParams {
    pub rho: f64,
    pub c_p: f64,
    pub c_s: f64,
    pub nu_p: f64,
    pub nu_s: f64,
    pub y: f64,
}

/// Homogeneous isotropic medium with power-law attenuation.
///
/// Stores density, the two wave speeds, the two viscosity parameters
/// `nu_p = (eta_p + 2 eta_s)/rho`, `nu_s = eta_s/rho` and the power-law
/// exponent `y`. Invariants: `rho > 0`, `c_p > c_s > 0`, `nu_m >= 0`, `y > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MediumParams", into = "MediumParams")]
pub struct PowerLawMedium {
    rho: f64,
    c_p: f64,
    c_s: f64,
    nu_p: f64,
    nu_s: f64,
    y: f64,
}

impl TryFrom<MediumParams> for PowerLawMedium {
    type Error = Error;

    fn try_from(p: MediumParams) -> Result<Self> {
        PowerLawMedium::new(p.rho, p.c_p, p.c_s, p.nu_p, p.nu_s, p.y)
    }
}

impl From<PowerLawMedium> for MediumParams {
    fn from(m: PowerLawMedium) -> Self {
        MediumParams {
            rho: m.rho,
            c_p: m.c_p,
            c_s: m.c_s,
            nu_p: m.nu_p,
            nu_s: m.nu_s,
            y: m.y,
        }
    }
}

impl PowerLawMedium {
    pub fn new(rho: f64, c_p: f64, c_s: f64, nu_p: f64, nu_s: f64, y: f64) -> Result<Self> {
        let all = [rho, c_p, c_s, nu_p, nu_s, y];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(invalid("medium parameters must be finite"));
        }
        if rho <= 0.0 {
            return Err(invalid(format!("rho must be positive, got {rho}")));
        }
        if !(c_s > 0.0 && c_p > c_s) {
            return Err(invalid(format!("need c_p > c_s > 0, got c_p = {c_p}, c_s = {c_s}")));
        }
        if nu_p < 0.0 || nu_s < 0.0 {
            return Err(invalid("viscosities must be non-negative"));
        }
        if y <= 0.0 {
            return Err(invalid(format!("power-law exponent must be positive, got {y}")));
        }
        Ok(Self { rho, c_p, c_s, nu_p, nu_s, y })
    }

    /// Voigt medium (`y = 2`).
    pub fn voigt(rho: f64, c_p: f64, c_s: f64, nu_p: f64, nu_s: f64) -> Result<Self> {
        Self::new(rho, c_p, c_s, nu_p, nu_s, 2.0)
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub fn c_p(&self) -> f64 {
        self.c_p
    }
    pub fn c_s(&self) -> f64 {
        self.c_s
    }
    pub fn nu_p(&self) -> f64 {
        self.nu_p
    }
    pub fn nu_s(&self) -> f64 {
        self.nu_s
    }
    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn speed(&self, mode: Mode) -> f64 {
        match mode {
            Mode::P => self.c_p,
            Mode::S => self.c_s,
        }
    }

    pub fn viscosity(&self, mode: Mode) -> f64 {
        match mode {
            Mode::P => self.nu_p,
            Mode::S => self.nu_s,
        }
    }

    pub fn is_voigt(&self) -> bool {
        self.y == 2.0
    }

    pub fn is_inviscid(&self) -> bool {
        self.nu_p == 0.0 && self.nu_s == 0.0
    }

    /// Same medium with the listed viscosities replaced.
    pub fn with_viscosities(&self, nu_p: f64, nu_s: f64) -> Result<Self> {
        Self::new(self.rho, self.c_p, self.c_s, nu_p, nu_s, self.y)
    }

    pub fn inviscid(&self) -> Self {
        Self { nu_p: 0.0, nu_s: 0.0, ..*self }
    }

    /// `nu_m |M(w_max)| / c_m^2 < 1` for both modes.
    pub fn is_perturbative(&self, omega_max: f64) -> bool {
        let m = multiplier(self.y, omega_max.abs()).norm();
        [Mode::P, Mode::S]
            .iter()
            .all(|&mode| self.viscosity(mode) * m / self.speed(mode).powi(2) < 1.0)
    }
}

fn integer_exponent(y: f64) -> Option<i64> {
    let r = y.round();
    if (y - r).abs() < 1e-12 {
        Some(r as i64)
    } else {
        None
    }
}

/// Fourier multiplier of the attenuation convolution operator.
///
/// * even `y`: `-i sgn(w) |w|^(y-1)` (so `y = 2` gives `-i w`);
/// * odd `y`: transform of the finite-part kernel
///   `(2/pi) (y-1)! (-1)^((y+1)/2) H(t)/t^y`, which carries a logarithm;
///   the finite part is taken with the time unit (seconds) as reference scale;
/// * non-integer `y`: `-|w|^(y-1) (tan(pi y / 2) + i sgn(w))`, the finite part
///   of the transform of `-(2/pi) Gamma(y) sin(pi y/2) H(t)/|t|^y`.
pub fn attenuation_multiplier(y: f64, omega: f64) -> Result<Complex64> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(invalid(format!("power-law exponent must be positive, got {y}")));
    }
    if !omega.is_finite() {
        return Err(invalid(format!("frequency must be finite, got {omega}")));
    }
    Ok(multiplier(y, omega))
}

pub(crate) fn multiplier(y: f64, omega: f64) -> Complex64 {
    if omega == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let a = omega.abs();
    let sgn = omega.signum();
    match integer_exponent(y) {
        Some(k) if k % 2 == 0 => Complex64::new(0.0, -sgn * a.powi((k - 1) as i32)),
        Some(k) => {
            // FP \int_0^inf t^-k e^{i w t} dt = (i w)^(k-1)/(k-1)! (psi(k) - ln(-i w));
            // the (k-1)! cancels against the kernel prefactor.
            let psi = -EULER_GAMMA + (1..k).map(|j| 1.0 / j as f64).sum::<f64>();
            let sign = if ((k + 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            let pow = Complex64::new(0.0, omega).powi((k - 1) as i32);
            let log = Complex64::new(a.ln(), -sgn * FRAC_PI_2);
            (2.0 / PI) * sign * pow * (psi - log)
        }
        None => -a.powf(y - 1.0) * Complex64::new((PI * y / 2.0).tan(), sgn),
    }
}

/// Complex wavenumber-like value `K_m(w)` and its regime flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dispersion {
    pub k: Complex64,
    /// Set when the radicand `1 - nu_m M(w)/c_m^2` has non-positive real part.
    pub non_perturbative: bool,
}

/// `K_m(w) = w sqrt(1 - nu_m M(w) / c_m^2)`.
///
/// The branch gives `Im K >= 0` for `w >= 0`; negative frequencies follow
/// `K(-w) = -conj(K(w))`, which keeps synthesized fields real.
pub fn dispersion(medium: &PowerLawMedium, mode: Mode, omega: f64) -> Dispersion {
    let nu = medium.viscosity(mode);
    let c = medium.speed(mode);
    let a = omega.abs();
    if nu == 0.0 {
        return Dispersion {
            k: Complex64::new(omega, 0.0),
            non_perturbative: false,
        };
    }
    let radicand = 1.0 - nu / (c * c) * multiplier(medium.y, a);
    let mut root = radicand.sqrt();
    if root.im < 0.0 {
        root = -root;
    }
    let k = a * root;
    Dispersion {
        k: if omega < 0.0 { -k.conj() } else { k },
        non_perturbative: radicand.re <= 0.0,
    }
}

/// Shorthand for `dispersion(..).k`.
#[inline]
pub fn wavenumber(medium: &PowerLawMedium, mode: Mode, omega: f64) -> Complex64 {
    dispersion(medium, mode, omega).k
}

/// Minimum ratio between the band edge and the frequencies of interest.
pub const KK_BAND_FACTOR: f64 = 8.0;

/// Causal-consistency residual of the implemented dispersion.
///
/// Checks the subtracted Kramers-Kronig pair
///
/// ```text
///   Re(K - w) = w^p H[ Im(K - w) / w^p ]
/// ```
///
/// with `p = 2` for `y > 1` and `p = 1` otherwise, where `H` is the truncated
/// discrete Hilbert transform over the band. The subtraction removes the
/// non-dispersive part `w` and makes the transformed function decay, so the
/// truncation error shrinks as the band widens. Returns
/// `max |Re(K-w) - w^p H[..]| / max |Re K|`, both maxima over
/// `|w| <= omega_interest`.
pub fn kramers_kronig_residual(
    medium: &PowerLawMedium,
    mode: Mode,
    band: &FrequencyGrid,
    omega_interest: f64,
) -> Result<f64> {
    if !(omega_interest > 0.0 && omega_interest.is_finite()) {
        return Err(invalid("frequency of interest must be positive"));
    }
    let required = KK_BAND_FACTOR * omega_interest;
    if band.omega_max() < required * (1.0 - 1e-12) {
        return Err(Error::BandTooNarrow {
            omega_max: band.omega_max(),
            required,
        });
    }
    let inside = (omega_interest / band.d_omega).floor() as usize;
    if inside < 8 {
        return Err(Error::InvalidGrid(format!(
            "only {inside} samples below the frequency of interest; refine d_omega"
        )));
    }
    let n = band.n;
    let p = if medium.y > 1.0 { 2 } else { 1 };
    let w: Vec<f64> = (0..n).map(|i| band.omega_ascending(i)).collect();
    let k: Vec<Complex64> = w.iter().map(|&w| wavenumber(medium, mode, w)).collect();
    let zero = n / 2;
    let mut g: Vec<f64> = w
        .iter()
        .zip(&k)
        .map(|(&w, k)| if w == 0.0 { 0.0 } else { (k.im) / w.powi(p) })
        .collect();
    if p == 2 {
        g[zero] = 0.5 * (g[zero - 1] + g[zero + 1]);
    }
    let h = hilbert_truncated(&g);
    let mut err: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for i in 0..n {
        if w[i].abs() > omega_interest {
            continue;
        }
        let re_excess = k[i].re - w[i];
        err = err.max((re_excess - w[i].powi(p) * h[i]).abs());
        scale = scale.max(k[i].re.abs());
    }
    Ok(if scale > 0.0 { err / scale } else { 0.0 })
}
