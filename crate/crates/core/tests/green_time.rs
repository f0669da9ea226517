use std::f64::consts::PI;

use num_complex::Complex64;
use visco::green::{
    green_time_tensor, mode_series, radial_moment, GreenTensorSeries, SourceReceiverGeometry,
    SynthesisOptions,
};
use visco::medium::{Mode, PowerLawMedium};
use visco::quadrature::CompositeRule;
use visco::spectral::TimeGrid;

const R: f64 = 0.015;

fn medium(nu_s: f64) -> PowerLawMedium {
    PowerLawMedium::new(1000.0, 40.0, 1.0, 0.0, nu_s, 2.0).unwrap()
}

fn grid() -> TimeGrid {
    TimeGrid::covering(8.0 * R, 8192).unwrap()
}

fn series(m: &PowerLawMedium, xi: [f64; 3], x: [f64; 3]) -> GreenTensorSeries {
    series_on(m, xi, x, &grid())
}

fn series_on(m: &PowerLawMedium, xi: [f64; 3], x: [f64; 3], grid: &TimeGrid) -> GreenTensorSeries {
    let geo = SourceReceiverGeometry::new(xi, x).unwrap();
    green_time_tensor(m, &geo, grid, &SynthesisOptions::default()).unwrap()
}

#[test]
fn tensor_is_symmetric() {
    let g = series(&medium(0.2), [0.0; 3], [0.004, -0.009, 0.011]);
    assert!(g.asymmetry() <= 1e-12 * g.sup_norm(), "{}", g.asymmetry());
}

#[test]
fn tensor_is_reciprocal() {
    let m = medium(0.2);
    let a = series(&m, [0.001, 0.002, -0.003], [0.01, -0.004, 0.006]);
    let b = series(&m, [0.01, -0.004, 0.006], [0.001, 0.002, -0.003]);
    let scale = a.sup_norm();
    for (ta, tb) in a.g.iter().zip(&b.g) {
        for i in 0..3 {
            for j in 0..3 {
                assert!((ta[i][j] - tb[j][i]).abs() <= 1e-12 * scale);
            }
        }
    }
}

fn energy_before(g: &GreenTensorSeries, t_cut: f64) -> f64 {
    g.g.iter()
        .enumerate()
        .filter(|(k, _)| g.grid.time(*k) < t_cut)
        .map(|(_, t)| t.iter().flatten().map(|v| v * v).sum::<f64>())
        .sum()
}

#[test]
fn elastic_tensor_is_causal() {
    let g = series(&medium(0.0), [0.0; 3], [R, 0.0, 0.0]);
    let t_cut = 0.9 * R / 40.0;
    let worst = g
        .g
        .iter()
        .enumerate()
        .filter(|(k, _)| g.grid.time(*k) < t_cut)
        .flat_map(|(_, t)| t.iter().flatten().copied().collect::<Vec<_>>())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(worst < 1e-3 * g.sup_norm(), "{worst} vs {}", g.sup_norm());
}

#[test]
fn precursor_shrinks_with_viscosity() {
    let t_cut = 0.9 * R / 40.0;
    let e: Vec<f64> = [1e-2, 1e-3, 1e-4]
        .iter()
        .map(|&nu| {
            let g = series(&medium(nu), [0.0; 3], [R, 0.0, 0.0]);
            energy_before(&g, t_cut) / g.sup_norm().powi(2)
        })
        .collect();
    assert!(e[0] > e[1] && e[1] > e[2], "{e:?}");
}

#[test]
fn converges_to_elastic() {
    // nu w_max^2 r must be small for the band-limited limit to show
    let coarse = TimeGrid::covering(8.0 * R, 1024).unwrap();
    let elastic = series_on(&medium(0.0), [0.0; 3], [R, 0.0, 0.0], &coarse);
    let errs: Vec<f64> = [1e-7, 1e-8, 1e-9]
        .iter()
        .map(|&nu| {
            let g = series_on(&medium(nu), [0.0; 3], [R, 0.0, 0.0], &coarse);
            let num: f64 = g
                .g
                .iter()
                .zip(&elastic.g)
                .map(|(a, b)| (a[1][1] - b[1][1]).powi(2))
                .sum();
            let den: f64 = elastic.g.iter().map(|b| b[1][1].powi(2)).sum();
            (num / den).sqrt()
        })
        .collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    assert!(errs[2] < 1e-2, "{errs:?}");
}

/// Relative L2 gap between `W_m` and `(4 pi / c^2) \int_0^r z^2 G^m(z) dz`.
fn w_identity_error(m: &PowerLawMedium, mode: Mode) -> f64 {
    let grid = grid();
    let opts = SynthesisOptions::default();
    let c = m.speed(mode);
    let direct = mode_series(m, mode, R, &grid, &opts).unwrap().near;
    let mut integral = vec![0.0; grid.n];
    for (z, w) in CompositeRule::new(64).points(0.0, R, 1) {
        let g = mode_series(m, mode, z, &grid, &opts).unwrap().far;
        for (acc, v) in integral.iter_mut().zip(g) {
            *acc += w * z * z * v;
        }
    }
    let scale = 4.0 * PI / (c * c);
    let num: f64 = direct
        .iter()
        .zip(&integral)
        .map(|(a, b)| (a - scale * b).powi(2))
        .sum();
    let den: f64 = direct.iter().map(|a| a * a).sum();
    (num / den).sqrt()
}

#[test]
fn radial_moment_identity_in_time() {
    let m = medium(0.2);
    let e = w_identity_error(&m, Mode::S);
    assert!(e < 0.02, "shear {e}");
    let e = w_identity_error(&m, Mode::P);
    assert!(e < 0.02, "pressure {e}");
}

/// `-(1/4 pi rho) d_1(1/r) I_p(r)` at a point.
fn potential(m: &PowerLawMedium, omega: f64, x: [f64; 3]) -> Complex64 {
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let d1_inv_r = -x[0] / r.powi(3);
    -radial_moment(m, Mode::P, omega, r) * d1_inv_r / (4.0 * PI * m.rho())
}

fn helmholtz_residual(m: &PowerLawMedium, omega: f64, x: [f64; 3], h: f64) -> f64 {
    let centre = potential(m, omega, x);
    let mut lap = -6.0 * centre;
    for axis in 0..3 {
        for s in [-1.0, 1.0] {
            let mut p = x;
            p[axis] += s * h;
            lap += potential(m, omega, p);
        }
    }
    lap /= h * h;
    let k = visco::medium::dispersion(m, Mode::P, omega).k;
    let cp = m.c_p();
    let lhs = lap + k * k / (cp * cp) * centre;
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let source = -x[0] / r.powi(3) / (4.0 * PI);
    let amp = visco::green::amplitude_factor(m, Mode::P, omega);
    let rhs = amp * source / (m.rho() * cp * cp);
    (lhs - rhs).norm() / rhs.norm()
}

#[test]
fn pressure_potential_satisfies_helmholtz() {
    let m = PowerLawMedium::new(1000.0, 40.0, 1.0, 0.2, 0.2, 2.0).unwrap();
    let x = [0.01, 0.006, -0.004];
    for omega in [50.0, 2000.0] {
        let res: Vec<f64> = [1e-3, 5e-4, 2.5e-4]
            .iter()
            .map(|&h| helmholtz_residual(&m, omega, x, h))
            .collect();
        assert!(res[0] > res[1] && res[1] > res[2], "{res:?}");
        assert!(res[2] < 0.01, "{res:?}");
    }
}
