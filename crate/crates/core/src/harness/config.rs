//! Experiment configuration.
//!
//! A config file is TOML with a mandatory `schema = 1` key. Every block is
//! optional: missing keys fall back to the defaults of the scenario being
//! run, and the fully resolved config is written into each manifest.
//!
//! ```toml
//! schema = 1
//! seed = 7
//!
//! [medium]          # SI units
//! rho = 1000.0
//! c_p = 40.0
//! c_s = 1.0
//! nu_p = 0.0
//! nu_s = 0.2
//! y = 2.0
//!
//! [[cases]]         # viscous variants compared against the elastic reference
//! y = 1.5
//! nu_s = 4.0
//!
//! [geometry]
//! r = 0.015
//! array_center = [0.01, 0.0, 0.0]
//! array_radius = 0.05
//! receivers = 16
//! sources = 10
//! source_radius = 0.02
//!
//! [grid]
//! n = 8192
//! dt = 1.5e-5
//!
//! [study]
//! eps = [1e-5, 3e-5, 1e-4, 3e-4, 1e-3]
//! method = "first_order"
//! ```

use serde::{Deserialize, Serialize};

use crate::deatten::InversionMethod;
use crate::error::{Error, Result};
use crate::medium::{MediumParams, PowerLawMedium};
use crate::spectral::TimeGrid;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Fig1,
    Fig2,
    Fig3,
    Localize,
    Convergence,
    Custom,
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Fig1 => "fig1",
            Self::Fig2 => "fig2",
            Self::Fig3 => "fig3",
            Self::Localize => "localize",
            Self::Convergence => "convergence",
            Self::Custom => "custom",
        })
    }
}

/// A `(y, nu_s)` variant of the base medium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Case {
    pub y: f64,
    pub nu_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Geometry {
    /// Source-receiver distance for single-trace scenarios (m).
    pub r: f64,
    pub array_center: [f64; 3],
    pub array_radius: f64,
    pub receivers: usize,
    /// Number of random source positions.
    pub sources: usize,
    /// Sources are drawn on grid nodes within this radius of the array centre.
    pub source_radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n: usize,
    pub dt: f64,
    /// Half-width of planar fields (m).
    pub extent: f64,
    /// Samples per axis of planar fields.
    pub points: usize,
    /// Entries of the radial table behind planar fields.
    pub radial_samples: usize,
    /// Radial step of the transverse profile (m).
    pub profile_step: f64,
    /// Image voxel size (m).
    pub voxel: f64,
    /// Search grid half-width in voxels.
    pub search_half: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Study {
    /// Viscosity scales `nu_s / c_s^2` for the order-of-accuracy sweep (s).
    pub eps: Vec<f64>,
    /// Snapshot time for planar fields (s).
    pub t_snapshot: f64,
    pub method: InversionMethod,
    /// Additive noise level for localization; none when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snr_db: Option<f64>,
    /// Media checked for Kramers-Kronig consistency.
    pub kk_cases: Vec<Case>,
    /// Largest frequency of interest for the Kramers-Kronig check (rad/s).
    pub kk_omega: f64,
    pub kk_d_omega: f64,
    /// Band edges tried, as multiples of `kk_omega`.
    pub kk_band_factors: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: u32,
    pub scenario: Scenario,
    pub seed: u64,
    pub medium: MediumParams,
    pub cases: Vec<Case>,
    pub geometry: Geometry,
    pub grid: GridSpec,
    pub study: Study,
}

impl ExperimentConfig {
    /// Built-in defaults for a scenario.
    pub fn defaults(scenario: Scenario) -> Self {
        let fig1_cases = vec![
            Case { y: 1.5, nu_s: 4.0 },
            Case { y: 2.0, nu_s: 0.2 },
            Case { y: 2.5, nu_s: 0.002 },
        ];
        let fig2_cases = vec![Case { y: 2.0, nu_s: 0.2 }, Case { y: 2.5, nu_s: 0.002 }];
        let mut cfg = Self {
            schema: SCHEMA_VERSION,
            scenario,
            seed: 0,
            medium: MediumParams {
                rho: 1000.0,
                c_p: 40.0,
                c_s: 1.0,
                nu_p: 0.0,
                nu_s: 0.2,
                y: 2.0,
            },
            cases: if scenario == Scenario::Fig2 { fig2_cases } else { fig1_cases },
            geometry: Geometry {
                r: 0.015,
                array_center: [0.01, 0.0, 0.0],
                array_radius: 0.05,
                receivers: 16,
                sources: 10,
                source_radius: 0.02,
            },
            grid: GridSpec {
                n: 8192,
                dt: 1.5e-5,
                extent: 0.03,
                points: 121,
                radial_samples: 2000,
                profile_step: 1e-5,
                voxel: 5e-4,
                search_half: 50,
            },
            study: Study {
                eps: vec![1e-5, 3e-5, 1e-4, 3e-4, 1e-3],
                t_snapshot: 0.015,
                method: InversionMethod::FirstOrder,
                snr_db: None,
                kk_cases: vec![Case { y: 2.0, nu_s: 1e-3 }, Case { y: 1.5, nu_s: 1e-2 }],
                kk_omega: 10.0,
                kk_d_omega: 0.05,
                kk_band_factors: vec![8.0, 16.0, 32.0],
            },
        };
        // slowly decaying viscous tails wrap around short windows
        match scenario {
            Scenario::Fig1 => {
                cfg.grid.n = 524_288;
                cfg.grid.dt = 7.5e-6;
            }
            Scenario::Fig2 => cfg.grid.n = 32_768,
            Scenario::Localize => {
                cfg.grid.n = 4096;
                cfg.grid.dt = 2.5e-4;
            }
            _ => {}
        }
        cfg
    }

    /// Parses `text` on top of the scenario defaults.
    pub fn resolve(scenario: Scenario, text: Option<&str>) -> Result<Self> {
        let defaults = Self::defaults(scenario);
        let Some(text) = text else {
            return Ok(defaults);
        };
        let user: toml::Table = text.parse().map_err(|e| Error::Config(format!("{e}")))?;
        match user.get("schema") {
            Some(toml::Value::Integer(v)) if *v == SCHEMA_VERSION as i64 => {}
            Some(other) => {
                return Err(Error::Config(format!(
                    "unsupported schema {other}, expected {SCHEMA_VERSION}"
                )))
            }
            None => return Err(Error::Config("missing `schema = 1`".into())),
        }
        if let Some(s) = user.get("scenario") {
            let wanted = scenario.to_string();
            if s.as_str() != Some(wanted.as_str()) {
                return Err(Error::Config(format!(
                    "config is for scenario {s}, but {wanted} was requested"
                )));
            }
        }
        let mut base = toml::Table::try_from(&defaults).map_err(|e| Error::Config(e.to_string()))?;
        merge(&mut base, user);
        let cfg: Self = toml::Value::Table(base)
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.base_medium()?;
        for c in &self.cases {
            self.case_medium(*c)?;
        }
        for c in &self.study.kk_cases {
            self.case_medium(*c)?;
        }
        self.time_grid()?;
        let g = &self.geometry;
        let positive = [
            ("geometry.r", g.r),
            ("geometry.array_radius", g.array_radius),
            ("grid.extent", self.grid.extent),
            ("grid.profile_step", self.grid.profile_step),
            ("grid.voxel", self.grid.voxel),
            ("study.t_snapshot", self.study.t_snapshot),
            ("study.kk_omega", self.study.kk_omega),
            ("study.kk_d_omega", self.study.kk_d_omega),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if g.source_radius < 0.0 || g.source_radius >= g.array_radius {
            return Err(Error::Config("geometry.source_radius must lie inside the array".into()));
        }
        if g.receivers < 3 {
            return Err(Error::Config("geometry.receivers must be at least 3".into()));
        }
        if self.study.eps.iter().any(|&e| !(e >= 0.0 && e.is_finite())) {
            return Err(Error::Config("study.eps entries must be >= 0".into()));
        }
        if self.grid.points < 2 || self.grid.radial_samples < 2 {
            return Err(Error::Config("grid.points and grid.radial_samples must be >= 2".into()));
        }
        Ok(())
    }

    pub fn base_medium(&self) -> Result<PowerLawMedium> {
        PowerLawMedium::try_from(self.medium).map_err(|e| Error::Config(format!("[medium] {e}")))
    }

    /// Elastic reference with the base speeds and density.
    pub fn elastic_medium(&self) -> Result<PowerLawMedium> {
        Ok(self.base_medium()?.inviscid())
    }

    /// Base medium with `y` and `nu_s` replaced.
    pub fn case_medium(&self, case: Case) -> Result<PowerLawMedium> {
        let m = self.medium;
        PowerLawMedium::new(m.rho, m.c_p, m.c_s, m.nu_p, case.nu_s, case.y)
            .map_err(|e| Error::Config(format!("case y={}, nu_s={}: {e}", case.y, case.nu_s)))
    }

    pub fn time_grid(&self) -> Result<TimeGrid> {
        TimeGrid::new(self.grid.n, self.grid.dt).map_err(|e| Error::Config(format!("[grid] {e}")))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }
}

fn merge(base: &mut toml::Table, user: toml::Table) {
    for (k, v) in user {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(u)) => merge(b, u),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}
