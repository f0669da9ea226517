use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use visco::deatten::InversionMethod;
use visco::error::{Error, Result};
use visco::harness::config::{ExperimentConfig, Scenario};
use visco::harness::{
    run_correct, run_fig1, run_fig2, run_fig3, run_green, run_kk_check, run_localize,
    CorrectRequest, GreenRequest, RunReport,
};

/// Viscoelastic Green's functions, attenuation correction and source imaging.
#[derive(Debug, Parser)]
#[command(version, about)]
struct Cli {
    /// Output root; each command writes into its own subdirectory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// TOML experiment config (`schema = 1`); flags override its keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Shear viscosity nu_s (m^2/s).
    #[arg(long = "nu-s", global = true)]
    nu_s: Option<f64>,
    /// Shear speed c_s (m/s).
    #[arg(long = "c-s", global = true)]
    c_s: Option<f64>,
    /// Power-law exponent y.
    #[arg(long, global = true)]
    y: Option<f64>,
    /// Number of time samples.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Time step (s).
    #[arg(long, global = true)]
    dt: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    FirstOrder,
    Ode,
}

impl From<Method> for InversionMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::FirstOrder => InversionMethod::FirstOrder,
            Method::Ode => InversionMethod::Ode,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Temporal traces: elastic reference against each viscous case.
    Fig1,
    /// Planar snapshots and radial front profiles.
    Fig2,
    /// Order of the Gaussian-kernel approximation.
    Fig3,
    /// Synthetic localization with and without correction.
    Localize {
        #[arg(long, value_enum)]
        method: Option<Method>,
        /// Additive white noise level (dB).
        #[arg(long)]
        snr_db: Option<f64>,
        /// Number of random source positions.
        #[arg(long)]
        sources: Option<usize>,
    },
    /// Kramers-Kronig residuals under band doubling.
    KkCheck,
    /// Green's tensor time series at one source-receiver pair.
    Green {
        /// Source point `x,y,z` (m).
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.0, 0.0])]
        source: Vec<f64>,
        /// Receiver point `x,y,z` (m).
        #[arg(long, value_delimiter = ',', default_values_t = [0.015, 0.0, 0.0])]
        receiver: Vec<f64>,
    },
    /// De-attenuate a `(t, value)` CSV trace.
    Correct {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::FirstOrder)]
        method: Method,
    },
}

impl Command {
    fn scenario(&self) -> Scenario {
        match self {
            Self::Fig1 => Scenario::Fig1,
            Self::Fig2 => Scenario::Fig2,
            Self::Fig3 => Scenario::Fig3,
            Self::Localize { .. } => Scenario::Localize,
            Self::KkCheck => Scenario::Convergence,
            Self::Green { .. } | Self::Correct { .. } => Scenario::Custom,
        }
    }

    fn dir(&self) -> &'static str {
        match self {
            Self::Fig1 => "fig1",
            Self::Fig2 => "fig2",
            Self::Fig3 => "fig3",
            Self::Localize { .. } => "localize",
            Self::KkCheck => "kk-check",
            Self::Green { .. } => "green",
            Self::Correct { .. } => "correct",
        }
    }
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let scenario = cli.command.scenario();
    let text = match &cli.config {
        Some(path) => Some(
            std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?,
        ),
        None => None,
    };
    let mut cfg = ExperimentConfig::resolve(scenario, text.as_deref())?;
    if let Some(v) = cli.seed {
        cfg.seed = v;
    }
    if let Some(v) = cli.nu_s {
        cfg.medium.nu_s = v;
        for c in &mut cfg.cases {
            c.nu_s = v;
        }
    }
    if let Some(v) = cli.c_s {
        cfg.medium.c_s = v;
    }
    if let Some(v) = cli.y {
        cfg.medium.y = v;
        for c in &mut cfg.cases {
            c.y = v;
        }
    }
    if let Some(v) = cli.n {
        cfg.grid.n = v;
    }
    if let Some(v) = cli.dt {
        cfg.grid.dt = v;
    }
    if let Command::Localize {
        method,
        snr_db,
        sources,
    } = &cli.command
    {
        if let Some(m) = method {
            cfg.study.method = (*m).into();
        }
        if snr_db.is_some() {
            cfg.study.snr_db = *snr_db;
        }
        if let Some(s) = sources {
            cfg.geometry.sources = *s;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn point(v: &[f64]) -> Result<[f64; 3]> {
    match v {
        [x, y, z] => Ok([*x, *y, *z]),
        _ => Err(Error::Config(format!("expected 3 coordinates, got {}", v.len()))),
    }
}

fn run(cli: &Cli) -> Result<RunReport> {
    let cfg = load_config(cli)?;
    let out: &Path = &cli.out.join(cli.command.dir());
    match &cli.command {
        Command::Fig1 => run_fig1(&cfg, out),
        Command::Fig2 => run_fig2(&cfg, out),
        Command::Fig3 => run_fig3(&cfg, out),
        Command::Localize { .. } => run_localize(&cfg, out).map(|o| o.report),
        Command::KkCheck => run_kk_check(&cfg, out),
        Command::Green { source, receiver } => run_green(
            &cfg,
            &GreenRequest {
                source: point(source)?,
                receiver: point(receiver)?,
            },
            out,
        ),
        Command::Correct { input, method } => run_correct(
            &cfg,
            &CorrectRequest {
                input: input.clone(),
                method: (*method).into(),
            },
            out,
        ),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            for c in &report.checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            println!("manifest: {}", report.manifest.display());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
