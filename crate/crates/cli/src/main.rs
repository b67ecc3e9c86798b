//! `qfd`: coefficient traces, qubit evolution, decoherence times and sweeps.

mod commands;
mod config;
mod failure;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{AngleSpec, ConfigFile, Format};
use failure::{Failure, EXIT_CONFIG};

#[derive(Debug, Parser)]
#[command(name = "qfd", version, about = "Decoherence of a two-level particle moving over a dissipative surface")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

/// Parameters shared by every subcommand. Flags override the config file,
/// which overrides the preset.
#[derive(Debug, Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Particle/surface pair: nv-nsi, nv-au, rb-nsi, rb-au.
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Surface material: au or nsi.
    #[arg(long, global = true)]
    material: Option<String>,
    /// Velocity in units of a·ω_s; may be negative.
    #[arg(long, global = true, allow_hyphen_values = true)]
    u: Option<f64>,
    /// Particle-surface distance in nm (only used for validity checks).
    #[arg(long, global = true)]
    a_nm: Option<f64>,
    #[arg(long, global = true)]
    r0: Option<f64>,
    #[arg(long, global = true)]
    delta: Option<f64>,
    #[arg(long, global = true)]
    gamma: Option<f64>,
    /// Surface frequency in rad/s.
    #[arg(long, global = true)]
    omega_s: Option<f64>,
    /// Dipole polar angle: radians, or degrees with a `deg` suffix.
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta: Option<String>,
    /// Dipole azimuth: radians, or degrees with a `deg` suffix.
    #[arg(long, global = true, allow_hyphen_values = true)]
    phi: Option<String>,
    #[arg(long, global = true)]
    points_per_cycle: Option<usize>,
    #[arg(long, global = true)]
    omega_max: Option<f64>,
    #[arg(long, global = true)]
    horizon_cycles: Option<f64>,
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    #[arg(long, global = true)]
    exclusion_band: Option<f64>,
    /// Output file; `-` for stdout.
    #[arg(short, long, global = true)]
    output: Option<String>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the fully resolved configuration to this path.
    #[arg(long, global = true)]
    dump_config: Option<PathBuf>,
}

impl Common {
    fn overrides(&self) -> ConfigFile {
        let mut f = ConfigFile::default();
        f.preset = self.preset.clone();
        f.material.preset = self.material.clone();
        f.material.omega_s_rad_s = self.omega_s;
        f.material.gamma_tilde = self.gamma;
        f.particle.delta_tilde = self.delta;
        f.particle.r0_tilde = self.r0;
        f.particle.theta = self.theta.clone().map(AngleSpec::Text);
        f.particle.phi = self.phi.clone().map(AngleSpec::Text);
        f.kinematics.u = self.u;
        f.kinematics.a_nm = self.a_nm;
        f.numerics.points_per_cycle = self.points_per_cycle;
        f.numerics.omega_max = self.omega_max;
        f.numerics.horizon_cycles = self.horizon_cycles;
        f.numerics.rel_tol = self.rel_tol;
        f.numerics.abs_tol = self.abs_tol;
        f.numerics.exclusion_band = self.exclusion_band;
        f.output.path = self.output.clone();
        f.output.format = self.format;
        f
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Time-dependent coefficients D, f, zeta.
    Coeffs {
        #[arg(long, value_enum, default_value_t = CoeffMethod::E1)]
        method: CoeffMethod,
        /// Length of the trace in natural cycles.
        #[arg(long, default_value_t = 6.0)]
        cycles: f64,
    },
    /// Density-matrix evolution.
    Evolve {
        #[arg(long, default_value_t = 300.0)]
        cycles: f64,
        #[arg(long, value_enum, default_value_t = CoeffMethod::E1)]
        method: CoeffMethod,
        #[arg(long, default_value_t = 0.5)]
        rho11: f64,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        rho12_re: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        rho12_im: f64,
    },
    /// Decoherence time.
    Tdec {
        #[arg(long, value_enum, default_value_t = TauKind::Numeric)]
        method: TauKind,
    },
    /// Decoherence time over a parameter range.
    Sweep {
        #[arg(long, value_enum)]
        param: SweepParam,
        /// Start of the range (angles accept a `deg` suffix).
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(long, default_value_t = 11)]
        points: usize,
        /// Comma-separated presets to repeat an angular sweep for.
        #[arg(long, value_delimiter = ',')]
        combos: Vec<String>,
        #[arg(long, value_enum, default_value_t = TauKind::Numeric)]
        method: TauKind,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoeffMethod {
    E1,
    Analytic,
    Brute,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TauKind {
    Numeric,
    Analytic,
    Markov,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    U,
    Theta,
    Phi,
    Delta,
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut file = ConfigFile::default();
    if let Some(path) = &cli.common.config {
        file.overlay(ConfigFile::load(path)?);
    }
    let mut overrides = cli.common.overrides();
    // a preset named on the command line replaces the file's material too
    if overrides.preset.is_some() && overrides.material.preset.is_none() {
        file.material = Default::default();
    }
    file.overlay(std::mem::take(&mut overrides));
    let cfg = file.resolve()?;
    if let Some(path) = &cli.common.dump_config {
        output::write_atomic(path, &cfg.to_toml())?;
    }
    match cli.command {
        Command::Coeffs { method, cycles } => commands::coeffs(&cfg, method, cycles),
        Command::Evolve {
            cycles,
            method,
            rho11,
            rho12_re,
            rho12_im,
        } => commands::evolve(&cfg, method, cycles, rho11, rho12_re, rho12_im),
        Command::Tdec { method } => commands::tdec(&cfg, method),
        Command::Sweep {
            param,
            from,
            to,
            points,
            combos,
            method,
        } => commands::sweep(&cfg, param, &from, &to, points, &combos, method),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("qfd: {f}");
            ExitCode::from(f.code as u8)
        }
    }
}
