//! Command-line front end. Exit codes: 0 on success, 1 for invalid input or
//! configuration, 2 when a computed result fails a check.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};
pub use config::{FilterKind, RunConfig};
pub use output::{RunOutput, Table};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_INVARIANT: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "localphoton",
    version,
    about = "Strictly localized near-single-photon pulses and their passage through causal filters"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// TOML run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output directory (default: the configured one, else the current directory).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Seed duration as omega0 * sigma.
    #[arg(long, global = true, value_name = "W0_SIGMA", allow_negative_numbers = true)]
    pub seed_sigma: Option<f64>,

    /// Seed delay as tau / sigma.
    #[arg(long, global = true, value_name = "RATIO", allow_negative_numbers = true)]
    pub seed_tau_ratio: Option<f64>,

    /// Filter used by compare-representations.
    #[arg(long, global = true, value_enum)]
    pub filter: Option<FilterKind>,

    /// Tolerance override, repeatable: localization, paths, factorization, oracle.
    #[arg(long = "tolerance", global = true, value_name = "KEY=VALUE")]
    pub tolerances: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// 1 - F against pulse duration for each delay ratio.
    FidelitySweep,
    /// Energy density of the localized state.
    EnergyDensity,
    /// Input and output through the Fabry-Perot, with the three representations.
    FpFilter,
    /// Transmission and group delay of the bandgap stack over (0, 2 omega0).
    PbgSpectrum,
    /// Input and output through the bandgap stack.
    PbgFilter,
    /// Outputs for the localized state, the single photon and the truncated approximation.
    CompareRepresentations,
    /// Oracle-equivalence and invariant checks.
    Selftest,
}

impl Command {
    /// Default seed, used when neither the config nor the flags give one.
    fn default_seed(self) -> Option<(f64, f64)> {
        use commands::*;
        match self {
            Command::EnergyDensity | Command::Selftest => Some(ENERGY_DENSITY_SEED),
            Command::FpFilter => Some(FP_FILTER_SEED),
            Command::PbgFilter => Some(PBG_FILTER_SEED),
            Command::CompareRepresentations => Some(COMPARISON_SEED),
            Command::FidelitySweep | Command::PbgSpectrum => None,
        }
    }
}

/// Folds the flags into the configuration and checks it.
pub fn resolve(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    for t in &cli.tolerances {
        cfg.tolerances.set(t)?;
    }
    if cli.filter.is_some() && cli.command != Command::CompareRepresentations {
        return Err(Error::Config("--filter only applies to compare-representations".into()));
    }
    if cli.command == Command::FidelitySweep {
        if let Some(s) = cli.seed_sigma {
            cfg.sweep.omega0_sigma = vec![s];
        }
        if let Some(r) = cli.seed_tau_ratio {
            cfg.sweep.tau_ratios = vec![r];
        }
    } else if let Some(fallback) = cli.command.default_seed() {
        let mut seed = cfg.seed_or(fallback);
        if let Some(s) = cli.seed_sigma {
            seed.omega0_sigma = s;
        }
        if let Some(r) = cli.seed_tau_ratio {
            seed.tau_ratio = r;
        }
        cfg.seed = Some(seed);
    } else if cli.seed_sigma.is_some() || cli.seed_tau_ratio.is_some() {
        return Err(Error::Config("this command takes no seed".into()));
    }
    if let Some(out) = &cli.out {
        cfg.output_dir = Some(out.display().to_string());
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn execute(cli: &Cli, cfg: &RunConfig) -> Result<RunOutput> {
    match cli.command {
        Command::FidelitySweep => commands::fidelity_sweep(cfg),
        Command::EnergyDensity => commands::energy_density(cfg),
        Command::FpFilter => commands::fp_filter(cfg),
        Command::PbgSpectrum => commands::pbg_spectrum(cfg),
        Command::PbgFilter => commands::pbg_filter(cfg),
        Command::CompareRepresentations => commands::compare(cfg, cli.filter.unwrap_or(FilterKind::Fp)),
        Command::Selftest => commands::selftest(cfg),
    }
}

fn exit_code_for(e: &Error) -> u8 {
    if e.is_validation() {
        EXIT_VALIDATION
    } else {
        EXIT_INVARIANT
    }
}

/// Parses `args`, runs the command and writes its files.
pub fn run_from<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK });
        }
    };
    let cfg = match resolve(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_VALIDATION);
        }
    };
    let out = match execute(&cli, &cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code_for(&e));
        }
    };
    let dir = PathBuf::from(cfg.output_dir.as_deref().unwrap_or("."));
    match out.write(&dir, &cfg) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_VALIDATION);
        }
    }
    if out.failures.is_empty() {
        ExitCode::from(EXIT_OK)
    } else {
        for f in &out.failures {
            eprintln!("check failed: {f}");
        }
        ExitCode::from(EXIT_INVARIANT)
    }
}
