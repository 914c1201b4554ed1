//! Run configuration, read from TOML. Every section is optional; unknown keys
//! are rejected.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filters::{FabryPerot, Filter, QuarterWaveStack};
use crate::pipeline::{DEFAULT_LOG2_N, LOCALIZATION_TOL};
use crate::signal::SeedParams;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Seed pulse; each command falls back to its own default when absent.
    pub seed: Option<SeedConfig>,
    pub grid: GridConfig,
    pub fabry_perot: FabryPerotConfig,
    pub bandgap: BandgapConfig,
    pub sweep: SweepConfig,
    pub spectrum: SpectrumConfig,
    pub tolerances: Tolerances,
    pub output_dir: Option<String>,
}

/// Seed given in carrier units: `omega0 * sigma` and `tau / sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedConfig {
    pub omega0_sigma: f64,
    pub tau_ratio: f64,
    #[serde(default = "one")]
    pub omega0: f64,
    #[serde(default = "default_ramp")]
    pub ramp_fraction: f64,
}

fn one() -> f64 {
    1.0
}

fn default_ramp() -> f64 {
    0.1
}

impl SeedConfig {
    pub fn new(omega0_sigma: f64, tau_ratio: f64) -> Self {
        SeedConfig {
            omega0_sigma,
            tau_ratio,
            omega0: one(),
            ramp_fraction: default_ramp(),
        }
    }

    pub fn params(&self) -> Result<SeedParams> {
        if !(self.omega0.is_finite() && self.omega0 > 0.0) {
            return Err(Error::param("omega0", format!("must be positive, got {}", self.omega0)));
        }
        let sigma = self.omega0_sigma / self.omega0;
        let p = SeedParams {
            sigma,
            tau: sigma * self.tau_ratio,
            omega0: self.omega0,
            ramp_fraction: self.ramp_fraction,
        };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub log2_n: u32,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { log2_n: DEFAULT_LOG2_N }
    }
}

/// Mirrors of reflectance `reflectance`, spaced either by `spacing` or so that
/// the round-trip phase at the carrier equals `phase`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FabryPerotConfig {
    pub reflectance: f64,
    pub phase: Option<f64>,
    pub spacing: Option<f64>,
    pub train_tol: f64,
}

impl Default for FabryPerotConfig {
    fn default() -> Self {
        FabryPerotConfig {
            reflectance: 0.9,
            phase: None,
            spacing: None,
            train_tol: crate::filters::DEFAULT_TRAIN_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BandgapConfig {
    pub n1: f64,
    pub n2: f64,
    pub layers: u32,
    pub k_terms: usize,
    pub train_tol: f64,
}

impl Default for BandgapConfig {
    fn default() -> Self {
        BandgapConfig {
            n1: 1.0,
            n2: 2.0,
            layers: 10,
            k_terms: 1024,
            train_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub omega0_sigma: Vec<f64>,
    pub tau_ratios: Vec<f64>,
    pub n_max: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            omega0_sigma: vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 5.0, 6.0, 8.0, 10.0],
            tau_ratios: vec![2.0, 3.0],
            n_max: crate::fock::DEFAULT_N_MAX,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumConfig {
    /// Samples over `(0, 2 omega0)`, end points excluded.
    pub points: usize,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig { points: 2000 }
    }
}

/// Thresholds for the checks run before anything is written.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// `max_{t<0} |out| / max |out|` for localized traces.
    pub localization: f64,
    /// Delta-train against convolution outputs.
    pub paths: f64,
    /// Single-photon double sum against its factorized form.
    pub factorization: f64,
    /// Closed-form correlation against the Fock model.
    pub oracle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            localization: LOCALIZATION_TOL,
            paths: 1e-6,
            factorization: 1e-10,
            oracle: 1e-6,
        }
    }
}

impl Tolerances {
    /// Applies one `key=value` override.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("tolerance override `{assignment}` is not key=value")))?;
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("tolerance `{key}` has non-numeric value `{value}`")))?;
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Config(format!("tolerance `{key}` must be positive, got {v}")));
        }
        let slot = match key.trim() {
            "localization" => &mut self.localization,
            "paths" => &mut self.paths,
            "factorization" => &mut self.factorization,
            "oracle" => &mut self.oracle,
            other => return Err(Error::Config(format!("unknown tolerance `{other}`"))),
        };
        *slot = v;
        Ok(())
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Seed from the config, or `fallback` given as `(omega0 sigma, tau / sigma)`.
    pub fn seed_or(&self, fallback: (f64, f64)) -> SeedConfig {
        self.seed.unwrap_or(SeedConfig::new(fallback.0, fallback.1))
    }

    pub fn omega0(&self) -> f64 {
        self.seed.map_or(1.0, |s| s.omega0)
    }

    pub fn fabry_perot(&self) -> Result<FabryPerot> {
        let c = &self.fabry_perot;
        let fp = match (c.phase, c.spacing) {
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "set either fabry_perot.phase or fabry_perot.spacing, not both".into(),
                ))
            }
            (None, Some(d)) => FabryPerot::new(c.reflectance, d)?,
            (phase, None) => FabryPerot::with_phase(c.reflectance, phase.unwrap_or(PI), self.omega0())?,
        };
        fp.with_train_tol(c.train_tol)
    }

    pub fn bandgap(&self) -> Result<QuarterWaveStack> {
        let c = &self.bandgap;
        QuarterWaveStack::new(c.n1, c.n2, c.layers, self.omega0())?.with_train(c.k_terms, c.train_tol)
    }

    pub fn filter(&self, kind: FilterKind) -> Result<Filter> {
        Ok(match kind {
            FilterKind::Fp => Filter::FabryPerot(self.fabry_perot()?),
            FilterKind::Pbg => Filter::Bandgap(self.bandgap()?),
        })
    }

    /// Checks everything that does not need a computation.
    pub fn validate(&self) -> Result<()> {
        if let Some(s) = &self.seed {
            s.params()?;
        }
        if !(8..=22).contains(&self.grid.log2_n) {
            return Err(Error::Config(format!(
                "grid.log2_n must lie in 8..=22, got {}",
                self.grid.log2_n
            )));
        }
        self.fabry_perot()?;
        self.bandgap()?;
        let s = &self.sweep;
        if s.omega0_sigma.is_empty() || s.tau_ratios.is_empty() {
            return Err(Error::Config("sweep lists must not be empty".into()));
        }
        if s.n_max < 2 {
            return Err(Error::Config(format!(
                "sweep.n_max must be at least 2, got {}",
                s.n_max
            )));
        }
        if self.spectrum.points < 2 {
            return Err(Error::Config("spectrum.points must be at least 2".into()));
        }
        let t = &self.tolerances;
        for (k, v) in [
            ("localization", t.localization),
            ("paths", t.paths),
            ("factorization", t.factorization),
            ("oracle", t.oracle),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("tolerance `{k}` must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FilterKind {
    Fp,
    Pbg,
}
