//! Causal linear filters described by a transmission `kappa(w)` and a
//! reflection `rho(w)`, with `|kappa|^2 + |rho|^2 = 1`.
//!
//! A delay `T` appears as the factor `e^{+i w T}` in `kappa`, matching the
//! transform convention of [`crate::signal`].

mod fabry_perot;
mod stack;
mod train;

use num_complex::Complex64;

pub use fabry_perot::{FabryPerot, DEFAULT_TRAIN_TOL};
pub use stack::{
    bandgap_delta_train, chebyshev_power, chebyshev_u, layer_matrix, stack_fourier_coefficients, CharacteristicMatrix,
    QuarterWaveStack,
};
pub use train::DeltaTrain;

use crate::error::Result;
use crate::signal::{FrequencyGrid, SpectralFunction};

/// A lossless two-port whose transmitted field is `kappa * input + rho * auxiliary`.
pub trait LinearFilter {
    fn kappa(&self, w: f64) -> Complex64;

    fn rho(&self, w: f64) -> Complex64;

    /// Impulse response as a train of delayed, weighted deltas.
    fn delta_train(&self) -> Result<DeltaTrain>;

    /// `d arg(kappa) / dw` by central difference.
    fn group_delay(&self, w: f64) -> f64 {
        numeric_group_delay(|x| self.kappa(x), w)
    }

    fn kappa_spectrum(&self, grid: FrequencyGrid) -> SpectralFunction {
        SpectralFunction::from_fn(grid, |w| self.kappa(w))
    }
}

/// Central difference of the phase of `f`, taken as the argument of a ratio so
/// that no unwrapping is needed.
pub fn numeric_group_delay(f: impl Fn(f64) -> Complex64, w: f64) -> f64 {
    let h = 1e-6 * w.abs().max(1.0);
    (f(w + h) / f(w - h)).arg() / (2.0 * h)
}

/// The two filter families behind one type.
#[derive(Debug, Clone, PartialEq)]
pub enum Filter {
    FabryPerot(FabryPerot),
    Bandgap(QuarterWaveStack),
}

impl LinearFilter for Filter {
    fn kappa(&self, w: f64) -> Complex64 {
        match self {
            Filter::FabryPerot(f) => f.kappa(w),
            Filter::Bandgap(f) => f.kappa(w),
        }
    }

    fn rho(&self, w: f64) -> Complex64 {
        match self {
            Filter::FabryPerot(f) => f.rho(w),
            Filter::Bandgap(f) => f.rho(w),
        }
    }

    fn delta_train(&self) -> Result<DeltaTrain> {
        match self {
            Filter::FabryPerot(f) => f.delta_train(),
            Filter::Bandgap(f) => f.delta_train(),
        }
    }
}

impl Filter {
    pub fn name(&self) -> &'static str {
        match self {
            Filter::FabryPerot(_) => "fabry-perot",
            Filter::Bandgap(_) => "bandgap",
        }
    }

    /// Spacing of the delta-train delays.
    pub fn delay_quantum(&self) -> f64 {
        match self {
            Filter::FabryPerot(f) => 2.0 * f.d,
            Filter::Bandgap(f) => std::f64::consts::PI / f.omega0,
        }
    }
}
