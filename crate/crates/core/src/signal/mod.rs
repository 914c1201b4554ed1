//! Uniform grids, the Fourier convention, quadrature and seed pulses.
//!
//! Transform convention: `G(w) = (2 pi)^(-1/2) \int g(t) e^{+i w t} dt`, so a
//! carrier `e^{-i w0 t}` shows up at `+w0` and a delay `g(t - a)` multiplies
//! the spectrum by `e^{+i w a}`.

mod causal;
mod fourier;
mod grid;
mod quadrature;
mod seed;
mod trace;

use num_complex::Complex64;

pub use causal::{causal_convolve, causal_half_derivative, positive_frequency_part};
pub(crate) use fourier::plan as fourier_plan;
pub use fourier::{forward_fourier, inverse_fourier};
pub use grid::{FrequencyGrid, TimeGrid};
pub use quadrature::{quadrature_norm2, trapezoid, Interval, Sampled};
pub use seed::{make_truncated_gaussian, SeedParams};
pub use trace::Trace;

use crate::error::{Error, Result};

/// Complex samples on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    pub grid: TimeGrid,
    pub values: Vec<Complex64>,
}

impl SampledSignal {
    pub fn new(grid: TimeGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} samples for a grid of {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(SampledSignal { grid, values })
    }

    pub fn zeros(grid: TimeGrid) -> Self {
        SampledSignal {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_fn(grid: TimeGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.times().map(f).collect();
        SampledSignal { grid, values }
    }

    pub fn at(&self, t: f64) -> Result<Complex64> {
        Ok(self.values[self.grid.index_of(t)?])
    }

    /// Sample `k` counted from the grid start, or zero outside the grid.
    #[inline]
    pub fn get(&self, k: isize) -> Complex64 {
        if k < 0 || k as usize >= self.values.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.values[k as usize]
        }
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        SampledSignal {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|v| v * s)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest `|value|` at `t < 0`.
    pub fn max_abs_before_zero(&self) -> f64 {
        self.values[..self.grid.origin()]
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn check_same_grid(&self, other: &SampledSignal) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("signals live on different time grids".into()));
        }
        Ok(())
    }
}

/// Complex samples on a [`FrequencyGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFunction {
    pub grid: FrequencyGrid,
    pub values: Vec<Complex64>,
}

impl SpectralFunction {
    pub fn new(grid: FrequencyGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} samples for a grid of {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(SpectralFunction { grid, values })
    }

    pub fn from_fn(grid: FrequencyGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.omegas().map(f).collect();
        SpectralFunction { grid, values }
    }

    pub fn at(&self, w: f64) -> Result<Complex64> {
        Ok(self.values[self.grid.index_of(w)?])
    }

    /// Value at `-w_j`; the unpaired most negative sample maps to zero.
    #[inline]
    pub fn mirrored(&self, j: usize) -> Complex64 {
        self.grid.mirror(j).map_or(Complex64::new(0.0, 0.0), |m| self.values[m])
    }

    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(j, &v)| f(self.grid.omega(j), v))
            .collect();
        SpectralFunction {
            grid: self.grid,
            values,
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|_, v| v * s)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub(crate) fn check_same_grid(&self, other: &SpectralFunction) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("spectra live on different frequency grids".into()));
        }
        Ok(())
    }
}
