use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Impulse response `sum_k c_k delta(t - tau_k)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaTrain {
    delays: Vec<f64>,
    coeffs: Vec<f64>,
}

impl DeltaTrain {
    pub fn new(delays: Vec<f64>, coeffs: Vec<f64>) -> Result<Self> {
        if delays.len() != coeffs.len() || delays.is_empty() {
            return Err(Error::param(
                "train",
                format!("{} delays for {} coefficients", delays.len(), coeffs.len()),
            ));
        }
        if let Some(d) = delays.iter().find(|d| !(d.is_finite() && **d >= 0.0)) {
            return Err(Error::param("train", format!("delay {d} is not causal")));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::param("train", "non-finite coefficient"));
        }
        let energy: f64 = coeffs.iter().map(|c| c * c).sum();
        if energy > 1.0 + 1e-10 {
            return Err(Error::Invariant(format!("train is not passive: sum c^2 = {energy}")));
        }
        Ok(DeltaTrain { delays, coeffs })
    }

    /// Evenly spaced delays `k * spacing`, `k = 0, 1, ...`.
    pub fn uniform(spacing: f64, coeffs: Vec<f64>) -> Result<Self> {
        let delays = (0..coeffs.len()).map(|k| k as f64 * spacing).collect();
        Self::new(delays, coeffs)
    }

    /// The identity filter.
    pub fn identity() -> Self {
        DeltaTrain {
            delays: vec![0.0],
            coeffs: vec![1.0],
        }
    }

    pub fn delays(&self) -> &[f64] {
        &self.delays
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest delay.
    pub fn duration(&self) -> f64 {
        self.delays.iter().cloned().fold(0.0, f64::max)
    }

    pub fn coefficient_sum(&self) -> f64 {
        self.coeffs.iter().sum()
    }

    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// `sum_k c_k e^{i w tau_k}`.
    pub fn response(&self, w: f64) -> Complex64 {
        self.delays
            .iter()
            .zip(&self.coeffs)
            .map(|(&t, &c)| Complex64::from_polar(c, w * t))
            .sum()
    }
}
