use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{SampledSignal, TimeGrid};
use crate::error::{Error, Result};

/// Parameters of the truncated Gaussian seed
/// `g(t) ~ u(t) exp(-(t - tau)^2 / 2 sigma^2) exp(-i omega0 t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedParams {
    pub sigma: f64,
    pub tau: f64,
    #[serde(default = "default_omega0")]
    pub omega0: f64,
    /// Width of the linear onset in units of `sigma`.
    #[serde(default = "default_ramp")]
    pub ramp_fraction: f64,
}

fn default_omega0() -> f64 {
    1.0
}

fn default_ramp() -> f64 {
    0.1
}

impl SeedParams {
    /// Seed with unit carrier and the default onset width `0.1 sigma`.
    pub fn new(sigma: f64, tau: f64) -> Self {
        SeedParams {
            sigma,
            tau,
            omega0: default_omega0(),
            ramp_fraction: default_ramp(),
        }
    }

    /// Seed given as `omega0 * sigma` and `tau / sigma`, the usual way of quoting it.
    pub fn from_ratios(omega0_sigma: f64, tau_over_sigma: f64) -> Self {
        SeedParams::new(omega0_sigma, omega0_sigma * tau_over_sigma)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::param("sigma", format!("must be positive, got {}", self.sigma)));
        }
        if !(self.tau.is_finite() && self.tau >= 0.0) {
            return Err(Error::param("tau", format!("must be non-negative, got {}", self.tau)));
        }
        if !(self.omega0.is_finite() && self.omega0 > 0.0) {
            return Err(Error::param("omega0", format!("must be positive, got {}", self.omega0)));
        }
        if !(self.ramp_fraction > 0.0 && self.ramp_fraction <= 1.0) {
            return Err(Error::param(
                "ramp_fraction",
                format!("must lie in (0, 1], got {}", self.ramp_fraction),
            ));
        }
        Ok(())
    }

    /// Time span that must fit on the grid.
    pub fn support(&self) -> (f64, f64) {
        let half = self.tau + 8.0 * self.sigma;
        (-half, half)
    }

    fn onset(&self, t: f64) -> f64 {
        let w = self.ramp_fraction * self.sigma;
        if t < 0.0 {
            0.0
        } else if t < w {
            t / w
        } else {
            1.0
        }
    }
}

/// Samples the seed on `grid`, normalized so that `sum |g|^2 dt = 1`.
pub fn make_truncated_gaussian(p: &SeedParams, grid: TimeGrid) -> Result<SampledSignal> {
    p.validate()?;
    let (lo, hi) = p.support();
    if grid.t_min() > lo || grid.t_max() < hi {
        return Err(Error::GridTooShort {
            required_min: lo,
            required_max: hi,
            grid_min: grid.t_min(),
            grid_max: grid.t_max(),
        });
    }
    let s2 = 2.0 * p.sigma * p.sigma;
    let raw = SampledSignal::from_fn(grid, |t| {
        let env = p.onset(t) * (-(t - p.tau).powi(2) / s2).exp();
        Complex64::from_polar(env, -p.omega0 * t)
    });
    let norm2: f64 = raw.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * grid.dt();
    if norm2 <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(raw.scale(norm2.sqrt().recip()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::quadrature_norm2;

    fn grid_for(p: &SeedParams) -> TimeGrid {
        TimeGrid::for_pulse(p.sigma, p.tau, 0.0, None, 13).unwrap()
    }

    #[test]
    fn zero_before_origin() {
        for (a, b) in [(3.0, 2.0), (2.1, 2.6), (12.0, 3.0), (1.0, 0.0)] {
            let p = SeedParams::from_ratios(a, b);
            let g = make_truncated_gaussian(&p, grid_for(&p)).unwrap();
            assert!(g.values[..g.grid.origin()]
                .iter()
                .all(|v| *v == Complex64::new(0.0, 0.0)));
        }
    }

    #[test]
    fn unit_norm() {
        let p = SeedParams::from_ratios(2.1, 2.6);
        let g = make_truncated_gaussian(&p, grid_for(&p)).unwrap();
        let s: f64 = g.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * g.grid.dt();
        assert!((s - 1.0).abs() < 1e-12);
        assert!((quadrature_norm2(&g, None).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn peak_at_delay() {
        let p = SeedParams::new(1.0, 3.0);
        let grid = TimeGrid::covering(-12.0, 12.0, 4096, Some(1.0)).unwrap();
        let g = make_truncated_gaussian(&p, grid).unwrap();
        let k = grid.index_of(3.0).unwrap();
        let peak = g.values[k].norm();
        assert!(g.values.iter().all(|v| v.norm() <= peak));
    }

    #[test]
    fn rejects_bad_input() {
        let grid = TimeGrid::covering(-50.0, 50.0, 1024, None).unwrap();
        assert!(make_truncated_gaussian(&SeedParams::new(0.0, 1.0), grid).is_err());
        assert!(make_truncated_gaussian(&SeedParams::new(-1.0, 1.0), grid).is_err());
        let mut p = SeedParams::new(1.0, 1.0);
        p.ramp_fraction = 0.0;
        assert!(make_truncated_gaussian(&p, grid).is_err());
        let e = make_truncated_gaussian(&SeedParams::new(5.0, 20.0), grid).unwrap_err();
        assert!(matches!(e, Error::GridTooShort { .. }));
    }
}
