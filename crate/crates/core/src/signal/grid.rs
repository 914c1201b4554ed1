use serde::Serialize;

use crate::error::{Error, Result};

/// Uniform time grid `t_k = (k - origin) * dt`, so `t = 0` is always sample `origin`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeGrid {
    dt: f64,
    n: usize,
    origin: usize,
}

impl TimeGrid {
    pub fn new(dt: f64, n: usize, origin: usize) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::param("dt", format!("must be positive, got {dt}")));
        }
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::param("n", format!("must be a power of two >= 2, got {n}")));
        }
        if origin >= n {
            return Err(Error::param("origin", format!("{origin} outside 0..{n}")));
        }
        Ok(TimeGrid { dt, n, origin })
    }

    /// Finest grid of `n` samples covering `[t_lo, t_hi]` with `t = 0` on a
    /// grid point. When `quantum` is given, `dt` divides it exactly so that delays
    /// that are integer multiples of `quantum` land on grid points.
    pub fn covering(t_lo: f64, t_hi: f64, n: usize, quantum: Option<f64>) -> Result<Self> {
        if !(t_lo <= 0.0 && t_hi >= 0.0 && t_hi > t_lo) {
            return Err(Error::param(
                "range",
                format!("[{t_lo}, {t_hi}] must contain t = 0 and be non-empty"),
            ));
        }
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::param("n", format!("must be a power of two >= 4, got {n}")));
        }
        // smallest step that still covers the range; two samples of slack absorb
        // the rounding of the origin
        let dt_min = (t_hi - t_lo) / (n - 2) as f64;
        let dt = match quantum {
            Some(q) => {
                if !(q.is_finite() && q > 0.0) {
                    return Err(Error::param("quantum", format!("must be positive, got {q}")));
                }
                let per = (q / dt_min).floor();
                if per >= 1.0 {
                    q / per
                } else {
                    q * (dt_min / q).ceil()
                }
            }
            None => dt_min,
        };
        let origin = (-t_lo / dt - 1e-9).ceil().max(0.0) as usize;
        let grid = TimeGrid::new(dt, n, origin)?;
        if grid.t_max() < t_hi - 1e-9 * dt {
            return Err(Error::GridTooShort {
                required_min: t_lo,
                required_max: t_hi,
                grid_min: grid.t_min(),
                grid_max: grid.t_max(),
            });
        }
        Ok(grid)
    }

    /// Default grid for a pulse of duration `sigma` and delay `tau` followed by a
    /// filter whose impulse response lasts `filter_span`.
    pub fn for_pulse(sigma: f64, tau: f64, filter_span: f64, delay_quantum: Option<f64>, log2_n: u32) -> Result<Self> {
        let half = tau + 10.0 * sigma;
        TimeGrid::covering(-half, half + filter_span.max(0.0), 1usize << log2_n, delay_quantum)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Index of the `t = 0` sample.
    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn time(&self, k: usize) -> f64 {
        (k as f64 - self.origin as f64) * self.dt
    }

    pub fn t_min(&self) -> f64 {
        self.time(0)
    }

    pub fn t_max(&self) -> f64 {
        self.time(self.n - 1)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |k| self.time(k))
    }

    /// Index of the grid point at `t`; errors when `t` is not (within rounding) a grid point.
    pub fn index_of(&self, t: f64) -> Result<usize> {
        let x = t / self.dt + self.origin as f64;
        let k = x.round();
        if (x - k).abs() > 1e-6 || k < 0.0 || k >= self.n as f64 {
            return Err(Error::OffGrid { value: t });
        }
        Ok(k as usize)
    }

    /// Number of samples spanned by a non-negative `delay`, which must be a multiple of `dt`.
    pub fn steps(&self, delay: f64) -> Result<usize> {
        let x = delay / self.dt;
        let k = x.round();
        if delay < 0.0 || (x - k).abs() > 1e-6 {
            return Err(Error::OffGrid { value: delay });
        }
        Ok(k as usize)
    }

    /// The frequency grid paired with this grid by the discrete transform.
    pub fn frequency_grid(&self) -> FrequencyGrid {
        FrequencyGrid { time: *self }
    }
}

/// Uniform angular-frequency grid `w_j = (j - n/2) * dw` with `dw = 2 pi / (n dt)`.
///
/// Always paired with the [`TimeGrid`] it was derived from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrequencyGrid {
    time: TimeGrid,
}

impl FrequencyGrid {
    pub fn time_grid(&self) -> TimeGrid {
        self.time
    }

    pub fn dw(&self) -> f64 {
        2.0 * std::f64::consts::PI / (self.time.n as f64 * self.time.dt)
    }

    pub fn len(&self) -> usize {
        self.time.n
    }

    pub fn is_empty(&self) -> bool {
        self.time.n == 0
    }

    /// Index of `w = 0`.
    pub fn origin(&self) -> usize {
        self.time.n / 2
    }

    pub fn omega(&self, j: usize) -> f64 {
        (j as f64 - self.origin() as f64) * self.dw()
    }

    pub fn w_min(&self) -> f64 {
        self.omega(0)
    }

    pub fn w_max(&self) -> f64 {
        self.omega(self.len() - 1)
    }

    pub fn omegas(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |j| self.omega(j))
    }

    pub fn index_of(&self, w: f64) -> Result<usize> {
        let x = w / self.dw() + self.origin() as f64;
        let j = x.round();
        if (x - j).abs() > 1e-6 || j < 0.0 || j >= self.len() as f64 {
            return Err(Error::OffGrid { value: w });
        }
        Ok(j as usize)
    }

    /// Index of `-w_j`. The most negative sample has no positive partner.
    pub fn mirror(&self, j: usize) -> Option<usize> {
        if j == 0 || j >= self.len() {
            None
        } else {
            Some(self.len() - j)
        }
    }

    /// Index of `-w_j` modulo the grid period `n dw`; the most negative sample
    /// is its own alias.
    pub fn periodic_mirror(&self, j: usize) -> usize {
        (self.len() - j) % self.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_is_on_both_grids() {
        let g = TimeGrid::covering(-3.7, 11.2, 1024, None).unwrap();
        assert_eq!(g.time(g.origin()), 0.0);
        assert_eq!(g.frequency_grid().omega(512), 0.0);
        assert!(g.t_min() <= -3.7 && g.t_max() >= 11.2);
    }

    #[test]
    fn quantum_divides_step() {
        let q = std::f64::consts::PI;
        let g = TimeGrid::covering(-36.0, 450.0, 1 << 15, Some(q)).unwrap();
        let steps = q / g.dt();
        assert!((steps - steps.round()).abs() < 1e-9);
        assert_eq!(g.steps(7.0 * q).unwrap(), 7 * steps.round() as usize);
    }

    #[test]
    fn paired_step() {
        let g = TimeGrid::new(0.01, 256, 100).unwrap();
        let f = g.frequency_grid();
        assert!((f.dw() - 2.0 * std::f64::consts::PI / (256.0 * 0.01)).abs() < 1e-12);
        assert_eq!(f.mirror(f.index_of(f.omega(200)).unwrap()), Some(56));
        assert_eq!(f.mirror(0), None);
        assert_eq!(f.periodic_mirror(0), 0);
        assert_eq!(f.periodic_mirror(200), 56);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(TimeGrid::new(0.1, 100, 0).is_err());
        assert!(TimeGrid::new(-0.1, 128, 0).is_err());
        assert!(TimeGrid::covering(1.0, 2.0, 128, None).is_err());
        let g = TimeGrid::new(0.5, 8, 2).unwrap();
        assert!(g.index_of(0.25).is_err());
        assert_eq!(g.index_of(1.0).unwrap(), 4);
    }
}
