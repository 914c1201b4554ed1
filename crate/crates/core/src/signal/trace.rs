use serde::Serialize;

use super::TimeGrid;
use crate::error::{Error, Result};

/// Real-valued samples on a [`TimeGrid`], such as an energy density.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trace {
    pub grid: TimeGrid,
    pub values: Vec<f64>,
}

impl Trace {
    pub fn new(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} samples for a grid of {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(Trace { grid, values })
    }

    pub fn zeros(grid: TimeGrid) -> Self {
        Trace {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    /// Largest value and the time at which it occurs (first one on ties).
    pub fn peak(&self) -> (f64, f64) {
        let mut best = (0usize, f64::NEG_INFINITY);
        for (k, &v) in self.values.iter().enumerate() {
            if v > best.1 {
                best = (k, v);
            }
        }
        (self.grid.time(best.0), best.1)
    }

    pub fn peak_time(&self) -> f64 {
        self.peak().0
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max_{t<0} |value| / max |value|`, or zero for an all-zero trace.
    pub fn relative_leakage(&self) -> f64 {
        let peak = self.max_abs();
        if peak == 0.0 {
            return 0.0;
        }
        let before = self.values[..self.grid.origin()]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        before / peak
    }

    /// First time at which the trace exceeds `fraction` of its peak.
    pub fn leading_edge(&self, fraction: f64) -> Option<f64> {
        let (_, peak) = self.peak();
        if !(peak > 0.0) {
            return None;
        }
        self.values
            .iter()
            .position(|&v| v > fraction * peak)
            .map(|k| self.grid.time(k))
    }

    /// Copy rescaled to unit maximum.
    pub fn normalized(&self) -> Trace {
        let peak = self.max_abs();
        let s = if peak > 0.0 { peak.recip() } else { 1.0 };
        Trace {
            grid: self.grid,
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }

    /// L2 distance `(\int_{t >= from} (a - b)^2 dt)^{1/2}` (rectangle rule).
    pub fn l2_distance_from(&self, other: &Trace, from: f64) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("traces live on different grids".into()));
        }
        let start = self
            .values
            .len()
            .min((self.grid.origin() as isize + (from / self.grid.dt()).ceil() as isize).max(0) as usize);
        let s: f64 = self.values[start..]
            .iter()
            .zip(&other.values[start..])
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        Ok((s * self.grid.dt()).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_edge_and_leakage() {
        let g = TimeGrid::new(0.5, 16, 4).unwrap();
        let mut v = vec![0.0; 16];
        v[3] = 1e-9;
        v[6] = 0.5;
        v[8] = 2.0;
        let t = Trace::new(g, v).unwrap();
        assert_eq!(t.peak(), (2.0, 2.0));
        assert_eq!(t.leading_edge(1e-4), Some(1.0));
        assert!((t.relative_leakage() - 5e-10).abs() < 1e-20);
        assert_eq!(t.normalized().peak().1, 1.0);
        assert_eq!(Trace::zeros(g).leading_edge(1e-4), None);
    }
}
