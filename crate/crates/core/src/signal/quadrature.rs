use num_complex::Complex64;

use super::{SampledSignal, SpectralFunction};
use crate::error::{Error, Result};

/// Closed interval whose endpoints must be grid points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }
}

/// Anything sampled on a uniform one-dimensional grid.
pub trait Sampled {
    fn samples(&self) -> &[Complex64];
    fn step(&self) -> f64;
    fn index_of(&self, x: f64) -> Result<usize>;
}

impl Sampled for SampledSignal {
    fn samples(&self) -> &[Complex64] {
        &self.values
    }
    fn step(&self) -> f64 {
        self.grid.dt()
    }
    fn index_of(&self, x: f64) -> Result<usize> {
        self.grid.index_of(x)
    }
}

impl Sampled for SpectralFunction {
    fn samples(&self) -> &[Complex64] {
        &self.values
    }
    fn step(&self) -> f64 {
        self.grid.dw()
    }
    fn index_of(&self, x: f64) -> Result<usize> {
        self.grid.index_of(x)
    }
}

fn index_range<S: Sampled + ?Sized>(f: &S, range: Option<Interval>) -> Result<(usize, usize)> {
    match range {
        None => Ok((0, f.samples().len() - 1)),
        Some(Interval { lo, hi }) => {
            if !(hi > lo) {
                return Err(Error::EmptyRange { lo, hi });
            }
            Ok((f.index_of(lo)?, f.index_of(hi)?))
        }
    }
}

/// Trapezoid rule for `sum_k w_k h(k) * step` over `range` (whole grid if `None`).
pub fn trapezoid<S, F>(f: &S, range: Option<Interval>, integrand: F) -> Result<Complex64>
where
    S: Sampled + ?Sized,
    F: Fn(usize) -> Complex64,
{
    let (a, b) = index_range(f, range)?;
    let mut acc: Complex64 = (a..=b).map(&integrand).sum();
    acc -= (integrand(a) + integrand(b)) * 0.5;
    Ok(acc * f.step())
}

/// `\int |f|^2` by the trapezoid rule over `range`.
pub fn quadrature_norm2<S: Sampled + ?Sized>(f: &S, range: Option<Interval>) -> Result<f64> {
    let v = f.samples();
    Ok(trapezoid(f, range, |k| Complex64::new(v[k].norm_sqr(), 0.0))?.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::TimeGrid;

    #[test]
    fn zero_function() {
        let g = TimeGrid::new(0.1, 64, 10).unwrap();
        assert_eq!(quadrature_norm2(&SampledSignal::zeros(g), None).unwrap(), 0.0);
    }

    #[test]
    fn half_range_of_symmetric_spectrum() {
        let g = TimeGrid::new(0.05, 2048, 1024).unwrap();
        let fg = g.frequency_grid();
        let spec = SpectralFunction::from_fn(fg, |w| Complex64::new((-w * w / 2.0).exp(), 0.0));
        let total = quadrature_norm2(&spec, None).unwrap();
        let upper = quadrature_norm2(&spec, Some(Interval::new(0.0, fg.w_max()))).unwrap();
        assert!((upper / total - 0.5).abs() < fg.dw());
        let lower = quadrature_norm2(&spec, Some(Interval::new(-fg.w_max(), 0.0))).unwrap();
        assert!((upper - lower).abs() < 1e-14);
    }

    #[test]
    fn empty_and_off_grid_ranges() {
        let g = TimeGrid::new(0.5, 16, 4).unwrap();
        let s = SampledSignal::zeros(g);
        assert!(matches!(
            quadrature_norm2(&s, Some(Interval::new(1.0, 1.0))),
            Err(Error::EmptyRange { .. })
        ));
        assert!(matches!(
            quadrature_norm2(&s, Some(Interval::new(0.2, 1.0))),
            Err(Error::OffGrid { .. })
        ));
    }

    #[test]
    fn trapezoid_is_exact_for_linear() {
        let g = TimeGrid::new(0.25, 16, 0).unwrap();
        let s = SampledSignal::from_fn(g, |t| Complex64::new(t, 0.0));
        let v = trapezoid(&s, Some(Interval::new(0.0, 2.0)), |k| s.values[k]).unwrap();
        assert!((v.re - 2.0).abs() < 1e-14);
    }
}
