use num_complex::Complex64;
use serde::Serialize;

use super::{DeltaTrain, LinearFilter};
use crate::error::{Error, Result};

/// Default cut for the multiple-reflection series.
pub const DEFAULT_TRAIN_TOL: f64 = 1e-6;

/// Two ideal mirrors of power reflectance `R` a distance `d` apart (`c = 1`).
///
/// Mirrors have real reflection coefficients, so a round trip contributes only
/// the propagation phase `phi = 2 w d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FabryPerot {
    pub r: f64,
    pub d: f64,
    pub train_tol: f64,
}

impl FabryPerot {
    pub fn new(r: f64, d: f64) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::param("R", format!("must lie in (0, 1), got {r}")));
        }
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::param("d", format!("must be positive, got {d}")));
        }
        Ok(FabryPerot {
            r,
            d,
            train_tol: DEFAULT_TRAIN_TOL,
        })
    }

    /// Spacing chosen so that the round-trip phase at `omega0` equals `phi`.
    pub fn with_phase(r: f64, phi: f64, omega0: f64) -> Result<Self> {
        if !(phi > 0.0 && omega0 > 0.0) {
            return Err(Error::param(
                "phi",
                format!("phase {phi} and carrier {omega0} must be positive"),
            ));
        }
        Self::new(r, phi / (2.0 * omega0))
    }

    pub fn with_train_tol(mut self, tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Error::param("tol", format!("must lie in (0, 1), got {tol}")));
        }
        self.train_tol = tol;
        Ok(self)
    }

    /// Round-trip phase `2 w d`.
    pub fn phase(&self, w: f64) -> f64 {
        2.0 * w * self.d
    }

    fn denom(&self, w: f64) -> Complex64 {
        Complex64::new(1.0, 0.0) - Complex64::from_polar(self.r, self.phase(w))
    }

    /// `2 R (cos phi - R) / (R^2 - 2 R cos phi + 1) * d`.
    pub fn group_delay_formula(&self, w: f64) -> f64 {
        let (r, c) = (self.r, self.phase(w).cos());
        2.0 * r * (c - r) / (r * r - 2.0 * r * c + 1.0) * self.d
    }

    /// `(R^2 - 2 R cos phi + 1) / (1 - R^2)`, in units of `c`.
    pub fn group_velocity(&self, w: f64) -> f64 {
        let (r, c) = (self.r, self.phase(w).cos());
        (r * r - 2.0 * r * c + 1.0) / (1.0 - r * r)
    }

    /// Number of round trips kept: the smallest `N` with `R^N < tol`.
    pub fn train_len(&self) -> usize {
        let n = (self.train_tol.ln() / self.r.ln()).ceil().max(1.0) as usize;
        // guard the ceiling against rounding at exact powers
        if self.r.powi(n as i32) < self.train_tol {
            n
        } else {
            n + 1
        }
    }

    /// Partial sum of `(1 - R) sum_n R^n e^{i n phi}`.
    pub fn partial_series(&self, w: f64, terms: usize) -> Complex64 {
        let step = Complex64::from_polar(self.r, self.phase(w));
        let mut z = Complex64::new(1.0 - self.r, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for _ in 0..terms {
            acc += z;
            z *= step;
        }
        acc
    }
}

impl LinearFilter for FabryPerot {
    /// `(1 - R) / (1 - R e^{i phi})`.
    fn kappa(&self, w: f64) -> Complex64 {
        Complex64::new(1.0 - self.r, 0.0) / self.denom(w)
    }

    /// `sqrt(R) (e^{i phi} - 1) / (1 - R e^{i phi})`.
    fn rho(&self, w: f64) -> Complex64 {
        let e = Complex64::from_polar(1.0, self.phase(w));
        (e - 1.0) * self.r.sqrt() / self.denom(w)
    }

    /// Delays `2 n d`, coefficients `(1 - R) R^n`.
    fn delta_train(&self) -> Result<DeltaTrain> {
        let n = self.train_len();
        let coeffs = (0..n).map(|k| (1.0 - self.r) * self.r.powi(k as i32)).collect();
        DeltaTrain::uniform(2.0 * self.d, coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::numeric_group_delay;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn fp(r: f64) -> FabryPerot {
        FabryPerot::with_phase(r, PI, 1.0).unwrap()
    }

    #[test]
    fn resonance_and_antiresonance() {
        let f = fp(0.9);
        assert_relative_eq!(f.d, PI / 2.0);
        assert_relative_eq!(f.kappa(0.0).re, 1.0, epsilon = 1e-15);
        // phi = pi at w = 1
        assert!((f.kappa(1.0) - Complex64::new(0.1 / 1.9, 0.0)).norm() < 1e-15);
        assert!((f.kappa(1.0).norm() - 1.0 / 19.0).abs() < 1e-15);
    }

    #[test]
    fn series_converges() {
        let f = fp(0.9);
        for w in [0.0, 0.3, 1.0, 1.7] {
            assert!((f.partial_series(w, 300) - f.kappa(w)).norm() < 1e-10);
        }
    }

    #[test]
    fn group_delay_and_velocity_values() {
        let f = fp(0.9);
        assert_relative_eq!(f.group_delay_formula(0.0), 18.0 * f.d, epsilon = 1e-12);
        assert_relative_eq!(f.group_delay_formula(1.0), -0.9 * 2.0 / 1.9 * f.d, epsilon = 1e-12);
        assert_relative_eq!(f.group_velocity(0.0), 0.1 / 1.9, epsilon = 1e-12);
        assert_relative_eq!(f.group_velocity(1.0), 19.0, epsilon = 1e-12);
        for w in [0.0, 1.0] {
            let fd = numeric_group_delay(|x| f.kappa(x), w);
            assert!((fd - f.group_delay_formula(w)).abs() < 1e-6 * f.group_delay_formula(w).abs());
        }
    }

    #[test]
    fn train_length_and_sum() {
        let f = fp(0.9);
        let t = f.delta_train().unwrap();
        assert_eq!(t.len(), 132);
        assert_eq!(t.coeffs()[0], 1.0 - 0.9);
        assert_relative_eq!(t.coefficient_sum(), 1.0 - 0.9f64.powi(132), epsilon = 1e-14);
        assert_relative_eq!(t.delays()[1], PI, epsilon = 1e-14);
        let tight = f.with_train_tol(1e-12).unwrap().delta_train().unwrap();
        assert!((tight.coefficient_sum() - 1.0).abs() < 1e-11);
    }

    #[test]
    fn bad_parameters() {
        assert!(FabryPerot::new(1.0, 1.0).is_err());
        assert!(FabryPerot::new(0.0, 1.0).is_err());
        assert!(FabryPerot::new(0.5, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn unitary_and_symmetric(r in 0.01f64..0.99, w in -5.0f64..5.0) {
            let f = FabryPerot::new(r, 0.7).unwrap();
            let (k, p) = (f.kappa(w), f.rho(w));
            prop_assert!((k.norm_sqr() + p.norm_sqr() - 1.0).abs() < 1e-12);
            prop_assert!((f.kappa(-w).conj() - k).norm() < 1e-12);
            prop_assert!((f.rho(-w).conj() - p).norm() < 1e-12);
        }

        #[test]
        fn delay_formula_matches_phase(r in 0.05f64..0.95, phi in 0.0f64..std::f64::consts::TAU) {
            let f = FabryPerot::new(r, 1.0).unwrap();
            let w = phi / 2.0;
            // stay away from transmission minima, where the phase is steep and small
            prop_assume!(f.kappa(w).norm() > 0.05);
            let exact = f.group_delay_formula(w);
            let fd = numeric_group_delay(|x| f.kappa(x), w);
            prop_assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1.0));
            prop_assert_eq!(exact < 0.0, phi.cos() < r);
            prop_assert_eq!(f.group_velocity(w) > 1.0, phi.cos() < r);
        }
    }
}
