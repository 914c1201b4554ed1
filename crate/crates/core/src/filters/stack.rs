use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::Serialize;

use super::{DeltaTrain, LinearFilter};
use crate::error::{Error, Result};
use crate::signal::fourier_plan;

pub type CharacteristicMatrix = Matrix2<Complex64>;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `[[cos d, -(i/n) sin d], [-i n sin d, cos d]]` for a homogeneous layer.
pub fn layer_matrix(n: f64, delta: f64) -> CharacteristicMatrix {
    let (s, c) = delta.sin_cos();
    let c = Complex64::new(c, 0.0);
    Matrix2::new(c, -I * (s / n), -I * (s * n), c)
}

/// Chebyshev polynomial of the second kind `U_n(a)`, with `U_{-1} = 0`.
///
/// Uses the trigonometric or hyperbolic closed form away from `|a| = 1`, and the
/// three-term recurrence (which reproduces the limit `U_n(1) = n + 1`) near it.
pub fn chebyshev_u(n: i64, a: f64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    let nf = n as f64;
    if (a.abs() - 1.0).abs() < 1e-6 {
        let (mut prev, mut cur) = (0.0, 1.0);
        for _ in 0..n {
            let next = 2.0 * a * cur - prev;
            prev = cur;
            cur = next;
        }
        cur
    } else if a.abs() < 1.0 {
        let th = a.acos();
        ((nf + 1.0) * th).sin() / th.sin()
    } else {
        let th = a.abs().acosh();
        let sign = if a < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
        sign * ((nf + 1.0) * th).sinh() / th.sinh()
    }
}

/// `M^N = U_{N-1}(a) M - U_{N-2}(a) I` for a unimodular `M` with real half-trace `a`.
pub fn chebyshev_power(m: &CharacteristicMatrix, periods: u32) -> CharacteristicMatrix {
    let a = (m[(0, 0)] + m[(1, 1)]) * 0.5;
    if periods == 0 {
        return Matrix2::identity();
    }
    if a.im.abs() > 1e-12 * a.norm().max(1.0) {
        // lossy cells have a complex trace; fall back to repeated products
        return (0..periods).fold(Matrix2::identity(), |acc, _| acc * m);
    }
    let n = periods as i64;
    let u1 = chebyshev_u(n - 1, a.re);
    let u2 = chebyshev_u(n - 2, a.re);
    m * Complex64::new(u1, 0.0) - Matrix2::identity() * Complex64::new(u2, 0.0)
}

fn transmission(m: &CharacteristicMatrix) -> (Complex64, Complex64) {
    let den = m[(0, 0)] + m[(0, 1)] + m[(1, 0)] + m[(1, 1)];
    let t = 2.0 / den;
    let r = (m[(0, 0)] + m[(0, 1)] - m[(1, 0)] - m[(1, 1)]) / den;
    (t, r)
}

/// Alternating quarter-wave layers of indices `n1`, `n2` (starting with `n1`)
/// between vacuum half-spaces.
///
/// The transmission is referred to planes that remove the free-propagation
/// delay `layers * pi / (2 w0)`, so the impulse response starts at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuarterWaveStack {
    pub n1: f64,
    pub n2: f64,
    pub layers: u32,
    pub omega0: f64,
    /// Number of frequency samples per period used for the delta train.
    pub k_terms: usize,
    /// Coefficients below this fraction of the largest one are dropped.
    pub train_tol: f64,
}

impl QuarterWaveStack {
    pub fn new(n1: f64, n2: f64, layers: u32, omega0: f64) -> Result<Self> {
        if !(n1 >= 1.0 && n2 >= 1.0 && n1.is_finite() && n2.is_finite()) {
            return Err(Error::param("n", format!("indices must be >= 1, got {n1}, {n2}")));
        }
        if layers == 0 || layers % 2 != 0 {
            return Err(Error::param(
                "layers",
                format!("must be a positive even number, got {layers}"),
            ));
        }
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::param("omega0", format!("must be positive, got {omega0}")));
        }
        Ok(QuarterWaveStack {
            n1,
            n2,
            layers,
            omega0,
            k_terms: 1024,
            train_tol: 1e-8,
        })
    }

    pub fn with_train(mut self, k_terms: usize, tol: f64) -> Result<Self> {
        if k_terms < 16 || !k_terms.is_power_of_two() {
            return Err(Error::param(
                "k_terms",
                format!("must be a power of two >= 16, got {k_terms}"),
            ));
        }
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Error::param("tol", format!("must lie in (0, 1), got {tol}")));
        }
        self.k_terms = k_terms;
        self.train_tol = tol;
        Ok(self)
    }

    /// Phase thickness of every layer at `w`.
    pub fn delta(&self, w: f64) -> f64 {
        FRAC_PI_2 * w / self.omega0
    }

    /// Free-propagation delay removed from the transmission.
    pub fn reference_delay(&self) -> f64 {
        self.layers as f64 * PI / (2.0 * self.omega0)
    }

    pub fn unit_cell(&self, w: f64) -> CharacteristicMatrix {
        let d = self.delta(w);
        layer_matrix(self.n1, d) * layer_matrix(self.n2, d)
    }

    /// Product of all layer matrices, one by one.
    pub fn matrix_direct(&self, w: f64) -> CharacteristicMatrix {
        let d = self.delta(w);
        (0..self.layers).fold(Matrix2::identity(), |acc, k| {
            let n = if k % 2 == 0 { self.n1 } else { self.n2 };
            acc * layer_matrix(n, d)
        })
    }

    pub fn matrix_chebyshev(&self, w: f64) -> CharacteristicMatrix {
        chebyshev_power(&self.unit_cell(w), self.layers / 2)
    }

    fn shifted(&self, w: f64, m: &CharacteristicMatrix) -> (Complex64, Complex64) {
        let (t, r) = transmission(m);
        (t * Complex64::from_polar(1.0, -w * self.reference_delay()), r)
    }

    /// `(kappa, rho)` from the direct product.
    pub fn response_direct(&self, w: f64) -> (Complex64, Complex64) {
        self.shifted(w, &self.matrix_direct(w))
    }

    /// `(kappa, rho)` from the Chebyshev form.
    pub fn response(&self, w: f64) -> (Complex64, Complex64) {
        self.shifted(w, &self.matrix_chebyshev(w))
    }
}

impl LinearFilter for QuarterWaveStack {
    fn kappa(&self, w: f64) -> Complex64 {
        self.response(w).0
    }

    fn rho(&self, w: f64) -> Complex64 {
        self.response(w).1
    }

    fn delta_train(&self) -> Result<DeltaTrain> {
        bandgap_delta_train(self)
    }
}

/// Fourier-series coefficients of a stack whose response has period `2 w0`.
///
/// With `w_j = w0 (-1 + 2 j / K)` the coefficients are
/// `c_k = (1/K) sum_j kappa(w_j) e^{-i k pi w_j / w0}`, so that
/// `kappa(w) = sum_k c_k e^{i k pi w / w0}`. Coefficients at negative `k` must
/// vanish (causality) and all must be real (conjugate symmetry); both are
/// checked. Returns `c_0 .. c_{K/2 - 1}`.
pub fn stack_fourier_coefficients(stack: &QuarterWaveStack) -> Result<Vec<f64>> {
    let k = stack.k_terms;
    let w0 = stack.omega0;
    let mut buf: Vec<Complex64> = (0..k)
        .map(|j| stack.kappa(w0 * (-1.0 + 2.0 * j as f64 / k as f64)))
        .collect();
    fourier_plan(k, false).process(&mut buf);
    let coeffs: Vec<Complex64> = buf
        .iter()
        .enumerate()
        .map(|(i, v)| v * (if i % 2 == 0 { 1.0 } else { -1.0 }) / k as f64)
        .collect();
    let peak = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let negative = coeffs[k / 2..].iter().map(|c| c.norm()).fold(0.0, f64::max) / peak;
    if negative > 1e-8 {
        return Err(Error::Acausal {
            what: "stack impulse response",
            relative: negative,
            tolerance: 1e-8,
        });
    }
    let imag = coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max) / peak;
    if imag > 1e-10 {
        return Err(Error::Invariant(format!(
            "stack impulse response is not real (relative imaginary part {imag:e})"
        )));
    }
    Ok(coeffs[..k / 2].iter().map(|c| c.re).collect())
}

/// Impulses at delays `k pi / w0`, dropping the tail below `train_tol` of the
/// largest coefficient.
pub fn bandgap_delta_train(stack: &QuarterWaveStack) -> Result<DeltaTrain> {
    let c = stack_fourier_coefficients(stack)?;
    let peak = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let keep = c
        .iter()
        .rposition(|v| v.abs() >= stack.train_tol * peak)
        .map_or(1, |p| p + 1);
    DeltaTrain::uniform(PI / stack.omega0, c[..keep].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reference_stack() -> QuarterWaveStack {
        QuarterWaveStack::new(1.0, 2.0, 10, 1.0).unwrap()
    }

    fn max_diff(a: &CharacteristicMatrix, b: &CharacteristicMatrix) -> f64 {
        (a - b).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn layer_matrix_examples() {
        assert_eq!(layer_matrix(2.0, 0.0), Matrix2::identity());
        let m = layer_matrix(2.0, FRAC_PI_2);
        assert!(m[(0, 0)].norm() < 1e-16);
        assert!((m[(0, 1)] - Complex64::new(0.0, -0.5)).norm() < 1e-16);
        assert!((m[(1, 0)] - Complex64::new(0.0, -2.0)).norm() < 1e-16);
        for d in [0.1, 1.0, 2.5, 7.0] {
            assert!((layer_matrix(1.7, d).determinant() - 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn chebyshev_polynomials() {
        // U_3(a) = 8a^3 - 4a
        for a in [-2.0, -1.0, -0.3, 0.5, 1.0, 1.0 + 1e-9, 3.0] {
            assert!((chebyshev_u(3, a) - (8.0 * a * a * a - 4.0 * a)).abs() < 1e-9 * (1.0 + a.abs().powi(3)));
        }
        assert_eq!(chebyshev_u(-1, 0.4), 0.0);
        assert_eq!(chebyshev_u(0, 0.4), 1.0);
    }

    #[test]
    fn chebyshev_matches_direct_products() {
        for periods in 1..=8u32 {
            let s = QuarterWaveStack::new(1.0, 2.0, 2 * periods, 1.0).unwrap();
            for j in 1..200 {
                let w = 0.01 * j as f64;
                let a = s.matrix_direct(w);
                let b = s.matrix_chebyshev(w);
                let scale = a.iter().map(|v| v.norm()).fold(1.0, f64::max);
                assert!(max_diff(&a, &b) < 1e-12 * scale, "N={periods} w={w}");
            }
        }
        let cell = reference_stack().unit_cell(0.37);
        assert_eq!(chebyshev_power(&cell, 1), cell);
    }

    #[test]
    fn degenerate_half_trace() {
        // a = 1 exactly: M^N = N (M - I) + I
        let m = Matrix2::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, -0.3),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        );
        let n = 7;
        let expect = (m - Matrix2::identity()) * Complex64::new(n as f64, 0.0) + Matrix2::identity();
        assert!(max_diff(&chebyshev_power(&m, n), &expect) < 1e-14);
    }

    #[test]
    fn transmission_at_design_frequency() {
        let (k, _) = reference_stack().response(1.0);
        assert_relative_eq!(k.norm_sqr(), 4096.0 / 1050625.0, epsilon = 1e-12);
        assert!(reference_stack().group_delay(1.0) < 0.0);
    }

    #[test]
    fn lossless_and_symmetric() {
        let s = reference_stack();
        for j in 1..400 {
            let w = 2.0 * j as f64 / 400.0;
            let (k, r) = s.response(w);
            assert!((k.norm_sqr() + r.norm_sqr() - 1.0).abs() < 1e-12);
            assert!((s.kappa(-w).conj() - k).norm() < 1e-12);
            assert!((s.rho(-w).conj() - r).norm() < 1e-12);
            let (kd, _) = s.response_direct(w);
            assert!((kd - k).norm() < 1e-12);
        }
    }

    #[test]
    fn series_reconstructs_response() {
        let s = reference_stack();
        let c = stack_fourier_coefficients(&s).unwrap();
        let full = DeltaTrain::uniform(PI, c.clone()).unwrap();
        let t = s.delta_train().unwrap();
        assert!(t.len() > 50 && t.len() < 512);
        assert!(t.energy() <= 1.0 + 1e-10);
        let dropped: f64 = c[t.len()..].iter().map(|v| v.abs()).sum();
        for j in 0..997 {
            let w = -3.0 + 6.0 * j as f64 / 997.0;
            let k = s.kappa(w);
            assert!((full.response(w) - k).norm() < 1e-8, "w={w}");
            assert!((t.response(w) - k).norm() < 1e-8 + dropped);
        }
    }

    #[test]
    fn rejects_bad_stacks() {
        assert!(QuarterWaveStack::new(1.0, 2.0, 9, 1.0).is_err());
        assert!(QuarterWaveStack::new(0.5, 2.0, 10, 1.0).is_err());
        assert!(reference_stack().with_train(100, 1e-8).is_err());
    }
}
