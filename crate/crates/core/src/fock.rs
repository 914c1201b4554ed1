//! Truncated two-mode Fock space: an independent, brute-force model of the
//! localized state `S^dag A1^dag S |0>` used to check the closed-form results.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::squeeze_parameters;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

pub const DEFAULT_N_MAX: usize = 30;
/// Largest tolerated probability lost to the truncation boundary.
pub const TRUNCATION_BUDGET: f64 = 1e-10;

/// Index of `|n1, n2>` in the product basis.
#[inline]
pub fn basis_index(n_max: usize, n1: usize, n2: usize) -> usize {
    n1 * (n_max + 1) + n2
}

fn check_n_max(n_max: usize, min: usize) -> Result<()> {
    if n_max < min {
        return Err(Error::param("n_max", format!("must be at least {min}, got {n_max}")));
    }
    if n_max > 200 {
        return Err(Error::param(
            "n_max",
            format!("{n_max} is too large for dense matrices"),
        ));
    }
    Ok(())
}

/// Dense operator on the truncated space spanned by `|n1, n2>`, `n1, n2 <= n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    pub n_max: usize,
    pub matrix: DMatrix<Complex64>,
}

impl FockOperator {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn identity(n_max: usize) -> Self {
        let d = (n_max + 1) * (n_max + 1);
        FockOperator {
            n_max,
            matrix: DMatrix::identity(d, d),
        }
    }

    pub fn adjoint(&self) -> Self {
        FockOperator {
            n_max: self.n_max,
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn compose(&self, rhs: &FockOperator) -> Self {
        assert_eq!(self.n_max, rhs.n_max, "operators on different truncations");
        FockOperator {
            n_max: self.n_max,
            matrix: &self.matrix * &rhs.matrix,
        }
    }

    pub fn commutator(&self, rhs: &FockOperator) -> Self {
        FockOperator {
            n_max: self.n_max,
            matrix: &self.matrix * &rhs.matrix - &rhs.matrix * &self.matrix,
        }
    }

    pub fn apply(&self, s: &FockState) -> FockState {
        assert_eq!(self.n_max, s.n_max, "operator and state on different truncations");
        FockState {
            n_max: s.n_max,
            amplitudes: &self.matrix * &s.amplitudes,
        }
    }

    /// Matrix element `<m1, m2| op |n1, n2>`.
    pub fn element(&self, m: (usize, usize), n: (usize, usize)) -> Complex64 {
        self.matrix[(basis_index(self.n_max, m.0, m.1), basis_index(self.n_max, n.0, n.1))]
    }
}

/// Annihilation operators `(a1, a2)`.
pub fn build_ladders(n_max: usize) -> Result<(FockOperator, FockOperator)> {
    check_n_max(n_max, 2)?;
    let d = (n_max + 1) * (n_max + 1);
    let mut a1 = DMatrix::zeros(d, d);
    let mut a2 = DMatrix::zeros(d, d);
    for n1 in 0..=n_max {
        for n2 in 0..=n_max {
            let col = basis_index(n_max, n1, n2);
            if n1 > 0 {
                a1[(basis_index(n_max, n1 - 1, n2), col)] = Complex64::new((n1 as f64).sqrt(), 0.0);
            }
            if n2 > 0 {
                a2[(basis_index(n_max, n1, n2 - 1), col)] = Complex64::new((n2 as f64).sqrt(), 0.0);
            }
        }
    }
    Ok((FockOperator { n_max, matrix: a1 }, FockOperator { n_max, matrix: a2 }))
}

/// Unit-amplitude raising `sum_n |n + 1><n|` on mode 1; the top level is dropped.
pub fn build_a1_dagger(n_max: usize) -> Result<FockOperator> {
    check_n_max(n_max, 1)?;
    let d = (n_max + 1) * (n_max + 1);
    let mut m = DMatrix::zeros(d, d);
    for n1 in 0..n_max {
        for n2 in 0..=n_max {
            m[(basis_index(n_max, n1 + 1, n2), basis_index(n_max, n1, n2))] = ONE;
        }
    }
    Ok(FockOperator { n_max, matrix: m })
}

/// `S = exp(gamma (a1 a2 - a1^dag a2^dag))`, failing when `S|0>` reaches the cutoff.
pub fn two_mode_squeeze(gamma: f64, n_max: usize) -> Result<FockOperator> {
    let op = squeeze_operator(gamma, n_max)?;
    let loss = op.apply(&FockState::vacuum(n_max)).boundary_weight();
    if loss > TRUNCATION_BUDGET {
        return Err(Error::TruncationLoss {
            loss,
            budget: TRUNCATION_BUDGET,
            n_max,
        });
    }
    Ok(op)
}

/// Exponential of the truncated squeeze generator, with no truncation check.
///
/// The generator keeps `n1 - n2` fixed, so the exponential is taken block by
/// block (scaling and squaring on each sector) and assembled densely.
pub fn squeeze_operator(gamma: f64, n_max: usize) -> Result<FockOperator> {
    check_n_max(n_max, 2)?;
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::param("gamma", format!("must be non-negative, got {gamma}")));
    }
    let d = (n_max + 1) * (n_max + 1);
    let mut s = DMatrix::zeros(d, d);
    let nm = n_max as isize;
    for delta in -nm..=nm {
        let lo = (-delta).max(0) as usize;
        let hi = (nm - delta).min(nm) as usize;
        let states: Vec<(usize, usize)> = (lo..=hi).map(|n2| ((n2 as isize + delta) as usize, n2)).collect();
        let len = states.len();
        let mut g = DMatrix::<f64>::zeros(len, len);
        for (i, &(n1, n2)) in states.iter().enumerate().skip(1) {
            let amp = gamma * ((n1 * n2) as f64).sqrt();
            g[(i - 1, i)] = amp;
            g[(i, i - 1)] = -amp;
        }
        let e = g.exp();
        for (i, &(r1, r2)) in states.iter().enumerate() {
            for (j, &(c1, c2)) in states.iter().enumerate() {
                s[(basis_index(n_max, r1, r2), basis_index(n_max, c1, c2))] = Complex64::new(e[(i, j)], 0.0);
            }
        }
    }
    Ok(FockOperator { n_max, matrix: s })
}

/// Amplitudes over the two-mode number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    pub n_max: usize,
    pub amplitudes: DVector<Complex64>,
}

impl FockState {
    pub fn basis(n_max: usize, n1: usize, n2: usize) -> Self {
        let d = (n_max + 1) * (n_max + 1);
        let mut amplitudes = DVector::zeros(d);
        amplitudes[basis_index(n_max, n1, n2)] = ONE;
        FockState { n_max, amplitudes }
    }

    pub fn vacuum(n_max: usize) -> Self {
        Self::basis(n_max, 0, 0)
    }

    pub fn amplitude(&self, n1: usize, n2: usize) -> Complex64 {
        self.amplitudes[basis_index(self.n_max, n1, n2)]
    }

    pub fn norm2(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability on states with either occupation at the cutoff.
    pub fn boundary_weight(&self) -> f64 {
        let n = self.n_max;
        let edge: f64 = (0..n)
            .map(|k| self.amplitude(n, k).norm_sqr() + self.amplitude(k, n).norm_sqr())
            .sum();
        edge + self.amplitude(n, n).norm_sqr()
    }

    /// `c_k = <k, k - 1 | psi>` for `k = 1..=n_max`.
    pub fn ladder_coefficients(&self) -> Vec<Complex64> {
        (1..=self.n_max).map(|k| self.amplitude(k, k - 1)).collect()
    }

    /// Probability outside the `|k + 1, k>` ladder.
    pub fn off_ladder_weight(&self) -> f64 {
        let on: f64 = self.ladder_coefficients().iter().map(|c| c.norm_sqr()).sum();
        (self.norm2() - on).max(0.0)
    }

    /// `|<1, 0 | psi>|`.
    pub fn fidelity(&self) -> f64 {
        self.amplitude(1, 0).norm()
    }

    /// Second moments of the mode operators.
    pub fn moments(&self) -> Result<Moments> {
        let (a1, a2) = build_ladders(self.n_max)?;
        let psi = &self.amplitudes;
        let v = [&a1.matrix * psi, &a2.matrix * psi];
        let ops = [&a1.matrix, &a2.matrix];
        let mut aa = [[ZERO; 2]; 2];
        let mut ada = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                aa[i][j] = psi.dotc(&(ops[i] * &v[j]));
                ada[i][j] = v[i].dotc(&v[j]);
            }
        }
        Ok(Moments { aa, ada })
    }
}

/// `aa[i][j] = <a_i a_j>` and `ada[i][j] = <a_i^dag a_j>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub aa: [[Complex64; 2]; 2],
    pub ada: [[Complex64; 2]; 2],
}

impl Moments {
    /// `<:E(t1) E(t2):>` for `E+(t) = e[0] a1 + e[1] a2`, given the mode fields at both times.
    pub fn two_time(&self, e_t1: [Complex64; 2], e_t2: [Complex64; 2]) -> f64 {
        let mut acc = ZERO;
        for (i, a) in e_t1.iter().enumerate() {
            for (j, b) in e_t2.iter().enumerate() {
                acc += a * b * self.aa[i][j];
                acc += a.conj() * b * self.ada[i][j];
            }
        }
        2.0 * acc.re
    }
}

/// The localized state built by brute force, with its truncation bookkeeping.
#[derive(Debug, Clone)]
pub struct EtaState {
    pub eta: f64,
    pub gamma: f64,
    pub state: FockState,
    pub truncation_loss: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleSummary {
    pub eta: f64,
    pub n_max: usize,
    pub fidelity: f64,
    pub truncation_loss: f64,
    pub off_ladder_weight: f64,
}

impl EtaState {
    pub fn summary(&self) -> OracleSummary {
        OracleSummary {
            eta: self.eta,
            n_max: self.state.n_max,
            fidelity: self.state.fidelity(),
            truncation_loss: self.truncation_loss,
            off_ladder_weight: self.state.off_ladder_weight(),
        }
    }
}

/// `S^dag A1^dag S |0>` with `tanh gamma = sqrt(eta / (1 - eta))`.
pub fn build_eta_state(eta: f64, n_max: usize) -> Result<EtaState> {
    let sq = squeeze_parameters(eta)?;
    let s = two_mode_squeeze(sq.gamma, n_max)?;
    let raise = build_a1_dagger(n_max)?;
    let psi = s.adjoint().apply(&raise.apply(&s.apply(&FockState::vacuum(n_max))));
    let loss = (1.0 - psi.norm2()).abs().max(psi.boundary_weight());
    if loss > TRUNCATION_BUDGET {
        return Err(Error::TruncationLoss {
            loss,
            budget: TRUNCATION_BUDGET,
            n_max,
        });
    }
    Ok(EtaState {
        eta,
        gamma: sq.gamma,
        state: psi,
        truncation_loss: loss,
    })
}

/// `<state| :E(t1) E(t2): |state>` for mode fields `E1`, `E2` sampled at the two times.
pub fn oracle_two_time(state: &FockState, e1: (Complex64, Complex64), e2: (Complex64, Complex64)) -> Result<f64> {
    Ok(state.moments()?.two_time([e1.0, e2.0], [e1.1, e2.1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn max_abs(m: &DMatrix<Complex64>) -> f64 {
        m.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn ladder_basics() {
        let n = 6;
        let (a1, a2) = build_ladders(n).unwrap();
        let v = a1.apply(&FockState::basis(n, 1, 0));
        assert_eq!(v, FockState::vacuum(n));
        let num = a1.adjoint().compose(&a1);
        for n1 in 0..=n {
            for n2 in 0..=n {
                let idx = basis_index(n, n1, n2);
                assert_relative_eq!(num.matrix[(idx, idx)].re, n1 as f64, epsilon = 1e-14);
            }
        }
        assert_eq!(max_abs(&a1.commutator(&a2.adjoint()).matrix), 0.0);
        // [a1, a1^dag] = 1 except on the top mode-1 level
        let c = a1.commutator(&a1.adjoint());
        for n1 in 0..n {
            for n2 in 0..=n {
                let i = basis_index(n, n1, n2);
                assert_relative_eq!(c.matrix[(i, i)].re, 1.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn raising_isometry() {
        let n = 5;
        let a = build_a1_dagger(n).unwrap();
        assert_eq!(a.apply(&FockState::vacuum(n)), FockState::basis(n, 1, 0));
        assert_eq!(a.apply(&a.apply(&FockState::vacuum(n))), FockState::basis(n, 2, 0));
        let p = a.adjoint().compose(&a);
        for n1 in 0..=n {
            for n2 in 0..=n {
                let i = basis_index(n, n1, n2);
                let expect = if n1 < n { 1.0 } else { 0.0 };
                assert_eq!(p.matrix[(i, i)].re, expect);
            }
        }
    }

    #[test]
    fn squeeze_identity_at_zero() {
        let s = two_mode_squeeze(0.0, 4).unwrap();
        assert!(max_abs(&(s.matrix - FockOperator::identity(4).matrix)) < 1e-15);
    }

    #[test]
    fn squeezed_vacuum_schmidt_form() {
        for gamma in [0.1, 0.3, 0.6] {
            let n = 30;
            let s = two_mode_squeeze(gamma, n).unwrap();
            let v = s.apply(&FockState::vacuum(n));
            let sech = 1.0 / f64::cosh(gamma);
            let t = -f64::tanh(gamma);
            // the cutoff perturbs the last few rungs of the ladder
            for n1 in 0..=n - 10 {
                for n2 in 0..=n - 10 {
                    let expect = if n1 == n2 { sech * t.powi(n1 as i32) } else { 0.0 };
                    assert!(
                        (v.amplitude(n1, n2) - Complex64::new(expect, 0.0)).norm() < 1e-10,
                        "gamma {gamma}, |{n1},{n2}>"
                    );
                }
            }
        }
    }

    #[test]
    fn sector_exponential_matches_dense() {
        let n = 6;
        let gamma = 0.45;
        let (a1, a2) = build_ladders(n).unwrap();
        let a12 = &a1.matrix * &a2.matrix;
        let gen = (&a12 - a12.adjoint()) * Complex64::new(gamma, 0.0);
        let dense = gen.exp();
        let s = squeeze_operator(gamma, n).unwrap();
        assert!(max_abs(&(dense - &s.matrix)) < 1e-13);
        let u = s.matrix.adjoint() * &s.matrix;
        assert!(max_abs(&(u - FockOperator::identity(n).matrix)) < 1e-13);
    }

    #[test]
    fn bogoliubov_on_interior() {
        let n = 40;
        let gamma = 0.3;
        let (a1, a2) = build_ladders(n).unwrap();
        let s = two_mode_squeeze(gamma, n).unwrap();
        let sd = s.adjoint();
        let (ch, sh) = (Complex64::new(gamma.cosh(), 0.0), Complex64::new(gamma.sinh(), 0.0));
        for n1 in 0..6 {
            for n2 in 0..6 {
                let e = FockState::basis(n, n1, n2);
                let lhs = s.apply(&a1.apply(&sd.apply(&e)));
                let rhs = a1.apply(&e).amplitudes * ch + a2.adjoint().apply(&e).amplitudes * sh;
                let diff = (lhs.amplitudes - rhs).camax();
                assert!(diff < 1e-10, "|{n1},{n2}>: {diff:e}");
            }
        }
    }

    #[test]
    fn eta_state_properties() {
        let st = build_eta_state(0.2, DEFAULT_N_MAX).unwrap();
        assert!((st.state.norm2() - 1.0).abs() < 1e-10);
        assert!(st.state.off_ladder_weight() < 1e-10);
        let tiny = build_eta_state(1e-8, 10).unwrap();
        assert!((tiny.state.fidelity() - 1.0).abs() < 1e-7);
        let f = build_eta_state(0.1, DEFAULT_N_MAX).unwrap().state.fidelity();
        assert!((f - crate::state::fidelity_approx(0.1)).abs() < 2e-3);
    }

    #[test]
    fn truncation_budget_enforced() {
        assert!(matches!(build_eta_state(0.45, 6), Err(Error::TruncationLoss { .. })));
    }

    #[test]
    fn oracle_simple_states() {
        let n = 4;
        let e1 = (Complex64::new(0.3, -0.7), Complex64::new(1.1, 0.2));
        let e2 = (Complex64::new(-0.4, 0.5), Complex64::new(0.6, 0.9));
        assert_eq!(oracle_two_time(&FockState::vacuum(n), e1, e2).unwrap(), 0.0);
        let one = FockState::basis(n, 1, 0);
        let diag = oracle_two_time(&one, (e1.0, e1.0), (e2.0, e2.0)).unwrap();
        assert_relative_eq!(diag, 2.0 * e1.0.norm_sqr(), epsilon = 1e-14);
    }
}
