//! The localized state's classical data: the modified spectrum, the two pulse
//! modes, and the squeeze parameters derived from the negative-frequency fraction.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::signal::{
    forward_fourier, inverse_fourier, quadrature_norm2, trapezoid, Interval, SampledSignal, SpectralFunction,
};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Below this `|I|` the seed is treated as purely positive-frequency.
pub const BETA_SINGULAR: f64 = 1e-14;
/// Relative tail bound at which the `M` series is cut.
pub const M_SERIES_TOL: f64 = 1e-15;
/// Threshold above which the mode overlap is reported as a warning.
pub const OVERLAP_WARN: f64 = 1e-6;

fn positive_half(g: &SpectralFunction) -> Interval {
    Interval::new(0.0, g.grid.w_max())
}

fn negative_half(g: &SpectralFunction) -> Interval {
    Interval::new(-g.grid.w_max(), 0.0)
}

/// `\int_0^\infty a(w) b(-w) dw` on the symmetric half grid.
fn half_line_pair(a: &SpectralFunction, b: &SpectralFunction, conj_a: bool) -> Result<Complex64> {
    a.check_same_grid(b)?;
    trapezoid(a, Some(positive_half(a)), |j| {
        let x = if conj_a { a.values[j].conj() } else { a.values[j] };
        x * b.mirrored(j)
    })
}

/// Squared norms on the non-negative and non-positive half lines.
fn half_norms(g: &SpectralFunction) -> Result<(f64, f64)> {
    Ok((
        quadrature_norm2(g, Some(positive_half(g)))?,
        quadrature_norm2(g, Some(negative_half(g)))?,
    ))
}

/// `I = \int_0^\infty G(w) G(-w) dw / \int |G|^2 dw`.
pub fn compute_overlap_i(g: &SpectralFunction) -> Result<Complex64> {
    let (p, n) = half_norms(g)?;
    let total = p + n;
    if !(total > 0.0) {
        return Err(Error::ZeroNorm);
    }
    Ok(half_line_pair(g, g, false)? / total)
}

/// Smaller root of `beta^2 I* - beta + I = 0`.
pub fn compute_beta(i: Complex64) -> Result<Complex64> {
    let a = i.norm();
    if !(a <= 0.5 + 1e-12) {
        return Err(Error::OverlapOutOfBounds(a));
    }
    if a < BETA_SINGULAR {
        return Ok(ZERO);
    }
    let root = (1.0 - 4.0 * a * a).max(0.0).sqrt();
    // (1 - root) / (2 I*) rewritten to avoid cancellation at small |I|
    let beta = 2.0 * i / (1.0 + root);
    debug_assert!(beta.norm() <= 1.0 + 1e-9);
    Ok(beta)
}

/// `G~(w) = G(w) - beta G*(-w)`, chosen so that the overlap functional of `G~` vanishes.
#[derive(Debug, Clone)]
pub struct ModifiedSpectrum {
    pub g_tilde: SpectralFunction,
    pub beta: Complex64,
    /// Overlap of the unmodified spectrum.
    pub overlap: Complex64,
}

impl ModifiedSpectrum {
    pub fn residual_overlap(&self) -> Result<Complex64> {
        compute_overlap_i(&self.g_tilde)
    }
}

pub fn modify_spectrum(g: &SpectralFunction) -> Result<ModifiedSpectrum> {
    let overlap = compute_overlap_i(g)?;
    let beta = compute_beta(overlap)?;
    // conj(G(-w)) is the transform of conj(g(t)); the periodic mirror keeps that
    // exact on the grid, so g~ stays causal
    let grid = g.grid;
    let g_tilde = SpectralFunction {
        grid: g.grid,
        values: (0..g.values.len())
            .map(|j| g.values[j] - beta * g.values[grid.periodic_mirror(j)].conj())
            .collect(),
    };
    Ok(ModifiedSpectrum { g_tilde, beta, overlap })
}

/// Two unit-norm positive-frequency modes and the negative-frequency fraction `eta`.
#[derive(Debug, Clone)]
pub struct PulseModePair {
    pub xi1: SpectralFunction,
    pub xi2: SpectralFunction,
    pub eta: f64,
    /// Prefactor `C = sqrt((1 - eta) / eta)` carried by `xi2`.
    pub c: f64,
    /// `\int_0^\infty |G~|^2`, the scale divided out of both modes.
    pub positive_norm2: f64,
}

impl PulseModePair {
    /// `\int_0^\infty xi1* xi2 dw`.
    pub fn mode_overlap(&self) -> Result<Complex64> {
        let range = positive_half(&self.xi1);
        trapezoid(&self.xi1, Some(range), |j| {
            self.xi1.values[j].conj() * self.xi2.values[j]
        })
    }

    pub fn norms(&self) -> Result<(f64, f64)> {
        Ok((
            quadrature_norm2(&self.xi1, Some(positive_half(&self.xi1)))?,
            quadrature_norm2(&self.xi2, Some(positive_half(&self.xi2)))?,
        ))
    }
}

/// Splits `G~` into `xi1(w) = G~(w)` and `xi2(w) = C conj(G~(-w))` on `w >= 0`.
///
/// `G~` is scaled so that its positive half has unit norm, which makes both
/// modes unit-normalized.
pub fn split_modes(m: &ModifiedSpectrum) -> Result<PulseModePair> {
    let g = &m.g_tilde;
    let (p, n) = half_norms(g)?;
    if !(p + n > 0.0) {
        return Err(Error::ZeroNorm);
    }
    let eta = n / (p + n);
    if !(BETA_SINGULAR..0.5).contains(&eta) {
        return Err(Error::EtaOutOfRange(eta));
    }
    let c = ((1.0 - eta) / eta).sqrt();
    let s = p.sqrt().recip();
    let z = g.grid.origin();
    let len = g.values.len();
    let mut xi1 = vec![ZERO; len];
    let mut xi2 = vec![ZERO; len];
    for j in z..len {
        xi1[j] = g.values[j] * s;
        xi2[j] = g.mirrored(j).conj() * (c * s);
    }
    Ok(PulseModePair {
        xi1: SpectralFunction::new(g.grid, xi1)?,
        xi2: SpectralFunction::new(g.grid, xi2)?,
        eta,
        c,
        positive_norm2: p,
    })
}

/// Parameters of the two-mode squeeze attached to `eta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqueezeParameters {
    pub eta: f64,
    pub gamma: f64,
    pub c: f64,
    pub m: f64,
    /// Analytic bound on the neglected tail of the `M` series.
    pub m_tail_bound: f64,
    pub m_terms: usize,
}

/// `gamma = atanh sqrt(eta / (1 - eta))`, `C = sqrt((1 - eta) / eta)` and
/// `M = ((C^2 - 1) / C^2) sum_n C^(1 - 2n) sqrt(n (n + 1))`.
pub fn squeeze_parameters(eta: f64) -> Result<SqueezeParameters> {
    if !(eta > 0.0 && eta < 0.5) {
        return Err(Error::EtaOutOfRange(eta));
    }
    let th = (eta / (1.0 - eta)).sqrt();
    let gamma = th.atanh();
    let c = th.recip();
    let c2 = c * c;
    let (sum, tail, terms) = m_series(c)?;
    let pre = (c2 - 1.0) / c2;
    Ok(SqueezeParameters {
        eta,
        gamma,
        c,
        m: pre * sum,
        m_tail_bound: pre * tail,
        m_terms: terms,
    })
}

/// Sum of `C^(1 - 2n) sqrt(n (n + 1))` for `n >= 1`, with a geometric tail bound.
fn m_series(c: f64) -> Result<(f64, f64, usize)> {
    let q = (c * c).recip();
    let mut power = c.recip(); // C^(1 - 2n) at n = 1
    let mut sum = 0.0;
    for n in 1..50_000_000usize {
        let nf = n as f64;
        sum += power * (nf * (nf + 1.0)).sqrt();
        power *= q;
        // later term ratios are bounded by q sqrt((n + 2) / n)
        let next = power * ((nf + 1.0) * (nf + 2.0)).sqrt();
        let r = q * ((nf + 2.0) / nf).sqrt();
        if r < 1.0 {
            let tail = next / (1.0 - r);
            if tail < M_SERIES_TOL * sum {
                return Ok((sum, tail, n));
            }
        }
    }
    Err(Error::Invariant(format!("M series for C = {c} did not converge")))
}

/// First-order fidelity `1 - (3/2 - sqrt 2) eta`.
pub fn fidelity_approx(eta: f64) -> f64 {
    1.0 - (1.5 - std::f64::consts::SQRT_2) * eta
}

/// Numbers recorded alongside a constructed state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StateDiagnostics {
    /// `|I|` of the seed spectrum.
    pub seed_overlap: f64,
    /// `|I|` of the modified spectrum; zero up to rounding.
    pub residual_overlap: f64,
    /// `|<xi1, xi2>|` on the positive half line.
    pub mode_overlap: f64,
    /// `|\int_0^\infty G~*(w) G~(-w) dw| / \int |G~|^2`.
    pub conjugated_spectral_overlap: f64,
    /// `max_{t<0} |g~| / max |g~|`.
    pub modified_seed_leakage: f64,
    pub xi1_norm: f64,
    pub xi2_norm: f64,
}

/// Everything derived from a causal seed: modes, squeeze parameters and the
/// time-domain modified seed.
#[derive(Debug, Clone)]
pub struct LocalizedStateModel {
    pub modified: ModifiedSpectrum,
    pub modes: PulseModePair,
    pub squeeze: SqueezeParameters,
    /// `g~(t)` scaled like the modes, so that its positive-frequency part has unit norm.
    pub seed_tilde: SampledSignal,
    pub diagnostics: StateDiagnostics,
}

impl LocalizedStateModel {
    pub fn from_seed(seed: &SampledSignal) -> Result<Self> {
        let peak = seed.max_abs();
        if !(peak > 0.0) {
            return Err(Error::ZeroNorm);
        }
        let leak = seed.max_abs_before_zero() / peak;
        if leak > 1e-12 {
            return Err(Error::param(
                "seed",
                format!("must vanish for t < 0 (relative magnitude {leak:e})"),
            ));
        }
        Self::from_spectrum(&forward_fourier(seed))
    }

    pub fn from_spectrum(g: &SpectralFunction) -> Result<Self> {
        let modified = modify_spectrum(g)?;
        let modes = split_modes(&modified)?;
        let squeeze = squeeze_parameters(modes.eta)?;

        let gt = &modified.g_tilde;
        let total = modes.positive_norm2 / (1.0 - modes.eta);
        let conj_overlap = half_line_pair(gt, gt, true)?.norm() / total;
        let seed_tilde = inverse_fourier(gt).scale(modes.positive_norm2.sqrt().recip());
        let (xi1_norm, xi2_norm) = modes.norms()?;
        let mode_overlap = modes.mode_overlap()?.norm();
        if mode_overlap > OVERLAP_WARN {
            log::warn!("pulse modes overlap: |<xi1, xi2>| = {mode_overlap:e}");
        }
        let diagnostics = StateDiagnostics {
            seed_overlap: modified.overlap.norm(),
            residual_overlap: modified.residual_overlap()?.norm(),
            mode_overlap,
            conjugated_spectral_overlap: conj_overlap,
            modified_seed_leakage: seed_tilde.max_abs_before_zero() / seed_tilde.max_abs(),
            xi1_norm,
            xi2_norm,
        };
        Ok(LocalizedStateModel {
            modified,
            modes,
            squeeze,
            seed_tilde,
            diagnostics,
        })
    }

    pub fn eta(&self) -> f64 {
        self.modes.eta
    }

    /// Checks the invariants every constructed state must satisfy.
    pub fn check_invariants(&self) -> Result<()> {
        let d = &self.diagnostics;
        let fail = |what: String| Err(Error::Invariant(what));
        if d.residual_overlap > 1e-10 {
            return fail(format!("overlap of modified spectrum {:e}", d.residual_overlap));
        }
        if d.modified_seed_leakage > 1e-10 {
            return Err(Error::Acausal {
                what: "modified seed",
                relative: d.modified_seed_leakage,
                tolerance: 1e-10,
            });
        }
        if (d.xi1_norm - 1.0).abs() > 1e-10 || (d.xi2_norm - 1.0).abs() > 1e-10 {
            return fail(format!("mode norms {} and {}", d.xi1_norm, d.xi2_norm));
        }
        if self.squeeze.m_tail_bound > 1e-14 * self.squeeze.m {
            return fail("M series tail too large".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{make_truncated_gaussian, SeedParams, TimeGrid};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fgrid() -> crate::signal::FrequencyGrid {
        TimeGrid::new(0.05, 2048, 1024).unwrap().frequency_grid()
    }

    fn seed_model(a: f64, b: f64) -> LocalizedStateModel {
        let p = SeedParams::from_ratios(a, b);
        let grid = TimeGrid::for_pulse(p.sigma, p.tau, 0.0, None, 14).unwrap();
        LocalizedStateModel::from_seed(&make_truncated_gaussian(&p, grid).unwrap()).unwrap()
    }

    #[test]
    fn positive_only_spectrum_has_zero_overlap() {
        let g = SpectralFunction::from_fn(fgrid(), |w| {
            if w > 0.0 {
                c((-(w - 3.0).powi(2)).exp(), 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        assert_eq!(compute_overlap_i(&g).unwrap(), c(0.0, 0.0));
        let m = modify_spectrum(&g).unwrap();
        assert_eq!(m.beta, c(0.0, 0.0));
        assert_eq!(m.g_tilde, g);
    }

    #[test]
    fn real_even_spectrum_has_half_overlap() {
        let g = SpectralFunction::from_fn(fgrid(), |w| c((-w * w).exp(), 0.0));
        assert_relative_eq!(compute_overlap_i(&g).unwrap().re, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn zero_spectrum_is_rejected() {
        let g = SpectralFunction::from_fn(fgrid(), |_| c(0.0, 0.0));
        assert_eq!(compute_overlap_i(&g), Err(Error::ZeroNorm));
    }

    #[test]
    fn beta_examples() {
        assert_eq!(compute_beta(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let b = compute_beta(c(0.25, 0.0)).unwrap();
        assert_relative_eq!(b.re, 2.0 * (1.0 - 0.75f64.sqrt()), epsilon = 1e-15);
        assert_relative_eq!(b.re, 0.267949, epsilon = 1e-6);
        let i = Complex64::from_polar(0.5, 0.7);
        assert_relative_eq!(compute_beta(i).unwrap().norm(), 1.0, epsilon = 1e-12);
        assert!(matches!(compute_beta(c(0.6, 0.0)), Err(Error::OverlapOutOfBounds(_))));
    }

    #[test]
    fn synthetic_eta() {
        // 1% of the squared norm below zero, no overlap between the halves
        let g = SpectralFunction::from_fn(fgrid(), |w| {
            let pos = (-(w - 4.0).powi(2)).exp();
            let neg = (-(w + 8.0).powi(2)).exp();
            c(pos, 0.0) + c(0.1005037815259212 * neg, 0.0)
        });
        let m = ModifiedSpectrum {
            g_tilde: g,
            beta: c(0.0, 0.0),
            overlap: c(0.0, 0.0),
        };
        let p = split_modes(&m).unwrap();
        assert!((p.eta - 0.01).abs() < 1e-10);
        let (a, b) = p.norms().unwrap();
        assert!((a - 1.0).abs() < 1e-12 && (b - 1.0).abs() < 1e-12);
        assert!((1.0 / (1.0 + p.c * p.c) - p.eta).abs() < 1e-12);
    }

    #[test]
    fn squeeze_examples() {
        let s = squeeze_parameters(0.2).unwrap();
        assert_relative_eq!(s.c, 2.0, epsilon = 1e-12);
        assert!((s.m - 0.879).abs() < 1e-3);
        // independent partial sum, 200 terms is far past double precision
        let direct: f64 = 0.75
            * (1..200)
                .map(|n| 2f64.powi(1 - 2 * n) * ((n * (n + 1)) as f64).sqrt())
                .sum::<f64>();
        assert_relative_eq!(s.m, direct, max_relative = 1e-14);
        assert!(s.m_tail_bound < 1e-14 * s.m);
        let s = squeeze_parameters(0.1).unwrap();
        assert_relative_eq!(s.gamma.tanh(), 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(s.c * s.c, 9.0, epsilon = 1e-12);
        let s = squeeze_parameters(1e-10).unwrap();
        assert!(s.gamma < 1e-4 && s.m < 1e-4);
        assert!(squeeze_parameters(0.5).is_err());
        assert!(squeeze_parameters(0.0).is_err());
    }

    #[test]
    fn fidelity_examples() {
        assert_eq!(fidelity_approx(0.0), 1.0);
        assert!((fidelity_approx(0.1) - 0.991421).abs() < 1e-6);
    }

    #[test]
    fn gaussian_seed_invariants() {
        let m = seed_model(3.0, 2.0);
        m.check_invariants().unwrap();
        assert!(m.diagnostics.modified_seed_leakage < 1e-10);
        assert!(m.diagnostics.mode_overlap < 1e-10);
        assert!(m.eta() > 1e-4 && m.eta() < 1e-3);
    }

    #[test]
    fn eta_decreases_then_saturates() {
        let etas: Vec<f64> = [2.0, 3.0, 4.0, 6.0].iter().map(|&a| seed_model(a, 3.0).eta()).collect();
        assert!(etas.windows(2).all(|w| w[1] < w[0]));
        // most of the drop happens early
        assert!(etas[0] - etas[1] > etas[2] - etas[3]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn overlap_bounded(parts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, -6.0f64..6.0), 1..6)) {
            let g = SpectralFunction::from_fn(fgrid(), |w| {
                parts.iter().map(|&(a, b, w0)| c(a, b) * (-(w - w0).powi(2)).exp()).sum()
            });
            prop_assume!(quadrature_norm2(&g, None).unwrap() > 1e-8);
            let i = compute_overlap_i(&g).unwrap();
            prop_assert!(i.norm() <= 0.5 + 1e-12);
            // at |I| = 1/2 the modified spectrum vanishes identically
            prop_assume!(i.norm() < 0.49);
            let m = modify_spectrum(&g).unwrap();
            prop_assert!(m.beta.norm() <= 1.0 + 1e-9);
            let r = m.residual_overlap().unwrap().norm();
            prop_assert!(r <= 1e-10, "residual {}", r);
        }
    }
}
