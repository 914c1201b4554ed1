//! Time-domain mode fields, the auxiliary `f` functions, and the normal-ordered
//! two-time correlation for the three ways of representing the incident pulse.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::signal::{
    causal_half_derivative, inverse_fourier, positive_frequency_part, SampledSignal, SpectralFunction, TimeGrid, Trace,
};
use crate::state::{LocalizedStateModel, SqueezeParameters};

/// `sqrt(-i w)` on the principal branch: `sqrt(|w|) e^{-i pi/4 sign w}`.
pub fn field_weight(w: f64) -> Complex64 {
    if w == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::from_polar(w.abs().sqrt(), -FRAC_PI_4 * w.signum())
    }
}

/// `E(t) = \int_0^\infty K sqrt(-i w) xi(w) e^{-i w t} dw`.
pub fn pulse_mode_field(xi: &SpectralFunction, k: f64) -> Result<SampledSignal> {
    let peak = xi.max_abs();
    let z = xi.grid.origin();
    let neg = xi.values[..z].iter().map(|v| v.norm()).fold(0.0, f64::max);
    if neg > 1e-12 * peak {
        return Err(Error::param(
            "xi",
            format!("has support at w < 0 (relative {:e})", neg / peak),
        ));
    }
    let weighted = xi.map(|w, v| v * field_weight(w) * k);
    Ok(inverse_fourier(&weighted).scale((2.0 * PI).sqrt()))
}

/// Mode fields `E1`, `E2` of the two pulse modes.
#[derive(Debug, Clone)]
pub struct FieldFunctions {
    pub e1: SampledSignal,
    pub e2: SampledSignal,
    pub k: f64,
}

impl FieldFunctions {
    /// Fields built through the causal half-derivative of the modified seed.
    ///
    /// With `F = K sqrt(2 pi) D^{1/2} g~` (zero for `t < 0` by construction),
    /// `E1` is the positive-frequency part of `F` and `E2 = C conj(F - E1)`.
    /// This makes `E1 + conj(E2) / C` exactly causal on the grid, which the
    /// spectral route only achieves up to band-edge ringing.
    pub fn causal(model: &LocalizedStateModel, k: f64) -> Self {
        let f = causal_half_derivative(&model.seed_tilde).scale(k * (2.0 * PI).sqrt());
        let e1 = positive_frequency_part(&f);
        let c = model.modes.c;
        let e2 = SampledSignal {
            grid: f.grid,
            values: f
                .values
                .iter()
                .zip(&e1.values)
                .map(|(a, b)| (a - b).conj() * c)
                .collect(),
        };
        FieldFunctions { e1, e2, k }
    }

    /// Fields obtained by weighting the mode spectra and transforming back.
    pub fn spectral(model: &LocalizedStateModel, k: f64) -> Result<Self> {
        Ok(FieldFunctions {
            e1: pulse_mode_field(&model.modes.xi1, k)?,
            e2: pulse_mode_field(&model.modes.xi2, k)?,
            k,
        })
    }

    pub fn grid(&self) -> TimeGrid {
        self.e1.grid
    }
}

/// `f0`, `f1`, `f2` together with the constants of the closed form.
#[derive(Debug, Clone)]
pub struct AuxiliaryFunctions {
    pub f0: SampledSignal,
    pub f1: SampledSignal,
    pub f2: SampledSignal,
    pub c: f64,
    pub m: f64,
}

/// `f0 = p (E1* - E2 / C)`, `f1 = p (E1 + E2* / C)`, `f2 = p (E2 + E1* / C)`
/// with `p = C / sqrt(C^2 - 1)`.
pub fn build_f_functions(fields: &FieldFunctions, c: f64, m: f64) -> Result<AuxiliaryFunctions> {
    if !(c > 1.0 && c.is_finite()) {
        return Err(Error::param("C", format!("must exceed 1, got {c}")));
    }
    fields.e1.check_same_grid(&fields.e2)?;
    let p = c / (c * c - 1.0).sqrt();
    let (e1, e2) = (&fields.e1.values, &fields.e2.values);
    let build = |f: &dyn Fn(Complex64, Complex64) -> Complex64| SampledSignal {
        grid: fields.e1.grid,
        values: e1.iter().zip(e2).map(|(&a, &b)| f(a, b) * p).collect(),
    };
    Ok(AuxiliaryFunctions {
        f0: build(&|a, b| a.conj() - b / c),
        f1: build(&|a, b| a + b.conj() / c),
        f2: build(&|a, b| b + a.conj() / c),
        c,
        m,
    })
}

impl AuxiliaryFunctions {
    pub fn from_fields(fields: &FieldFunctions, sq: &SqueezeParameters) -> Result<Self> {
        build_f_functions(fields, sq.c, sq.m)
    }

    /// `max_{t<0} |f1| / max |f1|`.
    pub fn f1_leakage(&self) -> f64 {
        self.f1.max_abs_before_zero() / self.f1.max_abs()
    }

    pub fn check_causal(&self, tolerance: f64) -> Result<()> {
        let relative = self.f1_leakage();
        if relative > tolerance {
            return Err(Error::Acausal {
                what: "f1",
                relative,
                tolerance,
            });
        }
        Ok(())
    }
}

/// Closed-form `<:E(t1) E(t2):>` of the localized state.
pub fn localized_two_time(aux: &AuxiliaryFunctions, t1: f64, t2: f64) -> Result<f64> {
    let kernel = TwoTimeKernel::localized(aux);
    Ok(kernel.at_index(aux.f1.grid.index_of(t1)?, aux.f1.grid.index_of(t2)?))
}

/// Which state the kernel describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Representation {
    LocalizedState,
    SinglePhoton,
    TruncatedApproximation,
}

impl Representation {
    pub fn label(&self) -> &'static str {
        match self {
            Representation::LocalizedState => "localized",
            Representation::SinglePhoton => "single_photon",
            Representation::TruncatedApproximation => "truncated",
        }
    }
}

/// One term `Re{ w u(t1) v(t2) }` of a separable kernel.
#[derive(Debug, Clone)]
pub struct SeparableTerm {
    pub weight: f64,
    pub u: SampledSignal,
    pub v: SampledSignal,
}

/// `<:E(t1) E(t2):>` written as a short sum of separable terms; evaluated lazily.
#[derive(Debug, Clone)]
pub struct TwoTimeKernel {
    pub representation: Representation,
    grid: TimeGrid,
    terms: Vec<SeparableTerm>,
}

impl TwoTimeKernel {
    /// `Re{ A f1(t1) f1*(t2) - f1(t1) h(t2) - f1(t2) h(t1) }` with
    /// `A = 4 C^2 / (C^2 - 1)` and `h = f0 + 2 M f2`.
    pub fn localized(aux: &AuxiliaryFunctions) -> Self {
        let c2 = aux.c * aux.c;
        let h = SampledSignal {
            grid: aux.f0.grid,
            values: aux
                .f0
                .values
                .iter()
                .zip(&aux.f2.values)
                .map(|(a, b)| a + b * (2.0 * aux.m))
                .collect(),
        };
        TwoTimeKernel {
            representation: Representation::LocalizedState,
            grid: aux.f1.grid,
            terms: vec![
                SeparableTerm {
                    weight: 4.0 * c2 / (c2 - 1.0),
                    u: aux.f1.clone(),
                    v: aux.f1.conj(),
                },
                SeparableTerm {
                    weight: -1.0,
                    u: aux.f1.clone(),
                    v: h.clone(),
                },
                SeparableTerm {
                    weight: -1.0,
                    u: h,
                    v: aux.f1.clone(),
                },
            ],
        }
    }

    fn product(representation: Representation, e: SampledSignal) -> Self {
        TwoTimeKernel {
            representation,
            grid: e.grid,
            terms: vec![SeparableTerm {
                weight: 2.0,
                v: e.conj(),
                u: e,
            }],
        }
    }

    /// Kernel `self + other`, keeping the representation tag of `self`.
    pub fn plus(&self, other: &TwoTimeKernel) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("kernels live on different grids".into()));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(TwoTimeKernel {
            representation: self.representation,
            grid: self.grid,
            terms,
        })
    }

    pub fn terms(&self) -> &[SeparableTerm] {
        &self.terms
    }

    pub fn grid(&self) -> TimeGrid {
        self.grid
    }

    /// Kernel at grid indices; indices off the grid read as zero field.
    #[inline]
    pub fn at_index_signed(&self, i: isize, j: isize) -> f64 {
        self.terms.iter().map(|t| (t.u.get(i) * t.v.get(j)).re * t.weight).sum()
    }

    pub fn at_index(&self, i: usize, j: usize) -> f64 {
        self.at_index_signed(i as isize, j as isize)
    }

    pub fn eval(&self, t1: f64, t2: f64) -> Result<f64> {
        Ok(self.at_index(self.grid.index_of(t1)?, self.grid.index_of(t2)?))
    }
}

/// Single photon in mode 1: `2 Re{ E1(t1) E1*(t2) }`.
pub fn single_photon_kernel(fields: &FieldFunctions) -> TwoTimeKernel {
    TwoTimeKernel::product(Representation::SinglePhoton, fields.e1.clone())
}

/// Single-photon kernel with `E1` cut to `t >= 0`.
pub fn truncated_kernel(fields: &FieldFunctions) -> TwoTimeKernel {
    let mut e = fields.e1.clone();
    let z = e.grid.origin();
    e.values[..z].fill(Complex64::new(0.0, 0.0));
    TwoTimeKernel::product(Representation::TruncatedApproximation, e)
}

/// Equal-time kernel `<:E(t)^2:>` over the whole grid.
pub fn energy_density(kernel: &TwoTimeKernel) -> Trace {
    let values = (0..kernel.grid.len()).map(|k| kernel.at_index(k, k)).collect();
    Trace {
        grid: kernel.grid,
        values,
    }
}
