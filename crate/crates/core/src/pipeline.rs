//! End-to-end evaluation: seed pulse, localized state, two-time kernels and the
//! energy density behind a filter.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{
    energy_density, single_photon_kernel, truncated_kernel, AuxiliaryFunctions, FieldFunctions, Representation,
    TwoTimeKernel,
};
use crate::filters::{DeltaTrain, Filter, LinearFilter};
use crate::fock::{build_eta_state, OracleSummary};
use crate::propagation::{propagate_convolution, propagate_delta_train, sample_impulse_response};
use crate::signal::{make_truncated_gaussian, SeedParams, TimeGrid, Trace};
use crate::state::{fidelity_approx, LocalizedStateModel, SqueezeParameters, StateDiagnostics};

/// Default grid size, as a power of two.
pub const DEFAULT_LOG2_N: u32 = 15;
/// Largest tolerated `max_{t<0} |out| / max |out|` for a strictly localized trace.
pub const LOCALIZATION_TOL: f64 = 1e-6;
/// Largest tolerated `max_{t<0} |f1| / max |f1|`.
pub const FIELD_CAUSALITY_TOL: f64 = 1e-10;
/// Output traces are compared on `t > L2_FROM_SIGMAS * sigma`.
pub const L2_FROM_SIGMAS: f64 = 3.0;

/// `1 - e^{-1/2}`: one minus the fidelity between a coherent state of unit mean
/// photon number and a single photon.
pub fn coherent_reference() -> f64 {
    1.0 - (-0.5f64).exp()
}

/// Fails with [`Error::Acausal`] when a trace is not zero before `t = 0`.
pub fn check_localized(trace: &Trace, what: &'static str, tolerance: f64) -> Result<f64> {
    let relative = trace.relative_leakage();
    if relative > tolerance {
        return Err(Error::Acausal {
            what,
            relative,
            tolerance,
        });
    }
    Ok(relative)
}

/// The localized state built from one seed, with its fields on a shared grid.
#[derive(Debug, Clone)]
pub struct LocalizedPulse {
    pub seed: SeedParams,
    pub model: LocalizedStateModel,
    pub fields: FieldFunctions,
    pub aux: AuxiliaryFunctions,
}

impl LocalizedPulse {
    pub fn new(seed: SeedParams, grid: TimeGrid) -> Result<Self> {
        seed.validate()?;
        let g = make_truncated_gaussian(&seed, grid)?;
        let model = LocalizedStateModel::from_seed(&g)?;
        model.check_invariants()?;
        let fields = FieldFunctions::causal(&model, 1.0);
        let aux = AuxiliaryFunctions::from_fields(&fields, &model.squeeze)?;
        aux.check_causal(FIELD_CAUSALITY_TOL)?;
        Ok(LocalizedPulse {
            seed,
            model,
            fields,
            aux,
        })
    }

    /// Pulse on the default grid with no room reserved for a filter.
    pub fn standalone(seed: SeedParams, log2_n: u32) -> Result<Self> {
        let grid = TimeGrid::for_pulse(seed.sigma, seed.tau, 0.0, None, log2_n)?;
        Self::new(seed, grid)
    }

    pub fn grid(&self) -> TimeGrid {
        self.fields.grid()
    }

    pub fn eta(&self) -> f64 {
        self.model.eta()
    }

    pub fn kernel(&self, rep: Representation) -> TwoTimeKernel {
        match rep {
            Representation::LocalizedState => TwoTimeKernel::localized(&self.aux),
            Representation::SinglePhoton => single_photon_kernel(&self.fields),
            Representation::TruncatedApproximation => truncated_kernel(&self.fields),
        }
    }

    pub fn energy_density(&self, rep: Representation) -> Trace {
        energy_density(&self.kernel(rep))
    }

    pub fn summary(&self) -> PulseSummary {
        PulseSummary {
            seed: self.seed,
            grid: self.grid(),
            squeeze: self.model.squeeze,
            state: self.model.diagnostics,
            f1_leakage: self.aux.f1_leakage(),
        }
    }
}

/// Numbers worth recording alongside any output derived from a pulse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PulseSummary {
    pub seed: SeedParams,
    pub grid: TimeGrid,
    pub squeeze: SqueezeParameters,
    pub state: StateDiagnostics,
    pub f1_leakage: f64,
}

/// A pulse on a grid long enough to hold its response to `filter`.
#[derive(Debug, Clone)]
pub struct FilteredPulse {
    pub pulse: LocalizedPulse,
    pub filter: Filter,
    pub train: DeltaTrain,
}

impl FilteredPulse {
    pub fn new(seed: SeedParams, filter: Filter, log2_n: u32) -> Result<Self> {
        let train = filter.delta_train()?;
        let grid = TimeGrid::for_pulse(
            seed.sigma,
            seed.tau,
            train.duration(),
            Some(filter.delay_quantum()),
            log2_n,
        )?;
        let pulse = LocalizedPulse::new(seed, grid)?;
        Ok(FilteredPulse { pulse, filter, train })
    }

    pub fn input(&self, rep: Representation) -> Trace {
        self.pulse.energy_density(rep)
    }

    /// Output through the delta train.
    pub fn output(&self, rep: Representation) -> Result<Trace> {
        propagate_delta_train(&self.pulse.kernel(rep), &self.train)
    }

    /// Output through the sampled impulse response, cut at the train duration.
    pub fn output_convolution(&self, rep: Representation) -> Result<Trace> {
        let h = sample_impulse_response(&self.filter, self.pulse.grid(), Some(self.train.duration()))?;
        propagate_convolution(&self.pulse.kernel(rep), &h)
    }
}

/// Filter outputs for the three representations of the incident pulse.
#[derive(Debug, Clone)]
pub struct RepresentationComparison {
    pub localized: Trace,
    pub single_photon: Trace,
    pub truncated: Trace,
    pub metrics: ComparisonMetrics,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonMetrics {
    /// Start of the window for the L2 distances.
    pub l2_from: f64,
    /// L2 distance between the truncated and localized outputs.
    pub l2_truncated: f64,
    /// L2 distance between the single-photon and localized outputs.
    pub l2_single_photon: f64,
    pub localized_leakage: f64,
    pub single_photon_leakage: f64,
    pub truncated_leakage: f64,
}

/// Propagates all three representations through the same filter.
pub fn compare_representations(fp: &FilteredPulse, tolerance: f64) -> Result<RepresentationComparison> {
    let localized = fp.output(Representation::LocalizedState)?;
    let single_photon = fp.output(Representation::SinglePhoton)?;
    let truncated = fp.output(Representation::TruncatedApproximation)?;
    let localized_leakage = check_localized(&localized, "localized output", tolerance)?;
    let l2_from = L2_FROM_SIGMAS * fp.pulse.seed.sigma;
    let metrics = ComparisonMetrics {
        l2_from,
        l2_truncated: truncated.l2_distance_from(&localized, l2_from)?,
        l2_single_photon: single_photon.l2_distance_from(&localized, l2_from)?,
        localized_leakage,
        single_photon_leakage: single_photon.relative_leakage(),
        truncated_leakage: truncated.relative_leakage(),
    };
    Ok(RepresentationComparison {
        localized,
        single_photon,
        truncated,
        metrics,
    })
}

/// `1 - F` of the localized state for one seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FidelityPoint {
    pub omega0_sigma: f64,
    pub tau_ratio: f64,
    pub eta: f64,
    /// From the truncated-Fock model.
    pub one_minus_f: f64,
    /// `(3/2 - sqrt 2) eta`.
    pub one_minus_f_approx: f64,
    pub oracle: OracleSummary,
}

pub fn fidelity_point(seed: SeedParams, log2_n: u32, n_max: usize) -> Result<FidelityPoint> {
    seed.validate()?;
    let grid = TimeGrid::for_pulse(seed.sigma, seed.tau, 0.0, None, log2_n)?;
    let model = LocalizedStateModel::from_seed(&make_truncated_gaussian(&seed, grid)?)?;
    model.check_invariants()?;
    let eta = model.eta();
    let oracle = build_eta_state(eta, n_max)?.summary();
    Ok(FidelityPoint {
        omega0_sigma: seed.omega0 * seed.sigma,
        tau_ratio: seed.tau / seed.sigma,
        eta,
        one_minus_f: 1.0 - oracle.fidelity,
        one_minus_f_approx: 1.0 - fidelity_approx(eta),
        oracle,
    })
}
