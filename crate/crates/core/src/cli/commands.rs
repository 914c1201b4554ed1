//! One function per subcommand. Each computes everything in memory and
//! returns a [`RunOutput`]; nothing touches the filesystem here.

use num_complex::Complex64;
use serde::Serialize;

use super::config::{FilterKind, RunConfig};
use super::output::{num, RunOutput, Table};
use crate::error::{Error, Result};
use crate::fields::{AuxiliaryFunctions, Representation, TwoTimeKernel};
use crate::filters::{DeltaTrain, Filter, LinearFilter};
use crate::fock::{build_eta_state, oracle_two_time, DEFAULT_N_MAX};
use crate::pipeline::{
    check_localized, coherent_reference, compare_representations, fidelity_point, FilteredPulse, LocalizedPulse,
};
use crate::propagation::{leading_edge, propagate_delta_train, relative_difference, single_photon_output};
use crate::signal::Trace;
use crate::state::{fidelity_approx, squeeze_parameters};

/// Default seeds, as `(omega0 sigma, tau / sigma)`.
pub const ENERGY_DENSITY_SEED: (f64, f64) = (3.0, 2.0);
pub const FP_FILTER_SEED: (f64, f64) = (3.0, 3.0);
pub const PBG_FILTER_SEED: (f64, f64) = (12.0, 3.0);
pub const COMPARISON_SEED: (f64, f64) = (2.1, 2.6);

/// Sweep over the configured seeds; `1 - F` from the Fock model.
pub fn fidelity_sweep(cfg: &RunConfig) -> Result<RunOutput> {
    let base = cfg.seed_or((1.0, 1.0));
    let reference = coherent_reference();
    let mut table = Table::new(
        "fidelity_sweep",
        &[
            "tau_ratio",
            "omega0_sigma",
            "eta",
            "one_minus_f",
            "one_minus_f_first_order",
            "truncation_loss",
            "coherent_reference",
        ],
    );
    let mut worst_loss: f64 = 0.0;
    for &ratio in &cfg.sweep.tau_ratios {
        for &ws in &cfg.sweep.omega0_sigma {
            let mut s = base;
            s.omega0_sigma = ws;
            s.tau_ratio = ratio;
            let p = fidelity_point(s.params()?, cfg.grid.log2_n, cfg.sweep.n_max)?;
            worst_loss = worst_loss.max(p.oracle.truncation_loss);
            table.push_numbers(&[
                ratio,
                ws,
                p.eta,
                p.one_minus_f,
                p.one_minus_f_approx,
                p.oracle.truncation_loss,
                reference,
            ]);
        }
    }
    let mut out = RunOutput::new("fidelity-sweep");
    out.diagnostic("coherent_reference", reference)?;
    out.diagnostic("max_truncation_loss", worst_loss)?;
    out.tables.push(table);
    Ok(out)
}

pub fn energy_density(cfg: &RunConfig) -> Result<RunOutput> {
    let seed = cfg.seed_or(ENERGY_DENSITY_SEED).params()?;
    let pulse = LocalizedPulse::standalone(seed, cfg.grid.log2_n)?;
    let e = pulse.energy_density(Representation::LocalizedState);
    let leakage = check_localized(&e, "energy density", cfg.tolerances.localization)?;
    let (t_peak, peak) = e.peak();
    let mut out = RunOutput::new("energy-density");
    out.diagnostic("pulse", pulse.summary())?;
    out.diagnostic("eta", pulse.eta())?;
    out.diagnostic("leakage", leakage)?;
    out.diagnostic("peak_time", t_peak)?;
    out.diagnostic("peak_value", peak)?;
    out.tables
        .push(Table::from_traces("energy_density", &["t", "energy_density"], &[&e])?);
    Ok(out)
}

#[derive(Debug, Serialize)]
struct TrainSummary {
    terms: usize,
    duration: f64,
    coefficient_sum: f64,
    /// `|kappa(0) - sum c_n|`: what the cut of the train drops at zero frequency.
    dc_truncation: f64,
}

fn train_summary(filter: &Filter, train: &DeltaTrain) -> TrainSummary {
    TrainSummary {
        terms: train.len(),
        duration: train.duration(),
        coefficient_sum: train.coefficient_sum(),
        dc_truncation: (filter.kappa(0.0) - Complex64::new(train.coefficient_sum(), 0.0)).norm(),
    }
}

#[derive(Debug, Serialize)]
struct PassSummary {
    input_peak_time: f64,
    input_peak: f64,
    output_peak_time: f64,
    output_peak: f64,
    output_leading_edge: Option<f64>,
    output_leakage: f64,
    paths_difference: f64,
    factorization_difference: f64,
}

/// Input and output traces of the localized state, checked before returning.
fn filter_run(
    cfg: &RunConfig,
    kind: FilterKind,
    fallback: (f64, f64),
    command: &'static str,
) -> Result<(RunOutput, FilteredPulse)> {
    let seed = cfg.seed_or(fallback).params()?;
    let run = FilteredPulse::new(seed, cfg.filter(kind)?, cfg.grid.log2_n)?;
    let tol = &cfg.tolerances;
    let input = run.input(Representation::LocalizedState);
    check_localized(&input, "input energy density", tol.localization)?;
    let output = run.output(Representation::LocalizedState)?;
    let output_leakage = check_localized(&output, "output energy density", tol.localization)?;
    let conv = run.output_convolution(Representation::LocalizedState)?;
    let paths_difference = relative_difference(&output, &conv)?;
    if paths_difference > tol.paths {
        return Err(Error::Invariant(format!(
            "delta-train and convolution outputs differ by {paths_difference:e} (tolerance {:e})",
            tol.paths
        )));
    }
    let pairs = run.output(Representation::SinglePhoton)?;
    let factored = single_photon_output(&run.pulse.fields.e1, &run.train)?;
    let factorization_difference = relative_difference(&pairs, &factored)?;
    if factorization_difference > tol.factorization {
        return Err(Error::Invariant(format!(
            "single-photon output breaks factorization by {factorization_difference:e}"
        )));
    }
    let (input_peak_time, input_peak) = input.peak();
    let (output_peak_time, output_peak) = output.peak();
    let pass = PassSummary {
        input_peak_time,
        input_peak,
        output_peak_time,
        output_peak,
        output_leading_edge: leading_edge(&output),
        output_leakage,
        paths_difference,
        factorization_difference,
    };
    let mut out = RunOutput::new(command);
    out.diagnostic("pulse", run.pulse.summary())?;
    out.diagnostic("filter", filter_description(&run.filter))?;
    out.diagnostic("train", train_summary(&run.filter, &run.train))?;
    out.diagnostic("propagation", pass)?;
    let (ni, no) = (input.normalized(), output.normalized());
    out.tables.push(Table::from_traces(
        command.replace('-', "_").as_str(),
        &["t", "input", "output", "input_normalized", "output_normalized"],
        &[&input, &output, &ni, &no],
    )?);
    Ok((out, run))
}

fn filter_description(f: &Filter) -> serde_json::Value {
    match f {
        Filter::FabryPerot(fp) => serde_json::json!({ "kind": f.name(), "params": fp }),
        Filter::Bandgap(s) => serde_json::json!({ "kind": f.name(), "params": s }),
    }
}

fn representations_table(name: &str, run: &FilteredPulse, tol: f64, out: &mut RunOutput) -> Result<()> {
    let cmp = compare_representations(run, tol)?;
    out.diagnostic("representations", cmp.metrics)?;
    out.diagnostic(
        "truncated_farther_than_single_photon",
        cmp.metrics.l2_truncated > cmp.metrics.l2_single_photon,
    )?;
    out.tables.push(Table::from_traces(
        name,
        &["t", "localized", "single_photon", "truncated"],
        &[&cmp.localized, &cmp.single_photon, &cmp.truncated],
    )?);
    Ok(())
}

pub fn fp_filter(cfg: &RunConfig) -> Result<RunOutput> {
    let (mut out, run) = filter_run(cfg, FilterKind::Fp, FP_FILTER_SEED, "fp-filter")?;
    representations_table("fp_representations", &run, cfg.tolerances.localization, &mut out)?;
    Ok(out)
}

pub fn pbg_filter(cfg: &RunConfig) -> Result<RunOutput> {
    Ok(filter_run(cfg, FilterKind::Pbg, PBG_FILTER_SEED, "pbg-filter")?.0)
}

pub fn compare(cfg: &RunConfig, kind: FilterKind) -> Result<RunOutput> {
    let seed = cfg.seed_or(COMPARISON_SEED).params()?;
    let run = FilteredPulse::new(seed, cfg.filter(kind)?, cfg.grid.log2_n)?;
    let mut out = RunOutput::new("compare-representations");
    out.diagnostic("pulse", run.pulse.summary())?;
    out.diagnostic("filter", filter_description(&run.filter))?;
    out.diagnostic("train", train_summary(&run.filter, &run.train))?;
    representations_table("representations", &run, cfg.tolerances.localization, &mut out)?;
    Ok(out)
}

/// `|kappa|^2` and `tau_g w0` over `(0, 2 w0)`.
pub fn pbg_spectrum(cfg: &RunConfig) -> Result<RunOutput> {
    let stack = cfg.bandgap()?;
    let w0 = stack.omega0;
    let n = cfg.spectrum.points;
    let mut table = Table::new(
        "pbg_spectrum",
        &["omega_over_omega0", "transmission", "group_delay_omega0"],
    );
    let (mut unitarity, mut forms): (f64, f64) = (0.0, 0.0);
    for j in 1..=n {
        let x = 2.0 * j as f64 / (n + 1) as f64;
        let w = x * w0;
        let (k, r) = stack.response(w);
        let (kd, rd) = stack.response_direct(w);
        unitarity = unitarity.max((k.norm_sqr() + r.norm_sqr() - 1.0).abs());
        forms = forms.max((k - kd).norm()).max((r - rd).norm());
        table.push_numbers(&[x, k.norm_sqr(), stack.group_delay(w) * w0]);
    }
    if unitarity > 1e-12 || forms > 1e-12 {
        return Err(Error::Invariant(format!(
            "stack response: unitarity error {unitarity:e}, Chebyshev vs direct {forms:e}"
        )));
    }
    let mut out = RunOutput::new("pbg-spectrum");
    out.diagnostic("filter", serde_json::json!({ "kind": "bandgap", "params": stack }))?;
    out.diagnostic("transmission_at_omega0", stack.kappa(w0).norm_sqr())?;
    out.diagnostic("group_delay_at_omega0", stack.group_delay(w0))?;
    out.diagnostic("max_unitarity_error", unitarity)?;
    out.diagnostic("max_chebyshev_direct_difference", forms)?;
    out.tables.push(table);
    Ok(out)
}

struct Check {
    name: &'static str,
    value: f64,
    tolerance: f64,
}

impl Check {
    fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

fn oracle_check(pulse: &LocalizedPulse, tol: f64) -> Result<Check> {
    let eta = 0.2;
    let aux = AuxiliaryFunctions::from_fields(&pulse.fields, &squeeze_parameters(eta)?)?;
    let kernel = TwoTimeKernel::localized(&aux);
    let state = build_eta_state(eta, DEFAULT_N_MAX)?;
    let grid = pulse.grid();
    let hi = pulse.seed.tau + 4.0 * pulse.seed.sigma;
    let idx: Vec<usize> = (0..10)
        .map(|k| grid.origin() + ((hi * k as f64 / 9.0) / grid.dt()).round() as usize)
        .collect();
    let (e1, e2) = (&pulse.fields.e1.values, &pulse.fields.e2.values);
    let (mut diff, mut scale): (f64, f64) = (0.0, 0.0);
    for &i in &idx {
        for &j in &idx {
            let o = oracle_two_time(&state.state, (e1[i], e1[j]), (e2[i], e2[j]))?;
            let c = kernel.at_index(i, j);
            diff = diff.max((o - c).abs());
            scale = scale.max(o.abs()).max(c.abs());
        }
    }
    Ok(Check {
        name: "closed_form_vs_fock_oracle",
        value: diff / scale,
        tolerance: tol,
    })
}

fn linearity_check(run: &FilteredPulse) -> Result<Check> {
    let a = run.pulse.kernel(Representation::LocalizedState);
    let b = run.pulse.kernel(Representation::SinglePhoton);
    let sum = propagate_delta_train(&a.plus(&b)?, &run.train)?;
    let oa = propagate_delta_train(&a, &run.train)?;
    let ob = propagate_delta_train(&b, &run.train)?;
    let parts = Trace::new(sum.grid, oa.values.iter().zip(&ob.values).map(|(x, y)| x + y).collect())?;
    Ok(Check {
        name: "kernel_linearity",
        value: relative_difference(&sum, &parts)?,
        tolerance: 1e-12,
    })
}

/// Oracle-equivalence and invariant checks; the report lists every check and
/// the run fails if any of them does.
pub fn selftest(cfg: &RunConfig) -> Result<RunOutput> {
    let tol = &cfg.tolerances;
    let mut checks = Vec::new();

    let eta = 0.05;
    let f = build_eta_state(eta, DEFAULT_N_MAX)?.state.fidelity();
    checks.push(Check {
        name: "fidelity_first_order",
        value: (f - fidelity_approx(eta)).abs() / (eta * eta),
        tolerance: 2.0,
    });

    let pulse = LocalizedPulse::standalone(cfg.seed_or(ENERGY_DENSITY_SEED).params()?, cfg.grid.log2_n)?;
    let d = pulse.model.diagnostics;
    checks.push(Check {
        name: "residual_spectral_overlap",
        value: d.residual_overlap,
        tolerance: 1e-10,
    });
    checks.push(Check {
        name: "pulse_mode_overlap",
        value: d.mode_overlap,
        tolerance: 1e-10,
    });
    checks.push(Check {
        name: "input_localization",
        value: pulse.energy_density(Representation::LocalizedState).relative_leakage(),
        tolerance: tol.localization,
    });
    checks.push(oracle_check(&pulse, tol.oracle)?);

    let fp = cfg.fabry_perot()?;
    let (mut fp_unitary, mut fp_symmetry): (f64, f64) = (0.0, 0.0);
    for j in 0..=400 {
        let w = -4.0 + 8.0 * j as f64 / 400.0;
        fp_unitary = fp_unitary.max((fp.kappa(w).norm_sqr() + fp.rho(w).norm_sqr() - 1.0).abs());
        fp_symmetry = fp_symmetry.max((fp.kappa(-w).conj() - fp.kappa(w)).norm());
    }
    checks.push(Check {
        name: "fabry_perot_unitarity",
        value: fp_unitary,
        tolerance: 1e-12,
    });
    checks.push(Check {
        name: "fabry_perot_conjugate_symmetry",
        value: fp_symmetry,
        tolerance: 1e-12,
    });
    let stack = cfg.bandgap()?;
    let mut forms: f64 = 0.0;
    for j in 1..400 {
        let w = stack.omega0 * 2.0 * j as f64 / 400.0;
        forms = forms.max((stack.response(w).0 - stack.response_direct(w).0).norm());
    }
    checks.push(Check {
        name: "stack_chebyshev_vs_direct",
        value: forms,
        tolerance: 1e-12,
    });

    let run = FilteredPulse::new(
        cfg.seed_or(FP_FILTER_SEED).params()?,
        Filter::FabryPerot(fp),
        cfg.grid.log2_n,
    )?;
    let a = run.output(Representation::LocalizedState)?;
    let b = run.output_convolution(Representation::LocalizedState)?;
    checks.push(Check {
        name: "delta_train_vs_convolution",
        value: relative_difference(&a, &b)?,
        tolerance: tol.paths,
    });
    checks.push(Check {
        name: "output_localization",
        value: a.relative_leakage(),
        tolerance: tol.localization,
    });
    let pairs = run.output(Representation::SinglePhoton)?;
    let factored = single_photon_output(&run.pulse.fields.e1, &run.train)?;
    checks.push(Check {
        name: "single_photon_factorization",
        value: relative_difference(&pairs, &factored)?,
        tolerance: tol.factorization,
    });
    checks.push(linearity_check(&run)?);

    let mut out = RunOutput::new("selftest");
    let mut table = Table::new("selftest", &["check", "value", "tolerance", "passed"]);
    for c in &checks {
        table.push(vec![
            c.name.to_string(),
            num(c.value),
            num(c.tolerance),
            c.passed().to_string(),
        ]);
        if !c.passed() {
            out.failures
                .push(format!("{}: {:e} > {:e}", c.name, c.value, c.tolerance));
        }
    }
    out.diagnostic("checks", checks.len())?;
    out.diagnostic("failed", out.failures.len())?;
    out.tables.push(table);
    Ok(out)
}
