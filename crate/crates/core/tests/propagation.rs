use localphoton::fields::{single_photon_kernel, Representation, TwoTimeKernel};
use localphoton::filters::{DeltaTrain, FabryPerot, Filter, LinearFilter, QuarterWaveStack};
use localphoton::propagation::{propagate_delta_train, relative_difference, single_photon_output};
use localphoton::signal::{SeedParams, TimeGrid, Trace};
use localphoton::{FilteredPulse, LocalizedPulse};

const LINEARITY_TOL: f64 = 1e-12;
const FACTORIZATION_TOL: f64 = 1e-10;
const BRUTE_FORCE_TOL: f64 = 1e-12;

fn small_fp() -> FilteredPulse {
    let fp = FabryPerot::with_phase(0.5, std::f64::consts::PI, 1.0)
        .unwrap()
        .with_train_tol(1e-4)
        .unwrap();
    FilteredPulse::new(SeedParams::from_ratios(2.0, 2.0), Filter::FabryPerot(fp), 12).unwrap()
}

/// Every ordered pair `(n, m)` visited, on every `stride`-th sample.
fn brute_force(kernel: &TwoTimeKernel, train: &DeltaTrain, stride: usize) -> Vec<(usize, f64)> {
    let grid = kernel.grid();
    let steps: Vec<isize> = train
        .delays()
        .iter()
        .map(|&d| grid.steps(d).unwrap() as isize)
        .collect();
    (0..grid.len())
        .step_by(stride)
        .map(|k| {
            let mut acc = 0.0;
            for (n, &sn) in steps.iter().enumerate() {
                for (m, &sm) in steps.iter().enumerate() {
                    let i = k as isize - sn;
                    let j = k as isize - sm;
                    acc += train.coeffs()[n] * train.coeffs()[m] * kernel.at_index_signed(i, j);
                }
            }
            (k, acc)
        })
        .collect()
}

#[test]
fn delta_train_matches_unsymmetrized_double_sum() {
    let fp = small_fp();
    assert!(fp.train.len() > 3 && fp.train.len() < 40);
    for rep in [Representation::LocalizedState, Representation::SinglePhoton] {
        let kernel = fp.pulse.kernel(rep);
        let fast = propagate_delta_train(&kernel, &fp.train).unwrap();
        let scale = fast.max_abs();
        for (k, want) in brute_force(&kernel, &fp.train, 7) {
            assert!(
                (fast.values[k] - want).abs() <= BRUTE_FORCE_TOL * scale,
                "{rep:?} sample {k}: {} vs {want}",
                fast.values[k]
            );
        }
    }
}

#[test]
fn identity_train_leaves_density_unchanged() {
    let pulse = LocalizedPulse::standalone(SeedParams::from_ratios(3.0, 2.0), 12).unwrap();
    let kernel = pulse.kernel(Representation::LocalizedState);
    let out = propagate_delta_train(&kernel, &DeltaTrain::identity()).unwrap();
    let input = pulse.energy_density(Representation::LocalizedState);
    assert!(relative_difference(&out, &input).unwrap() < 1e-14);
}

#[test]
fn propagation_is_linear_in_the_kernel() {
    let fp = small_fp();
    let a = fp.pulse.kernel(Representation::LocalizedState);
    let b = fp.pulse.kernel(Representation::TruncatedApproximation);
    let sum = propagate_delta_train(&a.plus(&b).unwrap(), &fp.train).unwrap();
    let oa = propagate_delta_train(&a, &fp.train).unwrap();
    let ob = propagate_delta_train(&b, &fp.train).unwrap();
    let parts = Trace::new(sum.grid, oa.values.iter().zip(&ob.values).map(|(x, y)| x + y).collect()).unwrap();
    assert!(relative_difference(&sum, &parts).unwrap() < LINEARITY_TOL);
}

#[test]
fn kernels_on_different_grids_do_not_add() {
    let a = LocalizedPulse::standalone(SeedParams::from_ratios(3.0, 2.0), 10).unwrap();
    let b = LocalizedPulse::standalone(SeedParams::from_ratios(3.0, 2.0), 11).unwrap();
    let ka = a.kernel(Representation::SinglePhoton);
    assert!(ka.plus(&b.kernel(Representation::SinglePhoton)).is_err());
}

fn assert_factorizes(fp: &FilteredPulse) {
    let kernel = single_photon_kernel(&fp.pulse.fields);
    let double = propagate_delta_train(&kernel, &fp.train).unwrap();
    let single = single_photon_output(&fp.pulse.fields.e1, &fp.train).unwrap();
    let d = relative_difference(&double, &single).unwrap();
    assert!(d < FACTORIZATION_TOL, "{}: {d:e}", fp.filter.name());
}

#[test]
fn single_photon_output_factorizes_through_fabry_perot() {
    let fp = FabryPerot::with_phase(0.9, std::f64::consts::PI, 1.0).unwrap();
    let fp = FilteredPulse::new(SeedParams::from_ratios(3.0, 3.0), Filter::FabryPerot(fp), 14).unwrap();
    assert_factorizes(&fp);
}

#[test]
fn single_photon_output_factorizes_through_bandgap() {
    let stack = QuarterWaveStack::new(1.0, 2.0, 10, 1.0).unwrap();
    let fp = FilteredPulse::new(SeedParams::from_ratios(12.0, 3.0), Filter::Bandgap(stack), 14).unwrap();
    assert_factorizes(&fp);
}

#[test]
fn localized_output_stays_causal_and_paths_agree() {
    let fp = small_fp();
    let delta = fp.output(Representation::LocalizedState).unwrap();
    let conv = fp.output_convolution(Representation::LocalizedState).unwrap();
    assert!(delta.relative_leakage() < 1e-10);
    assert!(relative_difference(&delta, &conv).unwrap() < 1e-6);
    // Off resonance the peak may advance; the onset may not.
    let input = fp.pulse.energy_density(Representation::LocalizedState);
    let onset = |t: &Trace| t.leading_edge(1e-8).unwrap();
    assert!(onset(&delta) >= onset(&input) - fp.pulse.grid().dt());
}

#[test]
fn train_reproduces_filter_response() {
    let fp = FabryPerot::with_phase(0.9, 1.0, 1.0).unwrap();
    let train = fp.delta_train().unwrap();
    for w in [0.3, 1.0, 1.7] {
        assert!((train.response(w) - fp.kappa(w)).norm() < 1e-5);
    }
    let grid = TimeGrid::for_pulse(1.0, 0.0, train.duration(), Some(2.0 * fp.d), 12).unwrap();
    assert!(grid.t_max() >= train.duration());
}
