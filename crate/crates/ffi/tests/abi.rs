use std::ffi::CStr;
use std::ptr;

use localphoton_ffi::*;

fn last_error() -> String {
    let p = lp_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn pulse_round_trip() {
    let mut pulse = ptr::null_mut();
    assert_eq!(unsafe { lp_pulse_new(3.0, 2.0, 12, &mut pulse) }, LpStatus::Ok);
    assert!(!pulse.is_null());
    assert!(lp_last_error().is_null());

    let mut eta = 0.0;
    assert_eq!(unsafe { lp_pulse_eta(pulse, &mut eta) }, LpStatus::Ok);
    let direct = localphoton::LocalizedPulse::standalone(localphoton::SeedParams::from_ratios(3.0, 2.0), 12).unwrap();
    assert_eq!(eta, direct.eta());

    let mut len = 0;
    assert_eq!(unsafe { lp_pulse_len(pulse, &mut len) }, LpStatus::Ok);
    assert_eq!(len, 1 << 12);
    let mut t = vec![0.0; len];
    let mut v = vec![0.0; len];
    let rep = LpRepresentation::Localized as u32;
    assert_eq!(
        unsafe { lp_pulse_energy_density(pulse, rep, t.as_mut_ptr(), v.as_mut_ptr(), len) },
        LpStatus::Ok
    );
    let want = direct.energy_density(localphoton::Representation::LocalizedState);
    assert_eq!(v, want.values);
    assert_eq!(t[want.grid.origin()], 0.0);

    assert_eq!(
        unsafe { lp_pulse_energy_density(pulse, rep, ptr::null_mut(), v.as_mut_ptr(), len - 1) },
        LpStatus::BufferSize
    );
    assert!(last_error().contains("samples"));
    assert_eq!(
        unsafe { lp_pulse_energy_density(pulse, 7, ptr::null_mut(), v.as_mut_ptr(), len) },
        LpStatus::InvalidArgument
    );
    unsafe { lp_pulse_free(pulse) };
}

#[test]
fn invalid_arguments_and_null_pointers() {
    let mut pulse = ptr::null_mut();
    assert_eq!(
        unsafe { lp_pulse_new(-1.0, 2.0, 12, &mut pulse) },
        LpStatus::InvalidArgument
    );
    assert!(pulse.is_null());
    assert!(last_error().contains("sigma"));
    assert_eq!(
        unsafe { lp_pulse_new(3.0, 2.0, 40, &mut pulse) },
        LpStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { lp_pulse_new(3.0, 2.0, 12, ptr::null_mut()) },
        LpStatus::NullPointer
    );
    let mut eta = 0.0;
    assert_eq!(unsafe { lp_pulse_eta(ptr::null(), &mut eta) }, LpStatus::NullPointer);
    unsafe {
        lp_pulse_free(ptr::null_mut());
        lp_filtered_free(ptr::null_mut());
    }
}

#[test]
fn filtered_output_matches_library() {
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { lp_filtered_new_fabry_perot(2.0, 2.0, 0.6, std::f64::consts::PI, 13, &mut f) },
        LpStatus::Ok
    );
    let mut len = 0;
    let mut terms = 0;
    unsafe {
        assert_eq!(lp_filtered_len(f, &mut len), LpStatus::Ok);
        assert_eq!(lp_filtered_train_terms(f, &mut terms), LpStatus::Ok);
    }
    assert!(terms > 1);
    let mut input = vec![0.0; len];
    let mut output = vec![0.0; len];
    let rep = LpRepresentation::Localized as u32;
    unsafe {
        assert_eq!(
            lp_filtered_input(f, rep, ptr::null_mut(), input.as_mut_ptr(), len),
            LpStatus::Ok
        );
        assert_eq!(
            lp_filtered_output(f, rep, ptr::null_mut(), output.as_mut_ptr(), len),
            LpStatus::Ok
        );
        lp_filtered_free(f);
    }
    let fp = localphoton::FabryPerot::with_phase(0.6, std::f64::consts::PI, 1.0).unwrap();
    let direct = localphoton::FilteredPulse::new(
        localphoton::SeedParams::from_ratios(2.0, 2.0),
        localphoton::Filter::FabryPerot(fp),
        13,
    )
    .unwrap();
    assert_eq!(
        output,
        direct
            .output(localphoton::Representation::LocalizedState)
            .unwrap()
            .values
    );
    let peak = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    assert!(peak(&output) < peak(&input));
}

#[test]
fn bandgap_rejects_bad_stack() {
    let mut f = ptr::null_mut();
    let s = unsafe { lp_filtered_new_bandgap(12.0, 3.0, 1.0, -2.0, 10, 13, &mut f) };
    assert_eq!(s, LpStatus::InvalidArgument);
    assert!(f.is_null());
}

#[test]
fn fidelity_point() {
    let mut out = LpFidelity::default();
    assert_eq!(unsafe { lp_fidelity(1.0, 2.0, 13, 30, &mut out) }, LpStatus::Ok);
    assert!(out.eta > 0.0 && out.eta < 0.5);
    assert!(out.one_minus_f > 0.0);
    assert!((out.one_minus_f / out.one_minus_f_first_order - 1.0).abs() < 0.2);
    assert!(out.truncation_loss < 1e-10);
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(lp_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
