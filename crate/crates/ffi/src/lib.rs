//! C interface to `localphoton`.
//!
//! Every function returns an [`LpStatus`]. On failure the message is kept per
//! thread and can be read with `lp_last_error`. Objects are opaque handles
//! created by `*_new` functions and released with the matching `*_free`.
//! Traces are copied into caller buffers whose length must equal the handle's
//! sample count.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use localphoton::fields::Representation;
use localphoton::filters::{FabryPerot, Filter, QuarterWaveStack};
use localphoton::pipeline::fidelity_point;
use localphoton::signal::{SeedParams, Trace};
use localphoton::{Error, FilteredPulse, LocalizedPulse};

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Arguments outside the accepted range.
    InvalidArgument = 2,
    /// A computed quantity failed one of its checks.
    Invariant = 3,
    /// A caller buffer has the wrong length.
    BufferSize = 4,
    /// An internal panic was caught at the boundary.
    Panic = 5,
}

/// State whose energy density is requested.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpRepresentation {
    Localized = 0,
    SinglePhoton = 1,
    Truncated = 2,
}

/// Decodes an [`LpRepresentation`] passed as a plain integer, so that an
/// out-of-range value from C is an error rather than an invalid enum.
fn representation(rep: u32) -> Result<Representation, LpStatus> {
    match rep {
        x if x == LpRepresentation::Localized as u32 => Ok(Representation::LocalizedState),
        x if x == LpRepresentation::SinglePhoton as u32 => Ok(Representation::SinglePhoton),
        x if x == LpRepresentation::Truncated as u32 => Ok(Representation::TruncatedApproximation),
        other => Err(fail(
            LpStatus::InvalidArgument,
            format!("unknown representation {other}"),
        )),
    }
}

/// A localized pulse on its own grid.
pub struct LpPulse(LocalizedPulse);

/// A localized pulse together with a filter and its delta train.
pub struct LpFilteredPulse(FilteredPulse);

/// `1 - F` of the localized state, from the truncated Fock model.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LpFidelity {
    pub eta: f64,
    pub one_minus_f: f64,
    pub one_minus_f_first_order: f64,
    pub truncation_loss: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: LpStatus, msg: impl Into<String>) -> LpStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> LpStatus {
    let status = if e.is_validation() {
        LpStatus::InvalidArgument
    } else {
        LpStatus::Invariant
    };
    fail(status, e.to_string())
}

/// Runs `f` with panics turned into [`LpStatus::Panic`] and the last error cleared on success.
fn guard(f: impl FnOnce() -> Result<(), LpStatus>) -> LpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            LpStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(LpStatus::Panic, format!("internal panic: {msg}"))
        }
    }
}

fn check<T>(r: localphoton::Result<T>) -> Result<T, LpStatus> {
    r.map_err(from_error)
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, LpStatus> {
    p.as_ref()
        .ok_or_else(|| fail(LpStatus::NullPointer, format!("{what} is null")))
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), LpStatus> {
    if out.is_null() {
        return Err(fail(LpStatus::NullPointer, "output handle pointer is null"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn seed(omega0_sigma: f64, tau_ratio: f64) -> Result<SeedParams, LpStatus> {
    let s = SeedParams::from_ratios(omega0_sigma, tau_ratio);
    check(s.validate())?;
    Ok(s)
}

fn log2(log2_n: u32) -> Result<u32, LpStatus> {
    if (8..=22).contains(&log2_n) {
        Ok(log2_n)
    } else {
        Err(fail(
            LpStatus::InvalidArgument,
            format!("log2_n must lie in 8..=22, got {log2_n}"),
        ))
    }
}

/// Copies `trace` into `values` and, when non-null, its sample times into `times`.
unsafe fn copy_trace(trace: &Trace, times: *mut f64, values: *mut f64, len: usize) -> Result<(), LpStatus> {
    if values.is_null() {
        return Err(fail(LpStatus::NullPointer, "values buffer is null"));
    }
    let n = trace.values.len();
    if len != n {
        return Err(fail(
            LpStatus::BufferSize,
            format!("buffer holds {len} samples, trace has {n}"),
        ));
    }
    std::slice::from_raw_parts_mut(values, n).copy_from_slice(&trace.values);
    if !times.is_null() {
        let t = std::slice::from_raw_parts_mut(times, n);
        for (k, slot) in t.iter_mut().enumerate() {
            *slot = trace.grid.time(k);
        }
    }
    Ok(())
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn lp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds the localized pulse for a seed given as `omega0 sigma` and `tau / sigma`
/// on a grid of `2^log2_n` samples.
///
/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn lp_pulse_new(
    omega0_sigma: f64,
    tau_ratio: f64,
    log2_n: u32,
    out: *mut *mut LpPulse,
) -> LpStatus {
    guard(|| {
        let pulse = check(LocalizedPulse::standalone(
            seed(omega0_sigma, tau_ratio)?,
            log2(log2_n)?,
        ))?;
        store(out, LpPulse(pulse))
    })
}

/// # Safety
/// `pulse` must come from `lp_pulse_new` and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn lp_pulse_free(pulse: *mut LpPulse) {
    if !pulse.is_null() {
        drop(Box::from_raw(pulse));
    }
}

/// Number of grid samples.
///
/// # Safety
/// `pulse` must be a live handle and `len` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn lp_pulse_len(pulse: *const LpPulse, len: *mut usize) -> LpStatus {
    guard(|| {
        let p = handle(pulse, "pulse")?;
        let len = len.as_mut().ok_or_else(|| fail(LpStatus::NullPointer, "len is null"))?;
        *len = p.0.grid().len();
        Ok(())
    })
}

/// Negative-frequency fraction of the modified seed.
///
/// # Safety
/// `pulse` must be a live handle and `eta` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn lp_pulse_eta(pulse: *const LpPulse, eta: *mut f64) -> LpStatus {
    guard(|| {
        let p = handle(pulse, "pulse")?;
        let eta = eta.as_mut().ok_or_else(|| fail(LpStatus::NullPointer, "eta is null"))?;
        *eta = p.0.eta();
        Ok(())
    })
}

/// Energy density over the grid; `rep` is an `LpRepresentation` value.
///
/// # Safety
/// `pulse` must be a live handle; `values` and, if non-null, `times` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn lp_pulse_energy_density(
    pulse: *const LpPulse,
    rep: u32,
    times: *mut f64,
    values: *mut f64,
    len: usize,
) -> LpStatus {
    guard(|| {
        let p = handle(pulse, "pulse")?;
        copy_trace(&p.0.energy_density(representation(rep)?), times, values, len)
    })
}

/// Seed behind a Fabry-Perot cavity of mirror reflectance `reflectance` whose
/// round-trip phase at the carrier is `phase`.
///
/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn lp_filtered_new_fabry_perot(
    omega0_sigma: f64,
    tau_ratio: f64,
    reflectance: f64,
    phase: f64,
    log2_n: u32,
    out: *mut *mut LpFilteredPulse,
) -> LpStatus {
    guard(|| {
        let s = seed(omega0_sigma, tau_ratio)?;
        let fp = check(FabryPerot::with_phase(reflectance, phase, s.omega0))?;
        let f = check(FilteredPulse::new(s, Filter::FabryPerot(fp), log2(log2_n)?))?;
        store(out, LpFilteredPulse(f))
    })
}

/// Seed behind a quarter-wave stack of `layers` alternating layers with indices `n1`, `n2`.
///
/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn lp_filtered_new_bandgap(
    omega0_sigma: f64,
    tau_ratio: f64,
    n1: f64,
    n2: f64,
    layers: u32,
    log2_n: u32,
    out: *mut *mut LpFilteredPulse,
) -> LpStatus {
    guard(|| {
        let s = seed(omega0_sigma, tau_ratio)?;
        let stack = check(QuarterWaveStack::new(n1, n2, layers, s.omega0))?;
        let f = check(FilteredPulse::new(s, Filter::Bandgap(stack), log2(log2_n)?))?;
        store(out, LpFilteredPulse(f))
    })
}

/// # Safety
/// `filtered` must come from an `lp_filtered_new_*` call and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn lp_filtered_free(filtered: *mut LpFilteredPulse) {
    if !filtered.is_null() {
        drop(Box::from_raw(filtered));
    }
}

/// Number of grid samples.
///
/// # Safety
/// `filtered` must be a live handle and `len` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn lp_filtered_len(filtered: *const LpFilteredPulse, len: *mut usize) -> LpStatus {
    guard(|| {
        let f = handle(filtered, "filtered pulse")?;
        let len = len.as_mut().ok_or_else(|| fail(LpStatus::NullPointer, "len is null"))?;
        *len = f.0.pulse.grid().len();
        Ok(())
    })
}

/// Number of terms in the filter's delta train.
///
/// # Safety
/// `filtered` must be a live handle and `terms` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn lp_filtered_train_terms(filtered: *const LpFilteredPulse, terms: *mut usize) -> LpStatus {
    guard(|| {
        let f = handle(filtered, "filtered pulse")?;
        let terms = terms
            .as_mut()
            .ok_or_else(|| fail(LpStatus::NullPointer, "terms is null"))?;
        *terms = f.0.train.len();
        Ok(())
    })
}

/// Input energy density; `rep` is an `LpRepresentation` value.
///
/// # Safety
/// `filtered` must be a live handle; `values` and, if non-null, `times` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn lp_filtered_input(
    filtered: *const LpFilteredPulse,
    rep: u32,
    times: *mut f64,
    values: *mut f64,
    len: usize,
) -> LpStatus {
    guard(|| {
        let f = handle(filtered, "filtered pulse")?;
        copy_trace(&f.0.input(representation(rep)?), times, values, len)
    })
}

/// Output energy density behind the filter; `rep` is an `LpRepresentation` value.
///
/// # Safety
/// `filtered` must be a live handle; `values` and, if non-null, `times` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn lp_filtered_output(
    filtered: *const LpFilteredPulse,
    rep: u32,
    times: *mut f64,
    values: *mut f64,
    len: usize,
) -> LpStatus {
    guard(|| {
        let f = handle(filtered, "filtered pulse")?;
        let out = check(f.0.output(representation(rep)?))?;
        copy_trace(&out, times, values, len)
    })
}

/// `1 - F` for one seed, using `n_max` Fock levels per mode.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn lp_fidelity(
    omega0_sigma: f64,
    tau_ratio: f64,
    log2_n: u32,
    n_max: usize,
    out: *mut LpFidelity,
) -> LpStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| fail(LpStatus::NullPointer, "out is null"))?;
        let p = check(fidelity_point(seed(omega0_sigma, tau_ratio)?, log2(log2_n)?, n_max))?;
        *out = LpFidelity {
            eta: p.eta,
            one_minus_f: p.one_minus_f,
            one_minus_f_first_order: p.one_minus_f_approx,
            truncation_loss: p.oracle.truncation_loss,
        };
        Ok(())
    })
}
