//! Output energy density behind a filter, from the input two-time kernel.
//!
//! `out(t) = \int\int kappa(s1) kappa(s2) K(t - s1, t - s2) ds1 ds2`, evaluated
//! either as a double sum over a delta train or as causal convolutions of the
//! separable kernel terms with a sampled impulse response.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::TwoTimeKernel;
use crate::filters::{DeltaTrain, LinearFilter};
use crate::signal::{causal_convolve, inverse_fourier, SampledSignal, TimeGrid, Trace};

/// Fraction of the peak that marks a leading edge.
pub const LEADING_EDGE_FRACTION: f64 = 1e-4;

fn train_steps(grid: &TimeGrid, train: &DeltaTrain) -> Result<Vec<isize>> {
    if train.duration() > grid.t_max() {
        return Err(Error::GridTooShort {
            required_min: grid.t_min(),
            required_max: grid.t_max() + train.duration(),
            grid_min: grid.t_min(),
            grid_max: grid.t_max(),
        });
    }
    train
        .delays()
        .iter()
        .map(|&d| grid.steps(d).map(|s| s as isize))
        .collect()
}

/// `out(t) = sum_n sum_m c_n c_m K(t - tau_n, t - tau_m)`, using the kernel's
/// symmetry to visit each unordered pair once.
pub fn propagate_delta_train(kernel: &TwoTimeKernel, train: &DeltaTrain) -> Result<Trace> {
    let grid = kernel.grid();
    let steps = train_steps(&grid, train)?;
    let c = train.coeffs();
    let terms = kernel.terms();
    let k_len = c.len();
    let mut u = vec![vec![Complex64::new(0.0, 0.0); k_len]; terms.len()];
    let mut v = u.clone();
    let mut out = Trace::zeros(grid);
    for k in 0..grid.len() {
        for (r, term) in terms.iter().enumerate() {
            for (n, &s) in steps.iter().enumerate() {
                let i = k as isize - s;
                u[r][n] = term.u.get(i) * term.weight;
                v[r][n] = term.v.get(i);
            }
        }
        let mut acc = 0.0;
        for n in 0..k_len {
            let mut diag = 0.0;
            for r in 0..terms.len() {
                diag += (u[r][n] * v[r][n]).re;
            }
            acc += c[n] * c[n] * diag;
            for m in n + 1..k_len {
                let mut pair = 0.0;
                for r in 0..terms.len() {
                    // K(i_n, i_m) + K(i_m, i_n) = 2 K(i_n, i_m)
                    pair += (u[r][n] * v[r][m]).re + (u[r][m] * v[r][n]).re;
                }
                acc += c[n] * c[m] * pair;
            }
        }
        out.values[k] = acc;
    }
    Ok(out)
}

/// Window extension used when sampling an impulse response, so that the
/// periodic images of a long tail land far from the primary grid.
const IMPULSE_WINDOW_FACTOR: usize = 4;

/// Impulse response `kappa(t) = (1/2 pi) \int kappa(w) e^{-i w t} dw` on `grid`,
/// optionally zeroed beyond `max_delay`.
pub fn sample_impulse_response(
    filter: &dyn LinearFilter,
    grid: TimeGrid,
    max_delay: Option<f64>,
) -> Result<SampledSignal> {
    let wide = TimeGrid::new(grid.dt(), grid.len() * IMPULSE_WINDOW_FACTOR, grid.origin())?;
    let spec = filter.kappa_spectrum(wide.frequency_grid());
    let full = inverse_fourier(&spec);
    let scale = (2.0 * PI).sqrt().recip();
    let last = max_delay.map_or(f64::INFINITY, |d| grid.origin() as f64 + d / grid.dt() + 1e-6);
    let values = full.values[..grid.len()]
        .iter()
        .enumerate()
        .map(|(k, v)| {
            if k as f64 > last {
                Complex64::new(0.0, 0.0)
            } else {
                v * scale
            }
        })
        .collect();
    SampledSignal::new(grid, values)
}

/// Discretized delta train: `c_n / dt` at the sample of each delay.
pub fn train_impulse_response(train: &DeltaTrain, grid: TimeGrid) -> Result<SampledSignal> {
    let steps = train_steps(&grid, train)?;
    let mut h = SampledSignal::zeros(grid);
    for (&s, &c) in steps.iter().zip(train.coeffs()) {
        h.values[grid.origin() + s as usize] += Complex64::new(c / grid.dt(), 0.0);
    }
    Ok(h)
}

/// Output energy density by causal convolution of each separable kernel term
/// with a real, causal impulse response.
pub fn propagate_convolution(kernel: &TwoTimeKernel, kappa_t: &SampledSignal) -> Result<Trace> {
    let grid = kernel.grid();
    if kappa_t.grid != grid {
        return Err(Error::GridMismatch("impulse response and kernel grids differ".into()));
    }
    let peak = kappa_t.max_abs();
    if !(peak > 0.0) {
        return Err(Error::ZeroNorm);
    }
    let leak = kappa_t.max_abs_before_zero() / peak;
    if leak > 1e-8 {
        return Err(Error::Acausal {
            what: "impulse response",
            relative: leak,
            tolerance: 1e-8,
        });
    }
    let imag = kappa_t.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max) / peak;
    if imag > 1e-8 {
        return Err(Error::Invariant(format!(
            "impulse response is not real (relative imaginary part {imag:e})"
        )));
    }
    let dt = grid.dt();
    let h: Vec<Complex64> = kappa_t.values[grid.origin()..]
        .iter()
        .map(|v| Complex64::new(v.re * dt, 0.0))
        .collect();
    let mut out = Trace::zeros(grid);
    for term in kernel.terms() {
        let cu = causal_convolve(&term.u.values, &h);
        let cv = causal_convolve(&term.v.values, &h);
        for (o, (a, b)) in out.values.iter_mut().zip(cu.iter().zip(&cv)) {
            *o += (a * b).re * term.weight;
        }
    }
    Ok(out)
}

/// `2 |sum_n c_n E(t - tau_n)|^2`: the single-photon output in factorized form.
pub fn single_photon_output(e1: &SampledSignal, train: &DeltaTrain) -> Result<Trace> {
    let grid = e1.grid;
    let steps = train_steps(&grid, train)?;
    let mut out = Trace::zeros(grid);
    for k in 0..grid.len() {
        let f: Complex64 = steps
            .iter()
            .zip(train.coeffs())
            .map(|(&s, &c)| e1.get(k as isize - s) * c)
            .sum();
        out.values[k] = 2.0 * f.norm_sqr();
    }
    Ok(out)
}

/// First time the trace exceeds [`LEADING_EDGE_FRACTION`] of its peak.
pub fn leading_edge(trace: &Trace) -> Option<f64> {
    trace.leading_edge(LEADING_EDGE_FRACTION)
}

/// Largest absolute difference relative to the larger of the two peaks.
pub fn relative_difference(a: &Trace, b: &Trace) -> Result<f64> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch("traces live on different grids".into()));
    }
    let scale = a.max_abs().max(b.max_abs());
    let diff = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    Ok(if scale > 0.0 { diff / scale } else { diff })
}
