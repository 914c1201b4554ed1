use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{SampledSignal, SpectralFunction};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub(crate) fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

/// `exp(i * sign * 2 pi * (j m mod n) / n)`, reduced before the trig call.
#[inline]
fn twiddle(j: usize, m: usize, n: usize, sign: f64) -> Complex64 {
    let r = ((j as u128 * m as u128) % n as u128) as f64;
    Complex64::from_polar(1.0, sign * 2.0 * PI * r / n as f64)
}

#[inline]
fn parity(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `G(w_j) = (2 pi)^(-1/2) sum_k g(t_k) e^{i w_j t_k} dt`, exact on the paired grids.
pub fn forward_fourier(s: &SampledSignal) -> SpectralFunction {
    let grid = s.grid;
    let n = grid.len();
    let m = grid.origin();
    let mut buf: Vec<Complex64> = s.values.iter().enumerate().map(|(k, &v)| v * parity(k)).collect();
    plan(n, true).process(&mut buf);
    let pre = grid.dt() / (2.0 * PI).sqrt() * parity(m);
    for (j, v) in buf.iter_mut().enumerate() {
        *v *= twiddle(j, m, n, -1.0) * pre;
    }
    SpectralFunction {
        grid: grid.frequency_grid(),
        values: buf,
    }
}

/// `g(t_k) = (2 pi)^(-1/2) sum_j G(w_j) e^{-i w_j t_k} dw`; the exact inverse of
/// [`forward_fourier`].
pub fn inverse_fourier(spec: &SpectralFunction) -> SampledSignal {
    let fgrid = spec.grid;
    let grid = fgrid.time_grid();
    let n = grid.len();
    let m = grid.origin();
    let mut buf: Vec<Complex64> = spec
        .values
        .iter()
        .enumerate()
        .map(|(j, &v)| v * twiddle(j, m, n, 1.0))
        .collect();
    plan(n, false).process(&mut buf);
    let pre = fgrid.dw() / (2.0 * PI).sqrt() * parity(m);
    for (k, v) in buf.iter_mut().enumerate() {
        *v *= pre * parity(k);
    }
    SampledSignal { grid, values: buf }
}
