use std::f64::consts::PI;

use num_complex::Complex64;

use super::fourier::plan;
use super::{forward_fourier, inverse_fourier, SampledSignal};

/// First `x.len()` samples of the linear convolution `sum_j x[j] h[k - j]`.
///
/// Both inputs are read as causal sequences starting at lag zero.
pub fn causal_convolve(x: &[Complex64], h: &[Complex64]) -> Vec<Complex64> {
    let out_len = x.len();
    if out_len == 0 || h.is_empty() {
        return vec![Complex64::new(0.0, 0.0); out_len];
    }
    let h = &h[..h.len().min(out_len)];
    let n = (out_len + h.len()).next_power_of_two();
    let mut a = vec![Complex64::new(0.0, 0.0); n];
    let mut b = vec![Complex64::new(0.0, 0.0); n];
    a[..out_len].copy_from_slice(x);
    b[..h.len()].copy_from_slice(h);
    let fwd = plan(n, false);
    fwd.process(&mut a);
    fwd.process(&mut b);
    for (u, v) in a.iter_mut().zip(&b) {
        *u *= v / n as f64;
    }
    plan(n, true).process(&mut a);
    a.truncate(out_len);
    a
}

/// Riemann-Liouville half-derivative of the `t >= 0` part of `s`, zero for `t < 0`.
///
/// Uses the L1 scheme (piecewise-linear interpolation of the samples), which keeps
/// the result exactly causal. A nonzero value at `t = 0` contributes the jump term
/// `y0 / sqrt(pi t)`; the singular sample at `t = 0` itself is set to zero.
pub fn causal_half_derivative(s: &SampledSignal) -> SampledSignal {
    let m = s.grid.origin();
    let dt = s.grid.dt();
    let y = &s.values[m..];
    let len = y.len();
    let mut out = SampledSignal::zeros(s.grid);
    if len < 2 {
        return out;
    }
    let diffs: Vec<Complex64> = y.windows(2).map(|w| w[1] - w[0]).collect();
    // sqrt(i + 1) - sqrt(i) without cancellation
    let weights: Vec<Complex64> = (0..len - 1)
        .map(|i| {
            let i = i as f64;
            Complex64::new(1.0 / ((i + 1.0).sqrt() + i.sqrt()), 0.0)
        })
        .collect();
    let conv = causal_convolve(&diffs, &weights);
    let scale = 2.0 / (PI.sqrt() * dt.sqrt());
    let y0 = y[0];
    for k in 1..len {
        let jump = y0 / (PI * k as f64 * dt).sqrt();
        out.values[m + k] = conv[k - 1] * scale + jump;
    }
    out
}

/// Projection onto non-negative frequencies, with half weight at `w = 0`.
pub fn positive_frequency_part(s: &SampledSignal) -> SampledSignal {
    let mut spec = forward_fourier(s);
    let z = spec.grid.origin();
    for (j, v) in spec.values.iter_mut().enumerate() {
        if j < z {
            *v = Complex64::new(0.0, 0.0);
        } else if j == z {
            *v *= 0.5;
        }
    }
    inverse_fourier(&spec)
}
