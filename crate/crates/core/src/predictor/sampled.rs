//! Taps by sampling the transfer function on a circle and inverting with an FFT.
//!
//! Sampling `K` at `N` points of radius `r` aliases coefficient `s` with every
//! `s + jN`; the aliased mass is `sum_{j>=1} |k(s + jN)| r^{-jN}`. This route is
//! only practical while the peak taps stay small (moderate `gamma / epsilon`),
//! and serves as an independent check on the recurrence.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{transfer_at, KernelSpec, TransferValue};
use crate::error::{Error, Result};

/// First `count` taps from `n` samples on the circle of radius `radius >= 1`.
pub fn sampled_taps(spec: &KernelSpec, n: usize, radius: f64, count: usize) -> Result<Vec<f64>> {
    if n < 2 || count > n {
        return Err(Error::invalid("n", "need at least two samples and count <= n"));
    }
    if !(radius >= 1.0 && radius.is_finite()) {
        return Err(Error::invalid("radius", "must be finite and at least 1"));
    }
    let mut buf = Vec::with_capacity(n);
    for j in 0..n {
        let theta = 2.0 * PI * j as f64 / n as f64;
        let z = Complex64::from_polar(radius, theta);
        match transfer_at(z, spec)? {
            TransferValue::Finite(v) => buf.push(v),
            TransferValue::Overflow => {
                return Err(Error::KernelOverflow {
                    exponent: spec.stability_exponent(),
                    limit: KernelSpec::STABILITY_LIMIT,
                })
            }
        }
    }
    // k(s) r^{-s} = (1/N) sum_j K(r e^{i theta_j}) e^{i theta_j s}
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    Ok(buf
        .iter()
        .take(count)
        .enumerate()
        .map(|(s, v)| v.re / n as f64 * radius.powi(s as i32))
        .collect())
}
