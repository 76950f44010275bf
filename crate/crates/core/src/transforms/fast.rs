//! FFT evaluation of the grid transforms.
//!
//! Each transform is a length-`2M` DFT of an even or odd extension: the even
//! extension turns `sum_t c_t cos(pi j t / M)` into the real part of a DFT and
//! the odd extension turns the sine sum into minus its imaginary part.

use num_complex::Complex64;
use rustfft::FftPlanner;

fn dft(mut buf: Vec<Complex64>) -> Vec<Complex64> {
    let fft = FftPlanner::new().plan_fft_forward(buf.len());
    fft.process(&mut buf);
    buf
}

/// Buffer of length `2m` with `c` placed at `+lag` and `sign * c` at `-lag`.
fn mirrored(lags: impl Iterator<Item = (usize, f64)>, m: usize, sign: f64) -> Vec<Complex64> {
    let period = 2 * m;
    let mut buf = vec![Complex64::new(0.0, 0.0); period];
    for (lag, v) in lags {
        let r = lag % period;
        buf[r].re += v;
        if lag > 0 {
            buf[(period - r) % period].re += sign * v;
        }
    }
    buf
}

/// `c_0 + 2 sum_{lag>=1} c_lag cos(pi j lag / m)` for `j = 0..=m`.
pub(super) fn cosine_sums(lags: impl Iterator<Item = (usize, f64)>, m: usize) -> Vec<f64> {
    let out = dft(mirrored(lags, m, 1.0));
    out[..=m].iter().map(|z| z.re).collect()
}

/// `2 sum_{lag>=1} c_lag sin(pi j lag / m)` for `j = 0..=m`.
pub(super) fn sine_sums(lags: impl Iterator<Item = (usize, f64)>, m: usize) -> Vec<f64> {
    let out = dft(mirrored(lags, m, -1.0));
    let mut s: Vec<f64> = out[..=m].iter().map(|z| -z.im).collect();
    // sin(0) and sin(pi j) vanish identically
    s[0] = 0.0;
    s[m] = 0.0;
    s
}

fn extended(samples: &[f64], sign: f64) -> Vec<Complex64> {
    let m = samples.len() - 1;
    let mut buf = vec![Complex64::new(0.0, 0.0); 2 * m];
    for (j, &v) in samples.iter().enumerate() {
        buf[j].re = v;
        if j > 0 && j < m {
            buf[2 * m - j].re = sign * v;
        }
    }
    buf
}

/// Trapezoid inverse cosine transform, values indexed by lag `0..len`.
pub(super) fn inverse_cosine(samples: &[f64], len: usize) -> Vec<f64> {
    let m = samples.len() - 1;
    let out = dft(extended(samples, 1.0));
    out[..len].iter().map(|z| z.re / (2 * m) as f64).collect()
}

/// Trapezoid inverse sine transform, values indexed by lag `0..len`.
pub(super) fn inverse_sine(samples: &[f64], len: usize) -> Vec<f64> {
    let m = samples.len() - 1;
    let mut buf = extended(samples, -1.0);
    // endpoints carry sin(0) = sin(pi lag) = 0
    buf[0].re = 0.0;
    buf[m].re = 0.0;
    let out = dft(buf);
    out[..len].iter().map(|z| -z.im / (2 * m) as f64).collect()
}
