//! Laurent taps of `K(z) = z (1 - exp(-gamma / (z + rho)))`, `rho = 1 - epsilon`.
//!
//! With `u = 1/z` the exponential is the generating function of generalized
//! Laguerre polynomials, which gives the three-term recurrence
//!
//! ```text
//! a_0 = 1,  a_1 = gamma,
//! (n + 1) a_{n+1} = (2 rho n + gamma) a_n - rho^2 (n - 1) a_{n-1},
//! ```
//!
//! and the taps `k(s) = (-1)^s a_{s+1}`. The taps rise to roughly
//! `exp(gamma / epsilon)` before decaying like `|rho|^s`, so evaluating the
//! series near the unit circle cancels many digits. The recurrence therefore
//! runs in multiprecision and the exact taps are kept for reconstruction.

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) type F = FBig<HalfEven>;

fn lift(x: f64, bits: usize) -> F {
    F::try_from(x)
        .expect("finite value")
        .with_precision(bits)
        .value()
}

fn to_f64(x: &F) -> f64 {
    x.to_f64().value()
}

/// Working precision for a kernel whose peak tap is near `exp(peak_log)`.
pub(crate) fn precision_for(peak_log: f64) -> usize {
    128 + (1.5 * std::f64::consts::LOG2_E * peak_log.max(0.0)).ceil() as usize
}

/// Multiprecision taps with their rounded copies.
#[derive(Debug)]
pub(crate) struct ExactTaps {
    pub(crate) bits: usize,
    pub(crate) taps: Vec<F>,
}

pub(crate) struct Expansion {
    pub(crate) exact: Vec<F>,
    pub(crate) rounded: Vec<f64>,
    /// Bound on `sum_{s >= len} |k(s)|`.
    pub(crate) beyond: f64,
    pub(crate) bits: usize,
}

/// Runs the recurrence until the remaining taps are provably below
/// `stop_mass`, or fails once `horizon` taps have been produced.
pub(crate) fn expand(gamma: f64, epsilon: f64, stop_mass: f64, horizon: usize) -> Result<Expansion> {
    let bits = precision_for(gamma / epsilon);
    let rho = lift(1.0 - epsilon, bits);
    let rho2 = &rho * &rho;
    let two_rho = &rho + &rho;
    let g = lift(gamma, bits);

    let mut exact = Vec::new();
    let mut rounded = Vec::new();
    let (mut prev, mut cur) = (F::ONE.with_precision(bits).value(), g.clone());
    // sign of k(s) = (-1)^s a_{s+1}
    let mut negate = false;
    let mut recent_ratio = [f64::INFINITY; 8];
    let mut n = 1u64;
    loop {
        let tap = if negate { -cur.clone() } else { cur.clone() };
        let tap_f = to_f64(&tap);
        exact.push(tap);
        rounded.push(tap_f);
        if rounded.len() > horizon {
            return Err(Error::TruncationHorizon { horizon });
        }

        let next = ((&two_rho * F::from(n) + &g) * &cur - &rho2 * F::from(n - 1) * &prev) / F::from(n + 1);
        let (a, b) = (to_f64(&cur).abs(), to_f64(&next).abs());
        let ratio = if a > 0.0 { b / a } else if b == 0.0 { 0.0 } else { f64::INFINITY };
        recent_ratio[(n as usize) % recent_ratio.len()] = ratio;
        prev = cur;
        cur = next;
        negate = !negate;
        n += 1;

        // past the peak with a contracting ratio: bound the rest geometrically
        let r = recent_ratio.iter().cloned().fold(0.0, f64::max);
        if r < 1.0 {
            let beyond = b / (1.0 - r);
            if beyond <= stop_mass {
                return Ok(Expansion {
                    exact,
                    rounded,
                    beyond,
                    bits,
                });
            }
        }
    }
}

/// `sum_s k(s) z^{-s}` evaluated by Horner in multiprecision.
pub(crate) fn evaluate(taps: &[F], bits: usize, z: Complex64) -> Complex64 {
    // 1/z from the exact binary value of z, not from a rounded f64 reciprocal
    let (zr, zi) = (lift(z.re, bits), lift(z.im, bits));
    let n2 = &zr * &zr + &zi * &zi;
    let (ur, ui) = (&zr / &n2, -(&zi / &n2));
    let mut re = F::ZERO.with_precision(bits).value();
    let mut im = F::ZERO.with_precision(bits).value();
    for tap in taps.iter().rev() {
        let nr = &re * &ur - &im * &ui + tap;
        let ni = &re * &ui + &im * &ur;
        re = nr;
        im = ni;
    }
    Complex64::new(to_f64(&re), to_f64(&im))
}
