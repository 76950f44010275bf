//! The predicting kernel, its causal taps, and one-step convolution prediction.
//!
//! The transfer function is
//!
//! ```text
//! K(z) = z (1 - exp[-gamma / (z + 1 - epsilon)]),   epsilon = gamma^{2 mu / (1 - q)},
//! ```
//!
//! holomorphic outside the disk of radius `|epsilon - 1|`. Its Laurent
//! coefficients at infinity are the causal taps `k(0), k(1), ...`, and the
//! one-step forecast of `x(t + 1)` is `sum_s k(s) x(t - s)`.

pub mod experimental;
mod laurent;
mod sampled;

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seq::{norm, NormOrder, SequenceWindow};

pub use sampled::sampled_taps;

/// Parameters `(gamma, mu, q)` of the transfer function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    gamma: f64,
    mu: f64,
    q: f64,
}

impl KernelSpec {
    /// Largest admissible `gamma / epsilon`, the log of the peak gain on the
    /// unit circle.
    pub const STABILITY_LIMIT: f64 = 690.0;

    pub fn new(gamma: f64, mu: f64, q: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::invalid("gamma", format!("must be positive and finite, got {gamma}")));
        }
        if !(mu.is_finite() && mu > 1.0) {
            return Err(Error::invalid("mu", format!("must exceed 1, got {mu}")));
        }
        if !(q.is_finite() && q > 1.0) {
            return Err(Error::invalid("q", format!("must exceed 1, got {q}")));
        }
        let spec = KernelSpec { gamma, mu, q };
        let eps = spec.epsilon();
        if eps >= 2.0 {
            return Err(Error::NotCausal {
                epsilon: eps,
                pole: eps - 1.0,
            });
        }
        let exponent = spec.stability_exponent();
        if !(exponent <= Self::STABILITY_LIMIT) {
            return Err(Error::KernelOverflow {
                exponent,
                limit: Self::STABILITY_LIMIT,
            });
        }
        Ok(spec)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `epsilon = gamma^{2 mu / (1 - q)}`.
    pub fn epsilon(&self) -> f64 {
        self.gamma.powf(2.0 * self.mu / (1.0 - self.q))
    }

    /// `gamma^{1 + 2 mu / (q - 1)} = gamma / epsilon`.
    pub fn stability_exponent(&self) -> f64 {
        self.gamma.powf(1.0 + 2.0 * self.mu / (self.q - 1.0))
    }

    /// Location `epsilon - 1` of the essential singularity.
    pub fn singularity(&self) -> f64 {
        self.epsilon() - 1.0
    }
}

/// A transfer-function value, or the flag for an exponent beyond range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransferValue {
    Finite(Complex64),
    Overflow,
}

impl TransferValue {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            TransferValue::Finite(v) => Some(v),
            TransferValue::Overflow => None,
        }
    }
}

/// Largest real part of the exponent evaluated before flagging overflow.
const EXPONENT_LIMIT: f64 = 690.0;

/// `e^w - 1` without cancellation for small `|w|`.
fn cexpm1(w: Complex64) -> Complex64 {
    let (a, b) = (w.re, w.im);
    let half = (0.5 * b).sin();
    Complex64::new(a.exp_m1() * b.cos() - 2.0 * half * half, a.exp() * b.sin())
}

/// `K(z)` for `|z| >= 1`.
pub fn transfer_at(z: Complex64, spec: &KernelSpec) -> Result<TransferValue> {
    let modulus = z.norm();
    if !(modulus >= 1.0 - 4.0 * f64::EPSILON) {
        return Err(Error::Domain { modulus });
    }
    let w = -spec.gamma / (z + (1.0 - spec.epsilon()));
    if w.re > EXPONENT_LIMIT {
        return Ok(TransferValue::Overflow);
    }
    Ok(TransferValue::Finite(-z * cexpm1(w)))
}

/// `|e^{i omega} - K(e^{i omega})| = exp(-gamma Re[1 / (e^{i omega} + 1 - epsilon)])`.
///
/// Infinite when the value leaves the `f64` range.
pub fn error_transfer_magnitude(omega: f64, spec: &KernelSpec) -> f64 {
    let re = omega.cos() + 1.0 - spec.epsilon();
    let im = omega.sin();
    (-spec.gamma * re / (re * re + im * im)).exp()
}

/// Causal taps `k(0..=T)` of a kernel.
#[derive(Debug, Clone)]
pub struct PredictorKernel {
    spec: KernelSpec,
    taps: Vec<f64>,
    trunc_tol: f64,
    tail_mass: f64,
    exact: Option<Arc<laurent::ExactTaps>>,
}

/// Tolerance for the reconstruction check performed by [`build_kernel`].
pub const RECONSTRUCTION_LIMIT: f64 = 1e-6;

/// Smallest circle-grid size accepted by [`build_kernel`].
pub const MIN_GRID: usize = 4096;

/// Builds the taps of `spec`, truncated where the trailing absolute sum falls
/// to `trunc_tol`.
///
/// `n` is the circle-grid size, a power of two; at most `n / 2 + 1` taps are
/// produced. The taps come from the exact Laurent recurrence in
/// multiprecision, and the result is checked by re-evaluating the truncated
/// series at fixed points with `|z|` in `{1.1, 2}`.
pub fn build_kernel(spec: &KernelSpec, n: usize, trunc_tol: f64) -> Result<PredictorKernel> {
    if !n.is_power_of_two() || n < MIN_GRID {
        return Err(Error::invalid(
            "n",
            format!("must be a power of two of at least {MIN_GRID}, got {n}"),
        ));
    }
    if !(trunc_tol.is_finite() && trunc_tol > 0.0) {
        return Err(Error::invalid("trunc_tol", format!("must be positive, got {trunc_tol}")));
    }
    // re-validate: a spec may have been deserialized
    let spec = KernelSpec::new(spec.gamma, spec.mu, spec.q)?;
    let expansion = laurent::expand(spec.gamma, spec.epsilon(), trunc_tol * 1e-3, n / 2 + 1)?;

    // T: smallest index whose trailing absolute sum is within trunc_tol
    let mut tail = expansion.beyond;
    let mut len = expansion.rounded.len();
    while len > 1 && tail + expansion.rounded[len - 1].abs() <= trunc_tol {
        tail += expansion.rounded[len - 1].abs();
        len -= 1;
    }
    let mut exact = expansion.exact;
    exact.truncate(len);
    let mut taps = expansion.rounded;
    taps.truncate(len);
    if taps.iter().any(|v| !v.is_finite()) {
        return Err(Error::Reconstruction {
            residual: f64::INFINITY,
            limit: RECONSTRUCTION_LIMIT,
        });
    }

    let kernel = PredictorKernel {
        spec,
        taps,
        trunc_tol,
        tail_mass: tail,
        exact: Some(Arc::new(laurent::ExactTaps {
            bits: expansion.bits,
            taps: exact,
        })),
    };
    let residual = kernel.check_points().iter().try_fold(0.0f64, |worst, &z| {
        let want = transfer_at(z, &spec)?.finite().ok_or(Error::KernelOverflow {
            exponent: spec.stability_exponent(),
            limit: KernelSpec::STABILITY_LIMIT,
        })?;
        Ok::<_, Error>(worst.max((kernel.reconstruct(z) - want).norm() / want.norm()))
    })?;
    if !(residual <= RECONSTRUCTION_LIMIT) {
        return Err(Error::Reconstruction {
            residual,
            limit: RECONSTRUCTION_LIMIT,
        });
    }
    Ok(kernel)
}

impl PredictorKernel {
    /// Wraps externally supplied taps, e.g. read back from an artifact.
    pub fn from_taps(spec: KernelSpec, taps: Vec<f64>, trunc_tol: f64, tail_mass: f64) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::invalid("taps", "a kernel needs at least one tap"));
        }
        if taps.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("taps", "taps must be finite"));
        }
        if !(tail_mass.is_finite() && tail_mass >= 0.0) {
            return Err(Error::invalid("tail_mass", "must be finite and nonnegative"));
        }
        Ok(PredictorKernel {
            spec,
            taps,
            trunc_tol,
            tail_mass,
            exact: None,
        })
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    /// Truncation length `T`; taps are `k(0..=T)`.
    pub fn truncation_len(&self) -> usize {
        self.taps.len() - 1
    }

    pub fn trunc_tol(&self) -> f64 {
        self.trunc_tol
    }

    /// Bound on `sum_{s > T} |k(s)|`.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// Precision of the stored exact taps, if any.
    pub fn working_bits(&self) -> Option<usize> {
        self.exact.as_ref().map(|e| e.bits)
    }

    /// `sum_{s <= T} k(s) z^{-s}`, from the exact taps when available.
    pub fn reconstruct(&self, z: Complex64) -> Complex64 {
        match &self.exact {
            Some(e) => laurent::evaluate(&e.taps, e.bits, z),
            None => {
                let u = z.inv();
                self.taps.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &k| acc * u + k)
            }
        }
    }

    fn check_points(&self) -> Vec<Complex64> {
        [1.1, 2.0]
            .iter()
            .flat_map(|&r| (0..8).map(move |j| Complex64::from_polar(r, 0.3 + j as f64 * std::f64::consts::FRAC_PI_4)))
            .collect()
    }
}

/// One-step forecasts over a window and their errors against the shifted
/// window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRun {
    /// Time of `predictions[0]`.
    pub first_t: i64,
    /// `x_hat(t)`, the forecast of `x(t + 1)`, for `t = first_t ..= 0`.
    pub predictions: Vec<f64>,
    /// `x(t + 1)` for `t = first_t ..= -1`.
    pub targets: Vec<f64>,
    /// `x_hat(0)`, the forecast of the unobserved `x(1)`.
    pub forecast_next: f64,
    pub burn_in: usize,
    pub error_l2: f64,
    pub error_linf: f64,
    #[serde(with = "crate::serde_ext")]
    pub relative_error_l2: f64,
    #[serde(with = "crate::serde_ext")]
    pub relative_error_linf: f64,
}

impl PredictionRun {
    /// `x(t + 1) - x_hat(t)` over the compared range.
    pub fn residuals(&self) -> Vec<f64> {
        self.targets
            .iter()
            .zip(&self.predictions)
            .map(|(y, p)| y - p)
            .collect()
    }

    /// Times of the compared range.
    pub fn compared_times(&self) -> impl Iterator<Item = i64> {
        self.first_t..=-1
    }
}

pub(crate) fn relative(err: f64, base: f64) -> f64 {
    if err == 0.0 {
        0.0
    } else if base == 0.0 {
        f64::INFINITY
    } else {
        err / base
    }
}

/// `sum_{s=0}^{T} k(s) x(t - s)`, zero outside the window.
fn convolve_at(taps: &[f64], w: &SequenceWindow, t: i64) -> f64 {
    taps.iter()
        .enumerate()
        .fold(0.0, |acc, (s, &k)| acc + k * w.get(t - s as i64))
}

/// Forecasts `x(t + 1)` for every `t` past the burn-in `B = T`.
pub fn predict_one_step(w: &SequenceWindow, k: &PredictorKernel) -> Result<PredictionRun> {
    if w.last_t() != 0 || w.is_empty() {
        return Err(Error::invalid("window", "prediction needs a window ending at t = 0"));
    }
    let len = w.len();
    let burn_in = k.truncation_len();
    if burn_in + 2 > len {
        return Err(Error::Size {
            what: "comparison range after burn-in",
            needed: burn_in + 2,
            have: len,
        });
    }
    let first_t = -(len as i64 - 1) + burn_in as i64;
    let predictions: Vec<f64> = (first_t..=0).map(|t| convolve_at(k.taps(), w, t)).collect();
    let targets: Vec<f64> = (first_t..=-1).map(|t| w.get(t + 1)).collect();
    let forecast_next = *predictions.last().expect("nonempty range");

    let residuals: Vec<f64> = targets.iter().zip(&predictions).map(|(y, p)| y - p).collect();
    let error_l2 = norm(&residuals, NormOrder::L2);
    let error_linf = norm(&residuals, NormOrder::Inf);
    Ok(PredictionRun {
        first_t,
        forecast_next,
        burn_in,
        error_l2,
        error_linf,
        relative_error_l2: relative(error_l2, norm(&targets, NormOrder::L2)),
        relative_error_linf: relative(error_linf, norm(&targets, NormOrder::Inf)),
        predictions,
        targets,
    })
}

/// Summary of one kernel in a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub gamma: f64,
    pub epsilon: f64,
    #[serde(rename = "T")]
    pub truncation_len: usize,
    pub tail_mass: f64,
    pub burn_in: usize,
    pub forecast_next: f64,
    pub error_l2: f64,
    pub error_linf: f64,
    #[serde(with = "crate::serde_ext")]
    pub relative_error_l2: f64,
    #[serde(with = "crate::serde_ext")]
    pub relative_error_linf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub mu: f64,
    pub q: f64,
    pub n: usize,
    pub trunc_tol: f64,
    pub entries: Vec<SweepEntry>,
}

/// Builds a kernel and predicts once per `gamma`, in ascending order.
pub fn sweep_gamma(
    w: &SequenceWindow,
    gammas: &[f64],
    mu: f64,
    q: f64,
    n: usize,
    trunc_tol: f64,
) -> Result<SweepReport> {
    if gammas.is_empty() {
        return Err(Error::invalid("gammas", "need at least one value"));
    }
    if gammas.windows(2).any(|p| !(p[0] < p[1])) {
        return Err(Error::invalid("gammas", "values must be strictly ascending"));
    }
    let entries = gammas
        .iter()
        .map(|&gamma| {
            let at = |e: Error| Error::AtGamma {
                gamma,
                source: Box::new(e),
            };
            let spec = KernelSpec::new(gamma, mu, q).map_err(at)?;
            let k = build_kernel(&spec, n, trunc_tol).map_err(at)?;
            let run = predict_one_step(w, &k).map_err(at)?;
            Ok(SweepEntry {
                gamma,
                epsilon: spec.epsilon(),
                truncation_len: k.truncation_len(),
                tail_mass: k.tail_mass(),
                burn_in: run.burn_in,
                forecast_next: run.forecast_next,
                error_l2: run.error_l2,
                error_linf: run.error_linf,
                relative_error_l2: run.relative_error_l2,
                relative_error_linf: run.relative_error_linf,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport {
        mu,
        q,
        n,
        trunc_tol,
        entries,
    })
}
