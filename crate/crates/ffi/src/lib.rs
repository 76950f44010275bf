//! C ABI over `bandpredict`.
//!
//! Windows and kernels are opaque heap handles released with their `_free`
//! function. Every fallible call returns a [`BpStatus`]; on failure the
//! message is kept per thread and read with [`bp_last_error_message`].
//! Array outputs go into caller-provided buffers whose length is checked.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use num_complex::Complex64;

use bandpredict::bandlimit::{detect, Condition};
use bandpredict::harness::{generate, GeneratorSpec};
use bandpredict::predictor::{build_kernel, predict_one_step, transfer_at, KernelSpec, PredictorKernel, TransferValue};
use bandpredict::seq::SequenceWindow;
use bandpredict::transforms::{
    inv_xi1, inv_xi2, xi1, xi2, ExtensionMode, FrequencyGrid, SpectrumGrid, Xi2Value,
};
use bandpredict::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BpStatus {
    Ok = 0,
    /// A scalar argument is out of range or a buffer has the wrong length.
    InvalidArgument = 1,
    /// Input rejected by validation (degenerate support, non-causal kernel, ...).
    Validation = 2,
    /// Kernel overflow or failed truncation/reconstruction.
    Stability = 3,
    /// Frequency grid too coarse for the window length.
    Resolution = 4,
    /// Window too short for the requested evaluation.
    Size = 5,
    NullPointer = 6,
    /// A Rust panic was caught at the boundary.
    Panic = 7,
}

/// Which condition established band-limitedness.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BpCondition {
    None = 0,
    CosineFlat = 1,
    SineVanishing = 2,
    BothDegenerate = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BpMode {
    Symmetric = 0,
    Antisymmetric = 1,
}

/// Opaque window of samples `x(-(L-1)), ..., x(0)`.
pub struct BpWindow(SequenceWindow);

/// Opaque causal kernel.
pub struct BpKernel(PredictorKernel);

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BpDetectReport {
    pub condition: BpCondition,
    /// NaN when no condition fired.
    pub omega_hat: f64,
    /// -1 when no condition fired.
    pub omega_index: i64,
    pub a_hat: f64,
    pub residual_i: f64,
    pub residual_ii: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BpPredictSummary {
    pub first_t: i64,
    pub burn_in: usize,
    pub forecast_next: f64,
    pub error_l2: f64,
    pub error_linf: f64,
    pub relative_error_l2: f64,
    pub relative_error_linf: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> BpStatus {
    match e {
        Error::InvalidParameter { .. } => BpStatus::InvalidArgument,
        Error::Resolution { .. } => BpStatus::Resolution,
        Error::Size { .. } => BpStatus::Size,
        Error::AtGamma { source, .. } => status_of(source),
        e if e.is_numerical() => BpStatus::Stability,
        _ => BpStatus::Validation,
    }
}

struct Fail(BpStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), format!("{}: {e}", e.reason_code()))
    }
}

fn null(what: &str) -> Fail {
    Fail(BpStatus::NullPointer, format!("`{what}` is null"))
}

fn bad_len(what: &str, want: usize, got: usize) -> Fail {
    Fail(BpStatus::InvalidArgument, format!("`{what}` must hold {want} values, got {got}"))
}

/// Runs `f`, recording any failure or panic.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> BpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            BpStatus::Ok
        }
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            BpStatus::Panic
        }
    }
}

unsafe fn input<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn output<'a>(p: *mut f64, len: usize, want: usize, what: &str) -> Result<&'a mut [f64], Fail> {
    if len != want {
        return Err(bad_len(what, want, len));
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts_mut(p, len))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_box<T>(out: *mut *mut T, v: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(Box::into_raw(Box::new(v)));
    Ok(())
}

/// Copies the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `len`) and returns the full message length without the NUL.
/// Returns 0 when the last call succeeded.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn bp_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        None => {
            if !buf.is_null() && len > 0 {
                *buf = 0;
            }
            0
        }
        Some(msg) => {
            let bytes = msg.as_bytes();
            if !buf.is_null() && len > 0 {
                let n = bytes.len().min(len - 1);
                ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
                *buf.add(n) = 0;
            }
            bytes.len()
        }
    })
}

/// Creates a window from `len` samples, oldest first, ending at time 0.
///
/// # Safety
/// `values` must be valid for `len` reads; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bp_window_new(values: *const f64, len: usize, out: *mut *mut BpWindow) -> BpStatus {
    guard(|| {
        let v = input(values, len, "values")?;
        put_box(out, BpWindow(SequenceWindow::new(v.to_vec())?), "out")
    })
}

/// # Safety
/// `w` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bp_window_free(w: *mut BpWindow) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Number of samples, or 0 for a null handle.
///
/// # Safety
/// `w` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bp_window_len(w: *const BpWindow) -> usize {
    w.as_ref().map_or(0, |w| w.0.len())
}

/// Copies the samples into `out`, which must hold exactly `bp_window_len` values.
///
/// # Safety
/// `w` must be a live handle; `out` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn bp_window_values(w: *const BpWindow, out: *mut f64, len: usize) -> BpStatus {
    guard(|| {
        let w = handle(w, "w")?;
        output(out, len, w.0.len(), "out")?.copy_from_slice(w.0.values());
        Ok(())
    })
}

/// Cosine transform on the grid `j pi / m`; `out` holds `m + 1` values.
///
/// # Safety
/// `w` must be a live handle; `out` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn bp_xi1(w: *const BpWindow, m: usize, out: *mut f64, len: usize) -> BpStatus {
    guard(|| {
        let w = handle(w, "w")?;
        let g = FrequencyGrid::new(m)?;
        let s = xi1(&w.0, g);
        output(out, len, g.node_count(), "out")?.copy_from_slice(s.samples());
        Ok(())
    })
}

/// Sine transform: the tail on the grid into `out` (`m + 1` values) and the
/// scalar component into `scalar`.
///
/// # Safety
/// `w` must be a live handle; `out` must be valid for `len` writes and
/// `scalar` for one.
#[no_mangle]
pub unsafe extern "C" fn bp_xi2(
    w: *const BpWindow,
    m: usize,
    out: *mut f64,
    len: usize,
    scalar: *mut f64,
) -> BpStatus {
    guard(|| {
        let w = handle(w, "w")?;
        let g = FrequencyGrid::new(m)?;
        let v = xi2(&w.0, g);
        output(out, len, g.node_count(), "out")?.copy_from_slice(v.tail.samples());
        put(scalar, v.scalar, "scalar")
    })
}

unsafe fn spectrum(samples: *const f64, count: usize) -> Result<SpectrumGrid, Fail> {
    if count < 3 {
        return Err(bad_len("samples", 3, count));
    }
    let v = input(samples, count, "samples")?;
    Ok(SpectrumGrid::new(FrequencyGrid::new(count - 1)?, v.to_vec())?)
}

/// Recovers a window of `length` samples from `count = m + 1` cosine
/// transform samples.
///
/// # Safety
/// `samples` must be valid for `count` reads; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bp_inv_xi1(
    samples: *const f64,
    count: usize,
    length: usize,
    out: *mut *mut BpWindow,
) -> BpStatus {
    guard(|| {
        let s = spectrum(samples, count)?;
        put_box(out, BpWindow(inv_xi1(&s, length)?), "out")
    })
}

/// Recovers a window from the sine transform tail and its scalar component.
///
/// # Safety
/// `tail` must be valid for `count` reads; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bp_inv_xi2(
    tail: *const f64,
    count: usize,
    scalar: f64,
    length: usize,
    out: *mut *mut BpWindow,
) -> BpStatus {
    guard(|| {
        let tail = spectrum(tail, count)?;
        put_box(out, BpWindow(inv_xi2(&Xi2Value { tail, scalar }, length)?), "out")
    })
}

/// Band-limitedness detection on the grid `j pi / m`.
///
/// # Safety
/// `w` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bp_detect(w: *const BpWindow, m: usize, tol: f64, out: *mut BpDetectReport) -> BpStatus {
    guard(|| {
        let w = handle(w, "w")?;
        let r = detect(&w.0, FrequencyGrid::new(m)?, tol)?;
        let condition = match r.condition {
            Condition::None => BpCondition::None,
            Condition::CosineFlat => BpCondition::CosineFlat,
            Condition::SineVanishing => BpCondition::SineVanishing,
            Condition::BothDegenerate => BpCondition::BothDegenerate,
        };
        let report = BpDetectReport {
            condition,
            omega_hat: r.omega_hat.unwrap_or(f64::NAN),
            omega_index: r.omega_index.map_or(-1, |j| j as i64),
            a_hat: r.a_hat,
            residual_i: r.residual_i,
            residual_ii: r.residual_ii,
        };
        put(out, report, "out")
    })
}

/// Builds the causal taps for `(gamma, mu, q)`; `n` is a power of two of at
/// least 4096 and bounds the tap count by `n / 2 + 1`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bp_kernel_build(
    gamma: f64,
    mu: f64,
    q: f64,
    n: usize,
    trunc_tol: f64,
    out: *mut *mut BpKernel,
) -> BpStatus {
    guard(|| {
        let k = build_kernel(&KernelSpec::new(gamma, mu, q)?, n, trunc_tol)?;
        put_box(out, BpKernel(k), "out")
    })
}

/// # Safety
/// `k` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bp_kernel_free(k: *mut BpKernel) {
    if !k.is_null() {
        drop(Box::from_raw(k));
    }
}

/// Number of taps `T + 1`, or 0 for a null handle.
///
/// # Safety
/// `k` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bp_kernel_len(k: *const BpKernel) -> usize {
    k.as_ref().map_or(0, |k| k.0.taps().len())
}

/// Sum of the absolute values of the dropped taps, or NaN for a null handle.
///
/// # Safety
/// `k` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bp_kernel_tail_mass(k: *const BpKernel) -> f64 {
    k.as_ref().map_or(f64::NAN, |k| k.0.tail_mass())
}

/// Copies the taps `k(0), ..., k(T)` into `out`.
///
/// # Safety
/// `k` must be a live handle; `out` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn bp_kernel_taps(k: *const BpKernel, out: *mut f64, len: usize) -> BpStatus {
    guard(|| {
        let k = handle(k, "k")?;
        output(out, len, k.0.taps().len(), "out")?.copy_from_slice(k.0.taps());
        Ok(())
    })
}

/// Evaluates the transfer function at `z = re + i im`, `|z| >= 1`. When the
/// value exceeds the floating-point range `overflow` is set to 1 and the
/// outputs are NaN.
///
/// # Safety
/// `out_re`, `out_im` and `overflow` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bp_transfer_at(
    gamma: f64,
    mu: f64,
    q: f64,
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
    overflow: *mut i32,
) -> BpStatus {
    guard(|| {
        let spec = KernelSpec::new(gamma, mu, q)?;
        let (v, flag) = match transfer_at(Complex64::new(re, im), &spec)? {
            TransferValue::Finite(v) => (v, 0),
            TransferValue::Overflow => (Complex64::new(f64::NAN, f64::NAN), 1),
        };
        put(out_re, v.re, "out_re")?;
        put(out_im, v.im, "out_im")?;
        put(overflow, flag, "overflow")
    })
}

/// One-step prediction over the window; per-time values stay on the Rust side.
///
/// # Safety
/// `w` and `k` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bp_predict(w: *const BpWindow, k: *const BpKernel, out: *mut BpPredictSummary) -> BpStatus {
    guard(|| {
        let (w, k) = (handle(w, "w")?, handle(k, "k")?);
        let r = predict_one_step(&w.0, &k.0)?;
        let s = BpPredictSummary {
            first_t: r.first_t,
            burn_in: r.burn_in,
            forecast_next: r.forecast_next,
            error_l2: r.error_l2,
            error_linf: r.error_linf,
            relative_error_l2: r.relative_error_l2,
            relative_error_linf: r.relative_error_linf,
        };
        put(out, s, "out")
    })
}

/// Unit-norm raised-cosine band-limited window of bandwidth `omega`,
/// synthesized on the grid `j pi / m`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bp_generate(
    mode: BpMode,
    omega: f64,
    length: usize,
    seed: u64,
    m: usize,
    out: *mut *mut BpWindow,
) -> BpStatus {
    guard(|| {
        let mode = match mode {
            BpMode::Symmetric => ExtensionMode::Symmetric,
            BpMode::Antisymmetric => ExtensionMode::Antisymmetric,
        };
        let spec = GeneratorSpec::band_limited(mode, omega, length, seed);
        put_box(out, BpWindow(generate(&spec, FrequencyGrid::new(m)?)?), "out")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panics_become_a_status() {
        let s = guard(|| panic!("boom"));
        assert_eq!(s, BpStatus::Panic);
        let msg = LAST_ERROR.with(|e| e.borrow().clone()).unwrap();
        assert_eq!(msg.to_str().unwrap(), "panic: boom");
        assert_eq!(guard(|| Ok(())), BpStatus::Ok);
        assert!(LAST_ERROR.with(|e| e.borrow().is_none()));
    }

    #[test]
    fn sweep_errors_keep_the_inner_status() {
        let inner = Error::KernelOverflow { exponent: 700.0, limit: 690.0 };
        let e = Error::AtGamma { gamma: 40.0, source: Box::new(inner) };
        assert_eq!(status_of(&e), BpStatus::Stability);
        assert_eq!(status_of(&Error::DegenerateSupport("x".into())), BpStatus::Validation);
    }
}
