//! Cosine and sine transforms of one-sided sequences, their inverses, and the
//! two-sided extensions that connect them to the classical Z-transform.
//!
//! For a one-sided window `x(t)`, `t <= 0`, and `omega` in `[0, pi]`:
//!
//! ```text
//! xi1(omega)  = 2 sum_{t<=-1} cos(omega t) x(t) + x(0)
//! xi2'(omega) = 2 sum_{t<=-1} sin(-omega t) x(t),   xi2'' = x(0)
//! ```
//!
//! Both are sampled on the uniform grid `omega_j = j pi / M`, `j = 0..=M`.
//! The inverses integrate against `cos(omega t)` / `sin(-omega t)` with the
//! composite trapezoid rule on the same grid. A window of length `L` has a
//! transform that is a trigonometric polynomial of degree `L - 1`, so with
//! `M >= 2L` the quadrature is exact up to rounding and the round trip is an
//! identity.

mod fast;
mod table;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seq::{SequenceWindow, TwoSidedWindow};

pub(crate) use table::HalfTurnTable;

/// Uniform grid `omega_j = j pi / M`, `j = 0..=M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrequencyGrid {
    m: usize,
}

impl FrequencyGrid {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Resolution {
                param: "grid",
                required: 2,
                got: m,
            });
        }
        Ok(FrequencyGrid { m })
    }

    /// The number of intervals `M`; the grid has `M + 1` nodes.
    pub fn intervals(&self) -> usize {
        self.m
    }

    pub fn node_count(&self) -> usize {
        self.m + 1
    }

    pub fn step(&self) -> f64 {
        PI / self.m as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        if j == self.m {
            PI
        } else {
            PI * j as f64 / self.m as f64
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.m).map(|j| self.node(j))
    }

    /// Fails unless the grid can resolve a window of length `len`.
    pub fn require_resolves(&self, len: usize) -> Result<()> {
        if self.m < 2 * len {
            return Err(Error::Resolution {
                param: "grid",
                required: 2 * len,
                got: self.m,
            });
        }
        Ok(())
    }
}

/// Real samples of a function on a [`FrequencyGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumGrid {
    grid: FrequencyGrid,
    samples: Vec<f64>,
}

impl SpectrumGrid {
    pub fn new(grid: FrequencyGrid, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.node_count() {
            return Err(Error::invalid(
                "samples",
                format!(
                    "expected {} samples for M = {}, got {}",
                    grid.node_count(),
                    grid.intervals(),
                    samples.len()
                ),
            ));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid("samples", format!("sample {i} is not finite")));
        }
        Ok(SpectrumGrid { grid, samples })
    }

    /// Samples `f(omega_j)` on the grid.
    pub fn from_fn(grid: FrequencyGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.nodes().map(f).collect())
    }

    pub fn grid(&self) -> FrequencyGrid {
        self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn max_abs_diff(&self, other: &SpectrumGrid) -> f64 {
        self.samples
            .iter()
            .zip(&other.samples)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// The pair `(xi2', xi2'')`: a function on `[0, pi]` and a separate scalar.
#[derive(Debug, Clone, PartialEq)]
pub struct Xi2Value {
    pub tail: SpectrumGrid,
    pub scalar: f64,
}

/// Samples of the Z-transform on `N` equispaced unit-circle angles
/// `omega_j = 2 pi j / N`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleSpectrum {
    samples: Vec<Complex64>,
}

impl CircleSpectrum {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Angle of sample `j` in `[0, 2 pi)`.
    pub fn angle(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.samples.len() as f64
    }

    /// Angle of sample `j` folded into `(-pi, pi]`.
    pub fn signed_angle(&self, j: usize) -> f64 {
        let n = self.samples.len();
        if 2 * j <= n {
            self.angle(j)
        } else {
            -2.0 * PI * (n - j) as f64 / n as f64
        }
    }

    /// Largest `|X(e^{-iw}) - conj X(e^{iw})|` over the grid.
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        let n = self.samples.len();
        (0..n)
            .map(|j| (self.samples[(n - j) % n] - self.samples[j].conj()).norm())
            .fold(0.0, f64::max)
    }
}

/// How the future half of a two-sided extension mirrors the past.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionMode {
    /// `x(t) = x(-t)` for `t > 0`; its Z-transform on the circle is `xi1(|omega|)`.
    Symmetric,
    /// `x(t) = -x(-t)` for `t > 0`; its Z-transform is `i xi2'(omega) + xi2''`.
    Antisymmetric,
}

impl std::str::FromStr for ExtensionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symmetric" | "sym" => Ok(ExtensionMode::Symmetric),
            "antisymmetric" | "anti" => Ok(ExtensionMode::Antisymmetric),
            other => Err(Error::invalid(
                "mode",
                format!("expected symmetric or antisymmetric, got `{other}`"),
            )),
        }
    }
}

/// Evaluation strategy for the transforms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TransformMethod {
    /// O(L M) direct summation; the reference.
    Direct,
    /// Length-2M FFT of the even/odd extension.
    Fast,
    /// Direct for small problems, fast otherwise.
    #[default]
    Auto,
}

const AUTO_DIRECT_LIMIT: u64 = 1 << 22;

impl TransformMethod {
    fn resolve(self, len: usize, m: usize) -> TransformMethod {
        match self {
            TransformMethod::Auto if (len as u64) * (m as u64 + 1) <= AUTO_DIRECT_LIMIT => {
                TransformMethod::Direct
            }
            TransformMethod::Auto => TransformMethod::Fast,
            other => other,
        }
    }
}

/// `(lag, value)` pairs `(-t, x(t))` for the stored `t <= 0`.
fn lags(w: &SequenceWindow) -> impl Iterator<Item = (usize, f64)> + '_ {
    let first = w.first_t();
    w.values()
        .iter()
        .enumerate()
        .map(move |(i, &v)| ((-(first + i as i64)) as usize, v))
}

/// Largest lag `-t` present in the window plus one.
fn lag_extent(w: &SequenceWindow) -> usize {
    if w.is_empty() {
        0
    } else {
        (-w.first_t()) as usize + 1
    }
}

/// Cosine transform by direct summation.
pub fn xi1(w: &SequenceWindow, g: FrequencyGrid) -> SpectrumGrid {
    xi1_with(w, g, TransformMethod::Direct)
}

pub fn xi1_with(w: &SequenceWindow, g: FrequencyGrid, method: TransformMethod) -> SpectrumGrid {
    let m = g.intervals();
    let samples = match method.resolve(lag_extent(w), m) {
        TransformMethod::Fast => fast::cosine_sums(lags(w), m),
        _ => {
            let table = HalfTurnTable::new(m);
            (0..=m)
                .map(|j| {
                    lags(w).fold(0.0, |acc, (lag, v)| {
                        let weight = if lag == 0 { 1.0 } else { 2.0 };
                        acc + weight * v * table.cos(table.slot(j as i64 * lag as i64))
                    })
                })
                .collect()
        }
    };
    SpectrumGrid { grid: g, samples }
}

/// Sine transform by direct summation.
pub fn xi2(w: &SequenceWindow, g: FrequencyGrid) -> Xi2Value {
    xi2_with(w, g, TransformMethod::Direct)
}

pub fn xi2_with(w: &SequenceWindow, g: FrequencyGrid, method: TransformMethod) -> Xi2Value {
    let m = g.intervals();
    let samples = match method.resolve(lag_extent(w), m) {
        TransformMethod::Fast => fast::sine_sums(lags(w), m),
        _ => {
            let table = HalfTurnTable::new(m);
            (0..=m)
                .map(|j| {
                    // sin(-omega t) = sin(omega * lag)
                    lags(w).filter(|&(lag, _)| lag > 0).fold(0.0, |acc, (lag, v)| {
                        acc + 2.0 * v * table.sin(table.slot(j as i64 * lag as i64))
                    })
                })
                .collect()
        }
    };
    Xi2Value {
        tail: SpectrumGrid { grid: g, samples },
        scalar: w.get(0),
    }
}

/// Inverse cosine transform onto a window of length `len`.
pub fn inv_xi1(s: &SpectrumGrid, len: usize) -> Result<SequenceWindow> {
    inv_xi1_with(s, len, TransformMethod::Direct)
}

pub fn inv_xi1_with(s: &SpectrumGrid, len: usize, method: TransformMethod) -> Result<SequenceWindow> {
    check_inverse(s.grid, len)?;
    let m = s.grid.intervals();
    let by_lag = match method.resolve(len, m) {
        TransformMethod::Fast => fast::inverse_cosine(&s.samples, len),
        _ => {
            let table = HalfTurnTable::new(m);
            (0..len)
                .map(|lag| {
                    let sum = s.samples.iter().enumerate().fold(0.0, |acc, (j, &v)| {
                        let weight = if j == 0 || j == m { 0.5 } else { 1.0 };
                        acc + weight * v * table.cos(table.slot(j as i64 * lag as i64))
                    });
                    sum / m as f64
                })
                .collect()
        }
    };
    Ok(window_from_lags(by_lag))
}

/// Inverse sine transform; `x(0)` is taken from the scalar component.
pub fn inv_xi2(v: &Xi2Value, len: usize) -> Result<SequenceWindow> {
    inv_xi2_with(v, len, TransformMethod::Direct)
}

pub fn inv_xi2_with(v: &Xi2Value, len: usize, method: TransformMethod) -> Result<SequenceWindow> {
    let grid = v.tail.grid;
    check_inverse(grid, len)?;
    if !v.scalar.is_finite() {
        return Err(Error::invalid("xi2_scalar", "scalar component is not finite"));
    }
    let m = grid.intervals();
    let mut by_lag = match method.resolve(len, m) {
        TransformMethod::Fast => fast::inverse_sine(&v.tail.samples, len),
        _ => {
            let table = HalfTurnTable::new(m);
            (0..len)
                .map(|lag| {
                    let sum = v.tail.samples.iter().enumerate().fold(0.0, |acc, (j, &s)| {
                        let weight = if j == 0 || j == m { 0.5 } else { 1.0 };
                        acc + weight * s * table.sin(table.slot(j as i64 * lag as i64))
                    });
                    sum / m as f64
                })
                .collect::<Vec<_>>()
        }
    };
    by_lag[0] = v.scalar;
    Ok(window_from_lags(by_lag))
}

fn check_inverse(grid: FrequencyGrid, len: usize) -> Result<()> {
    if len == 0 {
        return Err(Error::invalid("length", "window length must be positive"));
    }
    grid.require_resolves(len)
}

fn window_from_lags(mut by_lag: Vec<f64>) -> SequenceWindow {
    by_lag.reverse();
    SequenceWindow::with_values_unchecked(by_lag)
}

/// Two-sided extension of a one-sided window (see [`ExtensionMode`]).
pub fn extend(w: &SequenceWindow, mode: ExtensionMode) -> TwoSidedWindow {
    let half = lag_extent(w).max(1);
    let sign = match mode {
        ExtensionMode::Symmetric => 1.0,
        ExtensionMode::Antisymmetric => -1.0,
    };
    let past = (-(half as i64 - 1)..=0).map(|t| w.get(t));
    let future = (1..half as i64).map(|t| sign * w.get(-t));
    let values: Vec<f64> = past.chain(future).collect();
    TwoSidedWindow::new(values).expect("extension of a valid window is valid")
}

/// `X(e^{i omega_j}) = sum_t x(t) e^{-i omega_j t}` on `N` angles.
pub fn circle_spectrum(w: &TwoSidedWindow, n: usize) -> Result<CircleSpectrum> {
    let support = 2 * w.half_len() - 1;
    if n < 2 * support {
        return Err(Error::Resolution {
            param: "n",
            required: 2 * support,
            got: n,
        });
    }
    // angle 2 pi j t / N = pi (2 j t) / N on a half-turn table of size N
    let table = HalfTurnTable::new(n);
    let samples = (0..n)
        .map(|j| {
            w.iter().fold(Complex64::new(0.0, 0.0), |acc, (t, v)| {
                let slot = table.slot(2 * j as i64 * t);
                acc + Complex64::new(v * table.cos(slot), -v * table.sin(slot))
            })
        })
        .collect();
    Ok(CircleSpectrum { samples })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(m: usize) -> FrequencyGrid {
        FrequencyGrid::new(m).unwrap()
    }

    fn geometric(len: usize, r: f64) -> SequenceWindow {
        SequenceWindow::from_fn(len, |t| r.powi(t.unsigned_abs() as i32)).unwrap()
    }

    #[test]
    fn grid_rejects_tiny_m() {
        assert!(FrequencyGrid::new(1).is_err());
        let g = grid(4);
        assert_eq!(g.node(0), 0.0);
        assert_eq!(g.node(4), PI);
        assert_eq!(g.node_count(), 5);
    }

    #[test]
    fn xi1_of_origin_impulse_is_one() {
        let s = xi1(&SequenceWindow::impulse(4, 0).unwrap(), grid(16));
        assert!(s.samples().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn xi1_of_lag_one_impulse_is_two_cos() {
        let g = grid(32);
        let s = xi1(&SequenceWindow::impulse(4, -1).unwrap(), g);
        for (w, v) in g.nodes().zip(s.samples()) {
            assert!((v - 2.0 * w.cos()).abs() < 1e-15);
        }
    }

    #[test]
    fn xi1_geometric_closed_form() {
        let r: f64 = 0.5;
        let g = grid(1024);
        let s = xi1(&geometric(256, r), g);
        let err = g
            .nodes()
            .zip(s.samples())
            .map(|(w, v)| (v - (1.0 - r * r) / (1.0 - 2.0 * r * w.cos() + r * r)).abs())
            .fold(0.0, f64::max);
        assert!(err <= 1e-10, "{err}");
        assert!((s.samples()[0] - 3.0).abs() < 1e-12);
        assert!((s.samples()[1024] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn xi2_basic_cases() {
        let g = grid(32);
        let d0 = xi2(&SequenceWindow::impulse(4, 0).unwrap(), g);
        assert!(d0.tail.samples().iter().all(|&v| v == 0.0));
        assert_eq!(d0.scalar, 1.0);
        let d1 = xi2(&SequenceWindow::impulse(4, -1).unwrap(), g);
        assert_eq!(d1.scalar, 0.0);
        for (w, v) in g.nodes().zip(d1.tail.samples()) {
            assert!((v - 2.0 * w.sin()).abs() < 1e-15);
        }
        // exact zero at pi
        assert_eq!(d1.tail.samples()[32], 0.0);
    }

    #[test]
    fn xi2_geometric_at_quarter_turn() {
        let g = grid(1024);
        let v = xi2(&geometric(256, 0.5), g);
        assert!((v.tail.samples()[512] - 0.8).abs() < 1e-12);
    }

    #[test]
    fn inverse_of_constant_is_origin_impulse() {
        let g = grid(16);
        let s = SpectrumGrid::from_fn(g, |_| 1.0).unwrap();
        let w = inv_xi1(&s, 8).unwrap();
        assert!((w.get(0) - 1.0).abs() < 1e-15);
        for t in -7..0 {
            assert!(w.get(t).abs() < 1e-15);
        }
        let s = SpectrumGrid::from_fn(g, |w| 2.0 * w.cos()).unwrap();
        let w = inv_xi1(&s, 8).unwrap();
        assert!((w.get(-1) - 1.0).abs() < 1e-15);
        assert!(w.get(0).abs() < 1e-15);
    }

    #[test]
    fn inverse_sine_basic_cases() {
        let g = grid(16);
        let zero = Xi2Value {
            tail: SpectrumGrid::from_fn(g, |_| 0.0).unwrap(),
            scalar: 1.0,
        };
        assert_eq!(inv_xi2(&zero, 8).unwrap(), SequenceWindow::impulse(8, 0).unwrap());
        let sine = Xi2Value {
            tail: SpectrumGrid::from_fn(g, |w| 2.0 * w.sin()).unwrap(),
            scalar: 0.0,
        };
        let w = inv_xi2(&sine, 8).unwrap();
        assert!((w.get(-1) - 1.0).abs() < 1e-15);
        for t in [-7, -5, -2, 0] {
            assert!(w.get(t).abs() < 1e-15);
        }
    }

    #[test]
    fn inverse_requires_resolution() {
        let s = SpectrumGrid::from_fn(grid(15), |_| 1.0).unwrap();
        match inv_xi1(&s, 8) {
            Err(Error::Resolution { required, got, .. }) => {
                assert_eq!(required, 16);
                assert_eq!(got, 15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn extensions_of_lag_one_impulse() {
        let d = SequenceWindow::impulse(3, -1).unwrap();
        let s = extend(&d, ExtensionMode::Symmetric);
        assert_eq!((s.get(-1), s.get(1), s.get(0)), (1.0, 1.0, 0.0));
        let a = extend(&d, ExtensionMode::Antisymmetric);
        assert_eq!((a.get(-1), a.get(1)), (1.0, -1.0));
    }

    #[test]
    fn circle_spectrum_basic_cases() {
        let d0 = extend(&SequenceWindow::impulse(2, 0).unwrap(), ExtensionMode::Symmetric);
        let c = circle_spectrum(&d0, 8).unwrap();
        assert!(c.samples().iter().all(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-15));

        let sym = extend(&SequenceWindow::impulse(2, -1).unwrap(), ExtensionMode::Symmetric);
        let c = circle_spectrum(&sym, 16).unwrap();
        for (j, z) in c.samples().iter().enumerate() {
            assert!((z.re - 2.0 * c.angle(j).cos()).abs() < 1e-14);
            assert!(z.im.abs() < 1e-15);
        }
        assert!(circle_spectrum(&sym, 5).is_err());
    }

    #[test]
    fn antisymmetric_extension_matches_sine_transform() {
        let d = SequenceWindow::impulse(2, -1).unwrap();
        let m = 8;
        let v = xi2(&d, grid(m));
        let c = circle_spectrum(&extend(&d, ExtensionMode::Antisymmetric), 2 * m).unwrap();
        for j in 0..=m {
            let want = Complex64::new(v.scalar, v.tail.samples()[j]);
            assert!((c.samples()[j] - want).norm() < 1e-15);
        }
    }

    #[test]
    fn fast_path_matches_direct() {
        let w = SequenceWindow::from_fn(300, |t| ((t * 37 % 11) as f64 - 5.0) * 0.9f64.powi(-t as i32))
            .unwrap();
        for m in [600usize, 601, 1024] {
            let g = grid(m);
            let a = xi1_with(&w, g, TransformMethod::Direct);
            let b = xi1_with(&w, g, TransformMethod::Fast);
            assert!(a.max_abs_diff(&b) < 1e-13);
            let a = xi2_with(&w, g, TransformMethod::Direct);
            let b = xi2_with(&w, g, TransformMethod::Fast);
            assert!(a.tail.max_abs_diff(&b.tail) < 1e-13);
            let ia = inv_xi1_with(&a.tail, 300, TransformMethod::Direct).unwrap();
            let ib = inv_xi1_with(&a.tail, 300, TransformMethod::Fast).unwrap();
            let d = ia.combine(1.0, &ib, -1.0).unwrap();
            assert!(d.norm(crate::seq::NormOrder::Inf) < 1e-13);
            let ia = inv_xi2_with(&a, 300, TransformMethod::Direct).unwrap();
            let ib = inv_xi2_with(&a, 300, TransformMethod::Fast).unwrap();
            let d = ia.combine(1.0, &ib, -1.0).unwrap();
            assert!(d.norm(crate::seq::NormOrder::Inf) < 1e-13);
        }
    }

    #[test]
    fn shifted_window_transforms_with_zero_origin() {
        let w = SequenceWindow::new(vec![1.0, 2.0, 3.0]).unwrap().shift();
        let g = grid(8);
        let s = xi1(&w, g);
        let expected = xi1(&SequenceWindow::new(vec![0.0, 2.0, 3.0, 0.0]).unwrap(), g);
        assert!(s.max_abs_diff(&expected) < 1e-15);
    }
}
