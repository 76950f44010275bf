//! Finite records of one-sided and two-sided real sequences.
//!
//! An infinite sequence is represented by the samples on a contiguous index
//! range; every index outside that range reads as exactly zero.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Samples of a one-sided sequence on `t = last-(L-1) ..= last`.
///
/// Windows built with [`SequenceWindow::new`] end at the origin `t = 0`. The
/// only way to obtain `last < 0` is [`SequenceWindow::shift`], which also may
/// produce the degenerate empty window.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceWindow {
    values: Vec<f64>,
    last: i64,
}

impl SequenceWindow {
    /// Builds a window from values ordered oldest first: `values[0] = x(-(L-1))`,
    /// `values[L-1] = x(0)`.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::ending_at(values, 0)
    }

    /// Builds a window whose newest sample sits at `t = last`.
    pub fn ending_at(values: Vec<f64>, last: i64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("length", "a window needs at least one sample"));
        }
        if last > 0 {
            return Err(Error::invalid("origin", "one-sided windows end at t <= 0"));
        }
        check_finite(&values)?;
        Ok(SequenceWindow { values, last })
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(vec![0.0; len])
    }

    /// Unit impulse at `t = at` (`at <= 0`) in a window of length `len`.
    pub fn impulse(len: usize, at: i64) -> Result<Self> {
        let mut w = Self::zeros(len)?;
        let idx = w
            .index_of(at)
            .ok_or_else(|| Error::invalid("at", format!("t = {at} is outside the window")))?;
        w.values[idx] = 1.0;
        Ok(w)
    }

    /// Builds `x(t) = f(t)` for `t = -(len-1) ..= 0`.
    pub fn from_fn(len: usize, f: impl Fn(i64) -> f64) -> Result<Self> {
        let first = -(len as i64 - 1);
        Self::new((first..=0).map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Only [`shift`](Self::shift) of a length-one window is empty.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn first_t(&self) -> i64 {
        self.last - self.values.len() as i64 + 1
    }

    pub fn last_t(&self) -> i64 {
        self.last
    }

    /// Values, oldest first.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    fn index_of(&self, t: i64) -> Option<usize> {
        if t < self.first_t() || t > self.last {
            None
        } else {
            Some((t - self.first_t()) as usize)
        }
    }

    /// `x(t)`, zero outside the stored range.
    pub fn get(&self, t: i64) -> f64 {
        self.index_of(t).map_or(0.0, |i| self.values[i])
    }

    /// `(s x)(t) = x(t+1)` on `t = first ..= last-1`.
    ///
    /// The result keeps the first index and drops the newest sample from the
    /// range, so a length-one window shifts to the empty window.
    pub fn shift(&self) -> SequenceWindow {
        SequenceWindow {
            values: self.values[1.min(self.values.len())..].to_vec(),
            last: self.last - 1,
        }
    }

    pub fn norm(&self, r: NormOrder) -> f64 {
        norm(&self.values, r)
    }

    /// `alpha * self + beta * other` on a common window ending at 0.
    pub fn combine(&self, alpha: f64, other: &SequenceWindow, beta: f64) -> Result<Self> {
        if self.last != other.last || self.len() != other.len() {
            return Err(Error::invalid("window", "windows must share the index range"));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        Self::ending_at(values, self.last)
    }

    pub(crate) fn with_values_unchecked(values: Vec<f64>) -> Self {
        SequenceWindow { values, last: 0 }
    }
}

/// Samples on the symmetric range `t = -(L-1) ..= L-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSidedWindow {
    values: Vec<f64>,
    half_len: usize,
}

impl TwoSidedWindow {
    /// `values` has length `2L - 1`, ordered from `t = -(L-1)` upwards.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.len().is_multiple_of(2) {
            return Err(Error::invalid(
                "length",
                format!("a two-sided window needs an odd sample count, got {}", values.len()),
            ));
        }
        check_finite(&values)?;
        let half_len = values.len().div_ceil(2);
        Ok(TwoSidedWindow { values, half_len })
    }

    /// The half-length `L`.
    pub fn half_len(&self) -> usize {
        self.half_len
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, t: i64) -> f64 {
        let off = t + self.half_len as i64 - 1;
        if off < 0 || off as usize >= self.values.len() {
            0.0
        } else {
            self.values[off as usize]
        }
    }

    /// Iterator over `(t, x(t))`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let first = -(self.half_len as i64 - 1);
        self.values.iter().enumerate().map(move |(i, &v)| (first + i as i64, v))
    }

    pub fn norm(&self, r: NormOrder) -> f64 {
        norm(&self.values, r)
    }
}

/// The `r` of an `l_r` norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormOrder {
    #[serde(rename = "1")]
    L1,
    #[serde(rename = "2")]
    L2,
    #[serde(rename = "inf")]
    Inf,
}

impl fmt::Display for NormOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormOrder::L1 => "1",
            NormOrder::L2 => "2",
            NormOrder::Inf => "inf",
        })
    }
}

impl FromStr for NormOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(NormOrder::L1),
            "2" => Ok(NormOrder::L2),
            "inf" | "infinity" => Ok(NormOrder::Inf),
            other => Err(Error::invalid("r", format!("expected 1, 2 or inf, got `{other}`"))),
        }
    }
}

/// `l_r` norm of a finite sample slice.
pub fn norm(values: &[f64], r: NormOrder) -> f64 {
    match r {
        NormOrder::L1 => values.iter().map(|v| v.abs()).sum(),
        NormOrder::L2 => {
            // scaled to stay finite for large amplitudes
            let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if scale == 0.0 {
                return 0.0;
            }
            let ss: f64 = values.iter().map(|v| (v / scale) * (v / scale)).sum();
            scale * ss.sqrt()
        }
        NormOrder::Inf => values.iter().fold(0.0f64, |m, v| m.max(v.abs())),
    }
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::invalid(
            "values",
            format!("sample {i} is not finite ({})", values[i]),
        )),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn impulse_norm_is_one_for_every_order() {
        let d = SequenceWindow::impulse(8, 0).unwrap();
        for r in [NormOrder::L1, NormOrder::L2, NormOrder::Inf] {
            assert_eq!(d.norm(r), 1.0);
        }
    }

    #[test]
    fn geometric_l2_norm() {
        // sum_{k>=0} 0.25^k = 4/3
        let w = SequenceWindow::from_fn(64, |t| 0.5f64.powi(t.unsigned_abs() as i32)).unwrap();
        let direct: f64 = (0..64).map(|k| 0.25f64.powi(k)).sum::<f64>().sqrt();
        assert!((w.norm(NormOrder::L2) - direct).abs() < 1e-15);
        assert!((w.norm(NormOrder::L2) - (4.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn sup_norm() {
        let w = SequenceWindow::new(vec![3.0, -4.0, 1.0]).unwrap();
        assert_eq!(w.norm(NormOrder::Inf), 4.0);
    }

    #[test]
    fn shift_of_impulse() {
        let s = SequenceWindow::impulse(5, 0).unwrap().shift();
        assert_eq!(s.last_t(), -1);
        assert_eq!(s.len(), 4);
        assert_eq!(s.get(-1), 1.0);
        assert_eq!(s.get(0), 0.0);
        assert_eq!(s.first_t(), -4);
    }

    #[test]
    fn shift_relabels() {
        let (a, b, c) = (0.25, -1.5, 2.0);
        let s = SequenceWindow::new(vec![a, b, c]).unwrap().shift();
        assert_eq!(s.get(-1), c);
        assert_eq!(s.get(-2), b);
        assert_eq!(s.get(-3), 0.0);
        let z = SequenceWindow::zeros(6).unwrap().shift();
        assert!(z.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn shift_of_single_sample_is_empty() {
        let s = SequenceWindow::new(vec![7.0]).unwrap().shift();
        assert!(s.is_empty());
        assert_eq!(s.norm(NormOrder::L2), 0.0);
    }

    #[test]
    fn rejects_non_finite_and_empty() {
        assert!(SequenceWindow::new(vec![]).is_err());
        assert!(SequenceWindow::new(vec![1.0, f64::NAN]).is_err());
        assert!(SequenceWindow::new(vec![f64::INFINITY]).is_err());
        assert!(TwoSidedWindow::new(vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn two_sided_indexing() {
        let w = TwoSidedWindow::new(vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!(w.half_len(), 3);
        assert_eq!(w.get(-2), 1.0);
        assert_eq!(w.get(0), 3.0);
        assert_eq!(w.get(2), 5.0);
        assert_eq!(w.get(3), 0.0);
        assert_eq!(w.get(-3), 0.0);
    }

    #[test]
    fn norm_order_parse() {
        assert_eq!("inf".parse::<NormOrder>().unwrap(), NormOrder::Inf);
        assert!("3".parse::<NormOrder>().is_err());
    }
}
