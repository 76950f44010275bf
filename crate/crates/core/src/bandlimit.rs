//! Detection of causal band-limitedness and decay-class scoring.
//!
//! A one-sided window is causally band-limited when some future extension has
//! a Z-transform vanishing beyond a bandwidth `Omega`. Two sufficient
//! conditions are checked on the grid: the cosine transform is constant on a
//! tail `(Omega, pi]` (the symmetric extension is then band-limited once the
//! constant is absorbed at `t = 0`), or the sine transform vanishes there (the
//! antisymmetric extension is band-limited).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seq::SequenceWindow;
use crate::transforms::{xi1_with, xi2_with, FrequencyGrid, SpectrumGrid, TransformMethod};

/// Parameters `(c, q)` of the spectral-tail weight `h(omega, c)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightProfile {
    c: f64,
    q: f64,
}

impl WeightProfile {
    pub fn new(c: f64, q: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::invalid("c", format!("must be positive and finite, got {c}")));
        }
        if !(q.is_finite() && q > 1.0) {
            return Err(Error::invalid("q", format!("must exceed 1, got {q}")));
        }
        Ok(WeightProfile { c, q })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `ln h` at an angle given by its distance `pi - omega` from the band edge.
    fn ln_from_edge(&self, gap: f64) -> f64 {
        // (cos w + 1)^2 + sin^2 w = (2 cos(w/2))^2 = (2 sin(gap/2))^2
        let base = 2.0 * (0.5 * gap).sin();
        if base <= 0.0 {
            return f64::INFINITY;
        }
        self.c / base.powf(self.q)
    }
}

/// `h(omega, c) = exp(c / [(cos omega + 1)^2 + sin^2 omega]^{q/2})`.
///
/// Infinite at `omega = pi` and wherever the value exceeds the `f64` range.
pub fn weight_h(omega: f64, p: WeightProfile) -> f64 {
    ln_weight_h(omega, p).exp()
}

/// Natural logarithm of [`weight_h`], finite wherever `omega < pi`.
pub fn ln_weight_h(omega: f64, p: WeightProfile) -> f64 {
    p.ln_from_edge(PI - omega)
}

fn ln_weight_on_grid(g: FrequencyGrid, p: WeightProfile) -> Vec<f64> {
    let m = g.intervals();
    (0..=m)
        .map(|j| p.ln_from_edge(PI * (m - j) as f64 / m as f64))
        .collect()
}

/// Which sufficient condition established band-limitedness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// The cosine transform is constant on the tail.
    CosineFlat,
    /// The sine transform vanishes on the tail.
    SineVanishing,
    /// Both hold; only the zero window reaches this.
    BothDegenerate,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub condition: Condition,
    /// Estimated bandwidth; absent when no condition fired.
    pub omega_hat: Option<f64>,
    /// Grid index of `omega_hat`.
    pub omega_index: Option<usize>,
    /// Tail offset. For the cosine condition it is the constant value of the
    /// tail; for the sine condition it is `x(0)`, the value the antisymmetric
    /// extension's spectrum takes beyond the band.
    pub a_hat: f64,
    /// `max |xi1 - a_hat|` over the reported tail.
    pub residual_i: f64,
    /// `max |xi2'|` over the reported tail.
    pub residual_ii: f64,
    /// Bandwidth the cosine condition alone would give.
    pub omega_cosine: Option<f64>,
    /// Bandwidth the sine condition alone would give.
    pub omega_sine: Option<f64>,
    pub tol: f64,
}

impl DetectionReport {
    pub fn is_band_limited(&self) -> bool {
        self.condition != Condition::None
    }
}

/// Knobs for [`detect_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectOptions {
    pub tol: f64,
    /// A tail narrower than this never counts: every transform is trivially
    /// constant on a single node, and the sine transform vanishes at `pi`.
    pub min_tail_width: f64,
    pub method: TransformMethod,
}

impl DetectOptions {
    pub const DEFAULT_MIN_TAIL_WIDTH: f64 = PI / 64.0;

    pub fn new(tol: f64) -> Self {
        DetectOptions {
            tol,
            min_tail_width: Self::DEFAULT_MIN_TAIL_WIDTH,
            method: TransformMethod::Auto,
        }
    }
}

/// Detects band-limitedness at tolerance `tol` with default options.
pub fn detect(w: &SequenceWindow, g: FrequencyGrid, tol: f64) -> Result<DetectionReport> {
    detect_with(w, g, DetectOptions::new(tol))
}

/// A passing tail `j* ..= M` and the statistics it was accepted with.
struct Tail {
    start: usize,
    offset: f64,
}

/// Longest tail on which `|xi2'| <= tol`, grown from `pi` downward.
fn sine_tail(s: &[f64], tol: f64) -> usize {
    let mut start = s.len() - 1;
    if s[start].abs() > tol {
        return s.len();
    }
    while start > 0 && s[start - 1].abs() <= tol {
        start -= 1;
    }
    start
}

/// Longest tail on which `xi1` stays within `tol` of its mean, grown from `pi`
/// downward and stopped at the first node that breaks it. The accepted offset
/// is the midrange, which minimises the sup deviation on the tail.
fn cosine_tail(s: &[f64], tol: f64) -> Tail {
    let m = s.len() - 1;
    let (mut sum, mut lo, mut hi) = (s[m], s[m], s[m]);
    let mut start = m;
    while start > 0 {
        let v = s[start - 1];
        let (n_sum, n_lo, n_hi) = (sum + v, lo.min(v), hi.max(v));
        let mean = n_sum / (m - start + 2) as f64;
        if (n_hi - mean).max(mean - n_lo) > tol {
            break;
        }
        (sum, lo, hi) = (n_sum, n_lo, n_hi);
        start -= 1;
    }
    Tail {
        start,
        offset: 0.5 * (lo + hi),
    }
}

fn max_dev(s: &[f64], a: f64) -> f64 {
    s.iter().fold(0.0, |m, v| m.max((v - a).abs()))
}

fn midrange(s: &[f64]) -> f64 {
    let (lo, hi) = s
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    0.5 * (lo + hi)
}

pub fn detect_with(w: &SequenceWindow, g: FrequencyGrid, opts: DetectOptions) -> Result<DetectionReport> {
    if !(opts.tol.is_finite() && opts.tol > 0.0) {
        return Err(Error::invalid("tol", format!("must be positive, got {}", opts.tol)));
    }
    if !(opts.min_tail_width >= 0.0 && opts.min_tail_width < PI) {
        return Err(Error::invalid("min_tail_width", "must lie in [0, pi)"));
    }
    g.require_resolves(w.len().max(1))?;
    let m = g.intervals();
    let c = xi1_with(w, g, opts.method);
    let sv = xi2_with(w, g, opts.method);
    let (c, s) = (c.samples(), sv.tail.samples());

    // a tail starting at node j has width (M - j) pi / M
    let min_nodes = (opts.min_tail_width * m as f64 / PI - 1e-9).ceil().max(1.0) as usize;
    let wide_enough = |start: usize| start <= m && m - start >= min_nodes;
    let omega_of = |start: usize| g.node(start.saturating_sub(1));

    let cos_tail = cosine_tail(c, opts.tol);
    let sin_start = sine_tail(s, opts.tol);
    let cos_fires = wide_enough(cos_tail.start);
    let sin_fires = wide_enough(sin_start);
    let omega_cosine = cos_fires.then(|| omega_of(cos_tail.start));
    let omega_sine = sin_fires.then(|| omega_of(sin_start));

    let x0 = sv.scalar;
    let report = |condition, start: usize, a_hat: f64, with_omega: bool| DetectionReport {
        condition,
        omega_hat: with_omega.then(|| omega_of(start)),
        omega_index: with_omega.then(|| start.saturating_sub(1)),
        a_hat,
        residual_i: max_dev(&c[start..], a_hat),
        residual_ii: max_dev(&s[start..], 0.0),
        omega_cosine,
        omega_sine,
        tol: opts.tol,
    };

    let out = match (cos_fires, sin_fires) {
        (true, true) if w.values().iter().all(|&v| v == 0.0) => {
            report(Condition::BothDegenerate, 0, 0.0, true)
        }
        (true, true) => {
            let by_cos = report(Condition::CosineFlat, cos_tail.start, cos_tail.offset, true);
            let by_sin = report(Condition::SineVanishing, sin_start, x0, true);
            let key = |r: &DetectionReport, res: f64| (r.omega_index.unwrap_or(m), res);
            let kc = key(&by_cos, by_cos.residual_i);
            let ks = key(&by_sin, by_sin.residual_ii);
            if kc.0 < ks.0 || (kc.0 == ks.0 && kc.1 <= ks.1) {
                by_cos
            } else {
                by_sin
            }
        }
        (true, false) => report(Condition::CosineFlat, cos_tail.start, cos_tail.offset, true),
        (false, true) => report(Condition::SineVanishing, sin_start, x0, true),
        (false, false) => {
            let start = m + 1 - min_nodes.min(m + 1);
            report(Condition::None, start, midrange(&c[start..]), false)
        }
    };
    Ok(out)
}

/// Weighted-supremum scores of a window against the classes `W(c)` and
/// `V(c, d)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMembership {
    pub c: f64,
    pub q: f64,
    /// `max |xi1 - a_star| h` over the grid; infinite on overflow.
    #[serde(with = "crate::serde_ext")]
    pub score_i: f64,
    /// `max |xi2'| h` over the grid; infinite on overflow.
    #[serde(with = "crate::serde_ext")]
    pub score_ii: f64,
    #[serde(with = "crate::serde_ext")]
    pub log_score_i: f64,
    #[serde(with = "crate::serde_ext")]
    pub log_score_ii: f64,
    /// `min(score_i, score_ii)`: the smallest `d` with the window in `V(c, d)`.
    #[serde(with = "crate::serde_ext")]
    pub d_hat: f64,
    pub a_star: f64,
    /// Residuals at or below this magnitude count as zero.
    pub zero_floor: f64,
}

impl ClassMembership {
    pub fn is_member(&self, d: f64) -> bool {
        self.d_hat <= d
    }
}

/// Scores with exact-zero semantics: only residuals that are exactly zero
/// cancel the infinite weight at `pi`.
pub fn class_score(w: &SequenceWindow, g: FrequencyGrid, p: WeightProfile) -> Result<ClassMembership> {
    class_score_with(w, g, p, 0.0)
}

/// As [`class_score`], treating residuals up to `zero_floor` as zero. Windows
/// reconstructed in floating point carry rounding noise in their spectral
/// tail; a floor at the detection tolerance lets them score finitely.
pub fn class_score_with(
    w: &SequenceWindow,
    g: FrequencyGrid,
    p: WeightProfile,
    zero_floor: f64,
) -> Result<ClassMembership> {
    if !(zero_floor.is_finite() && zero_floor >= 0.0) {
        return Err(Error::invalid("zero_floor", "must be finite and nonnegative"));
    }
    g.require_resolves(w.len().max(1))?;
    let ln_h = ln_weight_on_grid(g, p);
    let c = xi1_with(w, g, TransformMethod::Auto);
    let s = xi2_with(w, g, TransformMethod::Auto).tail;

    let log_score_ii = log_objective(s.samples(), &ln_h, 0.0, zero_floor);
    let a_star = best_offset(&c, &ln_h, zero_floor);
    let log_score_i = log_objective(c.samples(), &ln_h, a_star, zero_floor);
    let score_i = log_score_i.exp();
    let score_ii = log_score_ii.exp();
    Ok(ClassMembership {
        c: p.c(),
        q: p.q(),
        score_i,
        score_ii,
        log_score_i,
        log_score_ii,
        d_hat: score_i.min(score_ii),
        a_star,
        zero_floor,
    })
}

/// `max_j ln(|s_j - a| h_j)` over nodes whose residual exceeds the floor.
fn log_objective(s: &[f64], ln_h: &[f64], a: f64, floor: f64) -> f64 {
    s.iter()
        .zip(ln_h)
        .filter_map(|(v, lh)| {
            let r = (v - a).abs();
            (r > floor).then(|| r.ln() + lh)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Offset minimising the weighted sup. The weight is infinite at `pi`, so the
/// offset is confined to within the floor of `xi1(pi)`; ternary search then
/// runs on the log of a quasi-convex objective.
fn best_offset(c: &SpectrumGrid, ln_h: &[f64], floor: f64) -> f64 {
    let s = c.samples();
    let edge = s[s.len() - 1];
    let (lo, hi) = s
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let (mut a, mut b) = ((edge - floor).max(lo), (edge + floor).min(hi));
    if a >= b {
        return edge;
    }
    for _ in 0..200 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if log_objective(s, ln_h, m1, floor) <= log_objective(s, ln_h, m2, floor) {
            b = m2;
        } else {
            a = m1;
        }
        if b - a <= f64::EPSILON * b.abs().max(a.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
    }
    0.5 * (a + b)
}
