//! Test signals with known spectral structure, and error evaluation.
//!
//! A window is generated by choosing a spectrum on the frequency grid and
//! inverting it. A spectrum vanishing on `(Omega, pi]` gives a causally
//! band-limited window: through the cosine transform when the mode is
//! symmetric, through the sine transform (with `x(0) = 0`) when it is
//! antisymmetric.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bandlimit::{weight_h, WeightProfile};
use crate::error::{Error, Result};
use crate::predictor::{relative, PredictionRun};
use crate::seq::{norm, NormOrder, SequenceWindow};
use crate::transforms::{
    inv_xi1_with, inv_xi2_with, ExtensionMode, FrequencyGrid, SpectrumGrid, TransformMethod, Xi2Value,
};

/// Envelope of the generated spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    /// `(1 + cos(pi omega / Omega)) / 2` on `[0, Omega]`, zero beyond.
    RaisedCosine,
    /// One on `[0, Omega]`, zero beyond.
    Indicator,
    /// Full-band spectrum bounded by `d / h(omega, c)`.
    Decay { c: f64, q: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub mode: ExtensionMode,
    pub omega: f64,
    pub length: usize,
    pub shape: Shape,
    pub seed: u64,
    /// Amplitude scale `d`, applied before normalization.
    #[serde(default = "unit")]
    pub amplitude: f64,
}

fn unit() -> f64 {
    1.0
}

impl GeneratorSpec {
    pub fn band_limited(mode: ExtensionMode, omega: f64, length: usize, seed: u64) -> Self {
        GeneratorSpec {
            mode,
            omega,
            length,
            shape: Shape::RaisedCosine,
            seed,
            amplitude: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega >= 0.0 && self.omega < PI) {
            return Err(Error::invalid("omega", format!("must lie in [0, pi), got {}", self.omega)));
        }
        if self.length < 2 {
            return Err(Error::invalid("length", format!("must be at least 2, got {}", self.length)));
        }
        if !(self.amplitude.is_finite() && self.amplitude > 0.0) {
            return Err(Error::invalid("amplitude", "must be positive and finite"));
        }
        if let Shape::Decay { c, q } = self.shape {
            WeightProfile::new(c, q)?;
        }
        Ok(())
    }
}

/// A generated window with the scale it had before normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub window: SequenceWindow,
    /// `l2` norm before normalization to one.
    pub raw_norm: f64,
}

/// Number of random modulation harmonics.
const HARMONICS: usize = 3;
/// Modulation depth per harmonic; the total stays below one so the
/// modulation is positive.
const DEPTH: f64 = 0.3;

/// The spectrum that [`generate`] inverts.
pub fn spectrum(spec: &GeneratorSpec, g: FrequencyGrid) -> Result<SpectrumGrid> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let coeffs: Vec<f64> = (0..HARMONICS).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let omega = spec.omega;
    // smooth seeded modulation on the band; harmonics of the band for
    // band-limited shapes, of the full half-circle for the decay shape
    let freq = match spec.shape {
        Shape::Decay { .. } => 1.0,
        _ if omega > 0.0 => PI / omega,
        _ => 0.0,
    };
    let modulation = |w: f64| {
        1.0 + DEPTH
            * coeffs
                .iter()
                .enumerate()
                .map(|(k, r)| r * ((k + 1) as f64 * freq * w).cos())
                .sum::<f64>()
    };
    let envelope = |w: f64| match spec.shape {
        Shape::RaisedCosine if w <= omega && omega > 0.0 => 0.5 * (1.0 + (PI * w / omega).cos()),
        Shape::Indicator if w <= omega => 1.0,
        Shape::Decay { c, q } => {
            let p = WeightProfile::new(c, q).expect("validated");
            1.0 / ((1.0 + HARMONICS as f64 * DEPTH) * weight_h(w, p))
        }
        _ => 0.0,
    };
    let odd = |w: f64| match spec.mode {
        ExtensionMode::Symmetric => 1.0,
        ExtensionMode::Antisymmetric => w.sin(),
    };
    let samples: Vec<f64> = g
        .nodes()
        .map(|w| spec.amplitude * envelope(w) * modulation(w) * odd(w))
        .collect();
    if samples.iter().filter(|v| **v != 0.0).count() < 2 {
        return Err(Error::DegenerateSupport(format!(
            "omega = {omega} leaves fewer than two nonzero grid samples at M = {}",
            g.intervals()
        )));
    }
    SpectrumGrid::new(g, samples)
}

/// Generates a unit-norm window from `spec`.
pub fn generate(spec: &GeneratorSpec, g: FrequencyGrid) -> Result<SequenceWindow> {
    generate_detailed(spec, g).map(|r| r.window)
}

pub fn generate_detailed(spec: &GeneratorSpec, g: FrequencyGrid) -> Result<Generated> {
    let s = spectrum(spec, g)?;
    g.require_resolves(spec.length)?;
    let raw = match spec.mode {
        ExtensionMode::Symmetric => inv_xi1_with(&s, spec.length, TransformMethod::Auto)?,
        ExtensionMode::Antisymmetric => inv_xi2_with(
            &Xi2Value {
                tail: s,
                scalar: 0.0,
            },
            spec.length,
            TransformMethod::Auto,
        )?,
    };
    let raw_norm = raw.norm(NormOrder::L2);
    if raw_norm == 0.0 {
        return Err(Error::DegenerateSupport("the inverted window is identically zero".into()));
    }
    let values = raw.into_values().into_iter().map(|v| v / raw_norm).collect();
    Ok(Generated {
        window: SequenceWindow::new(values)?,
        raw_norm,
    })
}

/// Uniform white noise on `[-1, 1)`; a control that is not band-limited.
pub fn white_noise(length: usize, seed: u64) -> Result<SequenceWindow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SequenceWindow::new((0..length).map(|_| rng.gen_range(-1.0..1.0)).collect())
}

/// `l_r` norm of the prediction residual over the compared range.
pub fn evaluate(run: &PredictionRun, r: NormOrder) -> Result<f64> {
    let res = run.residuals();
    if res.is_empty() {
        return Err(Error::Size {
            what: "compared range",
            needed: 1,
            have: 0,
        });
    }
    Ok(norm(&res, r))
}

/// [`evaluate`] divided by the same norm of the target.
pub fn evaluate_relative(run: &PredictionRun, r: NormOrder) -> Result<f64> {
    let err = evaluate(run, r)?;
    Ok(relative(err, norm(&run.targets, r)))
}
