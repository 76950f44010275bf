//! File formats for windows, spectra, kernels and prediction runs.
//!
//! Numbers are written in shortest round-trip form, so reading a file back
//! reproduces the in-memory values bit for bit.

use std::f64::consts::PI;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::predictor::{KernelSpec, PredictionRun, PredictorKernel};
use crate::seq::{SequenceWindow, TwoSidedWindow};
use crate::transforms::{CircleSpectrum, FrequencyGrid, SpectrumGrid};

/// Serialization of a [`SequenceWindow`] as JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowRecord {
    pub origin: i64,
    pub length: usize,
    pub values: Vec<f64>,
}

impl WindowRecord {
    pub fn from_window(w: &SequenceWindow) -> Self {
        WindowRecord {
            origin: w.last_t(),
            length: w.len(),
            values: w.values().to_vec(),
        }
    }

    pub fn into_window(self, source: &str) -> Result<SequenceWindow> {
        if self.origin != 0 {
            return Err(Error::parse(source, format!("origin must be 0, got {}", self.origin)));
        }
        if self.length != self.values.len() {
            return Err(Error::parse(
                source,
                format!("length {} disagrees with {} values", self.length, self.values.len()),
            ));
        }
        SequenceWindow::new(self.values).map_err(|e| Error::parse(source, e.to_string()))
    }
}

fn records<R: Read>(reader: R, source: &str, header: &[&str]) -> Result<Vec<Vec<String>>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let got: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if got != header {
        return Err(Error::parse(
            source,
            format!("expected header `{}`, got `{}`", header.join(","), got.join(",")),
        ));
    }
    rdr.records()
        .map(|r| Ok(r?.iter().map(str::to_owned).collect()))
        .collect()
}

fn parse_f64(field: &str, source: &str, row: usize) -> Result<f64> {
    let v: f64 = field
        .parse()
        .map_err(|_| Error::parse(source, format!("row {row}: `{field}` is not a number")))?;
    if !v.is_finite() {
        return Err(Error::parse(source, format!("row {row}: value is not finite")));
    }
    Ok(v)
}

fn parse_i64(field: &str, source: &str, row: usize) -> Result<i64> {
    field
        .parse()
        .map_err(|_| Error::parse(source, format!("row {row}: `{field}` is not an integer time")))
}

/// `(t, value)` rows, checked to be strictly consecutive.
fn timed_rows<R: Read>(reader: R, source: &str) -> Result<Vec<(i64, f64)>> {
    let rows = records(reader, source, &["t", "value"])?;
    if rows.is_empty() {
        return Err(Error::parse(source, "no rows"));
    }
    let mut out: Vec<(i64, f64)> = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        let row = i + 2;
        let t = parse_i64(&r[0], source, row)?;
        let v = parse_f64(&r[1], source, row)?;
        if let Some(&(prev, _)) = out.last() {
            if t == prev {
                return Err(Error::parse(source, format!("row {row}: duplicate t = {t}")));
            }
            if t != prev + 1 {
                return Err(Error::parse(
                    source,
                    format!("row {row}: t = {t} does not follow {prev} (gap or disorder)"),
                ));
            }
        }
        out.push((t, v));
    }
    Ok(out)
}

/// Reads a `t,value` CSV whose times run up to 0.
pub fn read_window_csv<R: Read>(reader: R, source: &str) -> Result<SequenceWindow> {
    let rows = timed_rows(reader, source)?;
    let last = rows.last().expect("nonempty").0;
    if last != 0 {
        return Err(Error::parse(source, format!("times must end at 0, last is {last}")));
    }
    SequenceWindow::new(rows.into_iter().map(|(_, v)| v).collect())
}

pub fn read_window_json(text: &str, source: &str) -> Result<SequenceWindow> {
    let rec: WindowRecord =
        serde_json::from_str(text).map_err(|e| Error::parse(source, e.to_string()))?;
    rec.into_window(source)
}

/// Reads a window, choosing JSON or CSV by content.
pub fn read_window<R: Read>(mut reader: R, source: &str) -> Result<SequenceWindow> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    if text.trim_start().starts_with('{') {
        read_window_json(&text, source)
    } else {
        read_window_csv(text.as_bytes(), source)
    }
}

pub fn write_window_csv<W: Write>(w: &SequenceWindow, out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["t", "value"])?;
    let first = w.first_t();
    for (i, v) in w.values().iter().enumerate() {
        wtr.serialize((first + i as i64, v))?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_window_json<W: Write>(w: &SequenceWindow, mut out: W) -> Result<()> {
    serde_json::to_writer(&mut out, &WindowRecord::from_window(w))?;
    writeln!(out)?;
    Ok(())
}

/// Reads a `t,value` CSV over a symmetric range `-(L-1) ..= L-1`.
pub fn read_two_sided_csv<R: Read>(reader: R, source: &str) -> Result<TwoSidedWindow> {
    let rows = timed_rows(reader, source)?;
    let (first, last) = (rows[0].0, rows.last().expect("nonempty").0);
    if first != -last {
        return Err(Error::parse(source, format!("range {first}..={last} is not symmetric about 0")));
    }
    TwoSidedWindow::new(rows.into_iter().map(|(_, v)| v).collect())
}

pub fn write_two_sided_csv<W: Write>(w: &TwoSidedWindow, out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["t", "value"])?;
    for (t, v) in w.iter() {
        wtr.serialize((t, v))?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads an `omega,value` CSV; the grid size is inferred from the row count
/// and every `omega` must sit on the grid.
pub fn read_spectrum_csv<R: Read>(reader: R, source: &str) -> Result<SpectrumGrid> {
    let rows = records(reader, source, &["omega", "value"])?;
    if rows.len() < 3 {
        return Err(Error::parse(source, "a spectrum needs at least three grid nodes"));
    }
    let g = FrequencyGrid::new(rows.len() - 1)?;
    let mut samples = Vec::with_capacity(rows.len());
    for (j, r) in rows.iter().enumerate() {
        let row = j + 2;
        let omega = parse_f64(&r[0], source, row)?;
        if (omega - g.node(j)).abs() > 1e-9 * PI {
            return Err(Error::parse(
                source,
                format!("row {row}: omega = {omega} is not grid node {j} of M = {}", g.intervals()),
            ));
        }
        samples.push(parse_f64(&r[1], source, row)?);
    }
    SpectrumGrid::new(g, samples)
}

pub fn write_spectrum_csv<W: Write>(s: &SpectrumGrid, out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["omega", "value"])?;
    for (omega, v) in s.grid().nodes().zip(s.samples()) {
        wtr.serialize((omega, v))?;
    }
    wtr.flush()?;
    Ok(())
}

/// Side channel carrying the scalar component of the sine transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Xi2Scalar {
    pub xi2_scalar: f64,
}

pub fn write_circle_csv<W: Write>(c: &CircleSpectrum, out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["omega", "re", "im"])?;
    for (j, z) in c.samples().iter().enumerate() {
        wtr.serialize((c.angle(j), z.re, z.im))?;
    }
    wtr.flush()?;
    Ok(())
}

/// Kernel artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelArtifact {
    pub gamma: f64,
    pub mu: f64,
    pub q: f64,
    pub epsilon: f64,
    pub trunc_tol: f64,
    #[serde(rename = "T")]
    pub truncation_len: usize,
    pub tail_mass: f64,
    pub taps: Vec<f64>,
}

impl KernelArtifact {
    pub fn from_kernel(k: &PredictorKernel) -> Self {
        let s = k.spec();
        KernelArtifact {
            gamma: s.gamma(),
            mu: s.mu(),
            q: s.q(),
            epsilon: s.epsilon(),
            trunc_tol: k.trunc_tol(),
            truncation_len: k.truncation_len(),
            tail_mass: k.tail_mass(),
            taps: k.taps().to_vec(),
        }
    }

    pub fn into_kernel(self, source: &str) -> Result<PredictorKernel> {
        if self.taps.len() != self.truncation_len + 1 {
            return Err(Error::parse(
                source,
                format!("T = {} disagrees with {} taps", self.truncation_len, self.taps.len()),
            ));
        }
        let spec = KernelSpec::new(self.gamma, self.mu, self.q)?;
        PredictorKernel::from_taps(spec, self.taps, self.trunc_tol, self.tail_mass)
    }
}

pub fn read_kernel_json(text: &str, source: &str) -> Result<PredictorKernel> {
    let a: KernelArtifact =
        serde_json::from_str(text).map_err(|e| Error::parse(source, e.to_string()))?;
    a.into_kernel(source)
}

/// Headline numbers of a [`PredictionRun`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub first_t: i64,
    pub burn_in: usize,
    pub forecast_next: f64,
    pub error_l2: f64,
    pub error_linf: f64,
    #[serde(with = "crate::serde_ext")]
    pub relative_error_l2: f64,
    #[serde(with = "crate::serde_ext")]
    pub relative_error_linf: f64,
}

impl RunSummary {
    pub fn of(run: &PredictionRun) -> Self {
        RunSummary {
            first_t: run.first_t,
            burn_in: run.burn_in,
            forecast_next: run.forecast_next,
            error_l2: run.error_l2,
            error_linf: run.error_linf,
            relative_error_l2: run.relative_error_l2,
            relative_error_linf: run.relative_error_linf,
        }
    }
}

/// `t,predicted,target,abs_error`; the row for `t = 0` has no target.
pub fn write_run_csv<W: Write>(run: &PredictionRun, out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["t", "predicted", "target", "abs_error"])?;
    for (i, p) in run.predictions.iter().enumerate() {
        let t = run.first_t + i as i64;
        let target = run.targets.get(i).copied();
        wtr.serialize((t, p, target, target.map(|y| (y - p).abs())))?;
    }
    wtr.flush()?;
    Ok(())
}
