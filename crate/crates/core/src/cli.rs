use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use bandpredict::bandlimit::{class_score_with, detect_with, DetectOptions, WeightProfile};
use bandpredict::harness::{generate_detailed, GeneratorSpec, Shape};
use bandpredict::io::{self as fmt, KernelArtifact, RunSummary, Xi2Scalar};
use bandpredict::predictor::experimental::iterate_forecast;
use bandpredict::predictor::{build_kernel, predict_one_step, sweep_gamma, KernelSpec, PredictorKernel};
use bandpredict::seq::SequenceWindow;
use bandpredict::transforms::{
    circle_spectrum, extend, inv_xi1_with, inv_xi2_with, xi1_with, xi2_with, ExtensionMode, FrequencyGrid,
    TransformMethod, Xi2Value,
};
use bandpredict::{Error, Result};

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Spectral transforms, band-limitedness detection and causal prediction of
/// one-sided sequences.
///
/// Windows are CSV files with header `t,value` and times ending at 0, or JSON
/// `{"origin":0,"length":L,"values":[...]}`. A path of `-` means standard
/// input or output. Every file output gets a `<out>.meta.json` sidecar with
/// the resolved options.
///
/// Exit status: 0 on success, 2 on invalid input, 3 on numerical failure.
#[derive(Debug, Parser)]
#[command(name = "bandpredict", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cosine/sine transform of a window, or the circle spectrum of its extension
    Transform(TransformArgs),
    /// Inverse cosine/sine transform back to a window
    Invert(InvertArgs),
    /// Detect causal band-limitedness and estimate the bandwidth
    Detect(DetectArgs),
    /// Weighted-supremum scores against the decay classes
    Classify(ClassifyArgs),
    /// Build the causal taps of the predicting kernel
    Kernel(KernelArgs),
    /// One-step prediction over a window
    Predict(PredictArgs),
    /// Prediction error across a list of gamma values
    Sweep(SweepArgs),
    /// Generate a test signal with known spectral structure
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Xi1,
    Xi2,
    Circle,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum InverseKind {
    Xi1,
    Xi2,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Direct,
    Fast,
    Auto,
}

impl From<Method> for TransformMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Direct => TransformMethod::Direct,
            Method::Fast => TransformMethod::Fast,
            Method::Auto => TransformMethod::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Symmetric,
    Antisymmetric,
}

impl From<Mode> for ExtensionMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Symmetric => ExtensionMode::Symmetric,
            Mode::Antisymmetric => ExtensionMode::Antisymmetric,
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct TransformArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Input window
    #[arg(long = "in")]
    input: PathBuf,
    /// Grid intervals M (nodes j pi / M)
    #[arg(long, default_value_t = 2048)]
    grid: usize,
    /// Output CSV (`omega,value`, or `omega,re,im` for circle)
    #[arg(long)]
    out: PathBuf,
    /// Sidecar for the scalar component of xi2 [default: <out>.scalar.json]
    #[arg(long)]
    scalar_out: Option<PathBuf>,
    /// Extension used by `--kind circle`
    #[arg(long, value_enum, default_value_t = Mode::Symmetric)]
    mode: Mode,
    /// Circle grid size for `--kind circle` [default: 2M]
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
}

#[derive(Debug, Args, Serialize)]
struct InvertArgs {
    #[arg(long, value_enum)]
    kind: InverseKind,
    /// Spectrum CSV with header `omega,value`
    #[arg(long = "in")]
    input: PathBuf,
    /// Window length L [default: M / 2]
    #[arg(long)]
    length: Option<usize>,
    /// JSON `{"xi2_scalar": v}` for `--kind xi2` [default: <in>.scalar.json]
    #[arg(long)]
    scalar: Option<PathBuf>,
    /// Output window (JSON when the name ends in .json, CSV otherwise)
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct DetectArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 2048)]
    grid: usize,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Narrowest tail accepted as evidence, in radians
    #[arg(long, default_value_t = DetectOptions::DEFAULT_MIN_TAIL_WIDTH)]
    min_tail_width: f64,
    /// Report JSON
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct ClassifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 2048)]
    grid: usize,
    #[arg(long)]
    c: f64,
    #[arg(long, default_value_t = 2.0)]
    q: f64,
    /// Spectral residuals at or below this count as exact zeros
    #[arg(long, default_value_t = 0.0)]
    zero_floor: f64,
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
struct KernelParams {
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = 1.5)]
    mu: f64,
    #[arg(long, default_value_t = 4.0)]
    q: f64,
    /// Circle grid size; at most N/2 + 1 taps are kept
    #[arg(long, default_value_t = 65536)]
    n: usize,
    #[arg(long, default_value_t = 1e-10)]
    trunc_tol: f64,
}

impl KernelParams {
    fn build(&self) -> Result<PredictorKernel> {
        let gamma = self.gamma.ok_or_else(|| missing("gamma"))?;
        build_kernel(&KernelSpec::new(gamma, self.mu, self.q)?, self.n, self.trunc_tol)
    }
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct KernelArgs {
    #[command(flatten)]
    #[serde(flatten)]
    params: KernelParams,
    /// Kernel artifact JSON
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct PredictArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    params: KernelParams,
    /// Use a saved kernel artifact instead of building one
    #[arg(long, conflicts_with = "gamma")]
    kernel: Option<PathBuf>,
    /// Per-time CSV `t,predicted,target,abs_error`
    #[arg(long)]
    out: PathBuf,
    /// Summary JSON [default: <out>.summary.json]
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Also iterate the one-step predictor this many steps ahead
    /// (experimental, no accuracy claim)
    #[arg(long)]
    experimental_horizon: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct SweepArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Ascending gamma values
    #[arg(long, value_delimiter = ',', required = true)]
    gammas: Vec<f64>,
    #[arg(long, default_value_t = 1.5)]
    mu: f64,
    #[arg(long, default_value_t = 4.0)]
    q: f64,
    #[arg(long, default_value_t = 65536)]
    n: usize,
    #[arg(long, default_value_t = 1e-10)]
    trunc_tol: f64,
    /// Report JSON
    #[arg(long, default_value = "-")]
    out: PathBuf,
    /// Also write `gamma,relative_error` CSV here
    #[arg(long)]
    emit_plot_data: Option<PathBuf>,
    /// Error metric for the plot data
    #[arg(long, value_enum, default_value_t = Metric::L2)]
    metric: Metric,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Metric {
    L2,
    Inf,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ShapeArg {
    RaisedCosine,
    Indicator,
    Decay,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct GenerateArgs {
    /// GeneratorSpec JSON; replaces the individual options below
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Symmetric)]
    mode: Mode,
    /// Bandwidth in [0, pi)
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    omega: f64,
    #[arg(long, default_value_t = 1024)]
    length: usize,
    #[arg(long, value_enum, default_value_t = ShapeArg::RaisedCosine)]
    shape: ShapeArg,
    /// Decay-shape weight parameter c
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// Decay-shape weight parameter q
    #[arg(long, default_value_t = 2.0)]
    q: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    amplitude: f64,
    #[arg(long, default_value_t = 2048)]
    grid: usize,
    /// Output window (JSON when the name ends in .json, CSV otherwise)
    #[arg(long)]
    out: PathBuf,
}

fn missing(param: &'static str) -> Error {
    Error::InvalidParameter {
        param,
        reason: "required".into(),
    }
}

fn is_stdio(p: &Path) -> bool {
    p.as_os_str() == "-"
}

fn source_name(p: &Path) -> String {
    if is_stdio(p) {
        "<stdin>".into()
    } else {
        p.display().to_string()
    }
}

fn open_in(p: &Path) -> Result<Box<dyn Read>> {
    if is_stdio(p) {
        Ok(Box::new(io::stdin().lock()))
    } else {
        Ok(Box::new(File::open(p)?))
    }
}

fn open_out(p: &Path) -> Result<Box<dyn Write>> {
    if is_stdio(p) {
        Ok(Box::new(io::stdout().lock()))
    } else {
        Ok(Box::new(BufWriter::new(File::create(p)?)))
    }
}

fn read_text(p: &Path) -> Result<String> {
    let mut s = String::new();
    open_in(p)?.read_to_string(&mut s)?;
    Ok(s)
}

fn read_window(p: &Path) -> Result<SequenceWindow> {
    fmt::read_window(open_in(p)?, &source_name(p))
}

fn write_json<T: Serialize>(p: &Path, v: &T) -> Result<()> {
    let mut out = open_out(p)?;
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn write_window(p: &Path, w: &SequenceWindow) -> Result<()> {
    let mut out = open_out(p)?;
    if p.extension().is_some_and(|e| e == "json") {
        fmt::write_window_json(w, &mut out)?;
    } else {
        fmt::write_window_csv(w, &mut out)?;
    }
    out.flush()?;
    Ok(())
}

fn sidecar(p: &Path, suffix: &str) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

#[derive(Serialize)]
struct Meta<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    verb: &'a str,
    options: &'a T,
    #[serde(skip_serializing_if = "Option::is_none")]
    generator: Option<&'a GeneratorSpec>,
}

/// Writes `<out>.meta.json` unless the output is standard output.
fn write_meta<T: Serialize>(out: &Path, verb: &str, options: &T, generator: Option<&GeneratorSpec>) -> Result<()> {
    if is_stdio(out) {
        return Ok(());
    }
    let meta = Meta {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        verb,
        options,
        generator,
    };
    write_json(&sidecar(out, ".meta.json"), &meta)
}

fn transform(a: &TransformArgs) -> Result<()> {
    let w = read_window(&a.input)?;
    let g = FrequencyGrid::new(a.grid)?;
    let method = a.method.into();
    match a.kind {
        Kind::Xi1 => {
            let mut out = open_out(&a.out)?;
            fmt::write_spectrum_csv(&xi1_with(&w, g, method), &mut out)?;
            out.flush()?;
        }
        Kind::Xi2 => {
            let scalar_path = match (&a.scalar_out, is_stdio(&a.out)) {
                (Some(p), _) => p.clone(),
                (None, false) => sidecar(&a.out, ".scalar.json"),
                (None, true) => return Err(missing("scalar_out")),
            };
            let v = xi2_with(&w, g, method);
            let mut out = open_out(&a.out)?;
            fmt::write_spectrum_csv(&v.tail, &mut out)?;
            out.flush()?;
            write_json(&scalar_path, &Xi2Scalar { xi2_scalar: v.scalar })?;
        }
        Kind::Circle => {
            let n = a.n.unwrap_or(2 * a.grid);
            let c = circle_spectrum(&extend(&w, a.mode.into()), n)?;
            let mut out = open_out(&a.out)?;
            fmt::write_circle_csv(&c, &mut out)?;
            out.flush()?;
        }
    }
    write_meta(&a.out, "transform", a, None)
}

fn invert(a: &InvertArgs) -> Result<()> {
    let s = fmt::read_spectrum_csv(open_in(&a.input)?, &source_name(&a.input))?;
    let len = a.length.unwrap_or(s.grid().intervals() / 2);
    let method = a.method.into();
    let w = match a.kind {
        InverseKind::Xi1 => inv_xi1_with(&s, len, method)?,
        InverseKind::Xi2 => {
            let path = match (&a.scalar, is_stdio(&a.input)) {
                (Some(p), _) => p.clone(),
                (None, false) => sidecar(&a.input, ".scalar.json"),
                (None, true) => return Err(missing("scalar")),
            };
            let sc: Xi2Scalar = serde_json::from_str(&read_text(&path)?)
                .map_err(|e| Error::Parse {
                    source_name: source_name(&path),
                    reason: e.to_string(),
                })?;
            inv_xi2_with(
                &Xi2Value {
                    tail: s,
                    scalar: sc.xi2_scalar,
                },
                len,
                method,
            )?
        }
    };
    write_window(&a.out, &w)?;
    write_meta(&a.out, "invert", a, None)
}

fn detect(a: &DetectArgs) -> Result<()> {
    let w = read_window(&a.input)?;
    let g = FrequencyGrid::new(a.grid)?;
    let report = detect_with(
        &w,
        g,
        DetectOptions {
            tol: a.tol,
            min_tail_width: a.min_tail_width,
            method: TransformMethod::Auto,
        },
    )?;
    write_json(&a.out, &report)?;
    write_meta(&a.out, "detect", a, None)
}

fn classify(a: &ClassifyArgs) -> Result<()> {
    let w = read_window(&a.input)?;
    let g = FrequencyGrid::new(a.grid)?;
    let m = class_score_with(&w, g, WeightProfile::new(a.c, a.q)?, a.zero_floor)?;
    write_json(&a.out, &m)?;
    write_meta(&a.out, "classify", a, None)
}

fn kernel(a: &KernelArgs) -> Result<()> {
    let k = a.params.build()?;
    write_json(&a.out, &KernelArtifact::from_kernel(&k))?;
    write_meta(&a.out, "kernel", a, None)
}

#[derive(Serialize)]
struct PredictSummary {
    #[serde(flatten)]
    run: RunSummary,
    gamma: f64,
    mu: f64,
    q: f64,
    #[serde(rename = "T")]
    truncation_len: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    experimental_forecasts: Option<Vec<f64>>,
}

fn predict(a: &PredictArgs) -> Result<()> {
    let w = read_window(&a.input)?;
    let k = match &a.kernel {
        Some(p) => fmt::read_kernel_json(&read_text(p)?, &source_name(p))?,
        None => a.params.build()?,
    };
    let run = predict_one_step(&w, &k)?;
    let experimental_forecasts = match a.experimental_horizon {
        Some(h) => Some(iterate_forecast(&w, &k, h)?),
        None => None,
    };
    let mut out = open_out(&a.out)?;
    fmt::write_run_csv(&run, &mut out)?;
    out.flush()?;
    let summary_path = match (&a.summary, is_stdio(&a.out)) {
        (Some(p), _) => p.clone(),
        (None, false) => sidecar(&a.out, ".summary.json"),
        (None, true) => return Err(missing("summary")),
    };
    let s = k.spec();
    write_json(
        &summary_path,
        &PredictSummary {
            run: RunSummary::of(&run),
            gamma: s.gamma(),
            mu: s.mu(),
            q: s.q(),
            truncation_len: k.truncation_len(),
            experimental_forecasts,
        },
    )?;
    write_meta(&a.out, "predict", a, None)
}

fn sweep(a: &SweepArgs) -> Result<()> {
    let w = read_window(&a.input)?;
    let report = sweep_gamma(&w, &a.gammas, a.mu, a.q, a.n, a.trunc_tol)?;
    write_json(&a.out, &report)?;
    if let Some(p) = &a.emit_plot_data {
        let mut wtr = csv::Writer::from_writer(open_out(p)?);
        wtr.write_record(["gamma", "relative_error"])?;
        for e in &report.entries {
            let v = match a.metric {
                Metric::L2 => e.relative_error_l2,
                Metric::Inf => e.relative_error_linf,
            };
            wtr.serialize((e.gamma, v))?;
        }
        wtr.flush()?;
    }
    write_meta(&a.out, "sweep", a, None)
}

fn generate(a: &GenerateArgs) -> Result<()> {
    let spec = match &a.spec {
        Some(p) => serde_json::from_str::<GeneratorSpec>(&read_text(p)?).map_err(|e| Error::Parse {
            source_name: source_name(p),
            reason: e.to_string(),
        })?,
        None => GeneratorSpec {
            mode: a.mode.into(),
            omega: a.omega,
            length: a.length,
            shape: match a.shape {
                ShapeArg::RaisedCosine => Shape::RaisedCosine,
                ShapeArg::Indicator => Shape::Indicator,
                ShapeArg::Decay => Shape::Decay { c: a.c, q: a.q },
            },
            seed: a.seed,
            amplitude: a.amplitude,
        },
    };
    let g = FrequencyGrid::new(a.grid)?;
    let gen = generate_detailed(&spec, g)?;
    write_window(&a.out, &gen.window)?;

    #[derive(Serialize)]
    struct Options<'a> {
        #[serde(flatten)]
        args: &'a GenerateArgs,
        raw_norm: f64,
    }
    write_meta(
        &a.out,
        "generate",
        &Options {
            args: a,
            raw_norm: gen.raw_norm,
        },
        Some(&spec),
    )
}

fn dispatch(c: &Command) -> Result<()> {
    match c {
        Command::Transform(a) => transform(a),
        Command::Invert(a) => invert(a),
        Command::Detect(a) => detect(a),
        Command::Classify(a) => classify(a),
        Command::Kernel(a) => kernel(a),
        Command::Predict(a) => predict(a),
        Command::Sweep(a) => sweep(a),
        Command::Generate(a) => generate(a),
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Parses `args`, runs the command and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let kind = e.kind();
            let text = e.render().to_string();
            let first = text.lines().next().unwrap_or_default().trim_start_matches("error: ");
            eprintln!("error: reason=usage param=- msg={}", one_line(&format!("{first} ({kind:?})")));
            return EXIT_VALIDATION;
        }
    };
    match dispatch(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!(
                "error: reason={} param={} msg={}",
                e.reason_code(),
                e.param().unwrap_or("-"),
                one_line(&e.to_string())
            );
            if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_VALIDATION
            }
        }
    }
}
