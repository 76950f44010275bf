use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use bandpredict::io::{read_window, read_window_csv};
use bandpredict::seq::SequenceWindow;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bandpredict"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn run_ok(dir: &Path, args: &[&str]) -> Output {
    let out = run(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn with_stdin(dir: &Path, args: &[&str], input: &[u8]) -> Output {
    let mut child = bin()
        .current_dir(dir)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn load(path: &Path) -> SequenceWindow {
    read_window(std::fs::File::open(path).unwrap(), "test").unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn impulse_cosine_transform_is_all_ones() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("d.csv"), "t,value\n-2,0\n-1,0\n0,1\n").unwrap();
    run_ok(dir.path(), &["transform", "--kind", "xi1", "--in", "d.csv", "--grid", "8", "--out", "s.csv"]);
    let text = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    let values: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(values.len(), 9);
    assert!(values.iter().all(|v| *v == "1.0"));
    let meta = json(&dir.path().join("s.csv.meta.json"));
    assert_eq!(meta["verb"], "transform");
    assert_eq!(meta["options"]["grid"], 8);
}

#[test]
fn generate_transform_invert_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run_ok(d, &["generate", "--omega", "1.2", "--length", "256", "--seed", "5", "--grid", "1024", "--out", "w.csv"]);
    let meta = json(&d.join("w.csv.meta.json"));
    assert_eq!(meta["generator"]["seed"], 5);
    assert!(meta["options"]["raw_norm"].as_f64().unwrap() > 0.0);
    let w = load(&d.join("w.csv"));
    assert_eq!(w.len(), 256);

    for kind in ["xi1", "xi2"] {
        let spec = format!("{kind}.csv");
        let back = format!("{kind}.back.json");
        run_ok(d, &["transform", "--kind", kind, "--in", "w.csv", "--grid", "512", "--out", &spec]);
        run_ok(d, &["invert", "--kind", kind, "--in", &spec, "--out", &back]);
        let b = load(&d.join(&back));
        let err = w.values().iter().zip(b.values()).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        assert!(err <= 1e-12, "{kind}: {err}");
    }
    assert!(d.join("xi2.csv.scalar.json").exists());
}

#[test]
fn pipes_through_standard_streams() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let input = b"t,value\n-3,0.125\n-2,-0.5\n-1,0.25\n0,1\n";
    let spec = with_stdin(d, &["transform", "--kind", "xi1", "--in", "-", "--grid", "16", "--out", "-"], input);
    assert!(spec.status.success(), "{}", stderr(&spec));
    let back = with_stdin(d, &["invert", "--kind", "xi1", "--in", "-", "--length", "4", "--out", "-"], &spec.stdout);
    assert!(back.status.success(), "{}", stderr(&back));
    let w = read_window_csv(&back.stdout[..], "stdout").unwrap();
    let orig = read_window_csv(&input[..], "stdin").unwrap();
    for (a, b) in w.values().iter().zip(orig.values()) {
        assert!((a - b).abs() <= 1e-14);
    }
    // no sidecars for standard output
    assert_eq!(std::fs::read_dir(d).unwrap().count(), 0);
}

#[test]
fn xi2_to_stdout_needs_an_explicit_scalar_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = with_stdin(dir.path(), &["transform", "--kind", "xi2", "--in", "-", "--out", "-"], b"t,value\n0,1\n");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("param=scalar_out"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = run(d, &["kernel", "--gamma", "40"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("error: reason=kernel_overflow"));

    let o = run(d, &["kernel", "--gamma", "0.3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("reason=kernel_not_causal"));

    let o = run(d, &["kernel", "--gamma", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("param=gamma"));

    let o = run(d, &["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: reason=usage"));

    let o = run(d, &["detect", "--in", "missing.csv"]);
    assert_eq!(o.status.code(), Some(2));

    std::fs::write(d.join("bad.csv"), "t,value\n-2,1\n0,1\n").unwrap();
    let o = run(d, &["detect", "--in", "bad.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("reason=bad_format"));

    let o = run(d, &["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("sweep"));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = ["generate", "--mode", "antisymmetric", "--omega", "0.9", "--length", "128", "--grid", "512", "--seed", "9"];
    let mut first = args.to_vec();
    first.extend(["--out", "a.json"]);
    let mut second = args.to_vec();
    second.extend(["--out", "b.json"]);
    run_ok(d, &first);
    run_ok(d, &second);
    assert_eq!(std::fs::read(d.join("a.json")).unwrap(), std::fs::read(d.join("b.json")).unwrap());

    run_ok(d, &["kernel", "--gamma", "2", "--n", "4096", "--out", "k1.json"]);
    run_ok(d, &["kernel", "--gamma", "2", "--n", "4096", "--out", "k2.json"]);
    assert_eq!(std::fs::read(d.join("k1.json")).unwrap(), std::fs::read(d.join("k2.json")).unwrap());
    assert_eq!(
        std::fs::read(d.join("k1.json.meta.json")).unwrap().len(),
        std::fs::read(d.join("k2.json.meta.json")).unwrap().len()
    );
}

#[test]
fn sweep_on_a_band_limited_window_falls() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run_ok(d, &["generate", "--omega", "1.5707963267948966", "--length", "1024", "--seed", "2024", "--out", "w.csv"]);
    run_ok(
        d,
        &[
            "sweep", "--in", "w.csv", "--gammas", "1,2,4,8", "--q", "8", "--out", "s.json", "--emit-plot-data", "p.csv",
            "--metric", "inf",
        ],
    );
    let r = json(&d.join("s.json"));
    let l2: Vec<f64> = r["entries"].as_array().unwrap().iter().map(|e| e["relative_error_l2"].as_f64().unwrap()).collect();
    assert_eq!(l2.len(), 4);
    assert!(l2.windows(2).all(|p| p[1] < p[0]), "{l2:?}");
    let plot = std::fs::read_to_string(d.join("p.csv")).unwrap();
    assert!(plot.starts_with("gamma,relative_error\n1.0,"));
    assert_eq!(plot.lines().count(), 5);

    let o = run(d, &["sweep", "--in", "w.csv", "--gammas", "2,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn predict_with_a_saved_kernel() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run_ok(d, &["generate", "--omega", "1.0", "--length", "300", "--seed", "3", "--out", "w.csv"]);
    run_ok(d, &["kernel", "--gamma", "2", "--q", "8", "--out", "k.json"]);
    let k = json(&d.join("k.json"));
    assert!((k["taps"][0].as_f64().unwrap() - 2.0).abs() <= 1e-12);

    run_ok(d, &["predict", "--in", "w.csv", "--kernel", "k.json", "--out", "a.csv"]);
    run_ok(d, &["predict", "--in", "w.csv", "--gamma", "2", "--q", "8", "--out", "b.csv", "--experimental-horizon", "3"]);
    assert_eq!(std::fs::read(d.join("a.csv")).unwrap(), std::fs::read(d.join("b.csv")).unwrap());

    let a = json(&d.join("a.csv.summary.json"));
    let b = json(&d.join("b.csv.summary.json"));
    assert_eq!(a["error_l2"], b["error_l2"]);
    assert_eq!(a["T"], k["T"]);
    assert!(a.get("experimental_forecasts").is_none());
    assert_eq!(b["experimental_forecasts"].as_array().unwrap().len(), 3);
    assert_eq!(b["experimental_forecasts"][0], b["forecast_next"]);

    let rows = std::fs::read_to_string(d.join("a.csv")).unwrap();
    assert!(rows.starts_with("t,predicted,target,abs_error\n"));
    assert!(rows.lines().last().unwrap().ends_with(",,"));

    let o = run(d, &["predict", "--in", "w.csv", "--kernel", "k.json", "--gamma", "2", "--out", "c.csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn detect_and_classify_reports() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run_ok(d, &["generate", "--omega", "1.5707963267948966", "--length", "1024", "--seed", "11", "--grid", "4096", "--out", "w.csv"]);
    let o = run_ok(d, &["detect", "--in", "w.csv", "--grid", "4096"]);
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["condition"], "cosine_flat");
    assert!(r["omega_hat"].as_f64().unwrap() < std::f64::consts::PI);

    let o = run_ok(d, &["classify", "--in", "w.csv", "--c", "1"]);
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(r.get("score_i").is_some() && r.get("d_hat").is_some());
}
