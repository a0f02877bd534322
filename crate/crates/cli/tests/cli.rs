use std::process::{Command, Output};

use lepm_core::spectra::spectrum;
use lepm_core::ModelParams;

fn lepm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lepm"))
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = lepm(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    lepm(args).status.code().unwrap()
}

/// Header and rows of a CSV document.
fn parse(csv: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = csv.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    (header, rows)
}

fn col(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn spectrum_has_the_plane_pair_twice() {
    let (h, rows) = parse(&ok(&["spectrum", "--gamma", "0.6", "--delta", "0.4", "--Gamma", "8"]));
    assert_eq!(rows.len(), 16);
    let (b, re, im) = (col(&h, "block"), col(&h, "re"), col(&h, "im"));
    let hits = rows
        .iter()
        .filter(|r| r[b] == "plus" && (num(&r[re]) + 2.4).abs() < 1e-9 && num(&r[im]).abs() < 1e-12)
        .count();
    assert_eq!(hits, 2);
}

#[test]
fn closed_system_spectrum_is_imaginary() {
    let (h, rows) = parse(&ok(&["spectrum", "--gamma", "0.6", "--delta", "0.4", "--Gamma", "0"]));
    let re = col(&h, "re");
    assert!(rows.iter().all(|r| num(&r[re]).abs() <= 1e-12));
}

#[test]
fn spectrum_round_trips_bit_exactly() {
    let (h, rows) = parse(&ok(&["spectrum", "--gamma", "0.37", "--delta", "1.1", "--Gamma", "5.3"]));
    let (re, im) = (col(&h, "re"), col(&h, "im"));
    let want = spectrum(&ModelParams::new(0.37, 1.1, 5.3).unwrap()).unwrap().closed_form();
    for (r, w) in rows.iter().zip(&want) {
        assert_eq!(num(&r[re]).to_bits(), w.re.to_bits());
        assert_eq!(num(&r[im]).to_bits(), w.im.to_bits());
    }
}

#[test]
fn one_sample_sweep_equals_spectrum() {
    let (hs, sweep) = parse(&ok(&["sweep", "--gamma", "0.6", "--delta", "0.4", "--Gamma-range", "3:3:1"]));
    let (hp, point) = parse(&ok(&["spectrum", "--gamma", "0.6", "--delta", "0.4", "--Gamma", "3"]));
    assert_eq!(sweep.len(), point.len());
    for (a, b) in sweep.iter().zip(&point) {
        assert_eq!(a[col(&hs, "block")], b[col(&hp, "block")]);
        assert_eq!(a[col(&hs, "re")], b[col(&hp, "re")]);
        assert_eq!(a[col(&hs, "im")], b[col(&hp, "im")]);
    }
}

#[test]
fn sweep_rescales_real_parts() {
    let args = ["sweep", "--gamma", "0.6", "--delta", "0.4", "--Gamma-range", "2:50:4", "--log-scale"];
    let (h, plain) = parse(&ok(&args));
    let mut with = args.to_vec();
    with.push("--rescale");
    let (_, scaled) = parse(&ok(&with));
    let (g, re) = (col(&h, "Gamma"), col(&h, "re"));
    for (a, b) in plain.iter().zip(&scaled) {
        assert!((num(&a[re]) / num(&a[g]) - num(&b[re])).abs() <= 1e-15 * num(&a[re]).abs().max(1.0));
    }
}

#[test]
fn runs_are_byte_identical() {
    let args = ["phase-diagram", "--gamma-range", "0.3:1.6:5", "--delta-range", "0.1:1:4"];
    let a = ok(&args);
    assert_eq!(a, ok(&args));
    let mut threaded = args.to_vec();
    threaded.extend(["--threads", "3"]);
    assert_eq!(a, ok(&threaded));
}

#[test]
fn json_output_has_config_schema_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let p = path.to_str().unwrap();
    ok(&["jordan", "--gamma", "0.5", "--delta", "0.3", "--Gamma", "8", "--format", "json", "--out", p]);
    let first = std::fs::read(&path).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["config"]["command"], "jordan");
    assert_eq!(v["config"]["Gamma"][0], 8.0);
    assert!(!v["rows"].as_array().unwrap().is_empty());
    ok(&["jordan", "--gamma", "0.5", "--delta", "0.3", "--Gamma", "8", "--format", "json", "--out", p]);
    assert_eq!(first, std::fs::read(&path).unwrap());
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "command = \"spectrum\"\ngamma = 0.6\ndelta = 0.4\nGamma = 8\n").unwrap();
    let c = cfg.to_str().unwrap();
    let from_file = ok(&["--config", c]);
    assert_eq!(from_file, ok(&["spectrum", "--gamma", "0.6", "--delta", "0.4", "--Gamma", "8"]));
    let overridden = ok(&["--config", c, "--Gamma", "3"]);
    assert_eq!(overridden, ok(&["spectrum", "--gamma", "0.6", "--delta", "0.4", "--Gamma", "3"]));
}

#[test]
fn invalid_configurations_exit_with_two() {
    assert_eq!(code(&["spectrum", "--gamma", "0.6"]), 2);
    assert_eq!(code(&["spectrum", "--gamma", "x", "--delta", "0.4", "--Gamma", "8"]), 2);
    assert_eq!(code(&["sweep", "--gamma", "0.6", "--delta", "0.4", "--Gamma-range", "1:2:0"]), 2);
    assert_eq!(code(&["phase-diagram", "--gamma-range", "0.3:1:3", "--delta-range", "0.01:1:3"]), 2);
    assert_eq!(code(&["phase-diagram", "--gamma-range", "0.3:1:1", "--delta", "0.4"]), 2);
    assert_eq!(code(&["quench", "--gamma-i", "0.4", "--gamma-f", "0.8", "--delta", "0.4"]), 2);
    assert_eq!(code(&["--threads", "0", "spectrum", "--gamma", "1", "--delta", "1", "--Gamma", "1"]), 2);
    assert_eq!(code(&[]), 2);
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "gama = 0.3\n").unwrap();
    assert_eq!(code(&["spectrum", "--config", cfg.to_str().unwrap()]), 2);
}

#[test]
fn delta_floor_can_be_lowered() {
    let args = ["phase-diagram", "--gamma", "0.6", "--delta", "0.01", "--delta-floor", "0.001"];
    let (h, rows) = parse(&ok(&args));
    assert_eq!(rows[0][col(&h, "region")], "SIGMA_MINUS");
}

#[test]
fn computation_failures_exit_with_three() {
    // The steady state at γ = 1 is undefined without dissipation.
    let args = ["quench", "--gamma-i", "1", "--gamma-f", "0.5", "--delta", "0.4", "--Gamma", "0"];
    assert_eq!(code(&args), 3);
    assert_eq!(code(&["boundary", "--side", "left", "--gamma-range", "1.2:1.5:2"]), 3);
}

#[test]
fn diagnostics_are_plain_under_no_color() {
    let out = lepm(&["spectrum"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error: "), "{err}");
    assert!(!err.contains('\x1b'));
}

#[test]
fn phase_diagram_labels_both_planes() {
    let (h, rows) = parse(&ok(&["phase-diagram", "--gamma-range", "0.6:1.2:2", "--delta", "0.4"]));
    let (region, cr) = (col(&h, "region"), col(&h, "Gamma_cr"));
    assert_eq!(rows[0][region], "PLANE_8");
    assert_eq!(num(&rows[0][cr]), 8.0);
    assert_eq!(rows[1][region], "PLANE_8GAMMA");
    assert!((num(&rows[1][cr]) - 9.6).abs() < 1e-12);
}

#[test]
fn isotropic_scan_always_contains_the_plane() {
    for d in ["0.1", "0.4", "1.3"] {
        let (h, rows) = parse(&ok(&["lepm-scan", "--gamma", "1", "--delta", d]));
        let g = col(&h, "Gamma");
        assert!(rows.iter().any(|r| num(&r[g]) == 8.0), "delta={d}");
        assert!(rows.iter().all(|r| r[col(&h, "error")].is_empty()));
    }
}

#[test]
fn scan_witnesses_pass_below_the_plane() {
    let (h, rows) = parse(&ok(&["lepm-scan", "--gamma", "0.6", "--delta", "0.4"]));
    let w = col(&h, "witness");
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r[w] == "true"));
}

#[test]
fn boundary_is_continuous_across_the_isotropic_line() {
    let (h, rows) = parse(&ok(&["boundary", "--gamma-range", "0.999:1.001:2"]));
    assert_eq!(rows[0][col(&h, "side")], "LEFT");
    assert_eq!(rows[1][col(&h, "side")], "RIGHT");
    let d2 = col(&h, "delta2");
    assert!((num(&rows[0][d2]) - num(&rows[1][d2])).abs() < 0.05);
}

#[test]
fn boundary_failures_stay_in_their_rows() {
    let (h, rows) = parse(&ok(&["boundary", "--gamma-range", "0.5:1.5:3"]));
    let e = col(&h, "error");
    assert!(rows[0][e].is_empty() && rows[2][e].is_empty());
    assert!(rows[1][e].contains("outside"), "{}", rows[1][e]);
}

#[test]
fn quench_ends_with_relaxation_time() {
    let (h, rows) = parse(&ok(&[
        "quench", "--gamma-i", "0.4", "--gamma-f", "0.8", "--delta", "0.4", "--Gamma", "8", "--t-max", "20",
    ]));
    assert_eq!(rows.len(), 2002);
    let last = rows.last().unwrap();
    assert_eq!(last[col(&h, "kind")], "t_star");
    let t_star = num(&last[col(&h, "t")]);
    assert!(t_star > 0.0 && t_star < 20.0, "{t_star}");
    let d = col(&h, "distance");
    assert!(num(&rows[0][d]) > num(&rows[2000][d]));
}

#[test]
fn zeno_error_falls_fourfold_when_gamma_doubles() {
    let (h, rows) = parse(&ok(&["zeno-check", "--Gamma", "100,200"]));
    let e = col(&h, "error");
    let max: Vec<f64> = rows
        .iter()
        .filter(|r| r[col(&h, "kind")] == "max")
        .map(|r| num(&r[e]))
        .collect();
    assert_eq!(max.len(), 2);
    let ratio = max[0] / max[1];
    assert!((3.5..=4.5).contains(&ratio), "{ratio}");
}

#[test]
fn jordan_finds_the_two_defective_plus_clusters() {
    let (h, rows) = parse(&ok(&["jordan", "--gamma", "0.5", "--delta", "0.3", "--Gamma", "8"]));
    let defective: Vec<&Vec<String>> = rows
        .iter()
        .filter(|r| r[col(&h, "algebraic")] == "2" && r[col(&h, "geometric")] == "1")
        .collect();
    assert_eq!(defective.len(), 2);
    assert!(defective.iter().all(|r| r[col(&h, "block")] == "plus" && r[col(&h, "block_sizes")] == "2"));
}
