use std::fs;
use std::io::BufReader;
use std::process::{Command, Output};

use srg_walk::graph::{read_edge_list, verify_srg};
use srg_walk::Execution;

fn srg_walk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srg-walk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success());
    serde_json::from_slice(&out.stdout).unwrap()
}

fn assert_diagnostic(out: &Output, kind: &str) {
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    let lines: Vec<&str> = err.lines().collect();
    assert_eq!(lines.len(), 1, "{err}");
    assert!(lines[0].starts_with(&format!("error: kind={kind} msg=\"")), "{err}");
    assert!(lines[0].ends_with('"'));
}

fn field(text: &str, key: &str) -> f64 {
    text.split_whitespace()
        .find_map(|kv| kv.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("{key} missing in {text}"))
        .parse()
        .unwrap()
}

#[test]
fn gen_paley_header_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("paley101.txt");
    let out = srg_walk(&["gen", "--family", "paley", "--q", "101", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "101 50 24 25");
    let (header, g) = read_edge_list(BufReader::new(fs::File::open(&path).unwrap())).unwrap();
    assert_eq!(header.to_string(), "101 50 24 25");
    assert_eq!(g.edge_count(), 101 * 50 / 2);
    let p = verify_srg(&g, Execution::Sequential).unwrap();
    assert_eq!((p.n, p.k, p.lambda, p.mu), (101, 50, 24, 25));
}

#[test]
fn gen_latin_to_stdout() {
    let out = srg_walk(&["gen", "--family", "latin", "--t", "3", "--d", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("9 6 3 6"));
    assert_eq!(text.lines().count(), 1 + 27);
}

#[test]
fn gen_complete_has_no_mu() {
    let out = srg_walk(&["gen", "--family", "complete", "--n", "6"]);
    assert_eq!(stdout(&out).lines().next(), Some("6 5 4 -"));
}

#[test]
fn gen_rejects_bad_families() {
    assert_diagnostic(&srg_walk(&["gen", "--family", "paley", "--q", "15"]), "params");
    assert_diagnostic(&srg_walk(&["gen", "--family", "paley", "--q", "7"]), "params");
    assert_diagnostic(&srg_walk(&["gen", "--family", "latin", "--t", "5", "--d", "4"]), "graph");
    assert_diagnostic(&srg_walk(&["gen", "--family", "paley"]), "usage");
    assert_diagnostic(&srg_walk(&["gen", "--family", "hypercube", "--n", "8"]), "usage");
}

#[test]
fn predict_latin_case2() {
    let out = srg_walk(&["predict", "--family", "latin", "--t", "50", "--d", "3", "--case", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert!((v["gamma_c2"].as_f64().unwrap() - 0.00686941).abs() < 5e-9);
    assert!((v["t_star_asymptotic"].as_f64().unwrap() - 78.54).abs() < 5e-3);
    assert_eq!(v["k_lm"].as_i64(), Some(103));
}

#[test]
fn predict_paley_case1_csv() {
    let out = srg_walk(&["predict", "--family", "paley", "--q", "101", "--case", "1", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "gamma_c1,2.0000000000000000e-2"), "{text}");
}

#[test]
fn predict_complete_reference() {
    let out = srg_walk(&["predict", "--family", "complete", "--n", "100"]);
    let v = json(&out);
    assert!((v["E_minus"].as_f64().unwrap() + 1.1).abs() < 1e-15);
    assert!((v["t_star"].as_f64().unwrap() - 5.0 * std::f64::consts::PI).abs() < 1e-14);
}

#[test]
fn predict_rejects_unknown_case() {
    assert_diagnostic(&srg_walk(&["predict", "--family", "paley", "--q", "101", "--case", "3"]), "usage");
}

#[test]
fn simulate_paley101_both_engines() {
    let out = srg_walk(&[
        "simulate", "--family", "paley", "--q", "101", "--gamma", "c1", "--tmax", "40", "--engine", "both",
    ]);
    assert!(out.status.success());
    let line = stdout(&out);
    assert!(line.starts_with("t_peak="));
    assert!((field(&line, "t_peak") - 15.79).abs() < 0.2 * 15.79);
    assert!(field(&line, "p_peak") > 0.9);
    assert_eq!(field(&line, "gamma"), 0.02);
    assert!(field(&line, "max_deviation") < 1e-6);
}

#[test]
fn simulate_usage_errors() {
    let base = ["simulate", "--family", "paley", "--q", "13"];
    let with = |extra: &[&str]| {
        let mut a = base.to_vec();
        a.extend_from_slice(extra);
        srg_walk(&a)
    };
    assert_diagnostic(&with(&["--tmax", "0"]), "usage");
    assert_diagnostic(&with(&["--samples", "5"]), "usage");
    assert_diagnostic(&with(&["--gamma", "-1"]), "usage");
    assert_diagnostic(&with(&["--gamma", "c3"]), "usage");
    assert_diagnostic(&with(&["--marked", "13"]), "usage");
    assert_diagnostic(&with(&["--step-factor", "0.5"]), "dynamics");
}

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["csv", "json"] {
        let run = |name: &str, extra: &[&str]| {
            let path = dir.path().join(name);
            let mut args = vec![
                "simulate", "--family", "triangular", "--m", "9", "--samples", "200", "--format", format,
                "--out", path.to_str().unwrap(),
            ];
            args.extend_from_slice(extra);
            let out = srg_walk(&args);
            assert!(out.status.success());
            (fs::read(&path).unwrap(), stdout(&out))
        };
        let a = run(&format!("a.{format}"), &[]);
        let b = run(&format!("b.{format}"), &[]);
        let c = run(&format!("c.{format}"), &["--sequential"]);
        assert_eq!(a, b);
        assert_eq!(a, c);
    }
    let csv = fs::read_to_string(dir.path().join("a.csv")).unwrap();
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "t,p_w,p_a,p_b");
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 1 + 201);
}

#[test]
fn scan_gamma_output() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, extra) in [(&a, None), (&b, Some("--sequential"))] {
        let mut args = vec![
            "scan-gamma", "--family", "paley", "--q", "13", "--gamma-min", "0.05", "--gamma-max", "2",
            "--steps", "5", "--log", "--samples", "200", "--out", path.to_str().unwrap(),
        ];
        args.extend(extra);
        assert!(srg_walk(&args).status.success());
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip_while(|l| *l != "gamma,t_peak,p_peak")
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.windows(2).all(|w| w[0][0] < w[1][0]));
    assert_eq!(rows[0][0], 0.05);
    assert_eq!(rows[4][0], 2.0);
}

#[test]
fn scan_gamma_rejects_bad_grids() {
    let base = ["scan-gamma", "--family", "paley", "--q", "13"];
    let with = |extra: &[&str]| {
        let mut a = base.to_vec();
        a.extend_from_slice(extra);
        srg_walk(&a)
    };
    assert_diagnostic(&with(&["--steps", "1"]), "usage");
    assert_diagnostic(&with(&["--gamma-min", "0.5", "--gamma-max", "0.1"]), "usage");
}
