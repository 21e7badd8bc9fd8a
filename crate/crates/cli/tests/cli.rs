use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cone_quantile::output::RegionJson;
use cone_quantile_core::{ConeCdf, ConvexCone, EmpiricalSample, QuantileFn, Vector};
use serde_json::Value;
use tempfile::TempDir;

const S4: &str = "x,y\n0,0\n1,0\n0,1\n1,1\n";

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, content: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        fs::write(&path, content).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cone-quantile"));
    cmd.args(args).env_remove("CONE_QUANTILE_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn help_and_version_exit_zero() {
    let out = run(&["--help"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("quantile"));
    assert_eq!(code(&run(&["quantile", "--help"])), 0);
}

#[test]
fn cdf_reports_values_and_directions() {
    let w = Workspace::new();
    let data = w.file("s4.csv", S4);
    let pts = w.file("q.csv", "0,0\n1,1\n0.5,0.5\n-1,0\n");
    let v = json(&run(&["cdf", "--data", s(&data), "--points", s(&pts)]));
    let values: Vec<f64> = v["results"].as_array().unwrap().iter().map(|r| r["value"].as_f64().unwrap()).collect();
    assert_eq!(values, vec![0.25, 1.0, 0.5, 0.0]);
    assert_eq!(v["config"]["command"], "cdf");
    assert_eq!(v["config"]["model"]["n"], 4);
    assert_eq!(v["results"][0]["argmin_direction"].as_array().unwrap().len(), 2);
}

#[test]
fn depth_uses_the_zero_cone() {
    let w = Workspace::new();
    let data = w.file("s4.csv", S4);
    let pts = w.file("q.csv", "0.5,0.5\n0,0\n3,3\n");
    let v = json(&run(&["depth", "--data", s(&data), "--points", s(&pts)]));
    let values: Vec<f64> = v["results"].as_array().unwrap().iter().map(|r| r["value"].as_f64().unwrap()).collect();
    assert_eq!(values, vec![0.5, 0.25, 0.0]);
    assert_eq!(v["config"]["cone"], "zero");
}

#[test]
fn weighted_csv_changes_the_mass() {
    let w = Workspace::new();
    let data = w.file("w.csv", "x,y,weight\n0,0,0.75\n1,1,0.25\n");
    let pts = w.file("q.csv", "0,0\n");
    let v = json(&run(&["cdf", "--data", s(&data), "--points", s(&pts)]));
    assert_eq!(v["results"][0]["value"].as_f64().unwrap(), 0.75);
    assert_eq!(v["config"]["model"]["weighted"], true);
}

#[test]
fn gaussian_model_from_json() {
    let w = Workspace::new();
    let g = w.file("g.json", r#"{"mu": [0, 0], "sigma": [[1, 0], [0, 1]]}"#);
    let pts = w.file("q.csv", "0,0\n");
    let v = json(&run(&["cdf", "--gaussian", s(&g), "--points", s(&pts)]));
    assert!((v["results"][0]["value"].as_f64().unwrap() - 0.5).abs() < 1e-9);
}

#[test]
fn quantile_writes_svg_and_json() {
    let w = Workspace::new();
    let data = w.file("s4.csv", S4);
    let svg = w.path("q.svg");
    let js = w.path("q.json");
    let out = run(&[
        "quantile", "--data", s(&data), "--p", "0.25", "--p", "0.5", "--svg", s(&svg), "--json", s(&js),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let picture = fs::read_to_string(&svg).unwrap();
    assert!(picture.starts_with("<svg") && picture.matches("<path").count() == 2);
    assert_eq!(picture.matches("<circle").count(), 4);
    let v: Value = serde_json::from_str(&fs::read_to_string(&js).unwrap()).unwrap();
    assert_eq!(v["config"]["p"], serde_json::json!([0.25, 0.5]));
    assert_eq!(v["results"].as_array().unwrap().len(), 2);
}

#[test]
fn quantile_json_round_trips_membership() {
    let w = Workspace::new();
    let data = w.file("s4.csv", S4);
    let v = json(&run(&["quantile", "--data", s(&data), "--p", "0.25", "--p", "0.5", "--p", "0.75", "--p", "1"]));
    let regions: Vec<RegionJson> = serde_json::from_value(v["results"].clone()).unwrap();
    let sample = EmpiricalSample::new(
        [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]].iter().map(|p| Vector::from(*p)).collect(),
    )
    .unwrap();
    let q = QuantileFn::new(ConeCdf::new(sample, ConvexCone::orthant(2), 64).unwrap());
    for r in &regions {
        let region = q.lower_quantile(r.p.unwrap()).unwrap();
        for i in 0..=30 {
            for j in 0..=30 {
                let z = [-0.5 + i as f64 * 0.07, -0.5 + j as f64 * 0.07];
                assert_eq!(r.contains(&z, 1e-9), region.member_tol(&z, 1e-9).unwrap(), "p={:?} z={z:?}", r.p);
            }
        }
    }
}

#[test]
fn closure_and_rank_outputs() {
    let w = Workspace::new();
    let data = w.file("s4.csv", S4);
    let g = w.file("g.json", r#"{"G": [[0.5, 0.5]]}"#);
    let v = json(&run(&["closure", "--data", s(&data), "--G", s(&g)]));
    let r = &v["results"];
    assert_eq!(r["value"].as_f64().unwrap(), 0.5);
    assert_eq!(r["is_psi_fixed"], false);
    assert_eq!(r["is_phi_fixed"], false);
    assert!(!r["psi_closure"]["halfspaces"].as_array().unwrap().is_empty());

    let d2 = w.file("d2.json", r#"{"G": [[1, 1]]}"#);
    let v = json(&run(&["rank", "--data", s(&data), "--d1", s(&g), "--d2", s(&d2)]));
    let r = &v["results"];
    assert_eq!(r["inf_extension"], serde_json::json!([0.5, 1.0]));
    assert_eq!(r["psi"], "less-or-equal");
    assert_eq!(r["phi"], "less-or-equal");
}

#[test]
fn simulate_agrees_with_exact_capacity() {
    let w = Workspace::new();
    let data = w.file("s4.csv", S4);
    let k = w.file("k.csv", "0,0\n0.5,2\n");
    let trace = w.path("trace.csv");
    let v = json(&run(&[
        "simulate", "--data", s(&data), "--K", s(&k), "--n", "20000", "--seed", "7", "--trace", s(&trace),
    ]));
    let r = &v["results"];
    let exact = r["exact"].as_f64().unwrap();
    let est = r["mc_estimate"].as_f64().unwrap();
    let se = r["std_error"].as_f64().unwrap();
    assert_eq!(exact, 0.5);
    assert!((est - exact).abs() <= 3.0 * se, "{est} vs {exact} (se {se})");
    assert_eq!(r["n_draws"], 20000);
    let lines: Vec<String> = fs::read_to_string(&trace).unwrap().lines().map(String::from).collect();
    assert_eq!(lines[0], "u,hit");
    assert_eq!(lines.len(), 20001);
    let hits = lines[1..].iter().filter(|l| l.ends_with(",1")).count();
    assert_eq!(hits as u64, r["hits"].as_u64().unwrap());
}

#[test]
fn outputs_repeat_byte_for_byte() {
    let w = Workspace::new();
    let data = w.file("s4.csv", S4);
    let k = w.file("k.csv", "0.2,0.9\n");
    let args = ["simulate", "--data", s(&data), "--K", s(&k), "--n", "5000", "--seed", "11"];
    let a = run_env(&args, &[("CONE_QUANTILE_THREADS", "1")]);
    let b = run_env(&args, &[("CONE_QUANTILE_THREADS", "4")]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let q = ["quantile", "--data", s(&data), "--p", "0.5"];
    assert_eq!(run(&q).stdout, run(&q).stdout);
    let other = run(&["simulate", "--data", s(&data), "--K", s(&k), "--n", "5000", "--seed", "12"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn selftest_passes() {
    let v = json(&run(&["selftest", "--grid", "11"]));
    let checks = v["results"].as_array().unwrap();
    assert_eq!(checks.len(), 33);
    for c in checks {
        assert_eq!(c["pass"], true, "{c}");
    }
}

#[test]
fn malformed_input_exits_two() {
    let w = Workspace::new();
    let data = w.file("s4.csv", S4);
    let pts = w.file("q.csv", "0,0\n");
    let bad = w.file("bad.csv", "1,2\n3,x\n");
    let out = run(&["cdf", "--data", s(&bad), "--points", s(&pts)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(code(&run(&["quantile", "--data", s(&data), "--p", "1.5"])), 2);
    assert_eq!(code(&run(&["quantile", "--data", s(&data), "--p", "0.5", "--cone", "nonsense"])), 2);
    assert_eq!(code(&run(&["cdf", "--data", s(&data), "--points", s(&w.file("p3.csv", "1,2,3\n"))])), 2);
    assert_eq!(code(&run(&["cdf", "--data", s(&w.path("missing.csv")), "--points", s(&pts)])), 2);
    let threads = run_env(&["selftest", "--grid", "5"], &[("CONE_QUANTILE_THREADS", "0")]);
    assert_eq!(code(&threads), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn numerical_failures_exit_three() {
    let w = Workspace::new();
    let data = w.file("s4.csv", S4);
    let pts = w.file("q.csv", "0,0\n");
    let whole = w.file("whole.json", r#"{"dim": 2, "generators": [[1, 0], [-1, 0], [0, 1], [0, -1]]}"#);
    let out = run(&["cdf", "--data", s(&data), "--cone", s(&whole), "--points", s(&pts)]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
    let d4 = w.file("d4.csv", "1,2,3,4\n");
    let c4 = w.file("c4.json", r#"{"dim": 4, "generators": [[1, 0, 0, 0]]}"#);
    assert_eq!(code(&run(&["cdf", "--data", s(&d4), "--cone", s(&c4), "--points", s(&d4)])), 3);
}
