use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use proptest::prelude::*;
use rfest::cli::main_with_args;
use serde_json::{json, Value};
use tempfile::TempDir;

const SQRT_4PI: f64 = 3.5449077018110318;

fn ball_config(f: Value, solver: Value, verify: Value) -> Value {
    json!({
        "problem": {
            "kernel": {"family": "modified_helmholtz_3d", "a": 1.0},
            "domain": {"kind": "ball", "center": [0.0, 0.0, 0.0], "radius": 1.0},
            "f": f
        },
        "solver": solver,
        "verify": verify
    })
}

fn star_config(solver: Value) -> Value {
    json!({
        "problem": {
            "kernel": {"family": "modified_helmholtz_3d", "a": 1.0},
            "domain": {"kind": "star", "center": [0.0, 0.0, 0.0],
                       "radial": {"lm_coeffs": [SQRT_4PI, 0.0, 0.0, 0.0, 0.0, 0.0, 0.1, 0.0, 0.0]}},
            "f": {"family": "constant", "value": 1.0}
        },
        "solver": solver
    })
}

fn constant() -> Value {
    json!({"family": "constant", "value": 1.0})
}

fn spectral(lmax: usize) -> Value {
    json!({"method": "spectral", "Lmax": lmax})
}

fn quick_verify() -> Value {
    json!({"n_points": 12, "tol": 1e-6, "quad_order": 16, "seed": 3, "margin": 0.01})
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn run(args: &[&str]) -> u8 {
    main_with_args(std::iter::once("rfest").chain(args.iter().copied()))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn symbol(terms: &[([u32; 3], f64)], order: u32) -> Value {
    let terms: Vec<Value> = terms.iter().map(|(a, c)| json!({"alpha": a, "coeff": c})).collect();
    json!({"dimension": 3, "order": order, "terms": terms})
}

fn helmholtz() -> Value {
    symbol(&[([2, 0, 0], 1.0), ([0, 2, 0], 1.0), ([0, 0, 2], 1.0), ([0, 0, 0], 1.0)], 2)
}

#[test]
fn check_symbols_exit_codes() {
    let dir = TempDir::new().unwrap();
    let dirichlet = write(&dir, "dirichlet.json", &symbol(&[([0, 0, 0], 1.0)], 0));
    let q = write(&dir, "q.json", &helmholtz());
    let out = dir.path().join("report.json");
    assert_eq!(run(&["check-symbols", "--symbols", s(&q), "--boundary", s(&dirichlet), "--out", s(&out)]), 0);
    let report = read_json(&out);
    assert_eq!(report["passed"], true);
    assert!((report["sl_min_det"].as_f64().unwrap() - 1.0).abs() < 1e-10);

    let lap = write(&dir, "lap.json", &symbol(&[([2, 0, 0], 1.0), ([0, 2, 0], 1.0), ([0, 0, 2], 1.0)], 2));
    let out = dir.path().join("lap_report.json");
    assert_eq!(run(&["check-symbols", "--symbols", s(&lap), "--boundary", s(&dirichlet), "--out", s(&out)]), 1);
    let report = read_json(&out);
    assert_eq!(report["md_elliptic"], false);
    assert!(report["failures"].as_array().unwrap().iter().any(|f| f.as_str().unwrap().contains("md-ellipticity failed")));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"dimension\": 3, \"order\": ").unwrap();
    assert_eq!(run(&["check-symbols", "--symbols", s(&bad), "--boundary", s(&dirichlet), "--out", s(&out)]), 2);
    let missing = dir.path().join("nope.json");
    assert_eq!(run(&["check-symbols", "--symbols", s(&missing), "--boundary", s(&dirichlet), "--out", s(&out)]), 2);
    assert_eq!(run(&["check-symbols", "--symbols", s(&q)]), 2);
}

#[test]
fn solve_writes_constant_density_two() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "run.json", &ball_config(constant(), spectral(8), quick_verify()));
    let art = dir.path().join("art");
    assert_eq!(run(&["solve", "--config", s(&cfg), "--out", s(&art)]), 0);
    let m = read_json(&art.join("manifest.json"));
    for key in ["min", "max", "mean"] {
        assert!((m["surface_density"][key].as_f64().unwrap() - 2.0).abs() < 1e-10);
    }
    assert_eq!(m["warnings"].as_array().unwrap().len(), 0);
    let csv = fs::read_to_string(art.join("surface_density.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "node_id,x,y,z,sigma");
    assert_eq!(csv.lines().count(), 1 + 2 * 16 * 16);
    assert_eq!(read_json(&art.join("exterior.json"))["method"], "spectral");
}

#[test]
fn solve_gates_and_warnings() {
    let dir = TempDir::new().unwrap();
    let star = write(&dir, "star.json", &star_config(spectral(8)));
    assert_eq!(run(&["solve", "--config", s(&star), "--out", s(&dir.path().join("a"))]), 1);

    let deep = json!({"method": "mfs", "n_sources": 400, "beta": 0.1, "tol": 1e-8});
    let cfg = write(&dir, "deep.json", &ball_config(constant(), deep, quick_verify()));
    let art = dir.path().join("b");
    assert_eq!(run(&["solve", "--config", s(&cfg), "--out", s(&art)]), 0);
    let m = read_json(&art.join("manifest.json"));
    let warnings = m["warnings"].as_array().unwrap();
    assert!(warnings.iter().any(|w| w.as_str().unwrap().contains("ill-conditioned")));
    assert_eq!(read_json(&art.join("exterior.json"))["ill_conditioned"], true);

    let hugging = json!({"method": "mfs", "n_sources": 200, "beta": 0.999, "tol": 1e-8});
    let cfg = write(&dir, "hug.json", &ball_config(constant(), hugging, quick_verify()));
    assert_eq!(run(&["solve", "--config", s(&cfg), "--out", s(&dir.path().join("c"))]), 1);

    let no_out = write(&dir, "no_out.json", &ball_config(constant(), spectral(4), quick_verify()));
    assert_eq!(run(&["solve", "--config", s(&no_out)]), 2);
}

#[test]
fn verify_passes_and_catches_a_missing_layer() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "run.json", &ball_config(constant(), spectral(8), quick_verify()));
    let art = dir.path().join("art");
    assert_eq!(run(&["solve", "--config", s(&cfg), "--out", s(&art)]), 0);
    let out = dir.path().join("res.csv");
    assert_eq!(run(&["verify", "--config", s(&cfg), "--artifacts", s(&art), "--out", s(&out)]), 0);
    let summary = read_json(&dir.path().join("res.summary.json"));
    assert!(summary["sup_error"].as_f64().unwrap() <= 1e-6);
    assert_eq!(summary["n_points"], 12);
    let csv = fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "point_id,x,y,z,Rh,f,abs_err");
    assert_eq!(csv.lines().count(), 13);

    // zero the layer: the error is at least 2/e (its value at the center)
    let density = art.join("surface_density.csv");
    let zeroed: Vec<String> = fs::read_to_string(&density)
        .unwrap()
        .lines()
        .enumerate()
        .map(|(i, line)| {
            if i == 0 {
                return line.to_string();
            }
            let mut cols: Vec<&str> = line.split(',').collect();
            cols[4] = "0";
            cols.join(",")
        })
        .collect();
    fs::write(&density, zeroed.join("\n")).unwrap();
    assert_eq!(run(&["verify", "--config", s(&cfg), "--artifacts", s(&art), "--out", s(&out)]), 1);
    let sup = read_json(&dir.path().join("res.summary.json"))["sup_error"].as_f64().unwrap();
    assert!(sup >= 2.0 * (-1.0f64).exp() && sup < 1.0, "{sup}");

    assert_eq!(run(&["verify", "--config", s(&cfg), "--artifacts", s(&dir.path().join("none")), "--out", s(&out)]), 2);
    fs::remove_file(&density).unwrap();
    assert_eq!(run(&["verify", "--config", s(&cfg), "--artifacts", s(&art), "--out", s(&out)]), 2);
}

#[test]
fn verify_rejects_artifacts_from_another_domain() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "run.json", &ball_config(constant(), spectral(8), quick_verify()));
    let art = dir.path().join("art");
    assert_eq!(run(&["solve", "--config", s(&cfg), "--out", s(&art)]), 0);
    let mut other = ball_config(constant(), spectral(8), quick_verify());
    other["problem"]["domain"]["radius"] = json!(1.5);
    let other = write(&dir, "other.json", &other);
    assert_eq!(run(&["verify", "--config", s(&other), "--artifacts", s(&art), "--out", s(&dir.path().join("r.csv"))]), 2);
}

#[test]
fn convergence_tables() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "run.json", &ball_config(constant(), spectral(8), quick_verify()));
    let out = dir.path().join("conv.csv");
    assert_eq!(run(&["convergence", "--config", s(&cfg), "--levels", "8,16", "--out", s(&out)]), 0);
    let summary = read_json(&dir.path().join("conv.summary.json"));
    assert_eq!(summary["strictly_decreasing"], true);
    let csv = fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "level,param,sup_residual,l2_residual");
    assert_eq!(csv.lines().count(), 3);

    assert_eq!(run(&["convergence", "--config", s(&cfg), "--levels", "8", "--out", s(&out)]), 0);
    assert!(read_json(&dir.path().join("conv.summary.json"))["strictly_decreasing"].is_null());

    let mfs = write(&dir, "star.json", &star_config(json!({"method": "mfs", "n_sources": 400, "beta": 0.3, "tol": 1e-6})));
    assert_eq!(run(&["convergence", "--config", s(&mfs), "--sources", "100,200,400", "--out", s(&out)]), 0);
    let summary = read_json(&dir.path().join("conv.summary.json"));
    assert_eq!(summary["sweep"], "mfs_sources");
    assert_eq!(summary["strictly_decreasing"], true);

    // a source sweep needs an MFS solver
    assert_eq!(run(&["convergence", "--config", s(&cfg), "--sources", "100", "--out", s(&out)]), 2);
}

#[test]
fn outputs_are_byte_identical_across_runs_and_thread_counts() {
    let dir = TempDir::new().unwrap();
    let g = json!({"family": "gaussian", "center": [0.2, 0.1, -0.1], "width": 0.8});
    let cfg = write(&dir, "run.json", &ball_config(g, spectral(12), quick_verify()));
    let art = dir.path().join("art");
    let bin = env!("CARGO_BIN_EXE_rfest");
    let status = Command::new(bin).args(["solve", "--config", s(&cfg), "--out", s(&art)]).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let mut outputs = Vec::new();
    for threads in ["1", "3", "3"] {
        let out = dir.path().join(format!("res{}.csv", outputs.len()));
        let status = Command::new(bin)
            .args(["--threads", threads, "verify", "--config", s(&cfg), "--artifacts", s(&art), "--out", s(&out)])
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
        outputs.push(fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[1], outputs[2]);
}

#[test]
fn binary_reports_usage_errors_with_code_two() {
    let bin = env!("CARGO_BIN_EXE_rfest");
    let out = Command::new(bin).arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("check-symbols"));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    /// Any strict prefix of a valid config is unusable input.
    #[test]
    fn truncated_configs_exit_two(cut in 0.0..1.0f64) {
        let dir = TempDir::new().unwrap();
        let text = serde_json::to_string(&ball_config(constant(), spectral(4), quick_verify())).unwrap();
        let keep = ((text.len() - 1) as f64 * cut) as usize;
        let cfg = dir.path().join("run.json");
        fs::write(&cfg, &text[..keep]).unwrap();
        prop_assert_eq!(run(&["solve", "--config", s(&cfg), "--out", s(&dir.path().join("a"))]), 2);
    }

    /// Failed checks exit 1 and still write their report.
    #[test]
    fn failing_symbol_checks_exit_one(floor in 1.5..100.0f64) {
        let dir = TempDir::new().unwrap();
        let dirichlet = write(&dir, "d.json", &symbol(&[([0, 0, 0], 1.0)], 0));
        let q = write(&dir, "q.json", &helmholtz());
        let out = dir.path().join("r.json");
        let floor = floor.to_string();
        prop_assert_eq!(run(&["check-symbols", "--symbols", s(&q), "--boundary", s(&dirichlet), "--out", s(&out), "--sl-floor", &floor]), 1);
        prop_assert_eq!(read_json(&out)["passed"].as_bool(), Some(false));
    }
}
