use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn lydim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lydim"))
        .args(args)
        .env_remove("LYDIM_WORD_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is a JSON error object")
}

#[test]
fn moran_closed_form() {
    let out = lydim(&["moran", "--ratios", "0.3333333333,0.3333333333"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!((v["p"].as_f64().unwrap() - 0.63093).abs() < 1e-5);
    assert_eq!(v["equation"], "plain");

    let star = stdout_json(&lydim(&["moran", "--lambdas", "3,3,3", "--star"]));
    assert!((star["p"].as_f64().unwrap() - 2f64.ln() / 3f64.ln()).abs() < 1e-10);
    assert!((star["ly_dimension"].as_f64().unwrap() - 2.0 * 2f64.ln() / 3f64.ln()).abs() < 1e-10);
}

#[test]
fn witness_report_passes_to_depth_twenty() {
    let out = lydim(&[
        "witness",
        "--matrix",
        "1,1,1;1,0,0;1,0,0",
        "--s",
        "1 3 1 2 1 1",
        "--payload",
        "[2, 1, 1, 3, 1]",
        "--cycle",
        "--schedule",
        "n^2",
        "--horizon",
        "3300",
        "--depth",
        "20",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = stdout_json(&out);
    assert_eq!(v["t"].as_array().unwrap().len(), 3300);
    let sync = v["sync"].as_array().unwrap();
    assert_eq!(sync.len(), 21);
    for row in sync {
        let i = row["i"].as_u64().unwrap() as i32;
        assert!(row["prox"].as_f64().unwrap() <= 0.5f64.powi(i));
        assert!(row["sep"].as_f64().unwrap() >= 0.5);
        assert_eq!(row["pass"], true);
    }
    assert_eq!(sync[2]["u"], 13);
    let delta = v["delta"].as_array().unwrap();
    assert!(!delta.is_empty());
    for d in delta {
        assert!(d["delta"].as_u64().unwrap() < d["bound"].as_u64().unwrap());
    }
}

#[test]
fn witness_on_a_zero_diagonal_star_is_rejected() {
    // the template forces "1 1" junctions, which (A)_11 = 0 forbids
    let out = lydim(&[
        "witness",
        "--matrix",
        "0,1;1,0",
        "--s",
        "1 2",
        "--payload",
        "2 1",
        "--cycle",
        "--horizon",
        "60",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["kind"], "not_admissible");
}

#[test]
fn infeasible_synthesis_names_the_minimum_lambda() {
    let out = lydim(&[
        "map",
        "synth",
        "--matrix",
        "1,1;1,1",
        "--domain",
        "0,1",
        "--layout",
        "0,0.45;0.55,1",
        "--lambdas",
        "2,3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = &stderr_json(&out)["error"];
    assert_eq!(err["kind"], "infeasible");
    assert_eq!(err["row"], 1);
    assert!((err["min_lambda"].as_f64().unwrap() - 1.0 / 0.45).abs() < 1e-9);
    assert!(err["message"]
        .as_str()
        .unwrap()
        .contains("minimum feasible lambda"));
}

#[test]
fn synthesized_maps_round_trip_through_verify() {
    let out = lydim(&["map", "synth", "--map", &data("star_three.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["branches"][1]["offset"], "13/5");
    let dir = std::env::temp_dir().join(format!("lydim-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("synth.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let verify = lydim(&["map", "verify", "--map", path.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(0));
    assert_eq!(stdout_json(&verify)["passed"], true);
}

#[test]
fn malformed_input_is_a_usage_error() {
    for args in [
        vec!["matrix", "check", "--matrix", "1,1;1"],
        vec!["matrix", "check", "--matrix", "1,0;0,0"],
        vec!["moran", "--ratios", "0.5,abc"],
        vec!["moran"],
        vec!["no-such-command"],
        vec!["map", "cover", "--map", "/nonexistent.json", "--depth", "2"],
    ] {
        let out = lydim(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(stderr_json(&out)["error"]["kind"].is_string(), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn cover_csv() {
    let out = lydim(&[
        "map",
        "cover",
        "--map",
        &data("middle_thirds.json"),
        "--depth",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "word,lo,hi,diameter");
    assert_eq!(lines.len(), 9);
    assert_eq!(lines[1], "1 1 1,0.0,0.037037037037,0.037037037037");
}

#[test]
fn dim_estimate_emits_scales_and_summary() {
    let dir = std::env::temp_dir().join(format!("lydim-dim-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let summary = dir.join("summary.json");
    let out = lydim(&[
        "dim",
        "estimate",
        "--map",
        &data("middle_thirds.json"),
        "--depths",
        "4..9",
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().next(), Some("epsilon,count"));
    assert_eq!(csv.lines().count(), 7);
    let s: Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    let d = 2f64.ln() / 3f64.ln();
    assert!((s["slope"].as_f64().unwrap() - d).abs() < 0.02);
    assert!((s["ly_dimension"].as_f64().unwrap() - 2.0 * d).abs() < 1e-10);
    assert_eq!(s["verdict"], "pass");
}

#[test]
fn dim_compare_reports_signed_gap() {
    let out = lydim(&[
        "dim", "compare", "--slope", "0.6309", "--ratios", "0.5,0.5", "--tol", "0.02",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["pass"], false);
    assert!(v["gap"].as_f64().unwrap() < 0.0);
    let out = lydim(&[
        "dim",
        "compare",
        "--map",
        &data("star_two.json"),
        "--depths",
        "8..14",
        "--lambdas",
        "20/9,2",
        "--star",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn word_budget_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_lydim"))
        .args([
            "words",
            "enumerate",
            "--matrix",
            "1,1;1,1",
            "--length",
            "10",
        ])
        .env("LYDIM_WORD_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["kind"], "budget_exceeded");
    let out = lydim(&[
        "words",
        "enumerate",
        "--matrix",
        "1,1;1,0",
        "--length",
        "4",
        "--format",
        "json",
    ]);
    assert_eq!(stdout_json(&out).as_array().unwrap().len(), 8);
    let count = stdout_json(&lydim(&[
        "words",
        "count",
        "--matrix",
        "1,1,1;1,0,0;1,0,0",
        "--length",
        "14",
    ]));
    assert_eq!(count["count"], "21845");
}

#[test]
fn probe_and_orbit() {
    let out = lydim(&[
        "probe",
        "local-dim",
        "--ifs",
        &data("middle_thirds_ifs.json"),
        "--matrix",
        "1,1;1,0",
        "--alpha",
        "1 2",
        "--alpha-len",
        "300",
        "--ks",
        "10,50,200",
        "--embedding",
        "identity",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    for p in v["points"].as_array().unwrap() {
        assert!((p["ratio"].as_f64().unwrap() - v["dimension"].as_f64().unwrap()).abs() < 1e-9);
    }
    let orbit = stdout_json(&lydim(&[
        "map",
        "orbit",
        "--map",
        &data("middle_thirds.json"),
        "--x",
        "1/4",
        "--steps",
        "3",
    ]));
    assert_eq!(orbit["word"], serde_json::json!([1, 2, 1, 2]));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = [
        "dim",
        "estimate",
        "--map",
        &data("two_four.json"),
        "--depths",
        "4..10",
        "--format",
        "json",
    ];
    let a = lydim(&args);
    let b = lydim(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn every_subcommand_has_help() {
    for path in [
        vec!["matrix", "check"],
        vec!["words", "count"],
        vec!["words", "enumerate"],
        vec!["moran"],
        vec!["map", "synth"],
        vec!["map", "verify"],
        vec!["map", "cover"],
        vec!["map", "orbit"],
        vec!["witness"],
        vec!["dim", "estimate"],
        vec!["dim", "compare"],
        vec!["probe", "local-dim"],
    ] {
        let mut args = path.clone();
        args.push("--help");
        let out = lydim(&args);
        assert_eq!(out.status.code(), Some(0), "{path:?}");
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(
            text.lines().next().is_some_and(|l| l.len() > 20),
            "{path:?}: {text}"
        );
    }
}
