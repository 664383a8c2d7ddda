use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn helly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_helly")).args(args).output().unwrap()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_tripod() {
    let out = helly(&["solve", &fixture("tripod.json"), "--oracle", "grid"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "found");
    assert_eq!(v["residual"], 0.0);
    assert_eq!(v["oracle"]["agrees"], true);
}

#[test]
fn verify_inside_and_outside() {
    let out = helly(&["verify", &fixture("square.json"), "--point", "[0.5, 0.5]"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["residual"], 0.0);
    let out = helly(&["verify", &fixture("square.json"), "--point", "[0.9, 0.5]"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["status"], "rejected");
}

#[test]
fn sharpness_then_solve_is_best_effort() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("slabs.json");
    let trace = dir.path().join("trace.json");
    assert_eq!(helly(&["sharpness", "--n", "2", "--out", s(&file)]).status.code(), Some(0));
    let out = helly(&["solve", s(&file), "--oracle", "grid", "--trace", s(&trace)]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["status"], "best_effort");
    assert!(v["residual"].as_f64().unwrap() > 0.05);
    assert_eq!(v["oracle"]["found"], false);
    let t: Value = serde_json::from_str(&std::fs::read_to_string(trace).unwrap()).unwrap();
    assert_eq!(t.as_array().unwrap().len(), 7);
}

#[test]
fn generate_solve_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ["euclidean", "tree", "hyperbolic"] {
        for seed in 0..4 {
            let file = dir.path().join(format!("{kind}{seed}.json"));
            let seed = seed.to_string();
            let gen = helly(&["generate", "--kind", kind, "--m", "5", "--seed", &seed, "--out", s(&file)]);
            assert_eq!(gen.status.code(), Some(0), "{}", String::from_utf8_lossy(&gen.stderr));
            let out = helly(&["solve", s(&file), "--eps", "1e-4"]);
            assert_eq!(out.status.code(), Some(0), "{kind} {seed}");
            let point = json(&out)["point"].to_string();
            let check = helly(&["verify", s(&file), "--point", &point, "--eps", "1e-4"]);
            assert_eq!(check.status.code(), Some(0), "{kind} {seed}");
        }
    }
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p.json");
    helly(&["generate", "--kind", "hyperbolic", "--seed", "9", "--out", s(&file)]);
    let runs: Vec<Vec<u8>> = ["1", "4"]
        .iter()
        .map(|threads| {
            Command::new(env!("CARGO_BIN_EXE_helly"))
                .args(["solve", s(&file)])
                .env("HELLY_THREADS", threads)
                .output()
                .unwrap()
                .stdout
        })
        .collect();
    assert!(!runs[0].is_empty());
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn invalid_witness_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    let text = std::fs::read_to_string(fixture("square.json")).unwrap().replace("[0.5, 0.1]", "[5, 5]");
    std::fs::write(&file, text).unwrap();
    let out = helly(&["solve", s(&file)]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["status"], "infeasible_hypothesis");
}

#[test]
fn parse_errors_exit_one_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("broken.json");
    std::fs::write(&file, "{\n  \"space\": {\"kind\": \"tree\"\n}").unwrap();
    let out = helly(&["solve", s(&file)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
    let out = helly(&["solve", &fixture("square.json"), "--max-res", "48"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn eval_map_hits_basepoints() {
    // vertex 2 maps to the witness of bodies 1, 3 and 4
    let out = helly(&["eval-map", &fixture("square.json"), "--z", "[0, 1, 0, 0]"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["point"], serde_json::json!([0.1, 0.5]));
}

#[test]
fn sperner_counts_are_odd() {
    for seed in ["0", "1", "2"] {
        let out = helly(&["sperner", "--dim", "3", "--res", "4", "--seed", seed]);
        assert_eq!(json(&out)["odd"], true);
    }
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["square.json", "disk.json", "tripod.json"] {
        let svg: PathBuf = dir.path().join(format!("{name}.svg"));
        let out = helly(&["render", &fixture(name), "--solve", "--out", s(&svg)]);
        assert_eq!(out.status.code(), Some(0));
        assert!(std::fs::read_to_string(&svg).unwrap().contains("<polygon") || name == "tripod.json");
    }
    let file = dir.path().join("cube.json");
    helly(&["generate", "--n", "3", "--out", s(&file)]);
    assert_eq!(helly(&["render", s(&file)]).status.code(), Some(1));
}
