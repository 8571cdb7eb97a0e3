use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gammaforge"))
        .args(args)
        .env_remove("GAMMAFORGE_BUDGET")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("gammaforge-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn rotund_curve_reports_verdict_and_bounds() {
    let out = run(&["rotund", &corpus("curve.json"), "--height", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["report"]["verdict"], "RotundUpTo(3)");
    assert_eq!(v["result"]["bounds"]["matrix_height"], 3);
}

#[test]
fn classify_curve_is_gamma_algebraic() {
    let v = json(&run(&["classify", &corpus("curve.json")]));
    assert_eq!(v["result"]["classification"], "StrongGammaAlgebraic");
}

#[test]
fn kernel_violation_exits_one_with_clause() {
    let out = run(&["validate", &corpus("invalid_ker2.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["detail"]["clause"], "ker2");
}

#[test]
fn not_free_exits_one() {
    assert_eq!(
        run(&["rotund", &corpus("diagonal.json")]).status.code(),
        Some(1)
    );
    let out = run(&["rotund", &corpus("diagonal.json"), "--skip-freeness"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["report"]["verdict"], "NotRotund");
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(run(&["delta"]).status.code(), Some(3));
    assert_eq!(
        run(&["delta", "/definitely/missing.json"]).status.code(),
        Some(3)
    );
    assert_eq!(
        run(&["hull", &corpus("hull_example.json")]).status.code(),
        Some(3)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn exhausted_budget_exits_two() {
    let out = Command::new(env!("CARGO_BIN_EXE_gammaforge"))
        .args(["dim", &corpus("hull_example.json")])
        .env("GAMMAFORGE_BUDGET", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["status"], "resource");
}

#[test]
fn malformed_json_reports_position() {
    let d = scratch("bad");
    let f = d.join("bad.json");
    std::fs::write(&f, "{\n  \"extension\": {\"n\": 1,\n}").unwrap();
    let out = run(&["validate", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["error"]["message"]
        .as_str()
        .unwrap()
        .contains("line 3"));
    std::fs::remove_dir_all(d).unwrap();
}

#[test]
fn build_stage_is_reproducible_and_sweeps_clean() {
    let d = scratch("stage");
    let (a, b) = (d.join("a.json"), d.join("b.json"));
    for f in [&a, &b] {
        let out = run(&[
            "build-stage",
            &corpus("base.json"),
            "--k",
            "1",
            "--out",
            f.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let (sa, sb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(sa, sb);
    let file: Value = serde_json::from_slice(&sa).unwrap();
    assert_eq!(file["n"], 4);
    let out = run(&["schanuel", a.to_str().unwrap(), "--height", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["report"]["pass"], true);

    let w = json(&run(&[
        "witness",
        a.to_str().unwrap(),
        &corpus("curve.json"),
    ]));
    assert_eq!(w["result"]["result"]["status"], "Found");

    let tampered = String::from_utf8(sa)
        .unwrap()
        .replace("\"stage\": 1", "\"stage\": 7");
    std::fs::write(&a, tampered).unwrap();
    assert_eq!(
        run(&["schanuel", a.to_str().unwrap()]).status.code(),
        Some(1)
    );
    std::fs::remove_dir_all(d).unwrap();
}

#[test]
fn amalgam_output_round_trips() {
    let d = scratch("amalg");
    let out_file = d.join("amalgam.json");
    let out = run(&[
        "amalgamate",
        &corpus("curve.json"),
        &corpus("generic1.json"),
        "--out",
        out_file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["delta"]["amalgam"], 1);
    let v = json(&run(&["delta", out_file.to_str().unwrap()]));
    assert_eq!(v["result"]["delta"], 1);
    assert_eq!(v["result"]["n"], 2);
    std::fs::remove_dir_all(d).unwrap();
}

#[test]
fn hull_and_gammadim_on_the_parabola() {
    let h = json(&run(&[
        "hull",
        &corpus("hull_example.json"),
        "--subspace",
        "[[1,0]]",
    ]));
    assert_eq!(
        h["result"]["hull"]["subspace"],
        serde_json::json!([[1, 0], [0, 1]])
    );
    let g = json(&run(&[
        "gammadim",
        &corpus("hull_example.json"),
        "--subspace",
        "[[1,0]]",
    ]));
    assert_eq!(g["result"]["gammadim"], 0);
}

#[test]
fn reports_are_byte_identical_and_sorted() {
    let args = ["classify", &corpus("mixed.json")];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let keys: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \""))
        .map(|l| l.trim())
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn timings_are_opt_in() {
    let plain = json(&run(&["delta", &corpus("generic2.json")]));
    assert!(plain.get("timings").is_none());
    let timed = json(&run(&["delta", &corpus("generic2.json"), "--timings"]));
    assert!(timed["timings"]["total_ms"].is_number());
}

#[test]
fn enumerate_filters() {
    let all = json(&run(&["enumerate", &corpus("base.json"), "--k", "1"]));
    let alg = json(&run(&[
        "enumerate",
        &corpus("base.json"),
        "--k",
        "1",
        "--filter",
        "algebraic",
    ]));
    let tr = json(&run(&[
        "enumerate",
        &corpus("base.json"),
        "--k",
        "1",
        "--filter",
        "transcendental",
    ]));
    let len = |v: &Value| v["result"]["entries"].as_array().unwrap().len();
    assert_eq!((len(&all), len(&alg), len(&tr)), (5, 4, 2));
}
