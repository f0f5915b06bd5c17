use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn altbase(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_altbase"))
        .args(args)
        .env_remove("ALTBASE_CAP")
        .output()
        .expect("run altbase");
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap_or(-1))
}

fn json(args: &[&str]) -> (Value, i32) {
    let (out, code) = altbase(args);
    (serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")), code)
}

fn golden(name: &str, args: &[&str]) {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    let (out, code) = altbase(args);
    assert_eq!(code, 0);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &out).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(out, want, "output differs from {}", path.display());
}

#[test]
fn golden_worked_example() {
    golden("expand_pp2_three_quarters.json", &["expand", "--base", "pp:2", "--x", "3/4"]);
}

#[test]
fn golden_half_in_shifted_base() {
    golden("expand_pp2_shift2_half.json", &["expand", "--base", "pp:2,shift2", "--x", "1/2"]);
}

#[test]
fn golden_expansions_of_one() {
    golden("one_pp1.json", &["one", "--base", "pp:1"]);
}

#[test]
fn output_is_stable_across_runs() {
    let args = ["certify", "--base", "pp:2"];
    assert_eq!(altbase(&args), altbase(&args));
}

#[test]
fn expand_examples() {
    let (v, code) = json(&["expand", "--base", "pp:2", "--x", "0/1"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["word"], "");
    assert_eq!(v["payload"]["kind"], "finite");
    let (v, _) = json(&["expand", "--base", "pp:2,shift2", "--x", "1/2"]);
    assert_eq!(v["payload"]["word"], "1(0,0,0,1,0,2)");
    assert_eq!(v["command"], "expand");
    assert_eq!(v["inputs"]["x"], "1/2");
}

#[test]
fn value_examples() {
    let (v, code) = json(&["value", "--base", "pp:2", "--word", "(1,0,0,0,0,1,1,0,0,2,0,0)"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["value"], "3/4");
    let (v, _) = json(&["value", "--base", "pp:2", "--word", "0"]);
    assert_eq!(v["payload"]["value"], "0/1");
    // δ − 2 is not rational
    let (v, _) = json(&["value", "--base", "pp:2", "--word", "1"]);
    assert_eq!(v["payload"]["is_rational"], false);
}

#[test]
fn value_inverts_expand() {
    let xs = ["1/3", "2/7", "5/11", "13/17", "1/2", "9/10", "3/2", "7/2", "41/3", "0"];
    for base in ["pp:1", "pp:2", "pp:2,shift2", "pp:3", "pp:3,shift2"] {
        for x in xs {
            let (e, code) = json(&["expand", "--base", base, "--x", x]);
            assert_eq!(code, 0, "{base} {x}");
            assert_ne!(e["payload"]["kind"], "truncated");
            let w = e["payload"]["word"].as_str().unwrap();
            let (v, code) = json(&["value", "--base", base, "--word", w]);
            assert_eq!(code, 0, "{base} {w}");
            let want: altbase::exactnum::Rational = x.parse().unwrap();
            assert_eq!(v["payload"]["value"], want.to_string(), "{base} {x} -> {w}");
        }
    }
}

#[test]
fn expand_accepts_coordinates() {
    // δ − 3 ≈ 0.30 in Q(√13)
    let (e, code) = json(&["expand", "--base", "pp:2", "--x", "-3,1"]);
    assert_eq!(code, 0);
    let w = e["payload"]["word"].as_str().unwrap();
    let (v, _) = json(&["value", "--base", "pp:2", "--word", w]);
    assert_eq!(v["payload"]["coords"], serde_json::json!(["-3/1", "1/1"]));
}

#[test]
fn admissible_examples() {
    let (v, code) = json(&["admissible", "--base", "pp:2", "--word", "(1,0,0,0,0,1,1,0,0,2,0,0)"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["verdict"], "admissible");
    let (v, _) = json(&["admissible", "--base", "pp:2", "--word", "(1,0)"]);
    assert_eq!(v["payload"], serde_json::json!({"verdict": "not_admissible", "position": 1}));
}

#[test]
fn classify_family() {
    let (v, code) = json(&["classify", "--base", "pp:2"]);
    assert_eq!(code, 0);
    let c = &v["payload"]["classification"];
    assert_eq!(c["kind"], "pisot");
    assert_eq!(c["is_unit"], true);
    let rows = v["payload"]["positivity"]["rows"].as_array().unwrap();
    let conj = rows.iter().find(|r| r["is_identity"] == false).unwrap();
    assert_eq!(conj["verdict"], "not_all_positive");

    let (v, _) = json(&["classify", "--base", "pp:1"]);
    let shifts = v["payload"]["shifts"].as_array().unwrap();
    assert_eq!(shifts[0]["d_one"], "1,1");
    assert_eq!(shifts[0]["d_star_one"]["word"], "(1,0)");
}

#[test]
fn classify_integer_base_from_file() {
    let dir = std::env::temp_dir().join(format!("altbase-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("base.json");
    std::fs::write(&path, r#"{"minpoly": [-2, 1], "root_interval": ["1", "3"], "betas": [["2"]]}"#).unwrap();
    let arg = format!("file:{}", path.display());
    let (v, code) = json(&["classify", "--base", &arg]);
    assert_eq!(code, 0, "{v}");
    let c = &v["payload"]["classification"];
    assert_eq!(c["is_algebraic_integer"], true);
    assert_eq!(c["is_unit"], false);
    assert_eq!(c["kind"], "pisot");
    assert_eq!(c["conjugate_moduli"], serde_json::json!([]));
    let (v, _) = json(&["expand", "--base", &arg, "--x", "5/8"]);
    assert_eq!(v["payload"]["word"], "1,0,1");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn exit_codes() {
    let (v, code) = json(&["expand", "--base", "pp:2", "--x", "-1/2"]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], 1);
    assert_eq!(v["payload"]["error"], "OutOfRange");
    let (v, code) = json(&["expand", "--base", "nope", "--x", "1/2"]);
    assert_eq!(code, 2);
    assert_eq!(v["payload"]["error"], "MalformedInvocation");
    let (_, code) = json(&["value", "--base", "pp:2", "--word", "1,x"]);
    assert_eq!(code, 2);
    let (_, code) = json(&["expand", "--base", "file:/does/not/exist", "--x", "1/2"]);
    assert_eq!(code, 2);
    let (v, code) = json(&["value", "--base", "pp:2", "--word", "2"]);
    assert_eq!(code, 1);
    assert_eq!(v["payload"]["error"], "DigitOutOfRange");
    let (_, code) = altbase(&["frobnicate"]);
    assert_eq!(code, 2);
}

#[test]
fn cap_from_environment_and_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_altbase"))
        .args(["expand", "--base", "pp:2,shift2", "--x", "1/2"])
        .env("ALTBASE_CAP", "3")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["inputs"]["cap"], 3);
    assert_eq!(v["payload"]["kind"], "truncated");
    let (v, _) = json(&["--cap", "4", "expand", "--base", "pp:2,shift2", "--x", "1/2"]);
    assert_eq!(v["payload"]["steps_used"], 4);
}

#[test]
fn pp_rewrite_with_trace() {
    let (v, code) = json(&["pp-rewrite", "--m", "2", "--x", "3/4", "--trace"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["delta_expansion"], "(2,1,1,2,3,0)");
    assert_eq!(v["payload"]["result"]["word"], "(1,0,0,0,0,1,1,0,0,2,0,0)");
    let steps = v["payload"]["steps"].as_array().unwrap();
    assert!(!steps.is_empty());
    assert!(steps.iter().all(|s| s["blocks"].is_string()));
    let (v, _) = json(&["pp-rewrite", "--m", "2", "--x", "3/4"]);
    assert!(v["payload"]["steps"].as_array().unwrap().iter().all(|s| s.get("blocks").is_none()));
}

#[test]
fn certify_family() {
    let (v, code) = json(&["certify", "--base", "pp:2"]);
    assert_eq!(code, 0);
    let checks = &v["payload"]["certificate"]["checks"];
    assert_eq!(checks["matrix_kills_v"], true);
    assert_eq!(checks["det_vanishes_at_delta"], true);
    assert_eq!(checks["det_nonzero_poly"], true);
    let (v, code) = json(&["certify", "--base", "pp:2", "--x", "1/3"]);
    assert_eq!(code, 1);
    assert_eq!(v["payload"]["error"], "WrongArity");
}

#[test]
fn convert_round_trips() {
    let (v, code) = json(&["convert", "--base", "pp:2", "--word", "1,2(0,1,1,0)"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["round_trip"], true);
    assert_eq!(v["payload"]["delta_preperiod"][0]["block"], serde_json::json!([1, 2]));
}

#[test]
fn gamma_scan_small() {
    let (v, code) = json(&["gamma-scan", "--base", "pp:2,shift2", "--qmax", "20"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["first_failure"]["x"], "7/17");
    assert_eq!(v["payload"]["verified_lower"], "7/17");
}

#[test]
fn f_check_family() {
    let (v, code) = json(&["f-check", "--base", "pp:2", "--samples", "30", "--seed", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["violations"], serde_json::json!([]));
}
