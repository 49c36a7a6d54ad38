use std::fs;
use std::path::PathBuf;

use scattered::cli::{run, REPORT_DIR_VAR};

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("scattered").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("scattered-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["derive", "ord[w^2]"]).0, 0);
    let (code, _, err) = call(&["derive", "ord[w^2"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error:"), "{err}");
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["homeo", "z"]).0, 2);
    assert_eq!(call(&["--help"]).0, 0);
}

#[test]
fn homeo_text_and_json() {
    let (code, out, _) = call(&["homeo", "ord[w^2]", "concat(ord[w^2],ord[w])"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("Homeomorphic"), "{out}");
    let (_, out, _) = call(&["--json", "homeo", "z", "ord[w^2]"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["manifest"]["command"], "homeo");
    assert!(v["schema_version"].is_number() || v["schema_version"].is_string());
}

#[test]
fn out_writes_the_report() {
    let p = scratch("out").join("r.json");
    let (code, out, _) = call(&["--json", "--out", p.to_str().unwrap(), "derive", "prod(z,z)"]);
    assert_eq!(code, 0);
    let written = fs::read_to_string(&p).unwrap();
    let a: serde_json::Value = serde_json::from_str(&written).unwrap();
    let b: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(a, b);
    assert_eq!(a["manifest"]["output"], p.display().to_string());
}

#[test]
fn report_dir_from_environment() {
    let d = scratch("env");
    std::env::set_var(REPORT_DIR_VAR, &d);
    let code = call(&["classify", "ord[w^3]"]).0;
    std::env::remove_var(REPORT_DIR_VAR);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("classify.json")).unwrap()).unwrap();
    assert_eq!(v["manifest"]["command"], "classify");
}

#[test]
fn seeded_output_is_deterministic() {
    let args = ["--json", "ultra", "random", "--n", "12", "--seed", "7"];
    let (a, b) = (call(&args), call(&args));
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    assert_ne!(a.1, call(&["--json", "ultra", "random", "--n", "12", "--seed", "8"]).1);
}

#[test]
fn ultra_order_from_csv() {
    let p = scratch("csv").join("m.csv");
    fs::write(&p, "a,b,c,d\n0,1/2,1,1\n1/2,0,1,1\n1,1,0,1/4\n1,1,1/4,0\n").unwrap();
    let (code, out, err) = call(&["--json", "ultra", "order", "--in", p.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let order: Vec<String> = serde_json::from_value(v["result"]["order"].clone()).unwrap();
    assert_eq!(order.len(), 4);
    let pos = |l: &str| order.iter().position(|x| x == l).unwrap();
    assert_eq!(pos("a").abs_diff(pos("b")), 1);
    assert_eq!(pos("c").abs_diff(pos("d")), 1);

    fs::write(&p, "a,b,c\n0,1,1/4\n1,0,1/2\n1/4,1/2,0\n").unwrap();
    let (code, _, err) = call(&["ultra", "validate", "--in", p.to_str().unwrap()]);
    assert_eq!(code, 1, "{err}");
}

#[test]
fn oracle_check_agrees() {
    let (code, out, err) = call(&["--json", "oracle", "check", "prod(z,ord[w^2])", "--depth", "2"]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["result"]["divergence"].is_null(), "{out}");
}
