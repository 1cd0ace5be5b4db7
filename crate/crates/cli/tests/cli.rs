use std::process::{Command, Output};

use serde_json::Value;

fn padtors(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padtors"))
        .args(args)
        .env_remove("PADTORS_PREC")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn error_kind(out: &Output) -> String {
    json(out)["error"]["kind"].as_str().expect("error object").to_string()
}

#[test]
fn counterexample_small_range() {
    let out = padtors(&["counterexample", "--n-min", "4", "--n-max", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let records = v["records"].as_array().unwrap();
    assert_eq!(records.len(), 3);
    for (r, n) in records.iter().zip(4..) {
        assert_eq!(r["n"], n);
        assert_eq!(r["order_certificate"]["order"], n);
        assert!(r.get("newton_trace").is_none());
    }
    assert_eq!(v["summary"]["strictly_increasing"], true);
}

#[test]
fn trace_flag_adds_transcripts() {
    let out = padtors(&["counterexample", "--n-min", "5", "--n-max", "5", "--trace"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(!v["records"][0]["newton_trace"].as_array().unwrap().is_empty());
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["counterexample", "--n-min", "4", "--n-max", "7"][..],
        &["tate", "--prec", "30", "--series-order", "16"][..],
        &["separation", "--a4", "-1", "--a6", "0", "--max-order", "4"][..],
    ] {
        let a = padtors(args);
        let b = padtors(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn tate_leading_terms() {
    let v = json(&padtors(&["tate", "--prec", "20", "--series-order", "8", "--terms", "2"]));
    // -1/48 = 3 + 2*5 + 0*5^2 + 0*5^3 + 3*5^4 + ... (period 4)
    let d = v["a4"][0]["digits"].as_array().unwrap();
    assert_eq!(&d[..4], &[3, 2, 0, 0]);
    assert_eq!(v["j_lead_offset"], -1);
    assert_eq!(v["j"][1]["digits"][0], 4); // 744 = 4 + 3*5 + 4*25 + 0*125 + 1*625
}

#[test]
fn usage_errors_exit_one() {
    let out = padtors(&["counterexample", "--n-min", "5", "--n-max", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "domain");

    let out = padtors(&["--p", "3", "tate"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "invalid_prime");

    let out = padtors(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "usage");

    let out = padtors(&["counterexample", "--n-max", "12", "--prec", "25"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn singular_curve_rejected() {
    let out = padtors(&["torsion-scan", "--a4", "0", "--a6", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "singular");
}

#[test]
fn torsion_scan_of_x3_minus_x() {
    let v = json(&padtors(&["torsion-scan", "--a4", "-1", "--a6", "0", "--prec", "30", "--max-order", "2"]));
    let orders: Vec<u64> = v["records"].as_array().unwrap().iter().map(|r| r["order"].as_u64().unwrap()).collect();
    assert_eq!(orders, [2, 2, 2]);
    let v = json(&padtors(&["separation", "--a4", "-1", "--a6", "0", "--max-order", "1"]));
    assert!(v["records"].as_array().unwrap().is_empty());
    assert!(v["min_separation_val"].is_null());
}

#[test]
fn ell_log_doubling_and_infinity() {
    // (1/25, 624/125) lies on y^2 = x^3 + 623 x and reduces to the identity
    let out = padtors(&["ell-log", "--a4", "623", "--a6", "0", "--x", "1/25", "--y", "624/125", "--prec", "30"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["log"]["val"], 1);
    assert!(v["doubling_check"]["agreement_digits"].as_i64().unwrap() >= 25);

    let v = json(&padtors(&["ell-log", "--a4", "-1", "--a6", "0"]));
    assert_eq!(v["point"], "inf");
    assert_eq!(v["log"]["digits"].as_array().unwrap().len(), 0);

    let out = padtors(&["ell-log", "--a4", "-1", "--a6", "0", "--x", "0", "--y", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "domain");
}

#[test]
fn output_file_and_env_precision() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tate.json");
    let out = Command::new(env!("CARGO_BIN_EXE_padtors"))
        .args(["tate", "--series-order", "8", "--terms", "1", "--output"])
        .arg(&path)
        .env("PADTORS_PREC", "12")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["prec"], 12);
    assert_eq!(v["a4"][0]["prec"], 12);
}

fn largest_int(v: &Value) -> i64 {
    match v {
        Value::Number(n) => n.as_i64().map_or(i64::MAX, i64::abs),
        Value::Array(xs) => xs.iter().map(largest_int).max().unwrap_or(0),
        Value::Object(m) => m.values().map(largest_int).max().unwrap_or(0),
        _ => 0,
    }
}

#[test]
fn exact_values_serialize_as_null() {
    // exact zeros and exact checks must not leak the internal precision sentinel
    let runs: [&[&str]; 5] = [
        &["--prec", "20", "torsion-scan", "--a4", "-1", "--a6", "0"],
        &["--prec", "20", "separation", "--a4", "-1", "--a6", "0", "--max-order", "2"],
        &["--prec", "30", "counterexample", "--n-min", "4", "--n-max", "5"],
        &["tate", "--terms", "3"],
        &["ell-log", "--a4", "623", "--a6", "0"],
    ];
    for args in runs {
        let out = padtors(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert!(largest_int(&json(&out)) < 1_000_000, "{args:?}");
    }
}
