use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn ckn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ckn")).args(args).output().expect("spawn ckn")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

/// `(name, value, provenance)` of every CSV row.
fn rows(csv: &str) -> Vec<(String, f64, String)> {
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("name,p,Lambda,theta,N,value,provenance"));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f.len(), 7, "{l}");
            (f[0].to_string(), f[5].parse().unwrap(), f[6].to_string())
        })
        .collect()
}

fn lookup<'a>(rows: &'a [(String, f64, String)], name: &str) -> &'a (String, f64, String) {
    rows.iter().find(|r| r.0 == name).unwrap_or_else(|| panic!("row {name} missing"))
}

#[test]
fn constants_at_the_half_weight_point() {
    let out = ckn(&["constants", "--N", "3", "--a", "-0.5", "--b", "0"]);
    assert!(out.status.success());
    let rows = rows(&stdout(&out));
    let expect = (5.0 / (144.0 * PI)).cbrt();
    assert!((lookup(&rows, "radial_constant").1 - expect).abs() < 1e-11);
    assert!((lookup(&rows, "radial_constant_quadrature").1 - expect).abs() < 1e-11);
    let display = lookup(&rows, "sharp_display_constant");
    assert_eq!(display.2, "paper_typo_flag");
    assert!((display.1 - expect * (4.0 * PI).powf(2.0 / 3.0)).abs() < 1e-10);
    assert_eq!(lookup(&rows, "half_weight_display").2, "paper_typo_flag");
    assert!((lookup(&rows, "b_star").1 + 0.1).abs() < 1e-12);
}

#[test]
fn cylinder_and_euclidean_points_agree() {
    let euclid = rows(&stdout(&ckn(&["constants", "--N", "3", "--a", "-0.5", "--b", "0"])));
    let cyl = rows(&stdout(&ckn(&["constants", "--N", "3", "--p", "3", "--Lambda", "1"])));
    for (name, value, _) in &cyl {
        assert_eq!(lookup(&euclid, name).1, *value, "{name}");
    }
}

#[test]
fn constants_for_an_exponent() {
    let out = ckn(&["constants", "--gamma", "2.5"]);
    assert!(out.status.success());
    let rows = rows(&stdout(&out));
    assert!((lookup(&rows, "c_lt").1 - 5.0 / 36.0).abs() < 1e-12);
    assert_eq!(lookup(&rows, "lambda1_v0").1, 4.0);
}

#[test]
fn numbers_carry_at_most_twelve_significant_digits() {
    let out = stdout(&ckn(&["constants", "--N", "4", "--p", "2.7", "--Lambda", "0.9", "--theta", "0.95"]));
    for (_, value, _) in rows(&out) {
        let text = format!("{value:e}");
        let mantissa = text.split('e').next().unwrap().replace(['-', '.'], "");
        assert!(mantissa.len() <= 12, "{text}");
    }
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["constants"],
        vec!["constants", "--N", "3", "--a", "-0.5", "--b", "0", "--p", "3", "--Lambda", "1"],
        vec!["constants", "--N", "3", "--a", "-0.5"],
        vec!["constants", "--N", "3", "--a", "0", "--b", "1"],
        vec!["constants", "--gamma", "0.4"],
        vec!["verify", "fs", "--p", "3"],
        vec!["verify", "sandwich", "--theta", "0.3"],
        vec!["region-map", "--a-points", "0"],
    ] {
        let out = ckn(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains("error") && err.contains("Usage"), "{args:?}: {err}");
    }
}

#[test]
fn region_map_is_deterministic_and_consistent() {
    let first = ckn(&["region-map", "--N", "3"]);
    let second = ckn(&["region-map", "--N", "3"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let text = stdout(&first);
    assert!(text.lines().any(|l| l == "-0.5,0,SymmetricProven"));
    let nf = 3.0;
    let mut broken = 0;
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let (a, b): (f64, f64) = (f[0].parse().unwrap(), f[1].parse().unwrap());
        if f[2] == "SymmetryBroken" {
            broken += 1;
            let t = 0.5 - a;
            let b_star = (nf * (nf - 1.0) + 4.0 * nf * t * t) / (6.0 * (nf - 1.0) + 8.0 * t * t) - t;
            assert!(b < b_star, "{line}");
        }
    }
    assert!(broken > 0);
}

#[test]
fn region_map_json_has_schema() {
    let out = ckn(&["region-map", "--N", "2", "--a-points", "5", "--b-points", "4", "--format", "json"]);
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["records"].as_array().unwrap().len(), 20);
}

#[test]
fn verify_fs_example() {
    let out = ckn(&["verify", "fs", "--p", "3", "--N", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["expected"].as_f64().unwrap(), 1.6);
    assert!((v["measured"].as_f64().unwrap() - 1.6).abs() < 1e-3);
    assert_eq!(v["pass"], true);
}

#[test]
fn verify_lt_equality_case() {
    let out = ckn(&["verify", "lt", "--gamma", "2.5", "--wells", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["ratio"].as_f64().unwrap() - 1.0).abs() < 2e-3);
}

#[test]
fn failing_check_exits_with_one() {
    let out = ckn(&["verify", "lt", "--gamma", "2.5", "--wells", "0", "--points", "40"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn verify_minimize_detects_breaking() {
    let out = ckn(&["verify", "minimize", "--N", "3", "--p", "3", "--Lambda", "3", "--l-max", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["symmetry_broken"], true);
    assert!(v["quotient"].as_f64().unwrap() < 0.99 * v["radial_quotient"].as_f64().unwrap());
}

#[test]
fn verify_minimize_symmetric_point() {
    let out = ckn(&["verify", "minimize", "--N", "3", "--a", "-0.5", "--b", "0", "--l-max", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["symmetry_broken"], false);
    assert!((v["constant"].as_f64().unwrap() - (5.0f64 / 36.0).cbrt()).abs() < 1e-6);
}

#[test]
fn verify_remaining_checks_pass() {
    for args in [
        vec!["verify", "lambdacond", "--p", "3", "--Lambda", "1"],
        vec!["verify", "poincare", "--N", "2", "--fields", "100"],
        vec!["verify", "chain", "--N", "2", "--p", "4", "--Lambda", "1", "--fields", "20"],
        vec!["verify", "sandwich", "--theta", "0.9", "--l-max", "4"],
    ] {
        let out = ckn(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(json(&out)["pass"], true, "{args:?}");
    }
}

#[test]
fn same_seed_gives_identical_reports() {
    let dir = std::env::temp_dir().join(format!("ckn-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let run = |seed: &str, file: &str| {
        let path = dir.join(file);
        let out = ckn(&["verify", "chain", "--N", "3", "--p", "3", "--Lambda", "2", "--fields", "10", "--seed", seed, "--output", path.to_str().unwrap()]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
        std::fs::read(path).unwrap()
    };
    let a = run("7", "a.json");
    let b = run("7", "b.json");
    let c = run("8", "c.json");
    assert_eq!(a, b);
    assert_ne!(a, c);
    std::fs::remove_dir_all(&dir).unwrap();
}
