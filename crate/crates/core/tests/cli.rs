use std::path::Path;
use std::process::{Command, Output};

use mostowkit::cli::{parse_report, render_matrix_file, Report};
use mostowkit::matcore::{c, diag, diag_real, from_real_rows, identity, ComplexMatrix};
use num_complex::Complex64;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mostowkit"))
}

fn write(dir: &TempDir, name: &str, m: &ComplexMatrix) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, render_matrix_file(m)).unwrap();
    p.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> (Output, Option<Report>) {
    let out = bin().args(args).output().unwrap();
    let report = parse_report(&String::from_utf8_lossy(&out.stdout)).ok();
    (out, report)
}

fn entry(v: &serde_json::Value, i: usize, j: usize) -> Complex64 {
    let e = &v["data"][i][j];
    c(e[0].as_f64().unwrap(), e[1].as_f64().unwrap())
}

#[test]
fn decompose_identity_mostow() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "id.json", &identity(3));
    let (out, rep) = run(&["decompose", "--input", &f, "--kind", "mostow"]);
    assert_eq!(out.status.code(), Some(0));
    let rep = rep.unwrap();
    assert!(rep.error.is_none());
    for i in 0..3 {
        for j in 0..3 {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((entry(&rep.payload["w"], i, j) - c(want, 0.0)).norm() < 1e-14);
            assert!(entry(&rep.payload["k"], i, j).norm() < 1e-14);
            assert!(entry(&rep.payload["s"], i, j).norm() < 1e-14);
        }
    }
    assert_eq!(rep.meta.tool_version, env!("CARGO_PKG_VERSION"));
}

#[test]
fn decompose_unitary_auto_branch() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "m.json", &diag_real(&[-1.0, 1.0]));
    let (out, rep) = run(&["decompose", "--input", &f, "--kind", "unitary", "--branch-alpha", "auto"]);
    assert_eq!(out.status.code(), Some(0));
    let p = rep.unwrap().payload;
    assert!((entry(&p["w1"], 0, 0) - c(-1.0, 0.0)).norm() < 1e-14);
    assert!((entry(&p["w2"], 1, 1) - c(1.0, 0.0)).norm() < 1e-14);
    assert!(p["branches"]["t"]["angle"].is_number());
}

#[test]
fn decompose_singular_exit_3() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "s.json", &from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]));
    let (out, rep) = run(&["decompose", "--input", &f, "--kind", "mostow"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(rep.unwrap().error.unwrap().code, "SINGULAR");
}

#[test]
fn decompose_parse_error_exit_2() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\"rows\": 2}").unwrap();
    let (out, _) = run(&["decompose", "--input", p.to_str().unwrap(), "--kind", "mostow"]);
    assert_eq!(out.status.code(), Some(2));
    let (out, _) = run(&["decompose", "--input", "/nonexistent/file", "--kind", "bipolar"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bounds_reports() {
    let dir = TempDir::new().unwrap();
    let u = from_real_rows(&[&[0.6, 0.8], &[-0.8, 0.6]]);
    let f = write(&dir, "u.json", &u);
    let (out, rep) = run(&["bounds", "--input", &f, "--norm", "spectral"]);
    assert_eq!(out.status.code(), Some(0));
    let p = rep.unwrap().payload;
    for key in ["b_w", "b_p1", "b_p2"] {
        assert!((p["mostow"][key].as_f64().unwrap() - 1.0).abs() < 1e-10, "{key}");
    }
    for key in ["delta", "double_l1_sum", "analytic_cap"] {
        assert!(p["bipolar"]["fourier"][key].is_number());
    }

    let t = 3.0 * std::f64::consts::PI / 4.0;
    let z2 = diag_real(&[t.sin().exp(), (t + std::f64::consts::PI / 2.0).sin().exp()]);
    let f = write(&dir, "z2.json", &z2);
    let (out, rep) = run(&["bounds", "--input", &f, "--norm", "spectral"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(rep.unwrap().payload["bipolar"]["b_s"].as_f64().unwrap() > 1190.0);

    let f = write(&dir, "h.json", &diag(&[c(0.0, 1.0), c(1.0, 0.0)]));
    let (out, rep) = run(&["bounds", "--input", &f]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(rep.unwrap().error.unwrap().code, "HYPOTHESIS");
}

#[test]
fn validate_identity_and_random() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "id.json", &identity(3));
    let (out, rep) = run(&["validate", "--input", &f, "--trials", "5", "--seed", "1", "--eps-min", "1e-5"]);
    assert_eq!(out.status.code(), Some(0));
    let p = rep.unwrap().payload;
    assert_eq!(p["passed"], 5);
    assert!(p["worst_ratio"].as_f64().unwrap() <= 1.05);

    let z = from_real_rows(&[&[2.0, 0.5, 0.0], &[0.3, 1.0, -0.4], &[0.0, 0.7, 1.5]])
        + from_real_rows(&[&[0.1, 0.0, 0.2], &[0.0, -0.3, 0.0], &[0.4, 0.0, 0.1]]) * c(0.0, 1.0);
    let f = write(&dir, "z.json", &z);
    let (out, rep) = run(&["validate", "--input", &f, "--trials", "20", "--seed", "9"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(rep.unwrap().payload["failed"], 0);
}

#[test]
fn validate_records_skipped_rows() {
    // W^T W = diag(e^{i(pi - 1e-4)}, 1): coarse steps push its eigenvalue
    // across the principal cut, det W1 flips and W1 gets the eigenvalue -1.
    let a = std::f64::consts::FRAC_PI_2 - 5e-5;
    let z = diag(&[Complex64::from_polar(1.0, a), c(1.0, 0.0)]);
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "near.json", &z);
    let (out, rep) = run(&["validate", "--input", &f, "--trials", "8", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let p = rep.unwrap().payload;
    let skipped = p["trials"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|t| t["rows"].as_array().unwrap().iter())
        .filter(|r| !r["skipped"].is_null())
        .count();
    assert!(skipped > 0);
}

fn sweep_max(n: &str, dir: &Path) -> f64 {
    let p = dir.join(format!("sweep{n}.csv"));
    let out = bin()
        .args(["sweep", "--n", n, "--t-min", "0", "--t-max", "6.2832", "--steps", "2000", "--out"])
        .arg(&p)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&p).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,t,f_n,g_n"));
    let rows: Vec<f64> = lines.map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert_eq!(rows.len(), 2000);
    rows.into_iter().fold(0.0, f64::max)
}

#[test]
fn sweep_csv() {
    let dir = TempDir::new().unwrap();
    let two = sweep_max("2", dir.path());
    let many = sweep_max("500", dir.path());
    assert!(two > 1200.0 && many < 3.0);

    let out = bin().args(["sweep", "--n", "2", "--t-min", "0.25", "--t-max", "1", "--steps", "1"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 1);
    let t: f64 = rows[0].split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(t, 0.25);
    assert!(rows[0].split(',').nth(2).unwrap().contains('e'));

    let out = bin().args(["sweep", "--n", "2", "--t-min", "x", "--t-max", "1", "--steps", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fuzz_seed_corpus_parses_without_panic() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus");
    let mut seen = 0;
    for (target, ok_expected) in [("parse_matrix_file", 4), ("parse_report", 2)] {
        let mut ok = 0;
        for entry in std::fs::read_dir(root.join(target)).unwrap() {
            let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
            let parsed = match target {
                "parse_matrix_file" => mostowkit::cli::parse_matrix_file(&text).is_ok(),
                _ => parse_report(&text).is_ok(),
            };
            ok += parsed as usize;
            seen += 1;
        }
        assert_eq!(ok, ok_expected, "{target}");
    }
    assert!(seen >= 8);
}
