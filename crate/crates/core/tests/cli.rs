use std::process::{Command, Output};

use dunkl::jacobi::{big_operator, BigJacobiParams};
use dunkl::operator::DunklOperator;
use dunkl::rational::ratio;
use dunkl::solver::{parse_coefficient_table_csv, residual};

fn dunkl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dunkl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

const BIG: [&str; 6] = ["--alpha", "1", "--beta", "1", "--c", "1/2"];

fn with<'a>(cmd: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![cmd];
    v.extend_from_slice(&BIG);
    v.extend_from_slice(extra);
    v
}

#[test]
fn gen_poly_table_round_trips_to_exact_eigenpolynomials() {
    let out = dunkl(&with("gen-poly", &["--N", "8"]));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let seq = parse_coefficient_table_csv(&stdout(&out)).unwrap();
    assert_eq!(seq.len(), 9);
    let p = BigJacobiParams::new(ratio(1, 1), ratio(1, 1), ratio(1, 2));
    let op = DunklOperator::build(&big_operator(&p));
    for e in &seq {
        assert!(e.poly.is_monic());
        assert!(residual(&op, &e.poly, &e.lambda).unwrap().is_zero(), "degree {}", e.n);
    }
}

#[test]
fn outputs_are_deterministic() {
    for cmd in ["gen-poly", "eigenvalues", "gram", "weight-sample", "certify"] {
        let a = dunkl(&with(cmd, &["--N", "6"]));
        let b = dunkl(&with(cmd, &["--N", "6"]));
        assert!(a.status.success(), "{cmd}");
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gram.json");
    let path_str = path.to_str().unwrap();
    let to_file = dunkl(&with("gram", &["--N", "4", "--format", "json", "--out", path_str]));
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    let direct = dunkl(&with("gram", &["--N", "4", "--format", "json"]));
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
    serde_json::from_slice::<serde_json::Value>(&direct.stdout).expect("valid json");
}

#[test]
fn weight_samples_cover_two_disjoint_intervals() {
    let out = dunkl(&with("weight-sample", &["--samples", "11"]));
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let (x, w) = l.split_once(',').unwrap();
            (x.parse().unwrap(), w.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 22);
    assert!(rows.iter().all(|&(x, w)| w > 0.0 && (0.5..1.0).contains(&x.abs())));
    assert_eq!(rows.iter().filter(|r| r.0 < 0.0).count(), 11);
    assert!(rows.windows(2).all(|p| p[0].0 < p[1].0));
}

#[test]
fn classify_reports_canonical_parameters() {
    let out = dunkl(&[
        "classify", "--mu", "0", "--nu0", "0", "--nu1", "0", "--rho0", "0", "--rho1", "0",
        "--tau0", "0", "--tau1", "2", "--xi", "-1/2", "--eta", "2",
    ]);
    assert!(out.status.success());
    // G1 = 2x: the pure |x|-power weight, never positive on a symmetric set
    let text = stdout(&out);
    assert!(text.starts_with("Case_ii"), "{text}");
    assert!(text.contains("positive=false alpha=1/2 beta=1/2"), "{text}");

    let big = stdout(&dunkl(&with("classify", &[])));
    assert!(big.starts_with("GenericBig positive=true alpha=1 beta=1 c=1/2"), "{big}");
}

#[test]
fn certify_exit_codes() {
    let ok = dunkl(&with("certify", &["--N", "10"]));
    assert_eq!(ok.status.code(), Some(0));
    let text = stdout(&ok);
    assert!(text.starts_with("check,value,threshold,status"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",PASS")), "{text}");

    let bad_range = dunkl(&["certify", "--alpha", "-2", "--beta", "1", "--c", "1/2"]);
    assert_eq!(bad_range.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_range.stderr).contains("alpha"));

    let degenerate = dunkl(&["gen-poly", "--mu", "1"]);
    assert_eq!(degenerate.status.code(), Some(2));

    let unknown = dunkl(&["certify", "--gamma", "1"]);
    assert_eq!(unknown.status.code(), Some(2));
}
