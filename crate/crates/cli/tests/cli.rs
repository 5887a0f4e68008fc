use std::process::{Command, Output};

use mzl_cli::doc::{decode_document, Document};
use mzl_cli::plot::COLUMNS;

fn mzl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mzl"))
        .args(args)
        .env_remove("MZL_PREC_BITS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn basis_json_document() {
    let o = mzl(&["basis", "-k", "0", "-m", "1", "--terms", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let Document::Basis(d) = decode_document(&stdout(&o)).unwrap() else {
        panic!("wrong kind")
    };
    let vals: Vec<&str> = d.coefficients.iter().map(|c| c.value.as_str()).collect();
    assert_eq!(vals, ["1", "0", "196884", "21493760"]);
    assert_eq!(d.poly, ["-744", "1"]);
    assert_eq!(d.metadata.prec_bits, 256);
    assert_eq!(d.metadata.command_line[1], "basis");
}

#[test]
fn basis_csv_and_text() {
    let o = mzl(&["basis", "-k", "12", "-m", "0", "--terms", "3", "--format", "csv"]);
    let s = stdout(&o);
    assert!(s.starts_with("series,exp,value\nq,0,1\nq,1,0\n"), "{s}");
    assert!(s.contains("F,0,-720\n"), "{s}");
    let o = mzl(&["basis", "-k", "-2", "-m", "2", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("q^-2"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["basis", "-k", "3", "-m", "0"][..],
        &["basis", "-k", "12", "-m", "0", "--terms", "-5"],
        &["zeros", "-k", "12"],
        &["interlace", "--mode", "weight", "-k", "5..9", "-m", "0"],
        &["interlace", "--mode", "index", "-k", "0", "-m", "1..", "--epsilon", "0.1"],
        &["interlace", "--mode", "index", "-k", "0", "-m", "1", "--epsilon", "0.6"],
        &["verify", "--suite", "nope"],
        &["plot", "-k", "12", "-m", "0", "--samples", "1", "--out", "x.csv"],
    ] {
        assert_eq!(mzl(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn precision_env_and_flag() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_mzl"));
        c.args(["zeros", "-k", "24", "-m", "0"]).args(extra);
        match env {
            Some(v) => c.env("MZL_PREC_BITS", v),
            None => c.env_remove("MZL_PREC_BITS"),
        };
        c.output().unwrap()
    };
    let o = run(Some("320"), &[]);
    let Document::Zeros(d) = decode_document(&stdout(&o)).unwrap() else {
        panic!()
    };
    assert_eq!(d.metadata.prec_bits, 320);
    let o = run(Some("320"), &["--prec-bits", "192"]);
    let Document::Zeros(e) = decode_document(&stdout(&o)).unwrap() else {
        panic!()
    };
    assert_eq!(e.metadata.prec_bits, 192);
    for (a, b) in d.zeros_theta.iter().zip(&e.zeros_theta) {
        assert!((a - b).abs() < 1e-12);
    }
    assert_eq!(run(Some("many"), &[]).status.code(), Some(2));
    assert_eq!(run(Some("16"), &[]).status.code(), Some(2));
}

#[test]
fn zeros_of_counterexample_warn() {
    let o = mzl(&["zeros", "-k", "132", "-m", "-9"]);
    assert_eq!(o.status.code(), Some(0));
    let Document::Zeros(d) = decode_document(&stdout(&o)).unwrap() else {
        panic!()
    };
    assert_eq!(d.zeros_theta.len(), 1);
    assert_eq!(d.warnings.len(), 2, "{:?}", d.warnings);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn interlace_json_and_csv() {
    let o = mzl(&["interlace", "--mode", "index", "-k", "0", "-m", "1..4", "--epsilon", "0.1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let Document::Interlace(d) = decode_document(&stdout(&o)).unwrap() else {
        panic!()
    };
    assert_eq!((d.passed, d.failed, d.errors), (4, 0, 0));
    assert_eq!(d.pairs[0].first, (0, 1));
    assert_eq!(d.pairs[0].second, (0, 2));
    let o = mzl(&["interlace", "--mode", "weight", "-k", "-4..0", "-m", "2", "--format", "csv"]);
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 4, "{s}");
    assert!(s.starts_with("k1,m1,k2,m2,zeros1,zeros2,status,max_radius\n"));
}

#[test]
fn interlace_below_hypothesis_fails_claim() {
    // 1 arc zero against 3: alternation is impossible
    let o = mzl(&["interlace", "--mode", "weight", "-k", "132", "-m", "-9"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[1 / 3 zeros]"));
}

#[test]
fn verify_thresholds_json() {
    let o = mzl(&["verify", "--suite", "thresholds", "--format", "json", "--k-max", "300"]);
    assert_eq!(o.status.code(), Some(0));
    let Document::Verify(d) = decode_document(&stdout(&o)).unwrap() else {
        panic!()
    };
    assert!(d.all_hold);
    assert_eq!(d.reports.len(), 5);
    assert!(d.metadata.grids.contains_key("constants_grid"));
}

#[test]
fn verify_constants_coarse_grid() {
    // every constant still holds; only the acceptance margin is unmet
    let o = mzl(&["verify", "--suite", "constants", "--grid", "200"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("3 of 3 hold"));
}

#[test]
fn plot_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.csv");
    let o = mzl(&["plot", "-k", "24", "-m", "1", "--samples", "20", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), COLUMNS.join(","));
    assert_eq!(lines.count(), 20);
    let bad = dir.path().join("missing").join("trace.csv");
    let o = mzl(&["plot", "-k", "24", "-m", "1", "--out", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
