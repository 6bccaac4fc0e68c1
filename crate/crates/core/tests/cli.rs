use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qcss::io::GOLDEN;

fn qcss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcss"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_then_analyze_reports_nine() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.qmat");
    let o = qcss(&["gen", "thm41", "--len", "9", "--rho", "identity", "--output", p(&f)]);
    assert!(o.status.success());
    let o = qcss(&["analyze", "--input", p(&f)]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("measured-max 9.000000"), "{text}");
    assert!(text.contains("histogram 9.000000 "), "{text}");
}

#[test]
fn analyze_writes_report_file_and_engines_agree() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.qmat");
    let r = dir.path().join("report.txt");
    qcss(&["gen", "thm42", "--len", "15", "--output", p(&f)]);
    let naive = qcss(&["analyze", "--input", p(&f), "--engine", "naive", "--report", p(&r)]);
    let fft = qcss(&["analyze", "--input", p(&f), "--engine", "fft"]);
    assert_eq!(fs::read_to_string(&r).unwrap(), stdout(&naive));
    let strip = |s: String| s.lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(stdout(&naive)), strip(stdout(&fft)));
}

#[test]
fn gen_matches_golden_corpus() {
    for (kind, name) in [("thm41", "thm41_n9.qmat"), ("thm42", "thm42_n9.qmat")] {
        let o = qcss(&["gen", kind, "--len", "9"]);
        assert!(o.status.success());
        let golden = GOLDEN.iter().find(|(n, _)| *n == name).unwrap().1;
        assert_eq!(stdout(&o), golden, "{kind}");
    }
}

#[test]
fn prop1_pipeline_reproduces_golden() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.qseq");
    let m = dir.path().join("m.qmat");
    assert!(qcss(&["gen", "prop1", "--p", "2", "--n", "4", "--output", p(&s)]).status.success());
    let o = qcss(&["interleave", "--input", p(&s), "--flock", "3", "--output", p(&m)]);
    assert!(o.status.success());
    assert!(o.stderr.is_empty());
    let ours = fs::read_to_string(&m).unwrap();
    let golden = GOLDEN.iter().find(|(n, _)| *n == "prop1_q16_k3.qmat").unwrap().1;
    let body = |t: &str| t.split_once("\n\n").unwrap().1.to_string();
    assert_eq!(body(&ours), body(golden));
    assert_eq!(qcss(&["verify", "--input", p(&m)]).status.code(), Some(0));
}

#[test]
fn interleave_warns_when_family_too_small() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.qseq");
    fs::write(&s, "QSEQ1\norder 4\nperiod 6\nmembers 2\n\n0 1 2 3 0 1\n\n3 3 3 0 0 0\n").unwrap();
    let m = dir.path().join("m.qmat");
    let o = qcss(&["interleave", "--input", p(&s), "--flock", "3", "--output", p(&m)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    let o = qcss(&["interleave", "--input", p(&s), "--flock", "4", "--output", p(&m)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_passes_golden_and_rejects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let o = qcss(&["export-golden", "--dir", p(dir.path())]);
    assert!(o.status.success());
    for (name, body) in GOLDEN {
        let path = dir.path().join(name);
        assert_eq!(fs::read_to_string(&path).unwrap(), body);
        let o = qcss(&["verify", "--input", p(&path)]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        assert!(stdout(&o).ends_with("verdict pass\n"));
    }

    let path = dir.path().join("thm41_n9.qmat");
    let text = fs::read_to_string(&path).unwrap();
    // second row of the first member becomes 0 1 2 3 4 5 6 7 0
    let tampered = text.replacen("0 1 2 3 4 5 6 7 8\n", "0 1 2 3 4 5 6 7 0\n", 1);
    assert_ne!(tampered, text);
    let bad = dir.path().join("tampered.qmat");
    fs::write(&bad, tampered).unwrap();
    let o = qcss(&["verify", "--input", p(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("verdict fail"));

    let lowered = text.replace("declared 9\n", "declared 8\n");
    fs::write(&bad, lowered).unwrap();
    assert_eq!(qcss(&["verify", "--input", p(&bad)]).status.code(), Some(1));
}

#[test]
fn field_info_gf16() {
    let o = qcss(&["field-info", "--p", "2", "--n", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("q 16\n"));
    assert!(text.contains("modulus 1,1,0,0,1\n"));
    assert!(text.contains("trace-distribution 8,8\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(qcss(&[]).status.code(), Some(2));
    assert_eq!(qcss(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qcss(&["field-info", "--p", "4", "--n", "2"]).status.code(), Some(2));
    assert_eq!(qcss(&["gen", "thm41", "--len", "8"]).status.code(), Some(2));
    assert_eq!(qcss(&["gen", "thm41", "--len", "9", "--rho", "nope"]).status.code(), Some(2));
    assert_eq!(qcss(&["analyze", "--input", "/nonexistent/x.qmat"]).status.code(), Some(1));
    let o = qcss(&["analyze", "--input", "x", "--engine", "quantum"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--engine"));
    assert_eq!(qcss(&["--help"]).status.code(), Some(0));
}

#[test]
fn malformed_input_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.qmat");
    fs::write(&f, "QMAT1\norder 3\nflock 1\nlength 2\nmembers 1\n\n0 5\n").unwrap();
    let o = qcss(&["analyze", "--input", p(&f)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 7"));
}

#[test]
fn rho_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let rho = dir.path().join("rho.txt");
    fs::write(&rho, "0 2 4 6 8\n1 3 5 7\n").unwrap();
    let o = qcss(&["gen", "thm42", "--len", "9", "--rho", p(&rho)]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("meta rho table 0,2,4,6,8,1,3,5,7\n"));
    let f = dir.path().join("f.qmat");
    fs::write(&f, text).unwrap();
    assert_eq!(qcss(&["verify", "--input", p(&f)]).status.code(), Some(0));

    fs::write(&rho, "0 1 1 3 4 5 6 7 8").unwrap();
    assert_eq!(qcss(&["gen", "thm41", "--len", "9", "--rho", p(&rho)]).status.code(), Some(1));
}

#[test]
fn trend_table() {
    let o = qcss(&["trend", "--kind", "prop1", "--points", "16:3,64:7"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("16 15 3 5 4.000000 3.487429 1.146977\n"), "{text}");
    assert!(text.contains("direction decreasing\n"));
    assert_eq!(qcss(&["trend", "--kind", "thm41", "--points", "8,10"]).status.code(), Some(2));
    assert_eq!(qcss(&["trend", "--kind", "other", "--points", "9"]).status.code(), Some(2));
}

#[test]
fn invocations_are_deterministic() {
    for args in [
        vec!["gen", "thm41-del", "--len", "15", "--row", "4", "--rho", "reversal"],
        vec!["gen", "prop1", "--p", "3", "--n", "2"],
        vec!["trend", "--kind", "thm42", "--points", "9,25"],
    ] {
        let a = qcss(&args);
        let b = qcss(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn thread_override_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.qmat");
    qcss(&["gen", "thm41", "--len", "15", "--output", p(&f)]);
    let one = Command::new(env!("CARGO_BIN_EXE_qcss"))
        .args(["analyze", "--input", p(&f)])
        .env("THREADS", "1")
        .output()
        .unwrap();
    let three = Command::new(env!("CARGO_BIN_EXE_qcss"))
        .args(["analyze", "--input", p(&f)])
        .env("THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(one.stdout, three.stdout);
}

#[test]
fn run_with_captures_output() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = qcss::cli::run_with(["qcss", "field-info", "--p", "3", "--n", "2"], &mut out, &mut err);
    assert_eq!(code, 0);
    assert!(String::from_utf8(out).unwrap().starts_with("q 9\n"));
    assert!(err.is_empty());
}
