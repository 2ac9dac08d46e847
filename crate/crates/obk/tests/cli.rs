//! End-to-end CLI tests driven through `obk::cli::run`, exercising the
//! same code path as the binary but with captured reports and exit codes.

use std::path::PathBuf;

use obk::bundle::{GaugeTransform, TransitionMatrix};
use obk::cli::run;
use obk::format::{read_bundle_file, read_gauge_file, write_bundle_file};
use obk::jet::UJet;
use obk::matrix::Mat;
use obk::scalar::int;

fn tmp(dir: &tempfile::TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

fn canonical_input() -> TransitionMatrix {
    // diag(z^3, 1) with the window term u z^2, already in canonical form
    let trunc = 2;
    let mut m = Mat::filled(2, 2, UJet::zero(trunc));
    m.set(0, 0, UJet::monomial(0, 3, int(1), trunc).unwrap());
    m.set(0, 1, UJet::monomial(1, 2, int(1), trunc).unwrap());
    m.set(1, 1, UJet::monomial(0, 0, int(1), trunc).unwrap());
    TransitionMatrix::new(1, m).unwrap()
}

#[test]
fn normalize_reproduces_canonical_input_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let input = tmp(&dir, "in.obk");
    let output = tmp(&dir, "out.obk");
    let gauge = tmp(&dir, "g.obk");
    write_bundle_file(&input, &canonical_input()).unwrap();

    let r = run([
        "obk",
        "normalize",
        &input,
        "-o",
        &output,
        "--emit-gauge",
        &gauge,
    ]);
    assert_eq!(r.exit_code, 0, "{}", r.report);

    let before = std::fs::read(&input).unwrap();
    let after = std::fs::read(&output).unwrap();
    assert_eq!(before, after, "canonical input should pass through unchanged");

    let g = read_gauge_file(&gauge).unwrap();
    assert_eq!(g, GaugeTransform::identity(1, 2, 2));
}

#[test]
fn normalize_report_names_splitting_and_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let input = tmp(&dir, "in.obk");
    write_bundle_file(&input, &canonical_input()).unwrap();

    let r = run(["obk", "normalize", &input]);
    assert_eq!(r.exit_code, 0);
    assert!(r.report.contains("splitting type: (3, 0)"), "{}", r.report);
    assert!(r.report.contains("canonical space dimension: 1"), "{}", r.report);

    let m = run(["obk", "--format", "machine", "normalize", &input]);
    assert_eq!(m.exit_code, 0);
    assert!(m.report.contains("splitting=3,0\n"), "{}", m.report);
    assert!(m.report.contains("dim=1\n"), "{}", m.report);
    assert!(m.report.contains("split=false\n"), "{}", m.report);
}

#[test]
fn splitting_prints_exponents_in_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    let input = tmp(&dir, "in.obk");
    let t = TransitionMatrix::diagonal(2, &[4, 1, 0], 1).unwrap();
    write_bundle_file(&input, &t).unwrap();

    let plain = run(["obk", "splitting", &input]);
    assert_eq!(plain.exit_code, 0);
    assert_eq!(plain.report, "4 1 0\n");

    let machine = run(["obk", "--format", "machine", "splitting", &input]);
    assert_eq!(machine.exit_code, 0);
    assert_eq!(machine.report, "splitting=4,1,0\n");
}

#[test]
fn splitting_handles_scrambled_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = tmp(&dir, "in.obk");
    let r = run([
        "obk", "random", "--k", "2", "--rank", "2", "--j", "6,1", "--seed", "7", "--ops", "6", "-o", &input,
    ]);
    assert_eq!(r.exit_code, 0, "{}", r.report);

    let s = run(["obk", "splitting", &input]);
    assert_eq!(s.exit_code, 0);
    assert_eq!(s.report, "6 1\n");
}

#[test]
fn dim_matches_the_formula_and_lists_the_window() {
    let plain = run(["obk", "dim", "--k", "2", "--j1", "9", "--j2", "1"]);
    assert_eq!(plain.exit_code, 0);
    assert_eq!(plain.report, "9\n");

    let machine = run(["obk", "--format", "machine", "dim", "--k", "2", "--j1", "9", "--j2", "1"]);
    assert_eq!(machine.report, "dim=9\n");

    let verbose = run(["obk", "dim", "--k", "2", "--j1", "9", "--j2", "1", "--verbose"]);
    assert_eq!(verbose.exit_code, 0);
    let lines: Vec<&str> = verbose.report.lines().collect();
    assert_eq!(lines[0], "9");
    assert_eq!(lines.len(), 10, "one line per window monomial: {}", verbose.report);
    assert!(lines[1..].iter().all(|l| l.starts_with("u=")), "{}", verbose.report);

    let bad = run(["obk", "dim", "--k", "0", "--j1", "3", "--j2", "0"]);
    assert_eq!(bad.exit_code, 2);
}

#[test]
fn verify_accepts_the_normalize_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = tmp(&dir, "in.obk");
    let output = tmp(&dir, "out.obk");
    let gauge = tmp(&dir, "g.obk");
    let r = run([
        "obk", "random", "--k", "1", "--rank", "3", "--j", "4,2,0", "--seed", "11", "--ops", "6", "-o", &input,
    ]);
    assert_eq!(r.exit_code, 0, "{}", r.report);
    let n = run([
        "obk",
        "normalize",
        &input,
        "-o",
        &output,
        "--emit-gauge",
        &gauge,
    ]);
    assert_eq!(n.exit_code, 0, "{}", n.report);

    let v = run(["obk", "verify", &input, &output, &gauge]);
    assert_eq!(v.exit_code, 0, "{}", v.report);
    assert!(v.report.contains("verification passed"), "{}", v.report);

    let vm = run(["obk", "--format", "machine", "verify", &input, &output, &gauge]);
    assert_eq!(vm.report, "verify=ok\n");
}

#[test]
fn verify_rejects_a_corrupted_gauge_and_names_the_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let input = tmp(&dir, "in.obk");
    let output = tmp(&dir, "out.obk");
    let gauge = tmp(&dir, "g.obk");
    run([
        "obk", "random", "--k", "1", "--rank", "2", "--j", "5,1", "--seed", "3", "--ops", "6", "-o", &input,
    ]);
    run([
        "obk",
        "normalize",
        &input,
        "-o",
        &output,
        "--emit-gauge",
        &gauge,
    ]);

    // double one coefficient of one gauge factor, keeping the file parseable
    let text = std::fs::read_to_string(&gauge).unwrap();
    let mut corrupted = String::new();
    let mut done = false;
    for line in text.lines() {
        if !done && line.starts_with("term ") {
            let (head, tail) = line.split_at(line.find("c=").unwrap() + 2);
            corrupted.push_str(head);
            if let Some(rest) = tail.strip_prefix('-') {
                corrupted.push_str(rest);
            } else {
                corrupted.push('-');
                corrupted.push_str(tail);
            }
            done = true;
        } else {
            corrupted.push_str(line);
        }
        corrupted.push('\n');
    }
    assert!(done);
    std::fs::write(&gauge, corrupted).unwrap();

    let v = run(["obk", "verify", &input, &output, &gauge]);
    assert_eq!(v.exit_code, 1, "{}", v.report);
    assert!(
        v.report.contains("u^") && v.report.contains("z^"),
        "report should name the offending coefficient: {}",
        v.report
    );
}

#[test]
fn verify_distinguishes_parse_errors_from_failures() {
    let dir = tempfile::tempdir().unwrap();
    let input = tmp(&dir, "in.obk");
    let output = tmp(&dir, "out.obk");
    let gauge = tmp(&dir, "g.obk");
    run([
        "obk", "random", "--k", "1", "--rank", "2", "--j", "3,0", "--seed", "1", "--ops", "6", "-o", &input,
    ]);
    run([
        "obk",
        "normalize",
        &input,
        "-o",
        &output,
        "--emit-gauge",
        &gauge,
    ]);

    let missing = run(["obk", "verify", &input, &output, &tmp(&dir, "nope.obk")]);
    assert_eq!(missing.exit_code, 2);

    std::fs::write(&gauge, "not a gauge file\n").unwrap();
    let garbled = run(["obk", "verify", &input, &output, &gauge]);
    assert_eq!(garbled.exit_code, 2, "{}", garbled.report);
}

#[test]
fn random_writes_a_bundle_with_the_requested_data() {
    let dir = tempfile::tempdir().unwrap();
    let input = tmp(&dir, "b.obk");
    let r = run([
        "obk", "random", "--k", "3", "--rank", "2", "--j", "7,2", "--seed", "9", "--ops", "4", "-o", &input,
    ]);
    assert_eq!(r.exit_code, 0, "{}", r.report);
    let t = read_bundle_file(PathBuf::from(&input)).unwrap();
    assert_eq!(t.k(), 3);
    assert_eq!(t.rank(), 2);

    let again = tmp(&dir, "b2.obk");
    run([
        "obk", "random", "--k", "3", "--rank", "2", "--j", "7,2", "--seed", "9", "--ops", "4", "-o", &again,
    ]);
    assert_eq!(
        std::fs::read(&input).unwrap(),
        std::fs::read(&again).unwrap(),
        "same seed must give the same file"
    );

    let bad = run(["obk", "random", "--k", "3", "--rank", "2", "--j", "7", "--seed", "9", "--ops", "4"]);
    assert_eq!(bad.exit_code, 2, "{}", bad.report);
}

#[test]
fn section_reports_cocycle_and_trivialization() {
    let r = run(["obk", "section", "--k", "2", "--j", "2"]);
    assert_eq!(r.exit_code, 0);
    assert!(r.report.contains("cocycle z^j*s_U = s_V: holds"), "{}", r.report);

    let m = run(["obk", "--format", "machine", "section", "--k", "2", "--j", "2"]);
    assert!(m.report.contains("cocycle=true\n"), "{}", m.report);
    assert!(m.report.contains("trivializes=true\n"), "{}", m.report);

    let negative = run(["obk", "--format", "machine", "section", "--k", "2", "--j", "-1"]);
    assert_eq!(negative.exit_code, 0);
    assert!(negative.report.contains("trivializes=false\n"), "{}", negative.report);
}

#[test]
fn fuzz_reports_each_seed_and_a_summary() {
    let r = run(["obk", "fuzz", "--k", "1", "--seeds", "2..5"]);
    assert_eq!(r.exit_code, 0, "{}", r.report);
    let lines: Vec<&str> = r.report.lines().collect();
    assert_eq!(lines.len(), 5, "four seed lines plus a summary: {}", r.report);
    for (i, seed) in (2..=5).enumerate() {
        assert!(
            lines[i].contains(&format!("seed {seed}")),
            "line {i} should mention seed {seed}: {}",
            r.report
        );
    }
    assert!(lines[4].contains("4 passed"), "{}", r.report);

    let bad_range = run(["obk", "fuzz", "--k", "1", "--seeds", "5..2"]);
    assert_eq!(bad_range.exit_code, 2);
}

#[test]
fn reports_use_no_ansi_escapes_by_default() {
    let dir = tempfile::tempdir().unwrap();
    let input = tmp(&dir, "in.obk");
    write_bundle_file(&input, &canonical_input()).unwrap();
    for argv in [
        vec!["obk", "normalize", &input],
        vec!["obk", "section", "--k", "1", "--j", "1"],
        vec!["obk", "fuzz", "--k", "1", "--seeds", "0..2"],
    ] {
        let r = run(argv.iter().copied());
        assert!(!r.report.contains('\x1b'), "unexpected escape in {}", r.report);
    }
}

#[test]
fn usage_errors_exit_2_and_help_exits_0() {
    let unknown = run(["obk", "frobnicate"]);
    assert_eq!(unknown.exit_code, 2);

    let missing_arg = run(["obk", "dim", "--k", "2"]);
    assert_eq!(missing_arg.exit_code, 2);

    let help = run(["obk", "--help"]);
    assert_eq!(help.exit_code, 0);
    assert!(help.report.contains("normalize"), "{}", help.report);
}
