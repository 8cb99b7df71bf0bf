use std::path::Path;
use std::process::{Command, Output};

use padic_tnf_cli::Document;

fn padic_tnf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padic-tnf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const SQRT2: &str = "p=7 prec=6 vars=x,y\nx^2 - 2\ny - x\n";

#[test]
fn solves_the_square_root_system() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "sqrt2.sys", SQRT2);
    let out = padic_tnf(&["--mode", "solve", "--input", &input, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let Document::Solve(report) = Document::from_json(&stdout(&out)).unwrap() else {
        panic!("expected a solve document");
    };
    let s = report.solution;
    assert_eq!(s.points.len(), 2);
    let mut leading: Vec<u64> = s.points.iter().map(|p| p.coordinates[0].digits()[0]).collect();
    leading.sort();
    assert_eq!(leading, [3, 4]);
    assert!(s.points.iter().all(|p| p.residual_valuation >= 5));

    let human = padic_tnf(&["--mode", "solve", "--input", &input]);
    assert_eq!(human.status.code(), Some(0));
    let text = stdout(&human);
    assert!(text.contains("x = 3 + 1*7 + 2*7^2"), "{text}");
    assert!(text.contains("x = 4 + 5*7 + 4*7^2"), "{text}");
}

#[test]
fn eigenpair_of_the_example_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "a.mat", "7 6 2 2\n1*7^3 1\n0 -1*7^3\n");
    let out = padic_tnf(&["--mode", "eig", "--input", &input, "--format", "json", "--strict"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let Document::Eig(report) = Document::from_json(&stdout(&out)).unwrap() else {
        panic!("expected an eig document");
    };
    let pair = report
        .pairs
        .iter()
        .find(|p| p.value.valuation() == 3 && p.value.digits()[0] == 1)
        .expect("λ = 7^3");
    assert!(pair.vector[0].is_unit());
    assert!(pair.vector[1].is_zero());
    assert!(pair.residual_valuation >= 6);
}

#[test]
fn malformed_input_reports_its_location() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.sys", "p=7 prec=6 vars=x\nx^2 + * 3\n");
    let out = padic_tnf(&["--mode", "solve", "--input", &input]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("column"), "{err}");

    let bad_matrix = write(dir.path(), "bad.mat", "7 6 2 2\n1 2\n3\n");
    let out = padic_tnf(&["--mode", "qr", "--input", &bad_matrix]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(padic_tnf(&["--mode", "solve"]).status.code(), Some(2));
    assert_eq!(padic_tnf(&["--mode", "nonsense"]).status.code(), Some(2));
    let missing = padic_tnf(&["--mode", "eig", "--input", "/nonexistent/file.mat"]);
    assert_eq!(missing.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "sqrt2.sys", SQRT2);
    let out = padic_tnf(&["--mode", "solve", "--input", &input, "--prime", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = padic_tnf(&["--mode", "solve", "--input", &input, "--prime", "11"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn no_rational_solutions_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    // 3 is not a square mod 7
    let input = write(dir.path(), "sqrt3.sys", "p=7 prec=6 vars=x\nx^2 - 3\n");
    let out = padic_tnf(&["--mode", "solve", "--input", &input, "--format", "json"]);
    assert_eq!(out.status.code(), Some(3));
    let Document::Solve(report) = Document::from_json(&stdout(&out)).unwrap() else {
        panic!("expected a solve document");
    };
    assert!(report.solution.points.is_empty());
    assert_eq!(report.solution.unresolved_dimension, 2);

    let inconsistent = write(dir.path(), "none.sys", "p=7 prec=6 vars=x\nx - 1\nx - 2\n");
    assert_eq!(padic_tnf(&["--mode", "solve", "--input", &inconsistent]).status.code(), Some(3));
}

#[test]
fn json_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "sys.sys", "p=11 prec=8 vars=x,y\nx^2 + y^2 - 5\nx*y - 2\n");
    let a = padic_tnf(&["--mode", "solve", "--input", &input, "--format", "json", "--seed", "9"]);
    let b = padic_tnf(&["--mode", "solve", "--input", &input, "--format", "json", "--seed", "9"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let doc = Document::from_json(&stdout(&a)).unwrap();
    assert_eq!(doc.to_json() + "\n", stdout(&a));

    let out_path = dir.path().join("out.json");
    let c = padic_tnf(&[
        "--mode",
        "solve",
        "--input",
        &input,
        "--format",
        "json",
        "--seed",
        "9",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(c.status.code(), Some(0));
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read(&out_path).unwrap(), a.stdout);
}

#[test]
fn matrix_modes_produce_documents() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "m.mat", "7 8 3 3\n1 2 3\n7 1 4\n0 49 2\n");
    for mode in ["qr", "svd", "schur", "eig"] {
        let out = padic_tnf(&["--mode", mode, "--input", &input, "--format", "json"]);
        assert_eq!(out.status.code(), Some(0), "{mode}: {}", stderr(&out));
        let doc = Document::from_json(&stdout(&out)).unwrap();
        assert_eq!(doc.to_json() + "\n", stdout(&out), "{mode}");
        let human = padic_tnf(&["--mode", mode, "--input", &input]);
        assert_eq!(human.status.code(), Some(0));
        assert!(!human.stdout.is_empty());
    }
}

#[test]
fn precision_override_applies_to_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "sqrt2.sys", SQRT2);
    let out = padic_tnf(&["--mode", "solve", "--input", &input, "--format", "json", "--prec", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let Document::Solve(report) = Document::from_json(&stdout(&out)).unwrap() else {
        panic!("expected a solve document");
    };
    assert_eq!(report.solution.precision, 10);
    assert!(report.solution.points.iter().all(|p| p.residual_valuation >= 9));
}

#[test]
fn bench_writes_csv() {
    let out = padic_tnf(&["--mode", "bench", "--sizes", "2,3", "--samples", "1", "--prec", "6"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("solver,n,prime,precision,sample,seconds,pairs,min_residual"));
    assert_eq!(lines.count(), 2 * 3);
}
