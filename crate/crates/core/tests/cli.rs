use std::path::Path;
use std::process::{Command, Output};

use echelon::io::{parse_structured, StructuredResult};
use echelon::Rational;
use tempfile::TempDir;

const EXAMPLE: &str = "1,2,11,17\n3,7,37,57\n4,9,48,74\n";

fn echelon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_echelon"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn rref_prints_z_rows() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", EXAMPLE);
    let out = echelon(&["rref", &a]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for row in ["1 0 3 5", "0 1 4 6", "0 0 0 0"] {
        assert!(text.contains(row), "{text}");
    }
    assert!(text.contains("rank: 2"));
    assert!(text.contains("pivot columns: 1 2"));
}

#[test]
fn empty_input_has_rank_zero() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "empty.csv", "");
    let out = echelon(&["rref", &a]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("rank: 0"));
}

#[test]
fn ragged_csv_reports_line() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "bad.csv", "1,2,3\n4,5\n");
    let out = echelon(&["rref", &a]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));
}

#[test]
fn missing_file_is_input_error() {
    assert_eq!(
        echelon(&["rref", "/nonexistent/a.csv"]).status.code(),
        Some(2)
    );
}

#[test]
fn cr_reports_verified() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", EXAMPLE);
    let out = echelon(&["cr", &a]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("verified: true"));
    assert!(text.contains("  1 2\n  3 7\n  4 9\n"), "{text}");

    let b = write(&dir, "b.csv", "1,2,3,4\n1,2,4,5\n");
    let out = echelon(&["cr", "--output", "structured", &b]);
    let text = stdout(&out);
    assert!(text.contains("pivot_cols: [1,3]\n"));
    assert!(text.contains("verified: true\n"));
}

#[test]
fn cr_float_large_random() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(50);
    let g = echelon::oracle::random_full_rank(50, 30, 5, &mut rng);
    let b = echelon::oracle::random_full_rank(30, 80, 5, &mut rng);
    let a = g.matmul(&b).unwrap();
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "big.csv",
        &echelon::io::write_csv(&a, echelon::io::DocMode::Exact),
    );
    let out = echelon(&["cr", "--mode", "float", "--output", "structured", &path]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("\nrank: 30\n"));
    assert!(text.contains("verified: true"));
}

#[test]
fn nullspace_special_solutions() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", EXAMPLE);
    let out = echelon(&["nullspace", "--output", "structured", &a]);
    assert_eq!(out.status.code(), Some(0));
    match parse_structured::<Rational>(&stdout(&out)).unwrap() {
        StructuredResult::Nullspace(ns) => {
            let expected =
                echelon::Matrix::<Rational>::from_i64_rows(&[[-3, -5], [-4, -6], [1, 0], [0, 1]])
                    .unwrap();
            assert_eq!(ns.x, expected);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn solve_statuses() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", EXAMPLE);
    let bad = write(&dir, "b.csv", "0\n0\n1\n");
    let out = echelon(&["solve", &a, "--rhs", &bad]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("status: inconsistent"));

    // b = column 1 + column 2, written as a row vector.
    let good = write(&dir, "g.csv", "3,10,13\n");
    let out = echelon(&["solve", &a, "--rhs", &good]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("status: infinite"));
    assert!(text.contains("particular: 1 1 0 0"), "{text}");

    let wrong = write(&dir, "w.csv", "1\n2\n");
    assert_eq!(
        echelon(&["solve", &a, "--rhs", &wrong]).status.code(),
        Some(2)
    );
    assert_eq!(echelon(&["solve", &a]).status.code(), Some(2));
}

#[test]
fn intersect_and_block() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", EXAMPLE);
    let out = echelon(&["intersect", &a, "--rows", "1,2", "--cols", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(
        text.contains("invertible: true") && text.contains("det: 1\n"),
        "{text}"
    );

    // Three indices for a rank-2 matrix.
    assert_eq!(
        echelon(&["intersect", &a, "--rows", "1,2,3", "--cols", "1,2,3"])
            .status
            .code(),
        Some(3)
    );
    let dep = write(&dir, "dep.csv", "1,2\n2,4\n3,7\n");
    let out = echelon(&["intersect", &dep, "--rows", "1,2", "--cols", "1,2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("dependent"));

    let out = echelon(&["block", &a, "--output", "structured"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out)
        .contains("F: {\"cols\":2,\"entries\":[[\"3\",\"5\"],[\"4\",\"6\"]],\"rows\":2}"));
    assert_eq!(
        echelon(&["block", &a, "--rows", "1,2", "--cols", "1,3"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        echelon(&["block", &a, "--rows", "1", "--cols", "3"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn flag_validation() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", EXAMPLE);
    assert_eq!(
        echelon(&["rref", &a, "--tol-abs", "1e-9"]).status.code(),
        Some(2)
    );
    assert_eq!(echelon(&["rref", &a, "--seed", "1"]).status.code(), Some(2));
    assert_eq!(echelon(&["cr", &a, "--rows", "1"]).status.code(), Some(2));
    assert_eq!(echelon(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        echelon(&[
            "rref",
            &a,
            "--mode",
            "float",
            "--tol-abs",
            "1e-9",
            "--pivot",
            "first"
        ])
        .status
        .code(),
        Some(0)
    );
}

#[test]
fn matrix_market_input() {
    let dir = TempDir::new().unwrap();
    let a = write(
        &dir,
        "a.mtx",
        "%%MatrixMarket matrix coordinate integer general\n2 2 2\n1 1 2\n2 2 3\n",
    );
    let out = echelon(&["rref", &a, "--track-e"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("rank: 2"));
    assert!(text.contains("1/2"), "{text}");
}

#[test]
fn bench_is_deterministic() {
    let args = ["bench", "--sizes", "2,5,10", "--trials", "3", "--seed", "9"];
    let first = echelon(&args);
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    assert_eq!(first.stdout, echelon(&args).stdout);
    let structured = echelon(&[&args[..], &["--output", "structured"]].concat());
    let text = stdout(&structured);
    assert!(text.starts_with("kind: \"bench\"\n"));
    for line in stdout(&first).lines().skip(2) {
        let cells: Vec<&str> = line.split_whitespace().collect();
        let (g, gj): (u64, u64) = (cells[2].parse().unwrap(), cells[3].parse().unwrap());
        assert!(g <= gj, "{line}");
        if cells[0] != "2" {
            assert_eq!(cells[5], "true", "{line}");
        }
    }
}

#[test]
fn structured_output_is_deterministic_and_parses() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", "2,4,1/3\n1,-1,0\n3,3,1/3\n");
    for cmd in ["rref", "cr", "nullspace"] {
        let one = echelon(&[cmd, &a, "--output", "structured"]);
        let two = echelon(&[cmd, &a, "--output", "structured"]);
        assert_eq!(one.status.code(), Some(0));
        assert_eq!(one.stdout, two.stdout, "{cmd}");
        parse_structured::<Rational>(&stdout(&one)).unwrap();
    }
    let b = write(&dir, "b.csv", "1\n2\n3\n");
    let out = echelon(&["solve", &a, "--rhs", &b, "--output", "structured"]);
    match parse_structured::<Rational>(&stdout(&out)).unwrap() {
        StructuredResult::Solve(s) => assert_eq!(s.rank, 2),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn stdin_input() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_echelon"))
        .arg("rref")
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(EXAMPLE.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("1 0 3 5"));
    assert!(Path::new(env!("CARGO_BIN_EXE_echelon")).exists());
}
