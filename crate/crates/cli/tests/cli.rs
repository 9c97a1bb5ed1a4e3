use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn workspace(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(rel)
}

fn qfhe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfhe"))
        .args(args)
        .output()
        .unwrap()
}

fn run_into(out: &Path, extra: &[&str]) -> Output {
    let pattern = workspace("patterns/reference.txt");
    let mut args = vec![
        "run",
        "--pattern",
        pattern.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    qfhe(&args)
}

#[test]
fn run_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_into(
        dir.path(),
        &[
            "--mode",
            "qfhe",
            "--shots",
            "100",
            "--seed",
            "3",
            "--inputs",
            "1,6",
            "--dump-transcript",
        ],
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    for f in ["report.json", "counts.csv", "transcript.txt", "timing.txt"] {
        assert!(dir.path().join(f).is_file(), "{f}");
    }
    let csv = std::fs::read_to_string(dir.path().join("counts.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 3);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("mode qfhe seed 3 shots 100"));
}

#[test]
fn circuit_mode_and_compare() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let coupling = workspace("couplings/ladder16.txt");
    let placement = workspace("couplings/ladder16.placement");
    let o = run_into(
        a.path(),
        &[
            "--mode",
            "qfhe-circuit",
            "--shots",
            "500",
            "--coupling",
            coupling.to_str().unwrap(),
            "--placement",
            placement.to_str().unwrap(),
        ],
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let o = run_into(
        b.path(),
        &["--mode", "interactive", "--shots", "500", "--seed", "1"],
    );
    assert_eq!(o.status.code(), Some(0));

    let o = qfhe(&[
        "compare",
        a.path().to_str().unwrap(),
        b.path().to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );
    assert!(String::from_utf8_lossy(&o.stdout).contains("min p"));

    // nothing passes alpha = 1
    let o = qfhe(&[
        "compare",
        a.path().to_str().unwrap(),
        b.path().to_str().unwrap(),
        "--alpha",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn reruns_write_identical_files() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = run_into(
            d.path(),
            &["--mode", "interactive", "--shots", "100", "--seed", "9"],
        );
        assert_eq!(o.status.code(), Some(0));
    }
    for f in ["report.json", "counts.csv"] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn selftest_and_mutations() {
    let o = qfhe(&["selftest"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );
    assert!(!String::from_utf8_lossy(&o.stdout).contains("FAIL"));
    for m in ["drop-half-pi-x-term", "control-phase-t", "no-control-phase"] {
        let o = qfhe(&["selftest", "--mutate", m]);
        assert_eq!(o.status.code(), Some(1), "{m}");
        assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
    }
}

#[test]
fn invalid_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "not a pattern\n").unwrap();
    let o = qfhe(&[
        "run",
        "--mode",
        "qfhe",
        "--pattern",
        bad.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));

    let o = run_into(dir.path(), &["--mode", "qfhe", "--inputs", "9"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run_into(dir.path(), &["--mode", "qfhe-circuit"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run_into(dir.path(), &["--mode", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
    let o = qfhe(&["compare", "/nonexistent/a", "/nonexistent/b"]);
    assert_eq!(o.status.code(), Some(2));
}
