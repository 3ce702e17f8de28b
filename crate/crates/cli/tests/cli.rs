//! End-to-end tests for the `grounded` binary: the documented pipeline,
//! artifact round-trips, byte-level determinism, and exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn grounded() -> Command {
    Command::new(env!("CARGO_BIN_EXE_grounded"))
}

fn run_ok(args: &[&str], dir: &Path) -> Output {
    let out = grounded().args(args).current_dir(dir).output().unwrap();
    assert!(
        out.status.success(),
        "`grounded {}` failed:\n{}",
        args.join(" "),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn write_seeds(dir: &Path) {
    fs::write(dir.join("seeds.txt"), "0=0\n0<0\n").unwrap();
}

#[test]
fn pipeline_build_fixpoint_classify() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write_seeds(dir);

    run_ok(
        &[
            "build",
            "--seeds",
            "seeds.txt",
            "--depth",
            "1",
            "--t-depth",
            "0",
            "--out",
            "art",
        ],
        dir,
    );
    let universe = fs::read_to_string(dir.join("art/universe.tsv")).unwrap();
    assert!(universe.lines().count() > 2_000);
    let w = fs::read_to_string(dir.join("art/w.txt")).unwrap();
    assert_eq!(w.lines().count(), 19);

    run_ok(
        &[
            "fixpoint",
            "--seeds",
            "seeds.txt",
            "--seed",
            "empty",
            "--out",
            "art",
        ],
        dir,
    );
    let trace = fs::read_to_string(dir.join("art/fixpoint_trace.tsv")).unwrap();
    assert!(trace.starts_with("0\tseed\t"));

    // The code of `0=0` comes from the universe file itself.
    let code = universe
        .lines()
        .find_map(|l| l.strip_suffix("\t0=0"))
        .expect("0=0 in universe");

    let out = run_ok(
        &["classify", "--seeds", "seeds.txt", &format!("T({code})")],
        dir,
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("true\n"), "got: {text}");
    assert!(text.contains("in G(U)"));

    let out = run_ok(&["classify", "--seeds", "seeds.txt", "Ax T(x)"], dir);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("false\n"));

    // The negation of a grounded-true compound is ungrounded: its
    // falsity witness exceeds the truncation.
    let out = run_ok(&["classify", "--seeds", "seeds.txt", "!((0=0 | 0=0))"], dir);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("undefined\n"));

    let out = run_ok(&["classify", "--seeds", "seeds.txt", "Ex T(x)"], dir);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("true\n"));
}

#[test]
fn verify_exits_zero_on_shipped_fixture() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write_seeds(dir);
    let out = run_ok(&["verify", "--seeds", "seeds.txt", "--samples", "5"], dir);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("all pass"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn artifacts_round_trip_through_export() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write_seeds(dir);
    run_ok(&["build", "--seeds", "seeds.txt", "--out", "art"], dir);
    run_ok(&["fixpoint", "--seeds", "seeds.txt", "--out", "art"], dir);
    run_ok(
        &["trace", "--seeds", "seeds.txt", "--u", "W", "--out", "art"],
        dir,
    );

    for (kind, file) in [
        ("universe", "art/universe.tsv"),
        ("codeset", "art/w.txt"),
        ("codeset", "art/fixpoint.txt"),
        ("trace", "art/operator_trace.tsv"),
        ("fixpoint-trace", "art/fixpoint_trace.tsv"),
    ] {
        let reexported = format!("{file}.rt");
        run_ok(
            &[
                "export",
                "--kind",
                kind,
                "--in",
                file,
                "--out-file",
                &reexported,
            ],
            dir,
        );
        let before = fs::read(dir.join(file)).unwrap();
        let after = fs::read(dir.join(&reexported)).unwrap();
        assert_eq!(before, after, "{kind} artifact changed under export");
    }
}

#[test]
fn identical_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write_seeds(dir);
    for out in ["a", "b"] {
        run_ok(&["build", "--seeds", "seeds.txt", "--out", out], dir);
        run_ok(
            &[
                "fixpoint",
                "--seeds",
                "seeds.txt",
                "--seed",
                "W",
                "--out",
                out,
            ],
            dir,
        );
    }
    for name in [
        "universe.tsv",
        "w.txt",
        "fixpoint.txt",
        "fixpoint_trace.tsv",
    ] {
        let a = fs::read(dir.join("a").join(name)).unwrap();
        let b = fs::read(dir.join("b").join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between runs");
    }
}

#[test]
fn usage_errors_exit_two() {
    let out = grounded().arg("nonsense").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = grounded()
        .args(["export", "--kind", "universe"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write_seeds(dir);

    // Budget too small.
    let out = grounded()
        .args([
            "build",
            "--seeds",
            "seeds.txt",
            "--budget",
            "10",
            "--out",
            "art",
        ])
        .current_dir(dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));

    // Unsound seed: a code set holding only a false base sentence.
    run_ok(&["build", "--seeds", "seeds.txt", "--out", "art"], dir);
    let universe = fs::read_to_string(dir.join("art/universe.tsv")).unwrap();
    let false_code = universe
        .lines()
        .find_map(|l| l.strip_suffix("\t0<0"))
        .unwrap();
    fs::write(dir.join("bad_seed.txt"), format!("{false_code}\n")).unwrap();
    let out = grounded()
        .args([
            "fixpoint",
            "--seeds",
            "seeds.txt",
            "--seed",
            "bad_seed.txt",
            "--out",
            "art",
        ])
        .current_dir(dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed rejected"));

    // Malformed sentence.
    let out = grounded()
        .args(["classify", "--seeds", "seeds.txt", "(0=0 |"])
        .current_dir(dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    // Seed numeral beyond the configured bound.
    fs::write(dir.join("big.txt"), "17=17\n").unwrap();
    let out = grounded()
        .args([
            "build",
            "--seeds",
            "big.txt",
            "--numeric-bound",
            "16",
            "--out",
            "art",
        ])
        .current_dir(dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds"));
}

#[test]
fn jobs_flag_does_not_change_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write_seeds(dir);
    run_ok(&["build", "--seeds", "seeds.txt", "--out", "one"], dir);
    run_ok(
        &[
            "--jobs",
            "2",
            "build",
            "--seeds",
            "seeds.txt",
            "--out",
            "two",
        ],
        dir,
    );
    run_ok(
        &["trace", "--seeds", "seeds.txt", "--u", "W", "--out", "one"],
        dir,
    );
    run_ok(
        &[
            "--jobs",
            "2",
            "trace",
            "--seeds",
            "seeds.txt",
            "--u",
            "W",
            "--out",
            "two",
        ],
        dir,
    );
    for name in ["universe.tsv", "w.txt", "operator_trace.tsv"] {
        let a = fs::read(dir.join("one").join(name)).unwrap();
        let b = fs::read(dir.join("two").join(name)).unwrap();
        assert_eq!(a, b, "{name} differs under --jobs");
    }
}
