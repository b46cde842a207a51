use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn spectile(args: &[&str], files: &[&Path]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_spectile"))
        .args(args)
        .args(files)
        .output()
        .unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn file(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn check_tiling() {
    let d = TempDir::new().unwrap();
    let a = file(&d, "a", "group 4\n0\n1\n");
    let b = file(&d, "b", "group 4\n0\n2\n");
    let r = spectile(&["check-tiling", "--group", "4"], &[&a, &b]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout, "tiling=yes group=4 |A|=2 |B|=2\n");
    let r = spectile(&["check-tiling"], &[&b, &b]);
    assert_eq!(r.code, 1);
    assert_eq!(r.stdout, "tiling=no g=1 count=0\n");
}

#[test]
fn spectral_commands() {
    let d = TempDir::new().unwrap();
    let s = file(&d, "s", "group 4\n0\n1\n");
    let bad = file(&d, "bad", "group 4\n0\n1\n2\n");
    let r = spectile(&["find-spectrum", "--group", "4"], &[&s]);
    assert_eq!(
        (r.code, r.stdout.as_str()),
        (0, "spectral=yes spectrum={0,2}\n")
    );
    let r = spectile(&["find-spectrum", "--group", "4"], &[&bad]);
    assert_eq!(
        (r.code, r.stdout.as_str()),
        (1, "no spectrum (exhaustive)\n")
    );
    let r = spectile(&["check-spectral"], &[&s, &bad]);
    assert_eq!(r.code, 1);
    assert_eq!(
        r.stdout,
        "spectral=no cardinality mismatch |S|=2 |Lambda|=3\n"
    );
    let lambda = file(&d, "l", "group 4\n0\n2\n");
    let r = spectile(&["check-spectral"], &[&s, &lambda]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "spectral=yes pairs=1\n"));
}

#[test]
fn budget_exceeded_is_exit_3() {
    let d = TempDir::new().unwrap();
    let s = file(&d, "s", "group 4\n0\n1\n");
    let r = spectile(&["find-spectrum", "--budget", "0"], &[&s]);
    assert_eq!(r.code, 3);
    assert!(r.stdout.starts_with("undecided: budget exceeded"));
    let r = spectile(&["find-complement", "--budget", "0"], &[&s]);
    assert_eq!(r.code, 3);
}

#[test]
fn find_complement() {
    let d = TempDir::new().unwrap();
    let a = file(&d, "a", "group 6\n0\n1\n3\n");
    let r = spectile(&["find-complement"], &[&a]);
    assert_eq!(
        (r.code, r.stdout.as_str()),
        (1, "no complement (exhaustive)\n")
    );
    let a = file(&d, "b", "group 2x3\n0,0\n0,1\n0,2\n");
    let r = spectile(&["find-complement", "--canonical"], &[&a]);
    assert_eq!(
        (r.code, r.stdout.as_str()),
        (0, "tiling=yes complement={(0,0),(1,0)}\n")
    );
}

#[test]
fn diagonal_commands() {
    let d = TempDir::new().unwrap();
    let p = file(&d, "p", "group 4x4\n0,0\n1,0\n2,0\n3,0\n");
    let r = spectile(&["diagonal-check"], &[&p]);
    assert_eq!(r.code, 0);
    assert_eq!(
        r.stdout,
        "diagonal-spectral=yes direct=yes criterion=yes agree=yes\n"
    );
    let diag = file(&d, "q", "group 4x4\n0,0\n1,1\n2,2\n3,3\n");
    let r = spectile(&["diagonal-check", "--group", "4"], &[&diag]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.starts_with("diagonal-spectral=no direct=no"));

    let a = file(&d, "a", "group 4\n0\n1\n");
    let b = file(&d, "b", "group 4\n0\n2\n");
    let r = spectile(&["product-diagonal", "--group", "4"], &[&a, &b]);
    assert_eq!(
        (r.code, r.stdout.as_str()),
        (0, "tiling=yes product-spectral=yes agree=yes\n")
    );
    let r = spectile(&["product-diagonal"], &[&b, &b]);
    assert_eq!(
        (r.code, r.stdout.as_str()),
        (1, "tiling=no product-spectral=no agree=yes\n")
    );
}

#[test]
fn harness_summary() {
    let r = spectile(&["harness", "--group", "4"], &[]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.ends_with("checked=1820 disagreements=0\n"));
    let r = spectile(&["harness"], &[]);
    assert_eq!(r.code, 2);
}

#[test]
fn pipeline_lines() {
    let d = TempDir::new().unwrap();
    let a = file(&d, "a", "box 4\n0\n1\n");
    let b = file(&d, "b", "box 4\n0\n2\n");
    let r = spectile(&["pipeline", "--k", "2"], &[&a, &b]);
    assert_eq!(r.code, 0);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines[0], "pipeline dims=4 k=2 moduli=8,8");
    assert_eq!(lines.len(), 5);
    assert!(lines[1..].iter().all(|l| l.contains("status=pass")));

    let r = spectile(&["pipeline", "--k", "2"], &[&b, &b]);
    assert_eq!(r.code, 1);
    assert!(r
        .stdout
        .contains("step=tiling status=fail detail=g=1 count=0"));
    let r = spectile(&["pipeline", "--k", "9"], &[&a, &b]);
    assert_eq!(r.code, 2);
}

#[test]
fn usage_errors_are_exit_2() {
    let d = TempDir::new().unwrap();
    let dup = file(&d, "dup", "group 4\n0\n4\n");
    let r = spectile(&["find-spectrum"], &[&dup]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 3"), "{}", r.stderr);
    let a = file(&d, "a", "group 4\n0\n");
    let r = spectile(&["find-spectrum", "--group", "5"], &[&a]);
    assert_eq!(r.code, 2);
    let r = spectile(&["find-spectrum"], &[&d.path().join("missing")]);
    assert_eq!(r.code, 2);
    let r = spectile(&["no-such-command"], &[]);
    assert_eq!(r.code, 2);
}

#[test]
fn json_mirror() {
    let d = TempDir::new().unwrap();
    let s = file(&d, "s", "group 4\n0\n1\n");
    let r = spectile(&["find-spectrum", "--json"], &[&s]);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["outcome"], "found");
    assert_eq!(v["spectrum"], "{0,2}");
    assert_eq!(v["exit"], 0);
    let r = spectile(&["harness", "--group", "3", "--json"], &[]);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["checked"], 84);
}

#[test]
fn output_is_deterministic() {
    let args = ["harness", "--group", "6", "--budget", "2000", "--seed", "5"];
    let first = spectile(&args, &[]);
    let threaded = spectile(&[&args[..], &["--threads", "4"]].concat(), &[]);
    assert_eq!(first.stdout, spectile(&args, &[]).stdout);
    assert_eq!(first.stdout, threaded.stdout);

    let d = TempDir::new().unwrap();
    let s = file(&d, "s", "group 12\n0\n1\n6\n7\n");
    let a = spectile(&["find-spectrum", "--canonical"], &[&s]);
    let b = spectile(&["find-spectrum", "--canonical", "--threads", "4"], &[&s]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
}
