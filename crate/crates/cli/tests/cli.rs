use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qpdnls"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str], out: &Path) -> Output {
    bin().args(args).arg("--out").arg(out).output().unwrap()
}

fn artifacts(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect()
}

#[test]
fn bounds_prints_the_unit_constants() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["bounds", "--B", "1", "--kappa", "1", "--nu", "1", "--omega-norm", "1"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["C"].as_f64(), Some(18.0));
    assert!((v["t2"].as_f64().unwrap() * 139968.0 / 4.0 - 1.0).abs() < 1e-15);
    let file: Value = serde_json::from_slice(&fs::read(dir.path().join("constants.json")).unwrap()).unwrap();
    assert_eq!(file, v);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = run(&["solve", "--config", "no/such/file.json"], dir.path());
    assert_eq!(missing.status.code(), Some(2));
    assert_eq!(run(&["solve", "--bogus"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["bounds", "--B", "-1", "--kappa", "1", "--nu", "1", "--omega-norm", "1"], dir.path()).status.code(), Some(2));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"nu":2,"omega":[1.0]}"#).unwrap();
    let o = run(&["solve", "--config", bad.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));

    // Depth 4 has about 3.9e8 branches.
    let o = run(&["verify-combinatorics", "--max-depth", "4"], dir.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_bounds_reports_the_factorial_failures() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify-bounds"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let stdout = String::from_utf8(o.stdout).unwrap();
    let fails: Vec<&str> = stdout.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(fails.len(), 6, "{fails:?}");
    assert!(fails.iter().all(|l| l.contains("lemma=factorial_sum")));
    let csv = fs::read_to_string(dir.path().join("bounds_checks.csv")).unwrap();
    assert!(csv.starts_with("lemma,instance,expected,actual,pass\n"));
}

#[test]
fn solve_writes_trajectory_and_monitors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("solve.json");
    let o = run(&["solve", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let files = artifacts(dir.path());
    for f in ["trajectory.csv", "monitors.csv", "solve.json"] {
        assert!(files.contains_key(f), "{:?}", files.keys());
    }
    let traj = fs::read(dir.path().join("trajectory.csv")).unwrap();
    let back = qpdnls::solver::io::read_trajectory_csv(&traj[..], None).unwrap();
    assert_eq!(back.states.len(), 201);

    let json = tempfile::tempdir().unwrap();
    let o = run(&["solve", "--config", cfg.to_str().unwrap(), "--format", "json"], json.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(json.path().join("trajectory.json").exists());
}

fn assert_deterministic(args: &[&str]) {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let c = tempfile::tempdir().unwrap();
    let mut one = args.to_vec();
    one.extend(["--threads", "1"]);
    let mut four = args.to_vec();
    four.extend(["--threads", "4"]);
    let ra = run(&one, a.path());
    let rb = run(&one, b.path());
    let rc = run(&four, c.path());
    assert_eq!(ra.status.code(), rb.status.code());
    assert_eq!(ra.status.code(), rc.status.code());
    assert_eq!(ra.stdout, rc.stdout, "{args:?}");
    let fa = artifacts(a.path());
    assert!(!fa.is_empty());
    assert_eq!(fa, artifacts(b.path()), "{args:?}");
    assert_eq!(fa, artifacts(c.path()), "{args:?}");
}

#[test]
fn artifacts_are_byte_identical_across_runs_and_thread_counts() {
    let cfg = |name: &str| configs().join(name).to_string_lossy().into_owned();
    let solve = cfg("solve.json");
    let picard = cfg("picard.json");
    let cauchy = cfg("cauchy.json");
    let uniq = cfg("uniqueness.json");
    assert_deterministic(&["solve", "--config", &solve]);
    assert_deterministic(&["solve", "--config", &solve, "--seed", "99", "--format", "json"]);
    assert_deterministic(&["picard", "--config", &picard]);
    assert_deterministic(&["cauchy", "--config", &cauchy]);
    assert_deterministic(&["uniqueness", "--config", &uniq]);
    assert_deterministic(&["verify-bounds"]);
}

#[test]
fn seed_override_changes_the_data() {
    let cfg = configs().join("solve.json");
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run(&["solve", "--config", cfg.to_str().unwrap(), "--seed", "1"], a.path());
    run(&["solve", "--config", cfg.to_str().unwrap(), "--seed", "2"], b.path());
    assert_ne!(
        fs::read(a.path().join("trajectory.csv")).unwrap(),
        fs::read(b.path().join("trajectory.csv")).unwrap()
    );
}
