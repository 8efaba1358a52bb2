use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use manin::report::RunReport;

fn manin(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_manin"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn report(path: &Path) -> RunReport {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn unknown_suite_lists_catalogue() {
    let dir = tempfile::tempdir().unwrap();
    let out = manin(&["run", "--suite", "nope"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("unknown suite"));
    assert!(err.contains("capelli-per-col") && err.contains("classical-inverse"));
    assert!(!dir.path().join("manin-report.json").exists());
}

#[test]
fn unsupported_prime_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = manin(&["run", "--suite", "signs", "--prime", "7"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unsupported prime 7"));
}

#[test]
fn prime_conflicts_with_rationals() {
    let dir = tempfile::tempdir().unwrap();
    let out = manin(
        &["run", "--suite", "signs", "--field", "q", "--prime", "2147483659"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn all_suites_at_n1_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = manin(&["run", "--suite", "all", "--n", "1", "--seeds", "2"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r = report(&dir.path().join("manin-report.json"));
    assert_eq!(r.summary.len(), 25);
    assert!(r.passed());
}

#[test]
fn macmahon_reports_one_block_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let out = manin(
        &["run", "--suite", "macmahon", "--n", "2", "--seeds", "5", "--out", path.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let r = report(&path);
    let seeds: Vec<u64> = r.reports.iter().map(|x| x.seed).collect();
    assert_eq!(seeds, vec![1, 2, 3, 4, 5]);
    for rep in &r.reports {
        assert_eq!(rep.id, "macmahon");
        assert!(rep.millis.is_none());
        assert!(rep.sz_bound.is_some());
        assert!(rep.cases.iter().any(|c| c.degree == 5));
    }
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS"));
}

#[test]
fn config_file_fills_unset_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "# laplace at n=2\nsuite = laplace\nn = 3\nseed_list = 4, 9\nout = from-file.json\n").unwrap();
    let out = manin(&["run", "--config", cfg.to_str().unwrap(), "--n", "2"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let r = report(&dir.path().join("from-file.json"));
    assert_eq!(r.config.dims.n, 2);
    assert_eq!(r.config.seeds, vec![4, 9]);
    assert_eq!(r.config.suites, vec!["laplace".to_string()]);
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    fs::write(&cfg, "suite = signs\ncolour = blue\n").unwrap();
    let out = manin(&["run", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn guard_exceeded_keeps_partial_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = manin(&["run", "--suite", "signs,laplace", "--guard-words", "2"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let r = report(&dir.path().join("manin-report.json"));
    assert!(r.aborted.as_deref().unwrap().contains("size guard"));
    assert!(r.reports.iter().any(|x| x.id == "signs"));
}

#[test]
fn operators_exit_with_identity_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = manin(&["run", "--suite", "operators", "--n", "2"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn timings_are_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    let out = manin(&["run", "--suite", "signs", "--timings"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let r = report(&dir.path().join("manin-report.json"));
    assert!(r.reports[0].millis.is_some());
}

#[test]
fn rationals_run_matches_field_echo() {
    let dir = tempfile::tempdir().unwrap();
    let out = manin(&["run", "--suite", "column-perm", "--field", "q"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let r = report(&dir.path().join("manin-report.json"));
    assert_eq!(r.config.field, "Q");
    assert_eq!(r.reports[0].prime, None);
}

#[test]
fn list_prints_catalogue() {
    let dir = tempfile::tempdir().unwrap();
    let out = manin(&["list"], dir.path());
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 25);
}
