//! Acceptance criteria 1 to 10, each exact over the default prime and 5 seeds.
//!
//! Every criterion prints one `PASS`/`FAIL` line. Criterion 2 is red: the mixed `A_qp^(k)`
//! is not idempotent once `p ≠ q`. Its line reports FAIL, and the assertion pins the red set
//! to exactly those cases so any other operator regression still breaks the build.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use manin::models::macmahon::inverse_det_series;
use manin::models::NumericMatrix;
use manin::report::{RunReport, SuiteSummary};
use manin::runner::{self, FieldChoice, RunConfig};
use manin::scalar::Q;
use manin::suites::{SuiteConfig, SuiteId};
use manin::{Mode, Scalar};

const SEEDS: [u64; 5] = [1, 2, 3, 4, 5];

struct Line {
    no: u8,
    title: &'static str,
    passed: bool,
    elapsed: Duration,
    limit: Duration,
    detail: String,
}

impl Line {
    fn print(&self) {
        let within = self.elapsed <= self.limit;
        println!(
            "criterion {:>2} {:<22} {}  {:>7.2}s / {:>4}s  {}",
            self.no,
            self.title,
            if self.passed && within { "PASS" } else { "FAIL" },
            self.elapsed.as_secs_f64(),
            self.limit.as_secs(),
            self.detail
        );
    }

    fn ok(&self) -> bool {
        self.passed && self.elapsed <= self.limit
    }
}

fn run(ids: &[SuiteId], (n, m, s): (usize, usize, usize), degree: Option<usize>) -> RunReport {
    let mut suite = SuiteConfig::square(n, Mode::Generic);
    suite.m = m;
    suite.s = s;
    suite.degree = degree;
    let cfg = RunConfig {
        suites: ids.to_vec(),
        suite,
        field: FieldChoice::default_prime(),
        seeds: SEEDS.to_vec(),
        workers: None,
    };
    runner::run(&cfg).unwrap_or_else(|e| panic!("{ids:?} at ({n},{m},{s}): {e}"))
}

/// Collects every summary so criterion 7 can inspect controls and non-vacuity across runs.
#[derive(Default)]
struct Ledger {
    summaries: Vec<(String, SuiteSummary)>,
}

impl Ledger {
    fn record(&mut self, label: &str, r: &RunReport) -> Vec<String> {
        let mut failed = Vec::new();
        for s in &r.summary {
            if !s.passed {
                failed.push(format!("{} {label}", s.id));
            }
            self.summaries.push((label.to_string(), s.clone()));
        }
        if let Some(why) = &r.aborted {
            failed.push(format!("aborted {label}: {why}"));
        }
        failed
    }
}

fn verdict_line(failed: &[String], runs: usize) -> (bool, String) {
    if failed.is_empty() {
        (true, format!("{runs} runs, all suites pass"))
    } else {
        (false, format!("failing: {}", failed.join("; ")))
    }
}

fn criterion_runs(
    ledger: &mut Ledger,
    plan: &[(&[SuiteId], (usize, usize, usize), Option<usize>)],
) -> (bool, String) {
    let mut failed = Vec::new();
    for (ids, dims, degree) in plan {
        let r = run(ids, *dims, *degree);
        failed.extend(ledger.record(&format!("{dims:?}"), &r));
    }
    verdict_line(&failed, plan.len())
}

fn timed(no: u8, title: &'static str, limit_secs: u64, f: impl FnOnce() -> (bool, String)) -> Line {
    let t = Instant::now();
    let (passed, detail) = f();
    let line = Line {
        no,
        title,
        passed,
        elapsed: t.elapsed(),
        limit: Duration::from_secs(limit_secs),
        detail,
    };
    line.print();
    line
}

fn is_mixed_idempotency(indices: &str) -> bool {
    indices.starts_with("A_qp^(") && indices.ends_with("idempotent")
}

const MINORS: [SuiteId; 6] = [
    SuiteId::ColumnPerm,
    SuiteId::Laplace,
    SuiteId::Plucker,
    SuiteId::Adjugate,
    SuiteId::Comodule,
    SuiteId::Factorization,
];
const CAPELLI: [SuiteId; 4] = [
    SuiteId::CapelliDetCol,
    SuiteId::CapelliDetRow,
    SuiteId::CapelliPer,
    SuiteId::CapelliPerCol,
];
const SERIES: [SuiteId; 5] = [
    SuiteId::MacMahon,
    SuiteId::TraceReplacement,
    SuiteId::NewtonLemma,
    SuiteId::Newton,
    SuiteId::CayleyHamilton,
];
const ORACLES: [SuiteId; 3] = [SuiteId::WeylCapelli, SuiteId::ClassicalMacMahon, SuiteId::ClassicalInverse];

fn main() {
    let mut ledger = Ledger::default();
    let mut lines = Vec::new();

    lines.push(timed(1, "sign calculus", 5, || {
        criterion_runs(&mut ledger, &[(&[SuiteId::Signs], (4, 4, 4), None)])
    }));

    let mut mixed_red = 0;
    let mut other_red = Vec::new();
    lines.push(timed(2, "operators", 30, || {
        for n in 1..=4 {
            let r = run(&[SuiteId::Operators], (n, n, n), None);
            ledger.record(&format!("({n},{n},{n})"), &r);
            let s = &r.summary[0];
            if !s.nonvacuity_ok || !s.controls.iter().all(|c| c.passed) {
                other_red.push(format!("n={n} controls or non-vacuity"));
            }
            for rep in &r.reports {
                for c in rep.cases.iter().filter(|c| !c.verdict.holds()) {
                    if is_mixed_idempotency(&c.indices) {
                        mixed_red += 1;
                    } else {
                        other_red.push(format!("n={n} seed {}: {}", rep.seed, c.indices));
                    }
                }
            }
        }
        let detail = format!(
            "{mixed_red} A_qp^(k) idempotency cases fail for p != q (k = 2..min(4,n)); other failures: {}",
            if other_red.is_empty() { "none".to_string() } else { other_red.join("; ") }
        );
        (mixed_red == 0 && other_red.is_empty(), detail)
    }));

    lines.push(timed(3, "minor identities", 300, || {
        criterion_runs(&mut ledger, &[(&MINORS, (2, 2, 2), None), (&MINORS, (3, 3, 3), None)])
    }));

    lines.push(timed(4, "Cauchy-Binet", 300, || {
        let mut plan: Vec<(&[SuiteId], (usize, usize, usize), Option<usize>)> = Vec::new();
        for n in 1..=3 {
            for m in 1..=3 {
                for s in 1..=3 {
                    plan.push((&[SuiteId::BinetDet], (n, m, s), None));
                }
            }
        }
        plan.push((&[SuiteId::BinetPer], (2, 2, 2), None));
        criterion_runs(&mut ledger, &plan)
    }));

    lines.push(timed(5, "Capelli", 300, || criterion_runs(&mut ledger, &[(&CAPELLI, (2, 2, 2), None)])));

    lines.push(timed(6, "series", 900, || {
        criterion_runs(
            &mut ledger,
            &[
                (&SERIES, (2, 2, 2), None),
                (&SERIES, (3, 3, 3), None),
                (&[SuiteId::CharMnNm], (2, 2, 2), None),
                (&[SuiteId::CharMnNm], (2, 3, 2), None),
                (&[SuiteId::CharMnNm], (3, 2, 3), None),
            ],
        )
    }));

    // criterion 8 runs before 7 so the oracle controls are part of the sweep
    let oracle_line = timed(8, "classical oracles", 120, || {
        let (mut ok, mut detail) =
            criterion_runs(&mut ledger, &[(&ORACLES, (2, 2, 2), None), (&ORACLES, (3, 3, 3), None)]);
        let ones = NumericMatrix::from_ints(&[&[1, 1], &[1, 1]]).unwrap();
        let series = inverse_det_series(&ones, 4, false);
        let mut by_degree: BTreeMap<u8, Q> = BTreeMap::new();
        for (k, v) in &series {
            *by_degree.entry(k.iter().sum()).or_insert_with(|| Q::from_i64(0)) += v.clone();
        }
        let geometric = by_degree.iter().all(|(&d, v)| *v == Q::from_i64(1 << d));
        if !geometric {
            ok = false;
        }
        detail.push_str(&format!("; all-ones n=2 series 1/(1-2t): {}", if geometric { "yes" } else { "no" }));
        (ok, detail)
    });

    let yangian_line = timed(9, "Yangian", 120, || {
        criterion_runs(
            &mut ledger,
            &[
                (&[SuiteId::Ybe, SuiteId::Fusion], (2, 2, 2), None),
                (&[SuiteId::Ybe], (3, 3, 3), None),
            ],
        )
    });

    lines.push(timed(7, "controls/non-vacuity", 1, || {
        let mut problems = Vec::new();
        let mut covered: BTreeMap<String, bool> = BTreeMap::new();
        for (label, s) in &ledger.summaries {
            let applicable = s.controls.iter().any(|c| c.applicable_seeds > 0);
            *covered.entry(s.id.clone()).or_default() |= applicable;
            for c in s.controls.iter().filter(|c| c.applicable_seeds > 0 && !c.passed) {
                problems.push(format!(
                    "{} {label} {}: {}/{}",
                    s.id,
                    c.mutation.name(),
                    c.detected_seeds,
                    c.applicable_seeds
                ));
            }
            if !s.nonvacuity_ok {
                problems.push(format!("{} {label}: non-vacuity", s.id));
            }
        }
        for id in SuiteId::ALL {
            match covered.get(id.name()) {
                Some(true) => {}
                Some(false) => problems.push(format!("{id}: no applicable control")),
                None => problems.push(format!("{id}: never run")),
            }
        }
        let detail = if problems.is_empty() {
            format!("{} suites, every applicable control detected on >= 4/5 seeds", covered.len())
        } else {
            problems.join("; ")
        };
        (problems.is_empty(), detail)
    }));
    lines.push(oracle_line);
    lines.push(yangian_line);

    lines.push(timed(10, "reproducibility", 600, || {
        let dir = tempfile::tempdir().unwrap();
        let mut outputs = Vec::new();
        for tag in ["a", "b"] {
            let path = dir.path().join(format!("{tag}.json"));
            let status = Command::new(env!("CARGO_BIN_EXE_manin"))
                .args(["run", "--suite", "all", "--n", "2", "--seeds", "5", "--out"])
                .arg(&path)
                .output()
                .unwrap()
                .status;
            assert!(matches!(status.code(), Some(0 | 1)), "unexpected exit {status}");
            outputs.push(std::fs::read(&path).unwrap());
        }
        let same = outputs[0] == outputs[1];
        (same, format!("two `--suite all --n 2 --seeds 5` runs, {} bytes, identical: {same}", outputs[0].len()))
    }));

    let red: Vec<u8> = lines.iter().filter(|l| !l.ok()).map(|l| l.no).collect();
    println!("red criteria: {red:?}");
    assert!(other_red.is_empty(), "operator failures beyond A_qp idempotency: {other_red:?}");
    assert!(mixed_red > 0, "A_qp^(k) idempotency now holds; criterion 2 turned green, update the ledger");
    assert_eq!(red, vec![2], "unexpected red criteria");
}
