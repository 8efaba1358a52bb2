//! Multi-seed execution of catalogue entries and aggregation into a [`RunReport`].

use std::collections::BTreeMap;

use log::{info, warn};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::report::{ControlSummary, Mutation, Report, RunConfigEcho, RunReport, SuiteSummary, SCHEMA_VERSION};
use crate::scalar::{Fp, Scalar, Q, SUPPORTED_PRIMES};
use crate::suites::{run_suite, SuiteConfig, SuiteId};

/// Fraction of applicable seeds on which a control must be detected.
pub const CONTROL_QUORUM: f64 = 0.8;

/// Fresh draws tried when a sampled assignment is degenerate.
pub const DEGENERATE_RETRIES: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldChoice {
    Prime(u64),
    Rationals,
}

impl FieldChoice {
    pub fn default_prime() -> Self {
        FieldChoice::Prime(SUPPORTED_PRIMES[2])
    }

    pub fn validate(self) -> Result<()> {
        match self {
            FieldChoice::Prime(p) if !SUPPORTED_PRIMES.contains(&p) => Err(Error::UnsupportedPrime(p)),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub suites: Vec<SuiteId>,
    pub suite: SuiteConfig,
    pub field: FieldChoice,
    pub seeds: Vec<u64>,
    /// Worker threads; `None` uses every core.
    pub workers: Option<usize>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.suites.is_empty() {
            return Err(Error::InvalidConfig("no suites selected".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::InvalidConfig("no seeds selected".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::InvalidConfig("workers must be positive".into()));
        }
        self.field.validate()?;
        self.suite.validate()
    }

    pub fn echo(&self) -> RunConfigEcho {
        let (field, prime) = match self.field {
            FieldChoice::Prime(p) => ("F_p".to_string(), Some(p)),
            FieldChoice::Rationals => ("Q".to_string(), None),
        };
        RunConfigEcho {
            suites: self.suites.iter().map(|s| s.name().to_string()).collect(),
            dims: self.suite.dims(),
            degree: self.suite.degree,
            mode: self.suite.mode.as_str().to_string(),
            field,
            prime,
            seeds: self.seeds.clone(),
            guard_words: self.suite.guard_words,
        }
    }
}

/// Runs one entry, redrawing up to [`DEGENERATE_RETRIES`] times on a degenerate assignment.
pub fn run_with_retries<F: Scalar>(id: SuiteId, cfg: &SuiteConfig, seed: u64) -> Result<Report> {
    let mut notes = Vec::new();
    for attempt in 0..=DEGENERATE_RETRIES {
        let draw = seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        match run_suite::<F>(id, cfg, draw) {
            Ok(mut r) => {
                r.seed = seed;
                r.notes.extend(notes);
                return Ok(r);
            }
            Err(Error::Degenerate(why)) if attempt < DEGENERATE_RETRIES => {
                warn!("{id} seed {seed}: degenerate draw ({why}), resampling");
                notes.push(format!("draw {attempt} degenerate ({why}); resampled"));
            }
            Err(e) => return Err(e),
        }
    }
    unreachable!("the last attempt returns")
}

fn run_field<F: Scalar>(cfg: &RunConfig) -> Result<RunReport> {
    let jobs: Vec<(SuiteId, u64)> = cfg
        .suites
        .iter()
        .flat_map(|&id| cfg.seeds.iter().map(move |&s| (id, s)))
        .collect();
    let exec = || -> Vec<Result<Report>> {
        jobs.par_iter()
            .map(|&(id, seed)| {
                info!("running {id} seed {seed}");
                run_with_retries::<F>(id, &cfg.suite, seed)
            })
            .collect()
    };
    let results = match cfg.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
            .install(exec),
        None => exec(),
    };
    let mut reports = Vec::with_capacity(results.len());
    let mut aborted = None;
    for ((id, seed), r) in jobs.iter().zip(results) {
        match r {
            Ok(r) => reports.push(r),
            Err(e @ Error::GuardExceeded { .. }) => {
                if aborted.is_none() {
                    aborted = Some(format!("{id} seed {seed}: {e}"));
                }
            }
            Err(e) => return Err(e),
        }
    }
    let summary = cfg.suites.iter().map(|&id| summarize(id, &reports)).collect();
    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        config: cfg.echo(),
        summary,
        reports,
        aborted,
    })
}

/// Aggregates the per-seed reports of one entry.
pub fn summarize(id: SuiteId, reports: &[Report]) -> SuiteSummary {
    let mine: Vec<&Report> = reports.iter().filter(|r| r.id == id.name()).collect();
    let mut controls: BTreeMap<Mutation, (usize, usize)> = BTreeMap::new();
    for r in &mine {
        for c in &r.controls {
            let e = controls.entry(c.mutation).or_default();
            if c.applicable {
                e.0 += 1;
                if c.detected() {
                    e.1 += 1;
                }
            }
        }
    }
    let controls: Vec<ControlSummary> = controls
        .into_iter()
        .map(|(mutation, (applicable, detected))| {
            let required = (CONTROL_QUORUM * applicable as f64).ceil() as usize;
            ControlSummary {
                mutation,
                applicable_seeds: applicable,
                detected_seeds: detected,
                required,
                passed: detected >= required,
            }
        })
        .collect();
    let cases = mine.iter().map(|r| r.cases.len()).sum();
    let positive_failures = mine
        .iter()
        .flat_map(|r| &r.cases)
        .filter(|c| !c.verdict.holds())
        .count();
    let nonvacuity_ok = mine.iter().all(|r| r.nonvacuity_ok());
    SuiteSummary {
        id: id.name().to_string(),
        seeds: mine.len(),
        cases,
        positive_failures,
        passed: !mine.is_empty() && positive_failures == 0 && nonvacuity_ok && controls.iter().all(|c| c.passed),
        controls,
        nonvacuity_ok,
    }
}

macro_rules! dispatch_prime {
    ($p:expr, $cfg:expr, [$($prime:literal),*]) => {
        match $p {
            $( $prime => run_field::<Fp<$prime>>($cfg), )*
            other => Err(Error::UnsupportedPrime(other)),
        }
    };
}

/// Validates and executes a run over the configured field.
pub fn run(cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate()?;
    match cfg.field {
        FieldChoice::Rationals => run_field::<Q>(cfg),
        FieldChoice::Prime(p) => dispatch_prime!(
            p,
            cfg,
            [
                2_147_483_659,
                4_294_967_311,
                2_305_843_009_213_693_951,
                4_611_686_018_427_387_847,
                9_223_372_036_854_775_783
            ]
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Mode;

    #[test]
    fn dispatch_covers_every_supported_prime() {
        for &p in &SUPPORTED_PRIMES {
            let cfg = RunConfig {
                suites: vec![SuiteId::Signs],
                suite: SuiteConfig::square(1, Mode::Generic),
                field: FieldChoice::Prime(p),
                seeds: vec![1],
                workers: Some(1),
            };
            let r = run(&cfg).unwrap();
            assert_eq!(r.reports[0].prime, Some(p));
        }
    }

    #[test]
    fn unknown_prime_is_rejected() {
        let cfg = RunConfig {
            suites: vec![SuiteId::Signs],
            suite: SuiteConfig::square(1, Mode::Generic),
            field: FieldChoice::Prime(7),
            seeds: vec![1],
            workers: None,
        };
        assert_eq!(run(&cfg).unwrap_err(), Error::UnsupportedPrime(7));
    }

    #[test]
    fn quorum_rounds_up() {
        assert_eq!((CONTROL_QUORUM * 5.0).ceil() as usize, 4);
        assert_eq!((CONTROL_QUORUM * 0.0).ceil() as usize, 0);
    }
}
