//! JSON report schema shared by every suite and oracle.

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// Longest witness rendering kept in a report.
pub const WITNESS_CHARS: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub n: usize,
    pub m: usize,
    pub s: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Member,
    NonMember,
    Equal,
    Unequal,
}

impl Verdict {
    /// The checked identity holds.
    pub fn holds(self) -> bool {
        matches!(self, Verdict::Member | Verdict::Equal)
    }

    pub fn from_membership(member: bool) -> Self {
        if member {
            Verdict::Member
        } else {
            Verdict::NonMember
        }
    }

    pub fn from_equality(equal: bool) -> Self {
        if equal {
            Verdict::Equal
        } else {
            Verdict::Unequal
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    DropSign,
    SwapDiag,
    BreakConstraint,
}

impl Mutation {
    pub fn name(self) -> &'static str {
        match self {
            Mutation::DropSign => "drop-sign",
            Mutation::SwapDiag => "swap-diag",
            Mutation::BreakConstraint => "break-constraint",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub indices: String,
    pub degree: usize,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlReport {
    pub mutation: Mutation,
    pub applicable: bool,
    /// Verdict of the first mutated case that broke, or of the last one tried.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub case: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
}

impl ControlReport {
    pub fn detected(&self) -> bool {
        self.applicable && self.verdict.is_some_and(|v| !v.holds())
    }

    pub fn inapplicable(mutation: Mutation, reason: impl Into<String>) -> Self {
        ControlReport {
            mutation,
            applicable: false,
            verdict: None,
            case: None,
            witness: None,
            reason: Some(reason.into()),
        }
    }
}

/// Evidence that a relation set does not swallow its whole weighted-degree component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonVacuity {
    pub relations: String,
    pub degree: usize,
    pub words: u128,
    /// Exact component rank, when the component was small enough to build.
    pub rank: Option<usize>,
    pub probe_words: usize,
    pub probe_rank: usize,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub id: String,
    pub dims: Dims,
    pub mode: String,
    pub field: String,
    pub prime: Option<u64>,
    pub seed: u64,
    pub cases: Vec<CaseReport>,
    pub controls: Vec<ControlReport>,
    pub nonvacuity: Vec<NonVacuity>,
    pub notes: Vec<String>,
    /// Schwartz–Zippel false-pass bound per check, as an exact fraction.
    pub sz_bound: Option<String>,
    pub millis: Option<u64>,
}

impl Report {
    pub fn positives_hold(&self) -> bool {
        self.cases.iter().all(|c| c.verdict.holds())
    }

    pub fn nonvacuity_ok(&self) -> bool {
        self.nonvacuity.iter().all(|v| v.certified)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlSummary {
    pub mutation: Mutation,
    pub applicable_seeds: usize,
    pub detected_seeds: usize,
    pub required: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub id: String,
    pub seeds: usize,
    pub cases: usize,
    pub positive_failures: usize,
    pub controls: Vec<ControlSummary>,
    pub nonvacuity_ok: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfigEcho {
    pub suites: Vec<String>,
    pub dims: Dims,
    pub degree: Option<usize>,
    pub mode: String,
    pub field: String,
    pub prime: Option<u64>,
    pub seeds: Vec<u64>,
    pub guard_words: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub config: RunConfigEcho,
    pub summary: Vec<SuiteSummary>,
    pub reports: Vec<Report>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub aborted: Option<String>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.aborted.is_none() && self.summary.iter().all(|s| s.passed)
    }
}

pub fn truncate_witness(s: String) -> String {
    if s.chars().count() <= WITNESS_CHARS {
        return s;
    }
    let mut out: String = s.chars().take(WITNESS_CHARS).collect();
    out.push_str(" ...");
    out
}
