//! The identity catalogue. Each entry compiles an identity into `LHS - RHS ∈ ideal` checks
//! (or exact numeric equalities) together with mutated negative controls.

mod binet;
mod capelli;
mod minors;
mod series;
mod structure;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use log::{debug, info};

use crate::error::{Error, Result};
use crate::freealg::{Letter, NCPoly, Word};
use crate::ideal::{IdealEngine, RelationSet, Verdict as IdealVerdict};
use crate::report::{truncate_witness, CaseReport, ControlReport, Dims, Mutation, NonVacuity, Report, Verdict};
use crate::scalar::{Mode, ParameterAssignment, Scalar};
use crate::tensor::AlgMatrix;
use crate::{models, yangian};

/// Components up to this many words get an exact rank in the non-vacuity record.
pub const EXACT_STATS_LIMIT: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SuiteId {
    ColumnPerm,
    Laplace,
    Plucker,
    Adjugate,
    Comodule,
    Factorization,
    BinetDet,
    BinetPer,
    CapelliDetCol,
    CapelliDetRow,
    CapelliPer,
    CapelliPerCol,
    MacMahon,
    TraceReplacement,
    NewtonLemma,
    Newton,
    CayleyHamilton,
    CharMnNm,
    Signs,
    Operators,
    Ybe,
    Fusion,
    WeylCapelli,
    ClassicalMacMahon,
    ClassicalInverse,
}

impl SuiteId {
    pub const ALL: [SuiteId; 25] = [
        SuiteId::ColumnPerm,
        SuiteId::Laplace,
        SuiteId::Plucker,
        SuiteId::Adjugate,
        SuiteId::Comodule,
        SuiteId::Factorization,
        SuiteId::BinetDet,
        SuiteId::BinetPer,
        SuiteId::CapelliDetCol,
        SuiteId::CapelliDetRow,
        SuiteId::CapelliPer,
        SuiteId::CapelliPerCol,
        SuiteId::MacMahon,
        SuiteId::TraceReplacement,
        SuiteId::NewtonLemma,
        SuiteId::Newton,
        SuiteId::CayleyHamilton,
        SuiteId::CharMnNm,
        SuiteId::Signs,
        SuiteId::Operators,
        SuiteId::Ybe,
        SuiteId::Fusion,
        SuiteId::WeylCapelli,
        SuiteId::ClassicalMacMahon,
        SuiteId::ClassicalInverse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::ColumnPerm => "column-perm",
            SuiteId::Laplace => "laplace",
            SuiteId::Plucker => "plucker",
            SuiteId::Adjugate => "adjugate",
            SuiteId::Comodule => "comodule",
            SuiteId::Factorization => "factorization",
            SuiteId::BinetDet => "binet-det",
            SuiteId::BinetPer => "binet-per",
            SuiteId::CapelliDetCol => "capelli-det-col",
            SuiteId::CapelliDetRow => "capelli-det-row",
            SuiteId::CapelliPer => "capelli-per",
            SuiteId::CapelliPerCol => "capelli-per-col",
            SuiteId::MacMahon => "macmahon",
            SuiteId::TraceReplacement => "trace-replacement",
            SuiteId::NewtonLemma => "newton-lemma",
            SuiteId::Newton => "newton",
            SuiteId::CayleyHamilton => "cayley-hamilton",
            SuiteId::CharMnNm => "char-mn-nm",
            SuiteId::Signs => "signs",
            SuiteId::Operators => "operators",
            SuiteId::Ybe => "ybe",
            SuiteId::Fusion => "fusion",
            SuiteId::WeylCapelli => "weyl-capelli",
            SuiteId::ClassicalMacMahon => "classical-macmahon",
            SuiteId::ClassicalInverse => "classical-inverse",
        }
    }

    pub fn catalogue() -> String {
        Self::ALL.iter().map(|s| s.name()).collect::<Vec<_>>().join(", ")
    }

    /// Oracles run over the rationals in classical mode whatever the run's field.
    pub fn is_classical_oracle(self) -> bool {
        matches!(self, SuiteId::WeylCapelli | SuiteId::ClassicalMacMahon | SuiteId::ClassicalInverse)
    }

    /// Checks built on the constrained R-matrix always draw a yangian assignment.
    pub fn forces_yangian(self) -> bool {
        matches!(self, SuiteId::Ybe | SuiteId::Fusion)
    }

    /// Negative controls attempted for this suite.
    pub fn controls(self) -> &'static [Mutation] {
        use Mutation::*;
        match self {
            SuiteId::ColumnPerm
            | SuiteId::Laplace
            | SuiteId::Plucker
            | SuiteId::Adjugate
            | SuiteId::BinetDet
            | SuiteId::BinetPer
            | SuiteId::MacMahon
            | SuiteId::NewtonLemma
            | SuiteId::Newton
            | SuiteId::CayleyHamilton
            | SuiteId::TraceReplacement
            | SuiteId::CharMnNm
            | SuiteId::Signs => &[DropSign],
            SuiteId::Comodule | SuiteId::Factorization | SuiteId::Operators => &[DropSign, BreakConstraint],
            SuiteId::CapelliDetCol | SuiteId::CapelliDetRow | SuiteId::CapelliPer | SuiteId::CapelliPerCol => {
                &[SwapDiag]
            }
            SuiteId::Ybe => &[BreakConstraint],
            SuiteId::Fusion | SuiteId::ClassicalMacMahon | SuiteId::ClassicalInverse => &[DropSign],
            SuiteId::WeylCapelli => &[SwapDiag],
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown suite `{s}`; known: {}", Self::catalogue())))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub n: usize,
    pub m: usize,
    pub s: usize,
    /// Degree cap for the series identities; `None` picks the per-suite default.
    pub degree: Option<usize>,
    pub mode: Mode,
    pub guard_words: usize,
    pub timings: bool,
}

impl SuiteConfig {
    pub fn square(n: usize, mode: Mode) -> Self {
        SuiteConfig {
            n,
            m: n,
            s: n,
            degree: None,
            mode,
            guard_words: crate::ideal::DEFAULT_GUARD_WORDS,
            timings: false,
        }
    }

    pub fn dims(&self) -> Dims {
        Dims {
            n: self.n,
            m: self.m,
            s: self.s,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 || self.s == 0 {
            return Err(Error::InvalidConfig("dimensions must be positive".into()));
        }
        if self.n.max(self.m).max(self.s) > 4 {
            return Err(Error::InvalidConfig("dimensions above 4 are out of range".into()));
        }
        if self.degree == Some(0) {
            return Err(Error::InvalidConfig("degree cap must be positive".into()));
        }
        Ok(())
    }
}

/// One `poly ∈ ideal` question.
#[derive(Debug, Clone)]
pub struct Check<F> {
    pub label: String,
    pub degree: usize,
    pub poly: NCPoly<F>,
}

/// Checks sharing one relation set.
#[derive(Debug, Clone)]
pub struct CheckGroup<F> {
    pub name: String,
    pub relations: RelationSet<F>,
    pub checks: Vec<Check<F>>,
}

impl<F: Scalar> CheckGroup<F> {
    pub fn new(name: impl Into<String>, relations: RelationSet<F>) -> Self {
        CheckGroup {
            name: name.into(),
            relations,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, label: impl Into<String>, degree: usize, poly: NCPoly<F>) {
        self.checks.push(Check {
            label: label.into(),
            degree,
            poly,
        });
    }

    /// Adds one check per entry of a matrix, labelled by its row and column tuples.
    pub fn push_entries(&mut self, label: &str, degree: usize, mat: &AlgMatrix<F>) {
        for r in 0..mat.rows() {
            for c in 0..mat.cols() {
                let rt = crate::tensor::unflat(mat.row_dims(), r);
                let ct = crate::tensor::unflat(mat.col_dims(), c);
                self.push(format!("{label} [{rt:?},{ct:?}]"), degree, mat.get(r, c));
            }
        }
    }
}

/// Output of a suite that compares values directly instead of asking the ideal.
#[derive(Debug, Clone, Default)]
pub struct NumericOutcome {
    pub cases: Vec<CaseReport>,
    pub controls: Vec<ControlReport>,
    pub notes: Vec<String>,
}

impl NumericOutcome {
    pub fn case(&mut self, indices: impl Into<String>, degree: usize, equal: bool, detail: Option<String>) {
        self.cases.push(CaseReport {
            indices: indices.into(),
            degree,
            verdict: Verdict::from_equality(equal),
            witness: if equal { None } else { detail.map(truncate_witness) },
        });
    }
}

/// Builds the assignment a suite draws for `seed`.
pub fn sample_assignment<F: Scalar>(id: SuiteId, cfg: &SuiteConfig, seed: u64) -> Result<ParameterAssignment<F>> {
    let (n, m, s) = (cfg.n, cfg.m, cfg.s);
    let mode = if id.forces_yangian() { Mode::Yangian } else { cfg.mode };
    match id {
        SuiteId::ColumnPerm | SuiteId::Laplace | SuiteId::Plucker | SuiteId::Adjugate | SuiteId::Factorization => {
            ParameterAssignment::sample(n, n, mode, seed)
        }
        SuiteId::Comodule | SuiteId::BinetDet | SuiteId::CharMnNm => ParameterAssignment::sample(n, m, mode, seed),
        SuiteId::BinetPer => ParameterAssignment::sample(m, s, mode, seed),
        SuiteId::CapelliDetCol | SuiteId::CapelliDetRow | SuiteId::CapelliPer | SuiteId::CapelliPerCol => {
            let d = capelli::variant(id).param_dim(n, m, s);
            ParameterAssignment::sample(d, d, mode, seed)
        }
        SuiteId::MacMahon
        | SuiteId::TraceReplacement
        | SuiteId::NewtonLemma
        | SuiteId::Newton
        | SuiteId::CayleyHamilton => {
            let mut a = ParameterAssignment::sample(n, n, mode, seed)?;
            a.p = a.q.clone();
            Ok(a)
        }
        _ => ParameterAssignment::sample(n, n, mode, seed),
    }
}

/// Builds the positive checks (`mutation = None`) or a mutated variant of them.
fn build_groups<F: Scalar>(
    id: SuiteId,
    cfg: &SuiteConfig,
    assign: &ParameterAssignment<F>,
    mutation: Option<Mutation>,
) -> Result<Vec<CheckGroup<F>>> {
    match id {
        SuiteId::ColumnPerm => minors::column_perm(cfg, assign, mutation),
        SuiteId::Laplace => minors::laplace(cfg, assign, mutation),
        SuiteId::Plucker => minors::plucker(cfg, assign, mutation),
        SuiteId::Adjugate => minors::adjugate(cfg, assign, mutation),
        SuiteId::Comodule => minors::comodule(cfg, assign, mutation),
        SuiteId::Factorization => minors::factorization(cfg, assign, mutation),
        SuiteId::BinetDet => binet::det(cfg, assign, mutation),
        SuiteId::BinetPer => binet::per(cfg, assign, mutation),
        SuiteId::CapelliDetCol | SuiteId::CapelliDetRow | SuiteId::CapelliPer | SuiteId::CapelliPerCol => {
            capelli::build(capelli::variant(id), cfg, assign, mutation)
        }
        SuiteId::MacMahon => series::macmahon(cfg, assign, mutation),
        SuiteId::TraceReplacement => series::trace_replacement(cfg, assign, mutation),
        SuiteId::NewtonLemma => series::newton_lemma(cfg, assign, mutation),
        SuiteId::Newton => series::newton(cfg, assign, mutation),
        SuiteId::CayleyHamilton => series::cayley_hamilton(cfg, assign, mutation),
        SuiteId::CharMnNm => series::char_mn_nm(cfg, assign, mutation),
        _ => Err(Error::InvalidConfig(format!("{id} is not a membership suite"))),
    }
}

fn is_membership_suite(id: SuiteId) -> bool {
    !matches!(
        id,
        SuiteId::Signs
            | SuiteId::Operators
            | SuiteId::Ybe
            | SuiteId::Fusion
            | SuiteId::WeylCapelli
            | SuiteId::ClassicalMacMahon
            | SuiteId::ClassicalInverse
    )
}

/// Runs one catalogue entry for one seed.
pub fn run_suite<F: Scalar>(id: SuiteId, cfg: &SuiteConfig, seed: u64) -> Result<Report> {
    cfg.validate()?;
    let start = Instant::now();
    let mut report = if id.is_classical_oracle() {
        let out = models::run(id, cfg, seed)?;
        let mut r = empty_report::<crate::scalar::Q>(id, cfg, seed, Mode::Classical);
        r.cases = out.cases;
        r.controls = out.controls;
        r.notes = out.notes;
        r
    } else if is_membership_suite(id) {
        run_membership::<F>(id, cfg, seed)?
    } else {
        let (mode, out) = match id {
            SuiteId::Signs => (cfg.mode, structure::signs::<F>(cfg, seed)?),
            SuiteId::Operators => (cfg.mode, structure::operators::<F>(cfg, seed)?),
            SuiteId::Ybe => (Mode::Yangian, yangian::ybe_suite::<F>(cfg, seed)?),
            SuiteId::Fusion => (Mode::Yangian, yangian::fusion_suite::<F>(cfg, seed)?),
            _ => unreachable!("membership and oracle suites handled above"),
        };
        let mut r = empty_report::<F>(id, cfg, seed, mode);
        r.cases = out.cases;
        r.controls = out.controls;
        r.notes = out.notes;
        r
    };
    if cfg.timings {
        report.millis = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

fn empty_report<F: Scalar>(id: SuiteId, cfg: &SuiteConfig, seed: u64, mode: Mode) -> Report {
    let ch = F::characteristic();
    Report {
        id: id.name().to_string(),
        dims: cfg.dims(),
        mode: mode.as_str().to_string(),
        field: if ch == 0 { "Q".into() } else { "F_p".into() },
        prime: (ch != 0).then_some(ch),
        seed,
        cases: Vec::new(),
        controls: Vec::new(),
        nonvacuity: Vec::new(),
        notes: Vec::new(),
        sz_bound: None,
        millis: None,
    }
}

/// Degree bookkeeping for the Schwartz–Zippel bound.
#[derive(Default)]
struct SzTracker {
    max_rank: usize,
    max_degree: usize,
}

fn run_membership<F: Scalar>(id: SuiteId, cfg: &SuiteConfig, seed: u64) -> Result<Report> {
    let assign = sample_assignment::<F>(id, cfg, seed)?;
    let mode = assign.mode;
    let groups = build_groups(id, cfg, &assign, None)?;
    let mut report = empty_report::<F>(id, cfg, seed, mode);
    let mut sz = SzTracker::default();
    for g in &groups {
        debug!("{id} seed {seed}: group {} with {} checks", g.name, g.checks.len());
        let mut engine = IdealEngine::with_guard(g.relations.clone(), cfg.guard_words);
        for c in &g.checks {
            check_degree(c)?;
            let res = engine.is_member(&c.poly)?;
            sz.max_rank = sz.max_rank.max(res.touched_rank);
            sz.max_degree = sz.max_degree.max(c.degree);
            let (verdict, witness) = match res.verdict {
                IdealVerdict::Member => (Verdict::Member, None),
                IdealVerdict::NonMember { witness } => (Verdict::NonMember, Some(truncate_witness(witness.render()))),
            };
            report.cases.push(CaseReport {
                indices: format!("{}: {}", g.name, c.label),
                degree: c.degree,
                verdict,
                witness,
            });
        }
        report.nonvacuity.extend(nonvacuity(&mut engine, g)?);
    }
    if report.cases.is_empty() {
        report.notes.push(format!("no admissible index sets at (n, m, s) = ({}, {}, {})", cfg.n, cfg.m, cfg.s));
    }
    if id.name().starts_with("capelli") && !report.positives_hold() {
        capelli::central_retest(&groups, cfg, &mut report)?;
    }
    for &mutation in id.controls() {
        report.controls.push(run_control(id, cfg, &assign, &groups, mutation)?);
    }
    report.sz_bound = sz_bound::<F>(&sz);
    Ok(report)
}

/// The declared degree must match the weighted degree of the polynomial.
fn check_degree<F: Scalar>(c: &Check<F>) -> Result<()> {
    if c.poly.is_zero() {
        return Ok(());
    }
    if !c.poly.is_homogeneous() || c.poly.max_weight() != Some(c.degree) {
        return Err(Error::DimensionMismatch(format!(
            "check {} declared at degree {} is not homogeneous of that weight",
            c.label, c.degree
        )));
    }
    Ok(())
}

/// Per degree: exact rank when cheap, plus a probe through the pure powers `l^d`.
fn nonvacuity<F: Scalar>(engine: &mut IdealEngine<F>, g: &CheckGroup<F>) -> Result<Vec<NonVacuity>> {
    let degrees: std::collections::BTreeSet<usize> = g.checks.iter().map(|c| c.degree).filter(|&d| d > 0).collect();
    let letters: Vec<Letter> = g.relations.alphabet.letters();
    let mut out = Vec::new();
    for d in degrees {
        let exact = engine.component_stats(d, EXACT_STATS_LIMIT)?;
        let probes: Vec<Word> = letters
            .iter()
            .filter(|l| d % l.weight() == 0)
            .map(|&l| Word::from_letters(&vec![l; d / l.weight()]))
            .collect();
        let (probe_words, probe_rank) = engine.probe(&probes)?;
        let words = engine.word_count(d);
        let certified = exact.is_some_and(|s| s.rank < s.words) || probe_rank < probe_words;
        out.push(NonVacuity {
            relations: g.name.clone(),
            degree: d,
            words,
            rank: exact.map(|s| s.rank),
            probe_words,
            probe_rank,
            certified,
        });
    }
    Ok(out)
}

fn run_control<F: Scalar>(
    id: SuiteId,
    cfg: &SuiteConfig,
    assign: &ParameterAssignment<F>,
    original: &[CheckGroup<F>],
    mutation: Mutation,
) -> Result<ControlReport> {
    let mutated = match mutation {
        Mutation::BreakConstraint => match assign.break_constraint() {
            Ok(broken) => build_groups(id, cfg, &broken, None),
            Err(e) => Err(e),
        },
        _ => build_groups(id, cfg, assign, Some(mutation)),
    };
    let mutated = match mutated {
        Ok(g) => g,
        Err(Error::InapplicableMutation { case, .. }) => return Ok(ControlReport::inapplicable(mutation, case)),
        Err(e) => return Err(e),
    };
    if same_checks(original, &mutated) {
        return Ok(ControlReport::inapplicable(mutation, "mutation leaves every check unchanged"));
    }
    let mut last = None;
    for g in &mutated {
        let mut engine = IdealEngine::with_guard(g.relations.clone(), cfg.guard_words);
        for c in &g.checks {
            let res = engine.is_member(&c.poly)?;
            let label = format!("{}: {}", g.name, c.label);
            if let IdealVerdict::NonMember { witness } = res.verdict {
                return Ok(ControlReport {
                    mutation,
                    applicable: true,
                    verdict: Some(Verdict::NonMember),
                    case: Some(label),
                    witness: Some(truncate_witness(witness.render())),
                    reason: None,
                });
            }
            last = Some(label);
        }
    }
    info!("{id}: control {} left every mutated case a member", mutation.name());
    Ok(ControlReport {
        mutation,
        applicable: true,
        verdict: Some(Verdict::Member),
        case: last,
        witness: None,
        reason: None,
    })
}

fn same_checks<F: Scalar>(a: &[CheckGroup<F>], b: &[CheckGroup<F>]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            x.relations == y.relations
                && x.checks.len() == y.checks.len()
                && x.checks.iter().zip(&y.checks).all(|(c, d)| c.poly == d.poly)
        })
}

/// `(rank + 1)(d(d-1) + 2) / (p - 1)`: a nonzero minor of size `rank + 1` whose entries have
/// parameter degree at most `d(d-1)/2` per ε-weight, doubled to clear inverses, plus the relation
/// coefficients. `None` over the rationals.
fn sz_bound<F: Scalar>(sz: &SzTracker) -> Option<String> {
    let p = F::characteristic();
    if p == 0 {
        return None;
    }
    let d = sz.max_degree as u128;
    let num = (sz.max_rank as u128 + 1) * (d * d.saturating_sub(1) + 2);
    let den = p as u128 - 1;
    let g = gcd(num, den);
    Some(format!("{}/{}", num / g, den / g))
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Fp, Fp61, Q};

    #[test]
    fn ids_round_trip() {
        for id in SuiteId::ALL {
            assert_eq!(id.name().parse::<SuiteId>().unwrap(), id);
        }
        assert!("nope".parse::<SuiteId>().is_err());
    }

    #[test]
    fn sz_bound_is_reduced_fraction() {
        let sz = SzTracker { max_rank: 3, max_degree: 2 };
        assert_eq!(sz_bound::<Fp<2_147_483_659>>(&sz).unwrap(), "8/1073741829");
        assert_eq!(sz_bound::<Q>(&sz), None);
    }

    #[test]
    fn laplace_passes_and_controls_fire() {
        let cfg = SuiteConfig::square(2, Mode::Generic);
        let r = run_suite::<Fp61>(SuiteId::Laplace, &cfg, 3).unwrap();
        assert!(r.positives_hold());
        assert!(r.nonvacuity_ok() && !r.nonvacuity.is_empty());
        assert!(r.controls.iter().all(|c| c.detected()), "{:?}", r.controls);
        assert!(r.sz_bound.is_some());
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = SuiteConfig::square(2, Mode::Generic);
        for id in [SuiteId::Comodule, SuiteId::Ybe, SuiteId::ClassicalInverse] {
            assert_eq!(run_suite::<Fp61>(id, &cfg, 11).unwrap(), run_suite::<Fp61>(id, &cfg, 11).unwrap());
        }
    }

    #[test]
    fn oversized_dims_rejected() {
        let mut cfg = SuiteConfig::square(2, Mode::Generic);
        cfg.m = 5;
        assert!(cfg.validate().is_err());
    }
}
