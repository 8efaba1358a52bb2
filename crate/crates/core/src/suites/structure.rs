//! Numeric suites: the ε/μ sign calculus and the operator algebra of `P^σ` and the projectors.

use crate::error::Result;
use crate::qcomb::{all_tuples, eps_index, eps_perm, increasing, mu_perm, nondecreasing, sorting_permutation, MultiIndex, Permutation};
use crate::report::{ControlReport, Mutation, Verdict};
use crate::scalar::{Mode, ParamMatrix, ParameterAssignment, Scalar};
use crate::tensor::{projector, transposition_op, ProjectorKind, QFactorial, ScalarMatrix};

use super::{NumericOutcome, SuiteConfig};

/// Largest tensor power the operator suite builds.
pub const OPERATOR_MAX_K: usize = 4;

/// Tallies one identity over many instances, keeping the first counterexample.
struct Tally {
    label: String,
    count: usize,
    failure: Option<String>,
}

impl Tally {
    fn new(label: impl Into<String>) -> Self {
        Tally {
            label: label.into(),
            count: 0,
            failure: None,
        }
    }

    fn record<F: Scalar>(&mut self, instance: impl FnOnce() -> String, lhs: &F, rhs: &F) {
        self.count += 1;
        if lhs != rhs && self.failure.is_none() {
            self.failure = Some(format!("{}: {lhs} != {rhs}", instance()));
        }
    }

    fn finish(self, out: &mut NumericOutcome) {
        let equal = self.failure.is_none();
        out.case(format!("{} ({} instances)", self.label, self.count), 0, equal, self.failure);
    }
}

/// Coefficient `c` with `ψ_{w_1}⋯ψ_{w_r} = c ψ_{sorted}` in the quantum exterior algebra,
/// found by bubble sort with `ψ_b ψ_a = -q_ba ψ_a ψ_b` (`a < b`); zero on repeats.
fn exterior_coefficient<F: Scalar>(q: &ParamMatrix<F>, word: &[usize]) -> F {
    reorder(word, |b, a| if a == b { None } else { Some(-q.at(b, a).clone()) })
}

/// Coefficient `c` with `x_{w_1}⋯x_{w_r} = c x_{sorted}` in the quantum plane `x_b x_a = p_ab x_a x_b`.
fn plane_coefficient<F: Scalar>(p: &ParamMatrix<F>, word: &[usize]) -> F {
    reorder(word, |b, a| Some(p.at(a, b).clone()))
}

fn reorder<F: Scalar>(word: &[usize], swap: impl Fn(usize, usize) -> Option<F>) -> F {
    let mut w = word.to_vec();
    let mut c = F::one();
    loop {
        let mut moved = false;
        for t in 0..w.len().saturating_sub(1) {
            if w[t] >= w[t + 1] {
                if w[t] == w[t + 1] {
                    if swap(w[t], w[t]).is_none() {
                        return F::zero();
                    }
                    continue;
                }
                match swap(w[t], w[t + 1]) {
                    Some(f) => c = c * f,
                    None => return F::zero(),
                }
                w.swap(t, t + 1);
                moved = true;
            }
        }
        if !moved {
            return c;
        }
    }
}

fn subsets(n: usize) -> Vec<MultiIndex> {
    (0..=n).flat_map(|r| increasing(n, r)).collect()
}

/// Exhaustive checks of the ε/μ calculus over all multi-indices in `{1..n}`.
pub(super) fn signs<F: Scalar>(cfg: &SuiteConfig, seed: u64) -> Result<NumericOutcome> {
    let n = cfg.n;
    let assign = ParameterAssignment::<F>::sample(n, n, cfg.mode, seed)?;
    let (q, p) = (&assign.q, &assign.p);
    let mut out = NumericOutcome::default();

    let factor = |drop: bool| -> Result<Tally> {
        let mut t = Tally::new("ε(I⊕K^τ) = ε(I⊕K) ε(K^τ)");
        for i in subsets(n) {
            for k in subsets(n) {
                let lhs = eps_index(q, &i.juxtapose(&k.reverse()))?;
                let mut rhs = eps_index(q, &i.juxtapose(&k))?;
                if !drop {
                    rhs = rhs * eps_index(q, &k.reverse())?;
                }
                t.record(|| format!("I={i} K={k}"), &lhs, &rhs);
            }
        }
        Ok(t)
    };
    factor(false)?.finish(&mut out);

    let mut t = Tally::new("ε(K^τ) = ε(I^τ) ε((K∖I)^τ) ε(I⊕K∖I) ε(K∖I⊕I)");
    for k in subsets(n) {
        for i in subsets(n).into_iter().filter(|i| i.entries().iter().all(|x| k.entries().contains(x))) {
            let rest = i.complement_in(&k)?;
            let lhs = eps_index(q, &k.reverse())?;
            let rhs = eps_index(q, &i.reverse())?
                * eps_index(q, &rest.reverse())?
                * eps_index(q, &i.juxtapose(&rest))?
                * eps_index(q, &rest.juxtapose(&i))?;
            t.record(|| format!("I={i} K={k}"), &lhs, &rhs);
        }
    }
    t.finish(&mut out);

    let mut t = Tally::new("ε(I) = ε(I^or, σ) for the sorting permutation");
    for r in 0..=n {
        for i in all_tuples(n, r).into_iter().filter(|i| !i.has_repeats()) {
            let sigma = sorting_permutation(&i)?;
            let lhs = eps_index(q, &i)?;
            let rhs = eps_perm(q, &i.sorted(), &sigma)?;
            t.record(|| format!("I={i}"), &lhs, &rhs);
        }
    }
    t.finish(&mut out);

    let mut te = Tally::new("ε(I, σ) matches reordering in the quantum exterior algebra");
    let mut tm = Tally::new("μ(J, σ) matches reordering in the quantum plane");
    for r in 0..=n {
        let perms: Vec<Permutation> = Permutation::all(r).collect();
        for i in increasing(n, r) {
            for sigma in &perms {
                let lhs = eps_perm(q, &i, sigma)?;
                let rhs = exterior_coefficient(q, i.permuted(sigma).entries());
                te.record(|| format!("I={i} σ={:?}", sigma.images()), &lhs, &rhs);
            }
        }
        for j in nondecreasing(n, r) {
            for sigma in &perms {
                let lhs = mu_perm(p, &j, sigma)?;
                let rhs = plane_coefficient(p, j.permuted(sigma).entries());
                tm.record(|| format!("J={j} σ={:?}", sigma.images()), &lhs, &rhs);
            }
        }
    }
    te.finish(&mut out);
    tm.finish(&mut out);

    let ones = ParamMatrix::<F>::ones(n);
    let mut tc = Tally::new("classical: ε(I, σ) = sgn σ and μ(J, σ) = 1");
    for r in 0..=n {
        let perms: Vec<Permutation> = Permutation::all(r).collect();
        for i in increasing(n, r) {
            for sigma in &perms {
                let sgn = if sigma.sign() > 0 { F::one() } else { -F::one() };
                tc.record(|| format!("I={i} σ={:?}", sigma.images()), &eps_perm(&ones, &i, sigma)?, &sgn);
            }
        }
        for j in nondecreasing(n, r) {
            for sigma in &perms {
                tc.record(|| format!("J={j} σ={:?}", sigma.images()), &mu_perm(&ones, &j, sigma)?, &F::one());
            }
        }
    }
    tc.finish(&mut out);

    let mutated = factor(true)?;
    out.controls.push(numeric_control(Mutation::DropSign, mutated.failure, "ε(K^τ) factor dropped", n >= 2));
    Ok(out)
}

fn numeric_control(mutation: Mutation, failure: Option<String>, what: &str, applicable: bool) -> ControlReport {
    if !applicable {
        return ControlReport::inapplicable(mutation, format!("{what}: no instance where the mutation changes a value"));
    }
    ControlReport {
        mutation,
        applicable: true,
        verdict: Some(Verdict::from_equality(failure.is_none())),
        case: Some(what.to_string()),
        witness: failure,
        reason: None,
    }
}

fn check_eq<F: Scalar>(out: &mut NumericOutcome, label: String, a: &ScalarMatrix<F>, b: &ScalarMatrix<F>) {
    let equal = a == b;
    let detail = (!equal).then(|| first_difference(a, b));
    out.case(label, 0, equal, detail);
}

fn first_difference<F: Scalar>(a: &ScalarMatrix<F>, b: &ScalarMatrix<F>) -> String {
    let keys: std::collections::BTreeSet<(usize, usize)> =
        a.entries_iter().chain(b.entries_iter()).map(|(k, _)| *k).collect();
    for (r, c) in keys {
        let (x, y) = (a.get(r, c), b.get(r, c));
        if x != y {
            return format!("entry ({r},{c}): {x} != {y}");
        }
    }
    "shapes differ".into()
}

fn braid<F: Scalar>(q: &ParamMatrix<F>) -> Result<(ScalarMatrix<F>, ScalarMatrix<F>)> {
    let p12 = transposition_op(q, 3, 0);
    let p23 = transposition_op(q, 3, 1);
    Ok((p12.mul(&p23)?.mul(&p12)?, p23.mul(&p12)?.mul(&p23)?))
}

/// `P² = 1`, braid relation, idempotency of every projector flavor, `S^{(k)} A^{(k)} = 0`.
pub(super) fn operators<F: Scalar>(cfg: &SuiteConfig, seed: u64) -> Result<NumericOutcome> {
    let n = cfg.n;
    let assign = ParameterAssignment::<F>::sample(n, n, cfg.mode, seed)?;
    let mut out = operator_checks(&assign, n)?;

    let yang = ParameterAssignment::<F>::sample(n, n, Mode::Yangian, seed)?;
    for k in 1..=OPERATOR_MAX_K {
        let a = projector(&yang, ProjectorKind::YangianAntisym(crate::yangian::YANGIAN_CONVENTION), k)?;
        check_eq(&mut out, format!("yangian A^({k}) idempotent"), &a.mul(&a)?, &a);
    }
    for conv in QFactorial::ALL {
        let ok = (1..=OPERATOR_MAX_K).try_fold(true, |acc, k| -> Result<bool> {
            let a = projector(&yang, ProjectorKind::YangianAntisym(conv), k)?;
            Ok(acc && a.is_idempotent())
        })?;
        out.notes.push(format!(
            "yangian A^(k), k ≤ {OPERATOR_MAX_K}, with [i] = {}: {}",
            conv.name(),
            if ok { "idempotent" } else { "not idempotent" }
        ));
    }

    // the sign-dropping control replaces A by the unsigned symmetrizer in S·A = 0
    let mut fail = None;
    for k in 2..=OPERATOR_MAX_K.min(n.max(2)) {
        let s = projector(&assign, ProjectorKind::SymQ, k)?;
        if !s.mul(&s)?.is_zero() && fail.is_none() {
            fail = Some(format!("k={k}: S·S ≠ 0"));
        }
    }
    out.controls.push(numeric_control(Mutation::DropSign, fail, "S^(k) A^(k) = 0 with unsigned A", true));

    out.controls.push(match assign.break_constraint() {
        Err(crate::Error::InapplicableMutation { case, .. }) => ControlReport::inapplicable(Mutation::BreakConstraint, case),
        Err(e) => return Err(e),
        Ok(broken) => {
            let mutated = operator_checks(&broken, n)?;
            let failure = mutated
                .cases
                .iter()
                .find(|c| !c.verdict.holds())
                .map(|c| format!("{}: {}", c.indices, c.witness.clone().unwrap_or_default()));
            numeric_control(Mutation::BreakConstraint, failure, "operator identities with q_12 q_21 ≠ 1", true)
        }
    });
    Ok(out)
}

fn operator_checks<F: Scalar>(assign: &ParameterAssignment<F>, n: usize) -> Result<NumericOutcome> {
    let mut out = NumericOutcome::default();
    for (name, params) in [("q", &assign.q), ("p", &assign.p)] {
        let p = transposition_op(params, 2, 0);
        check_eq(&mut out, format!("P_{name}^2 = 1"), &p.mul(&p)?, &ScalarMatrix::identity(vec![n, n]));
        let (l, r) = braid(params)?;
        check_eq(&mut out, format!("braid relation for P_{name}"), &l, &r);
    }
    let kinds = [
        ("A_q", ProjectorKind::AntisymQ),
        ("S_q", ProjectorKind::SymQ),
        ("A_p", ProjectorKind::AntisymP),
        ("S_p", ProjectorKind::SymP),
    ];
    for k in 1..=OPERATOR_MAX_K {
        for (name, kind) in kinds {
            let a = projector(assign, kind, k)?;
            check_eq(&mut out, format!("{name}^({k}) idempotent"), &a.mul(&a)?, &a);
        }
        if k >= 2 {
            for (sn, ak, sk) in [("q", ProjectorKind::AntisymQ, ProjectorKind::SymQ), ("p", ProjectorKind::AntisymP, ProjectorKind::SymP)] {
                let a = projector(assign, ak, k)?;
                let s = projector(assign, sk, k)?;
                let zero = ScalarMatrix::zeros(vec![n; k]);
                check_eq(&mut out, format!("S_{sn}^({k}) A_{sn}^({k}) = 0"), &s.mul(&a)?, &zero);
                check_eq(&mut out, format!("A_{sn}^({k}) S_{sn}^({k}) = 0"), &a.mul(&s)?, &zero);
            }
        }
    }
    for k in 1..=OPERATOR_MAX_K.min(n) {
        let a = projector(assign, ProjectorKind::MixedQP, k)?;
        check_eq(&mut out, format!("A_qp^({k}) idempotent"), &a.mul(&a)?, &a);
    }
    Ok(out)
}
