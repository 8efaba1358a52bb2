//! The multiparameter R-matrix `R(z)`: Yang–Baxter equation, the closed form of `R̂(u⁻²)`,
//! and fusion of `R̂` at geometric spectral points into the u-deformed antisymmetrizer.

use crate::error::{Error, Result};
use crate::qcomb::{eps_perm, mu_perm};
use crate::report::{ControlReport, Mutation, Verdict};
use crate::scalar::{Mode, ParamMatrix, ParameterAssignment, Scalar};
use crate::suites::{NumericOutcome, SuiteConfig};
use crate::tensor::{block_operator, flat, projector, ProjectorKind, QFactorial, ScalarMatrix};

/// Default largest fusion order.
pub const FUSION_DEFAULT_K: usize = 3;
pub const FUSION_MAX_K: usize = 4;

/// The q-integer convention that makes the u-deformed antisymmetrizer idempotent.
pub const YANGIAN_CONVENTION: QFactorial = QFactorial::Descending;

fn unit_pair<F: Scalar>(n: usize, entries: impl IntoIterator<Item = ((usize, usize), (usize, usize), F)>) -> ScalarMatrix<F> {
    let dims = vec![n, n];
    let mut out = ScalarMatrix::zeros(dims.clone());
    for ((i, k), (j, l), v) in entries {
        out.add_entry(flat(&dims, &[i, k]), flat(&dims, &[j, l]), v);
    }
    out
}

/// `R(z)` on `C^n ⊗ C^n`; `e_ij ⊗ e_kl` has row `(i, k)` and column `(j, l)`.
pub fn r_matrix<F: Scalar>(assign: &ParameterAssignment<F>, z: &F) -> Result<ScalarMatrix<F>> {
    let u = assign.u()?;
    let ui = u.try_inv()?;
    let (q, p) = (&assign.q, &assign.p);
    let n = q.dim();
    let mut terms = Vec::new();
    for i in 1..=n {
        terms.push(((i, i), (i, i), z.clone() * u.clone() - ui.clone()));
        for j in 1..=n {
            if i < j {
                let c = z.clone() * ui.clone() * p.at(i, j).clone() - u.clone() * q.at(i, j).try_inv()?;
                terms.push(((i, j), (i, j), c));
                terms.push(((i, j), (j, i), z.clone() * (u.clone() - ui.clone())));
            } else if i > j {
                let c = z.clone() * ui.clone() * q.at(j, i).clone() - u.clone() * p.at(j, i).try_inv()?;
                terms.push(((i, j), (i, j), c));
                terms.push(((i, j), (j, i), u.clone() - ui.clone()));
            }
        }
    }
    Ok(unit_pair(n, terms))
}

/// The plain flip `e_a ⊗ e_b ↦ e_b ⊗ e_a`.
pub fn flip<F: Scalar>(n: usize) -> ScalarMatrix<F> {
    ScalarMatrix::from_column_action(vec![n, n], |t| vec![(vec![t[1], t[0]], F::one())])
}

/// `R̂(z) = P R(z)`.
pub fn r_hat<F: Scalar>(assign: &ParameterAssignment<F>, z: &F) -> Result<ScalarMatrix<F>> {
    flip(assign.q.dim()).mul(&r_matrix(assign, z)?)
}

/// The closed form of `R̂(u⁻²)` as displayed, term by term.
pub fn r_hat_closed_form<F: Scalar>(assign: &ParameterAssignment<F>) -> Result<ScalarMatrix<F>> {
    let u = assign.u()?;
    let c = u.clone() - u.try_inv()?;
    let (q, p) = (&assign.q, &assign.p);
    let n = q.dim();
    let mut terms = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let qi = q.at(i, j).try_inv()?;
            let pi = p.at(i, j).try_inv()?;
            terms.push(((i, j), (i, j), c.clone()));
            terms.push(((j, i), (i, j), -c.clone() * qi.clone()));
            terms.push(((i, j), (j, i), -c.clone() * pi.clone()));
            terms.push(((j, i), (j, i), c.clone() * pi * qi));
        }
    }
    Ok(unit_pair(n, terms))
}

/// Left-hand and right-hand sides of `R12(z/w) R13(z) R23(w) = R23(w) R13(z) R12(z/w)`.
pub fn ybe_sides<F: Scalar>(assign: &ParameterAssignment<F>, z: &F, w: &F) -> Result<(ScalarMatrix<F>, ScalarMatrix<F>)> {
    let n = assign.q.dim();
    let dims = [n, n, n];
    let zw = z.try_div(w)?;
    let r12 = r_matrix(assign, &zw)?.embed_pair(&dims, 0, 1)?;
    let r13 = r_matrix(assign, z)?.embed_pair(&dims, 0, 2)?;
    let r23 = r_matrix(assign, w)?.embed_pair(&dims, 1, 2)?;
    Ok((r12.mul(&r13)?.mul(&r23)?, r23.mul(&r13)?.mul(&r12)?))
}

/// How the spectral argument of each `R̂_{a,a+1}` in the nested product is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FusionReading {
    /// Every factor sits on adjacent slots, so `λ_{a+1}/λ_a = u⁻²` throughout.
    Positional,
    /// Each factor carries `λ_j/λ_i` for the two strands `i < j` it currently exchanges.
    Strands,
}

impl FusionReading {
    pub fn name(self) -> &'static str {
        match self {
            FusionReading::Positional => "positional",
            FusionReading::Strands => "strands",
        }
    }
}

/// `(R̂_12⋯R̂_{k-1,k})⋯(R̂_12 R̂_23) R̂_12` at `λ_i = u^{-2(i-1)}`.
pub fn nested_product<F: Scalar>(assign: &ParameterAssignment<F>, k: usize, reading: FusionReading) -> Result<ScalarMatrix<F>> {
    let n = assign.q.dim();
    let u = assign.u()?;
    let u2i = (u.clone() * u).try_inv()?;
    let dims = vec![n; k];
    let mut strands: Vec<usize> = (0..k).collect();
    let mut acc = ScalarMatrix::identity(dims.clone());
    for block in 1..k {
        for a in (0..block).rev() {
            let gap = match reading {
                FusionReading::Positional => 1,
                FusionReading::Strands => {
                    let (i, j) = (strands[a], strands[a + 1]);
                    if i > j {
                        return Err(Error::InvalidConfig("strands crossed twice".into()));
                    }
                    j - i
                }
            };
            strands.swap(a, a + 1);
            let factor = r_hat(assign, &u2i.pow(gap as u64))?.embed_pair(&dims, a, a + 1)?;
            acc = factor.mul(&acc)?;
        }
    }
    Ok(acc)
}

/// `Σ ε(p, I, ρ) ε(q, I, σ) e_{I_σ I_ρ}`, the u-deformed antisymmetrizer times `[k]!`.
pub fn unnormalized_antisymmetrizer<F: Scalar>(assign: &ParameterAssignment<F>, k: usize, signed: bool) -> Result<ScalarMatrix<F>> {
    block_operator(assign.q.dim(), k, |i, sigma, rho| {
        if signed {
            Ok(eps_perm(&assign.p, i, rho)? * eps_perm(&assign.q, i, sigma)?)
        } else {
            Ok(mu_perm(&assign.p, i, rho)? * mu_perm(&assign.q, i, sigma)?)
        }
    })
}

/// `u^{k(k-1)/2} Π_{0≤i<j≤k-1} (1 - u^{2(i-j)})`, the displayed scalar without `[k]!`.
pub fn fusion_scalar<F: Scalar>(u: &F, k: usize) -> Result<F> {
    let mut c = u.pow((k * k.saturating_sub(1) / 2) as u64);
    for i in 0..k {
        for j in i + 1..k {
            c = c * (F::one() - u.powi(2 * (i as i64 - j as i64))?);
        }
    }
    Ok(c)
}

fn discrepancy<F: Scalar>(prod: &ScalarMatrix<F>, target: &ScalarMatrix<F>, k: usize, reading: FusionReading) -> String {
    match proportionality(prod, target) {
        Some(l) => format!("k={k}, {} reading: product = {l} x displayed right-hand side", reading.name()),
        None if prod.is_zero() => format!("k={k}, {} reading: product is zero", reading.name()),
        None => format!("k={k}, {} reading: product not proportional to A^({k})", reading.name()),
    }
}

/// `λ` with `a = λ b`, if one exists.
fn proportionality<F: Scalar>(a: &ScalarMatrix<F>, b: &ScalarMatrix<F>) -> Option<F> {
    let (r, c) = *b.entries_iter().next()?.0;
    let lambda = a.get(r, c).try_div(&b.get(r, c)).ok()?;
    (a == &b.scale(&lambda)).then_some(lambda)
}

fn yangian_assignment<F: Scalar>(cfg: &SuiteConfig, seed: u64) -> Result<ParameterAssignment<F>> {
    ParameterAssignment::sample(cfg.n, cfg.n, Mode::Yangian, seed)
}

/// Resamples `p_12` (keeping `p_12 p_21 = 1`) so that `p_12 q_12 ≠ u²`.
pub fn break_yangian_constraint<F: Scalar>(assign: &ParameterAssignment<F>) -> Result<ParameterAssignment<F>> {
    use rand::SeedableRng;
    let n = assign.q.dim();
    if n < 2 {
        return Err(Error::InapplicableMutation {
            mutation: Mutation::BreakConstraint.name().into(),
            case: "n < 2 (no constrained pair)".into(),
        });
    }
    let u = assign.u()?;
    let u2 = u.clone() * u;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(assign.seed ^ 0x5851_f42d_4c95_7f2d);
    let p12 = loop {
        let v = F::sample_nonzero(&mut rng);
        if v.clone() * assign.q.at(1, 2).clone() != u2 {
            break v;
        }
    };
    let mut upper = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            upper.push(if (i, j) == (1, 2) { p12.clone() } else { assign.p.at(i, j).clone() });
        }
    }
    let mut out = assign.clone();
    out.p = ParamMatrix::from_upper(n, &upper)?;
    out.broken = true;
    Ok(out)
}

fn diff_note<F: Scalar>(a: &ScalarMatrix<F>, b: &ScalarMatrix<F>) -> Option<String> {
    if a == b {
        return None;
    }
    let keys: std::collections::BTreeSet<(usize, usize)> = a.entries_iter().chain(b.entries_iter()).map(|(k, _)| *k).collect();
    keys.into_iter()
        .find(|&(r, c)| a.get(r, c) != b.get(r, c))
        .map(|(r, c)| format!("entry ({r},{c}): {} != {}", a.get(r, c), b.get(r, c)))
}

/// Yang–Baxter equation at the sampled `(z, w)`, plus the broken-constraint control.
pub fn ybe_suite<F: Scalar>(cfg: &SuiteConfig, seed: u64) -> Result<NumericOutcome> {
    let assign = yangian_assignment::<F>(cfg, seed)?;
    let z = assign.z.clone().ok_or_else(|| Error::InvalidConfig("missing z".into()))?;
    let w = assign.w.clone().ok_or_else(|| Error::InvalidConfig("missing w".into()))?;
    let mut out = NumericOutcome::default();
    let (l, r) = ybe_sides(&assign, &z, &w)?;
    out.case(format!("R12(z/w)R13(z)R23(w) = R23(w)R13(z)R12(z/w), n={}", cfg.n), 0, l == r, diff_note(&l, &r));
    out.controls.push(match break_yangian_constraint(&assign) {
        Err(Error::InapplicableMutation { case, .. }) => ControlReport::inapplicable(Mutation::BreakConstraint, case),
        Err(e) => return Err(e),
        Ok(broken) => {
            let (l, r) = ybe_sides(&broken, &z, &w)?;
            ControlReport {
                mutation: Mutation::BreakConstraint,
                applicable: true,
                verdict: Some(Verdict::from_equality(l == r)),
                case: Some("YBE with p_12 q_12 ≠ u^2".into()),
                witness: diff_note(&l, &r),
                reason: None,
            }
        }
    });
    Ok(out)
}

/// The closed form of `R̂(u⁻²)`, fusion for `k ≤ cap`, and the two antisymmetrizer lemmas.
pub fn fusion_suite<F: Scalar>(cfg: &SuiteConfig, seed: u64) -> Result<NumericOutcome> {
    let assign = yangian_assignment::<F>(cfg, seed)?;
    let u = assign.u()?;
    let u2i = (u.clone() * u.clone()).try_inv()?;
    let k_max = cfg.degree.unwrap_or(FUSION_DEFAULT_K).min(FUSION_MAX_K);
    let mut out = NumericOutcome::default();

    let rh = r_hat(&assign, &u2i)?;
    let closed = r_hat_closed_form(&assign)?;
    out.case("R̂(u^-2) equals its closed form", 0, rh == closed, diff_note(&rh, &closed));

    let mut control_failure = None;
    let mut control_applicable = false;
    for k in 1..=k_max {
        let target = unnormalized_antisymmetrizer(&assign, k, true)?.scale(&fusion_scalar(&u, k)?);
        let prod = nested_product(&assign, k, FusionReading::Strands)?;
        let label = format!("k={k} nested product (strands reading) = c [k]! A^({k})");
        out.case(label, 0, prod == target, diff_note(&prod, &target));
        if prod != target {
            out.notes.push(discrepancy(&prod, &target, k, FusionReading::Strands));
        }
        let positional = nested_product(&assign, k, FusionReading::Positional)?;
        out.notes.push(if positional == target {
            format!("k={k}, positional reading: equals the displayed right-hand side")
        } else {
            discrepancy(&positional, &target, k, FusionReading::Positional)
        });
        let mutated = unnormalized_antisymmetrizer(&assign, k, false)?.scale(&fusion_scalar(&u, k)?);
        if mutated != target {
            control_applicable = true;
            if control_failure.is_none() {
                control_failure = diff_note(&prod, &mutated).map(|d| format!("k={k}: {d}"));
            }
        }
        for conv in QFactorial::ALL {
            let a = projector(&assign, ProjectorKind::YangianAntisym(conv), k)?;
            out.notes.push(format!(
                "k={k}: A^({k}) with [i] = {} is {}",
                conv.name(),
                if a.is_idempotent() { "idempotent" } else { "not idempotent" }
            ));
        }
        let a = projector(&assign, ProjectorKind::YangianAntisym(YANGIAN_CONVENTION), k)?;
        let ap = projector(&assign, ProjectorKind::AntisymP, k)?;
        let (l1, l2) = (ap.mul(&a)?, a.mul(&ap)?);
        out.case(format!("k={k} A_p A = A_p"), 0, l1 == ap, diff_note(&l1, &ap));
        out.case(format!("k={k} A A_p = A"), 0, l2 == a, diff_note(&l2, &a));
    }
    out.notes.push(
        "the [k]! in the displayed scalar cancels against the normalization of A^(k), so the fusion equality holds or fails independently of the q-factorial convention; idempotency selects the convention".into(),
    );
    out.controls.push(if control_applicable {
        ControlReport {
            mutation: Mutation::DropSign,
            applicable: true,
            verdict: Some(Verdict::from_equality(control_failure.is_none())),
            case: Some("nested product vs unsigned antisymmetrizer".into()),
            witness: control_failure,
            reason: None,
        }
    } else {
        ControlReport::inapplicable(Mutation::DropSign, "signed and unsigned antisymmetrizers coincide")
    });
    Ok(out)
}
