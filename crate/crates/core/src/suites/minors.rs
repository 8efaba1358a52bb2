//! Column permutation, Laplace, Plücker, adjugate, comodule and factorization identities.

use crate::det::{minor, MinorKind, MinorSpec, Orientation};
use crate::error::{Error, Result};
use crate::freealg::{Family, Letter, NCPoly};
use crate::ideal::{commuting_relations, exterior_relations, manin_relations, plane_relations};
use crate::qcomb::{all_tuples, eps_index, increasing, MultiIndex};
use crate::report::Mutation;
use crate::scalar::{ParamMatrix, ParameterAssignment, Scalar};
use crate::tensor::{projector, AlgMatrix, ProjectorKind, ScalarMatrix};

use super::{CheckGroup, SuiteConfig};

pub(super) fn cdet<F: Scalar>(rows: &MultiIndex, cols: &MultiIndex, mat: &AlgMatrix<F>, q: &ParamMatrix<F>) -> Result<NCPoly<F>> {
    minor(&MinorSpec::cdet(rows.clone(), cols.clone()), mat, q)
}

/// Column determinant with every ε-weight replaced by 1.
pub(super) fn unsigned_cdet<F: Scalar>(rows: &MultiIndex, cols: &MultiIndex, mat: &AlgMatrix<F>) -> Result<NCPoly<F>> {
    let spec = MinorSpec::new(Orientation::Column, MinorKind::Per, rows.clone(), cols.clone());
    minor(&spec, mat, &ParamMatrix::ones(mat.rows()))
}

fn drop_sign(mutation: Option<Mutation>) -> Result<bool> {
    match mutation {
        None => Ok(false),
        Some(Mutation::DropSign) => Ok(true),
        Some(m) => Err(Error::InapplicableMutation {
            mutation: m.name().into(),
            case: "minor identity".into(),
        }),
    }
}

fn sign_or_one<F: Scalar>(drop: bool, v: F) -> F {
    if drop {
        F::one()
    } else {
        v
    }
}

fn manin_group<F: Scalar>(n: usize, assign: &ParameterAssignment<F>) -> Result<CheckGroup<F>> {
    Ok(CheckGroup::new(format!("manin {n}x{n}"), manin_relations(n, n, assign)?))
}

/// `Σ_σ ε(q,σ) M_{σ(1) i_1} ⋯ M_{σ(n) i_n} = ε(p, I) cdet M` for every `I ∈ [n]^n`.
pub(super) fn column_perm<F: Scalar>(
    cfg: &SuiteConfig,
    assign: &ParameterAssignment<F>,
    mutation: Option<Mutation>,
) -> Result<Vec<CheckGroup<F>>> {
    let drop = drop_sign(mutation)?;
    let n = cfg.n;
    let mm = AlgMatrix::generic(Family::M, n, n);
    let full = MultiIndex::full(n);
    let det = cdet(&full, &full, &mm, &assign.q)?;
    let mut g = manin_group(n, assign)?;
    for i in all_tuples(n, n) {
        let lhs = cdet(&full, &i, &mm, &assign.q)?;
        let rhs = det.scale(&sign_or_one(drop, eps_index(&assign.p, &i)?));
        g.push(format!("I={i}"), n, lhs - rhs);
    }
    Ok(vec![g])
}

/// `ε(p, I⊕K) cdet M = Σ_J ε(q, J⊕J^c) cdet M_{JI} cdet M_{J^c K}` for `|I| = r`, `|K| = n - r`.
pub(super) fn laplace<F: Scalar>(
    cfg: &SuiteConfig,
    assign: &ParameterAssignment<F>,
    mutation: Option<Mutation>,
) -> Result<Vec<CheckGroup<F>>> {
    let drop = drop_sign(mutation)?;
    let n = cfg.n;
    let mm = AlgMatrix::generic(Family::M, n, n);
    let full = MultiIndex::full(n);
    let det = cdet(&full, &full, &mm, &assign.q)?;
    let mut g = manin_group(n, assign)?;
    for r in 0..=n {
        for i in increasing(n, r) {
            for k in increasing(n, n - r) {
                let lhs = det.scale(&eps_index(&assign.p, &i.juxtapose(&k))?);
                let mut rhs = NCPoly::zero();
                for j in increasing(n, r) {
                    let jc = j.complement_in(&full)?;
                    let w = sign_or_one(drop, eps_index(&assign.q, &j.juxtapose(&jc))?);
                    let t = cdet(&j, &i, &mm, &assign.q)?.nc_mul(&cdet(&jc, &k, &mm, &assign.q)?);
                    rhs.add_scaled(&t, &w);
                }
                g.push(format!("r={r} I={i} K={k}"), n, lhs - rhs);
            }
        }
    }
    Ok(vec![g])
}

/// `Σ_{J ⊂ K, |J| = r} ε(q, J⊕K∖J) cdet M_{JI} cdet M_{K∖J, I} = 0` for `|K| = 2r`.
pub(super) fn plucker<F: Scalar>(
    cfg: &SuiteConfig,
    assign: &ParameterAssignment<F>,
    mutation: Option<Mutation>,
) -> Result<Vec<CheckGroup<F>>> {
    let drop = drop_sign(mutation)?;
    let n = cfg.n;
    let mm = AlgMatrix::generic(Family::M, n, n);
    let mut g = manin_group(n, assign)?;
    for r in 1..=n / 2 {
        for i in increasing(n, r) {
            for k in increasing(n, 2 * r) {
                let mut sum = NCPoly::zero();
                for sub in increasing(2 * r, r) {
                    let j = MultiIndex::new(sub.entries().iter().map(|&t| k.entries()[t - 1]).collect::<Vec<_>>());
                    let rest = j.complement_in(&k)?;
                    let w = sign_or_one(drop, eps_index(&assign.q, &j.juxtapose(&rest))?);
                    let t = cdet(&j, &i, &mm, &assign.q)?.nc_mul(&cdet(&rest, &i, &mm, &assign.q)?);
                    sum.add_scaled(&t, &w);
                }
                g.push(format!("r={r} I={i} K={k}"), 2 * r, sum);
            }
        }
    }
    Ok(vec![g])
}

/// `Σ_j ε(q, j^c⊕j) cdet M_{j^c i^c} cdet M_{jk} = ε(p, i^c⊕k) cdet M`.
pub(super) fn adjugate<F: Scalar>(
    cfg: &SuiteConfig,
    assign: &ParameterAssignment<F>,
    mutation: Option<Mutation>,
) -> Result<Vec<CheckGroup<F>>> {
    let drop = drop_sign(mutation)?;
    let n = cfg.n;
    let mm = AlgMatrix::generic(Family::M, n, n);
    let full = MultiIndex::full(n);
    let det = cdet(&full, &full, &mm, &assign.q)?;
    let single = |x: usize| MultiIndex::new(vec![x]);
    let mut g = manin_group(n, assign)?;
    for i in 1..=n {
        let ic = single(i).complement_in(&full)?;
        for k in 1..=n {
            let mut lhs = NCPoly::zero();
            for j in 1..=n {
                let jc = single(j).complement_in(&full)?;
                let w = sign_or_one(drop, eps_index(&assign.q, &jc.juxtapose(&single(j)))?);
                let t = cdet(&jc, &ic, &mm, &assign.q)?.nc_mul(&cdet(&single(j), &single(k), &mm, &assign.q)?);
                lhs.add_scaled(&t, &w);
            }
            let rhs = det.scale(&eps_index(&assign.p, &ic.juxtapose(&single(k)))?);
            g.push(format!("i={i} k={k}"), n, lhs - rhs);
        }
    }
    Ok(vec![g])
}

/// `A_q(Y⊗Y) = 0` for `y_i = Σ_j M_ij x_j`, `(Φ⊗Φ)(1 - A_p) = 0` for `φ_j = Σ_i ψ_i M_ij`,
/// and the two tensor-power identities `A_q M_1⋯M_k = A_q M_1⋯M_k A_p`,
/// `M_1⋯M_k S_p = S_q M_1⋯M_k S_p`. The sign-dropping control swaps antisymmetrizers for
/// symmetrizers throughout.
pub(super) fn comodule<F: Scalar>(
    cfg: &SuiteConfig,
    assign: &ParameterAssignment<F>,
    mutation: Option<Mutation>,
) -> Result<Vec<CheckGroup<F>>> {
    let swap = drop_sign(mutation)?;
    let (n, m) = (cfg.n, cfg.m);
    let (aq, ap) = if swap {
        (ProjectorKind::SymQ, ProjectorKind::SymP)
    } else {
        (ProjectorKind::AntisymQ, ProjectorKind::AntisymP)
    };
    let manin = manin_relations(n, m, assign)?;
    let mm = AlgMatrix::generic(Family::M, n, m);

    let rels_y = manin
        .union(&plane_relations(&assign.p)?)?
        .union(&commuting_relations((Family::M, n, m), (Family::X, m, 0))?)?;
    let mut x = AlgMatrix::zeros(vec![m], vec![1]);
    for j in 1..=m {
        x.set(j - 1, 0, NCPoly::letter(Letter::vector(Family::X, j)));
    }
    let y = mm.mul(&x)?;
    let lhs_y = y.chain(2)?.left_mul(&projector(assign, aq, 2)?)?;
    let mut gy = CheckGroup::new("Y = MX", rels_y);
    gy.push_entries("A(Y⊗Y)", 4, &lhs_y);

    let rels_phi = manin
        .union(&exterior_relations(&assign.q)?)?
        .union(&commuting_relations((Family::M, n, m), (Family::Psi, n, 0))?)?;
    let mut psi = AlgMatrix::zeros(vec![1], vec![n]);
    for i in 1..=n {
        psi.set(0, i - 1, NCPoly::letter(Letter::vector(Family::Psi, i)));
    }
    let phi = psi.mul(&mm)?;
    let one_minus = ScalarMatrix::identity(vec![m, m]).sub(&projector(assign, ap, 2)?)?;
    let lhs_phi = phi.chain(2)?.right_mul(&one_minus)?;
    let mut gphi = CheckGroup::new("Phi = PsiM", rels_phi);
    gphi.push_entries("(Φ⊗Φ)(1-A)", 4, &lhs_phi);

    let mut gk = CheckGroup::new(format!("manin {n}x{m}"), manin);
    let (sq, sp) = if swap {
        (ProjectorKind::AntisymQ, ProjectorKind::AntisymP)
    } else {
        (ProjectorKind::SymQ, ProjectorKind::SymP)
    };
    for k in 2..=n.max(m).clamp(2, 3) {
        let chain = mm.chain(k)?;
        let a_q = projector(assign, aq, k)?;
        let a_p = projector(assign, ap, k)?;
        let left = chain.left_mul(&a_q)?;
        gk.push_entries(&format!("k={k} A M..M - A M..M A"), k, &left.sub(&left.right_mul(&a_p)?)?);
        let s_q = projector(assign, sq, k)?;
        let s_p = projector(assign, sp, k)?;
        let right = chain.right_mul(&s_p)?;
        gk.push_entries(&format!("k={k} M..M S - S M..M S"), k, &right.sub(&right.left_mul(&s_q)?)?);
    }
    Ok(vec![gy, gphi, gk])
}

/// `A_q^{(n)} M_1⋯M_n = cdet_q(M) A_qp^{(n)}` entrywise; the control drops the ε-weights of cdet.
pub(super) fn factorization<F: Scalar>(
    cfg: &SuiteConfig,
    assign: &ParameterAssignment<F>,
    mutation: Option<Mutation>,
) -> Result<Vec<CheckGroup<F>>> {
    let drop = drop_sign(mutation)?;
    let n = cfg.n;
    let mm = AlgMatrix::generic(Family::M, n, n);
    let full = MultiIndex::full(n);
    let det = if drop {
        unsigned_cdet(&full, &full, &mm)?
    } else {
        cdet(&full, &full, &mm, &assign.q)?
    };
    let lhs = mm.chain(n)?.left_mul(&projector(assign, ProjectorKind::AntisymQ, n)?)?;
    let mixed = projector(assign, ProjectorKind::MixedQP, n)?;
    let rhs = AlgMatrix::from_scalar(&mixed);
    let mut diff = AlgMatrix::zeros(lhs.row_dims().to_vec(), lhs.col_dims().to_vec());
    for r in 0..lhs.rows() {
        for c in 0..lhs.cols() {
            diff.set(r, c, lhs.get(r, c) - det.nc_mul(&rhs.get(r, c)));
        }
    }
    let mut g = manin_group(n, assign)?;
    g.push_entries("A M..M - cdet A_qp", n, &diff);
    Ok(vec![g])
}
