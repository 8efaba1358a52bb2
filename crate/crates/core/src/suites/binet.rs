//! Cauchy–Binet for column determinants and for normalized row permanents.

use crate::det::{minor, MinorKind, MinorSpec, Orientation};
use crate::error::{Error, Result};
use crate::freealg::{Family, NCPoly};
use crate::ideal::{commuting_relations, manin_relations_for};
use crate::qcomb::{all_tuples, increasing, nondecreasing};
use crate::report::Mutation;
use crate::scalar::{ParamMatrix, ParameterAssignment, Scalar};
use crate::tensor::AlgMatrix;

use super::minors::{cdet, unsigned_cdet};
use super::{CheckGroup, SuiteConfig};

/// Largest minor size tried for permanents, which never vanish.
const PER_MAX_R: usize = 3;

fn drop_sign(mutation: Option<Mutation>) -> Result<bool> {
    match mutation {
        None => Ok(false),
        Some(Mutation::DropSign) => Ok(true),
        Some(m) => Err(Error::InapplicableMutation {
            mutation: m.name().into(),
            case: "Cauchy–Binet".into(),
        }),
    }
}

/// `M` `n x m` `(q,p)`-Manin, `N` `m x s` free and commuting with `M`:
/// `cdet_q((MN)_{IK}) = Σ_J cdet_q(M_{IJ}) cdet_p(N_{JK})` for `r ≤ m`, and `= 0` for `r > m`.
pub(super) fn det<F: Scalar>(
    cfg: &SuiteConfig,
    assign: &ParameterAssignment<F>,
    mutation: Option<Mutation>,
) -> Result<Vec<CheckGroup<F>>> {
    let drop = drop_sign(mutation)?;
    let (n, m, s) = (cfg.n, cfg.m, cfg.s);
    let rels = manin_relations_for(Family::M, &assign.q, &assign.p)?
        .union(&commuting_relations((Family::M, n, m), (Family::N, m, s))?)?;
    let mm = AlgMatrix::generic(Family::M, n, m);
    let nn = AlgMatrix::generic(Family::N, m, s);
    let mn = mm.mul(&nn)?;
    let mut g = CheckGroup::new(format!("M {n}x{m} manin, N {m}x{s} free"), rels);
    for r in 1..=n {
        for i in increasing(n, r) {
            for k in all_tuples(s, r) {
                let poly = if r <= m {
                    let lhs = cdet(&i, &k, &mn, &assign.q)?;
                    let mut rhs = NCPoly::zero();
                    for j in increasing(m, r) {
                        let right = if drop {
                            unsigned_cdet(&j, &k, &nn)?
                        } else {
                            cdet(&j, &k, &nn, &assign.p)?
                        };
                        rhs = rhs + cdet(&i, &j, &mm, &assign.q)?.nc_mul(&right);
                    }
                    lhs - rhs
                } else if drop {
                    unsigned_cdet(&i, &k, &mn)?
                } else {
                    cdet(&i, &k, &mn, &assign.q)?
                };
                g.push(format!("r={r} I={i} K={k}"), 2 * r, poly);
            }
        }
    }
    Ok(vec![g])
}

fn rper_hat<F: Scalar>(
    rows: &crate::qcomb::MultiIndex,
    cols: &crate::qcomb::MultiIndex,
    mat: &AlgMatrix<F>,
    p: &ParamMatrix<F>,
) -> Result<NCPoly<F>> {
    let spec = MinorSpec::new(Orientation::Row, MinorKind::PerNormalized, rows.clone(), cols.clone());
    minor(&spec, mat, p)
}

/// `N` `m x s` `(q,p)`-Manin, `M` `n x m` free and commuting with `N`:
/// `rper^_p((MN)_{IK}) = Σ_{J nondecreasing} rper^_q(M_{IJ}) rper^_p(N_{JK})`, `K` non-decreasing.
/// The control drops the μ-weights of `rper^_q(M_{IJ})`.
pub(super) fn per<F: Scalar>(
    cfg: &SuiteConfig,
    assign: &ParameterAssignment<F>,
    mutation: Option<Mutation>,
) -> Result<Vec<CheckGroup<F>>> {
    let drop = drop_sign(mutation)?;
    let (n, m, s) = (cfg.n, cfg.m, cfg.s);
    let rels = manin_relations_for(Family::N, &assign.q, &assign.p)?
        .union(&commuting_relations((Family::M, n, m), (Family::N, m, s))?)?;
    let mm = AlgMatrix::generic(Family::M, n, m);
    let nn = AlgMatrix::generic(Family::N, m, s);
    let mn = mm.mul(&nn)?;
    let q_left = if drop { ParamMatrix::ones(m) } else { assign.q.clone() };
    let mut g = CheckGroup::new(format!("N {m}x{s} manin, M {n}x{m} free"), rels);
    for r in 1..=n.min(PER_MAX_R) {
        for i in all_tuples(n, r) {
            for k in nondecreasing(s, r) {
                let lhs = rper_hat(&i, &k, &mn, &assign.p)?;
                let mut rhs = NCPoly::zero();
                for j in nondecreasing(m, r) {
                    rhs = rhs + rper_hat(&i, &j, &mm, &q_left)?.nc_mul(&rper_hat(&j, &k, &nn, &assign.p)?);
                }
                g.push(format!("r={r} I={i} K={k}"), 2 * r, lhs - rhs);
            }
        }
    }
    Ok(vec![g])
}
