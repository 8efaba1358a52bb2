//! MacMahon, trace replacement, Newton, Cayley–Hamilton and `char(MN)` vs `char(NM)`,
//! checked coefficient by coefficient up to a degree cap.

use crate::det::{sym_function, SymKind};
use crate::error::{Error, Result};
use crate::freealg::{Family, NCPoly};
use crate::ideal::{commuting_relations, manin_relations, manin_relations_for};
use crate::report::Mutation;
use crate::scalar::{ParamMatrix, ParameterAssignment, Scalar};
use crate::tensor::{star_power, symmetrizer, AlgMatrix, ScalarMatrix};

use super::{CheckGroup, SuiteConfig};

pub const MACMAHON_CAP_SMALL: usize = 5;
pub const MACMAHON_CAP_LARGE: usize = 4;
pub const TRACE_REPLACEMENT_CAP: usize = 4;
pub const NEWTON_CAP: usize = 4;
pub const NEWTON_LEMMA_CAP: usize = 3;

fn drop_sign(mutation: Option<Mutation>) -> Result<bool> {
    match mutation {
        None => Ok(false),
        Some(Mutation::DropSign) => Ok(true),
        Some(m) => Err(Error::InapplicableMutation {
            mutation: m.name().into(),
            case: "series identity".into(),
        }),
    }
}

/// `(-1)^e`, or `1` when signs are dropped.
fn sign<F: Scalar>(e: usize, drop: bool) -> F {
    if drop || e % 2 == 0 {
        F::one()
    } else {
        -F::one()
    }
}

fn cap(cfg: &SuiteConfig, default: usize) -> usize {
    cfg.degree.unwrap_or(default)
}

fn manin_group<F: Scalar>(cfg: &SuiteConfig, assign: &ParameterAssignment<F>) -> Result<CheckGroup<F>> {
    let n = cfg.n;
    Ok(CheckGroup::new(format!("q-manin {n}x{n}"), manin_relations(n, n, assign)?))
}

fn sym_table<F: Scalar>(kind: SymKind, up_to: usize, mat: &AlgMatrix<F>, q: &ParamMatrix<F>) -> Result<Vec<NCPoly<F>>> {
    (0..=up_to).map(|k| sym_function(kind, k, mat, q)).collect()
}

/// `Σ_{r=0}^{d} (-1)^{d-r} h_r e_{d-r} = 0` for `1 ≤ d ≤ cap`.
pub(super) fn macmahon<F: Scalar>(
    cfg: &SuiteConfig,
    assign: &ParameterAssignment<F>,
    mutation: Option<Mutation>,
) -> Result<Vec<CheckGroup<F>>> {
    let drop = drop_sign(mutation)?;
    let n = cfg.n;
    let d_max = cap(cfg, if n <= 2 { MACMAHON_CAP_SMALL } else { MACMAHON_CAP_LARGE });
    let mm = AlgMatrix::generic(Family::M, n, n);
    let h = sym_table(SymKind::H, d_max, &mm, &assign.q)?;
    let e = sym_table(SymKind::E, d_max, &mm, &assign.q)?;
    let mut g = manin_group(cfg, assign)?;
    for d in 1..=d_max {
        let mut acc = NCPoly::zero();
        for r in 0..=d {
            acc.add_scaled(&h[r].nc_mul(&e[d - r]), &sign(d - r, drop));
        }
        g.push(format!("degree {d}"), d, acc);
    }
    Ok(vec![g])
}

/// `S^{(r)}` on the first `r` slots, as an operator on `(C^n)^{⊗r}`.
fn sym_op<F: Scalar>(q: &ParamMatrix<F>, r: usize, signed: bool) -> Result<ScalarMatrix<F>> {
    if r == 0 {
        return Ok(ScalarMatrix::identity(Vec::new()));
    }
    symmetrizer(q, r, signed)
}

fn kron<F: Scalar>(a: &ScalarMatrix<F>, b: &ScalarMatrix<F>) -> ScalarMatrix<F> {
    a.kron(b)
}

/// `(X on slots 1..a) · (Y on slots a'..k)`, both padded with identities to `k` slots.
fn overlap<F: Scalar>(
    q: &ParamMatrix<F>,
    k: usize,
    s_len: usize,
    a_first: usize,
) -> Result<ScalarMatrix<F>> {
    let n = q.dim();
    let s = kron(&sym_op(q, s_len, false)?, &ScalarMatrix::identity(vec![n; k - s_len]));
    let a = kron(&ScalarMatrix::identity(vec![n; a_first]), &sym_op(q, k - a_first, true)?);
    s.mul(&a)
}

/// `tr S^{(r)}A^{r+1..k} M_1⋯M_k = r(k-r+1)/k · tr S^{(r)}A^{r..k} M⋯ + (r+1)(k-r)/k · tr S^{(r+1)}A^{r+1..k} M⋯`.
/// The control flips the sign of the second term.
pub(super) fn trace_replacement<F: Scalar>(
    cfg: &SuiteConfig,
    assign: &ParameterAssignment<F>,
    mutation: Option<Mutation>,
) -> Result<Vec<CheckGroup<F>>> {
    let drop = drop_sign(mutation)?;
    let n = cfg.n;
    let q = &assign.q;
    let mm = AlgMatrix::generic(Family::M, n, n);
    let mut g = manin_group(cfg, assign)?;
    for k in 1..=cap(cfg, TRACE_REPLACEMENT_CAP) {
        let chain = mm.chain(k)?;
        let kf = F::from_i64(k as i64);
        for r in 0..=k {
            let lhs_op = kron(&sym_op(q, r, false)?, &sym_op(q, k - r, true)?);
            let mut poly = chain.trace_left_mul(&lhs_op)?;
            if r >= 1 {
                let c = F::from_i64((r * (k - r + 1)) as i64).try_div(&kf)?;
                let t = chain.trace_left_mul(&overlap(q, k, r, r - 1)?)?;
                poly.add_scaled(&t, &-c);
            }
            if r < k {
                let c = F::from_i64(((r + 1) * (k - r)) as i64).try_div(&kf)?;
                let c = if drop { -c } else { c };
                let t = chain.trace_left_mul(&overlap(q, k, r + 1, r)?)?;
                poly.add_scaled(&t, &-c);
            }
            g.push(format!("k={k} r={r}"), k, poly);
        }
    }
    Ok(vec![g])
}

/// `k tr_{1..k-1} A^{(k)} M_1⋯M_k = Σ_{i=0}^{k-1} (-1)^{k+i+1} e_i M^{[k-i]}` entrywise.
pub(super) fn newton_lemma<F: Scalar>(
    cfg: &SuiteConfig,
    assign: &ParameterAssignment<F>,
    mutation: Option<Mutation>,
) -> Result<Vec<CheckGroup<F>>> {
    let drop = drop_sign(mutation)?;
    let n = cfg.n;
    let q = &assign.q;
    let mm = AlgMatrix::generic(Family::M, n, n);
    let k_max = cap(cfg, NEWTON_LEMMA_CAP);
    let e = sym_table(SymKind::E, k_max, &mm, q)?;
    let mut g = manin_group(cfg, assign)?;
    for k in 1..=k_max {
        let slots: Vec<usize> = (0..k - 1).collect();
        let lhs = mm
            .chain(k)?
            .left_mul(&symmetrizer(q, k, true)?)?
            .partial_trace(&slots)?
            .scale(&F::from_i64(k as i64));
        let mut diff = lhs;
        for i in 0..k {
            let term = star_power(q, &mm, k - i)?;
            let c = sign::<F>(k + i + 1, drop);
            for r in 0..n {
                for col in 0..n {
                    let t = e[i].nc_mul(&term.get(r, col)).scale(&c);
                    diff.set(r, col, diff.get(r, col) - t);
                }
            }
        }
        g.push_entries(&format!("k={k}"), k, &diff);
    }
    Ok(vec![g])
}

/// `k e_k = Σ_{i<k} (-1)^{k+i+1} e_i tr M^{[k-i]}` and `k h_k = Σ_{b<k} tr M^{[k-b]} h_b`.
pub(super) fn newton<F: Scalar>(
    cfg: &SuiteConfig,
    assign: &ParameterAssignment<F>,
    mutation: Option<Mutation>,
) -> Result<Vec<CheckGroup<F>>> {
    let drop = drop_sign(mutation)?;
    let n = cfg.n;
    let q = &assign.q;
    let mm = AlgMatrix::generic(Family::M, n, n);
    let k_max = cap(cfg, NEWTON_CAP);
    let e = sym_table(SymKind::E, k_max, &mm, q)?;
    let h = sym_table(SymKind::H, k_max, &mm, q)?;
    let traces: Vec<NCPoly<F>> = (0..=k_max)
        .map(|j| star_power(q, &mm, j)?.trace())
        .collect::<Result<_>>()?;
    let mut g = manin_group(cfg, assign)?;
    for k in 1..=k_max {
        let kf = F::from_i64(k as i64);
        let mut pe = e[k].scale(&kf);
        let mut ph = h[k].scale(&kf);
        for i in 0..k {
            pe.add_scaled(&e[i].nc_mul(&traces[k - i]), &-sign::<F>(k + i + 1, drop));
            ph = ph - traces[k - i].nc_mul(&h[i]);
        }
        g.push(format!("e k={k}"), k, pe);
        g.push(format!("h k={k}"), k, ph);
    }
    Ok(vec![g])
}

/// `Σ_{k=0}^{n} (-1)^k e_k M^{[n-k]} = 0` entrywise.
pub(super) fn cayley_hamilton<F: Scalar>(
    cfg: &SuiteConfig,
    assign: &ParameterAssignment<F>,
    mutation: Option<Mutation>,
) -> Result<Vec<CheckGroup<F>>> {
    let drop = drop_sign(mutation)?;
    let n = cfg.n;
    let q = &assign.q;
    let mm = AlgMatrix::generic(Family::M, n, n);
    let e = sym_table(SymKind::E, n, &mm, q)?;
    let mut acc = AlgMatrix::zeros(vec![n], vec![n]);
    for (k, ek) in e.iter().enumerate() {
        let pow = star_power(q, &mm, n - k)?;
        let c = sign::<F>(k, drop);
        for r in 0..n {
            for col in 0..n {
                acc.set(r, col, acc.get(r, col) + ek.nc_mul(&pow.get(r, col)).scale(&c));
            }
        }
    }
    let mut g = manin_group(cfg, assign)?;
    g.push_entries("Σ(-1)^k e_k M^[n-k]", n, &acc);
    Ok(vec![g])
}

/// `e_k(MN) = e_k(NM)` for `M` `(q,p)`-Manin `n x m`, `N` `(p,q)`-Manin `m x n`, commuting;
/// for `k` above the smaller size the larger side must vanish. The control uses `h_k(NM)`.
pub(super) fn char_mn_nm<F: Scalar>(
    cfg: &SuiteConfig,
    assign: &ParameterAssignment<F>,
    mutation: Option<Mutation>,
) -> Result<Vec<CheckGroup<F>>> {
    let use_h = drop_sign(mutation)?;
    let (n, m) = (cfg.n, cfg.m);
    let (q, p) = (&assign.q, &assign.p);
    let rels = manin_relations_for(Family::M, q, p)?
        .union(&manin_relations_for(Family::N, p, q)?)?
        .union(&commuting_relations((Family::M, n, m), (Family::N, m, n))?)?;
    let mm = AlgMatrix::generic(Family::M, n, m);
    let nn = AlgMatrix::generic(Family::N, m, n);
    let mn = mm.mul(&nn)?;
    let nm = nn.mul(&mm)?;
    let mut g = CheckGroup::new(format!("M {n}x{m}, N {m}x{n}"), rels);
    for k in 1..=n.max(m) {
        let left = sym_function(SymKind::E, k, &mn, q)?;
        let right = sym_function(if use_h { SymKind::H } else { SymKind::E }, k, &nm, p)?;
        g.push(format!("k={k}"), 2 * k, left - right);
    }
    Ok(vec![g])
}
