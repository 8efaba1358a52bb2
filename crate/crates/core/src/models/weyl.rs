//! Classical Capelli identity on truncated polynomial spaces:
//! `cdet(X D^t + diag(n-1, …, 0)) = det X det D` with `E_ij = Σ_k x_ik ∂_jk`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::qcomb::{classical_sign, Permutation};
use crate::report::{ControlReport, Mutation, Verdict};
use crate::scalar::Q;
use crate::suites::NumericOutcome;

use super::{monomials_of_degree, total, CommPoly};

/// Largest truncation degree accepted.
pub const MAX_TRUNCATION: usize = 4;

/// A linear operator on polynomials in `x_ij` of total degree `≤ d`, stored by its images of
/// the monomial basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedWeylOp {
    pub n: usize,
    pub d: usize,
    images: BTreeMap<Vec<u8>, CommPoly>,
}

impl TruncatedWeylOp {
    /// Tabulates `f` on every basis monomial. Images above degree `d` are an error.
    pub fn from_fn(n: usize, d: usize, f: impl Fn(&CommPoly) -> Result<CommPoly>) -> Result<Self> {
        let mut images = BTreeMap::new();
        for m in basis(n, d) {
            let img = f(&CommPoly::monomial(m.clone(), num_traits::One::one()))?;
            if let Some(reached) = img.degree().filter(|&r| r > d) {
                return Err(Error::TruncationOverflow { limit: d, reached });
            }
            images.insert(m, img);
        }
        Ok(TruncatedWeylOp { n, d, images })
    }

    pub fn image(&self, m: &[u8]) -> Option<&CommPoly> {
        self.images.get(m)
    }

    pub fn basis_len(&self) -> usize {
        self.images.len()
    }

    /// First basis monomial on which two operators differ.
    pub fn first_difference(&self, other: &Self) -> Option<(Vec<u8>, CommPoly, CommPoly)> {
        self.images
            .iter()
            .find(|(m, img)| other.images.get(*m) != Some(*img))
            .map(|(m, img)| (m.clone(), img.clone(), other.images.get(m).cloned().unwrap_or_default()))
    }
}

/// Monomial basis of degree `≤ d` in the `n²` variables `x_ij`.
pub fn basis(n: usize, d: usize) -> Vec<Vec<u8>> {
    (0..=d).flat_map(|k| monomials_of_degree(n * n, k)).collect()
}

/// Index of `x_ij` (1-based `i`, `j`).
fn var(n: usize, i: usize, j: usize) -> usize {
    (i - 1) * n + (j - 1)
}

/// `x_ij · f`, refusing to leave the truncated space.
pub fn mul_x(n: usize, d: usize, i: usize, j: usize, f: &CommPoly) -> Result<CommPoly> {
    let out = f.mul_var(var(n, i, j));
    match out.degree() {
        Some(r) if r > d => Err(Error::TruncationOverflow { limit: d, reached: r }),
        _ => Ok(out),
    }
}

pub fn diff(n: usize, i: usize, j: usize, f: &CommPoly) -> CommPoly {
    f.diff(var(n, i, j))
}

/// `(E + diag(shift))_{ij} f` with `E_ij = Σ_k x_ik ∂_jk`.
fn shifted_e(n: usize, d: usize, i: usize, j: usize, shift: &[i64], f: &CommPoly) -> Result<CommPoly> {
    let mut acc = CommPoly::zero(f.vars());
    for k in 1..=n {
        acc = acc.add(&mul_x(n, d, i, k, &diff(n, j, k, f))?);
    }
    if i == j && shift[i - 1] != 0 {
        acc = acc.add(&f.scale(&<Q as crate::scalar::Scalar>::from_i64(shift[i - 1])));
    }
    Ok(acc)
}

/// `Σ_σ sgn σ F_{σ(1)1} ∘ ⋯ ∘ F_{σ(n)n}` applied to `f`, rightmost factor first.
fn column_det_of_e(n: usize, d: usize, shift: &[i64], f: &CommPoly) -> Result<CommPoly> {
    let mut acc = CommPoly::zero(f.vars());
    for sigma in Permutation::all(n) {
        let mut g = f.clone();
        for t in (0..n).rev() {
            g = shifted_e(n, d, sigma.images()[t] + 1, t + 1, shift, &g)?;
            if g.is_zero() {
                break;
            }
        }
        acc = acc.add(&g.scale(&classical_sign(&sigma)));
    }
    Ok(acc)
}

/// `det X · det D f`: differentiate first, then multiply.
fn det_x_det_d(n: usize, d: usize, f: &CommPoly) -> Result<CommPoly> {
    let mut lowered = CommPoly::zero(f.vars());
    for sigma in Permutation::all(n) {
        let mut g = f.clone();
        for t in 0..n {
            g = diff(n, sigma.images()[t] + 1, t + 1, &g);
        }
        lowered = lowered.add(&g.scale(&classical_sign(&sigma)));
    }
    let mut acc = CommPoly::zero(f.vars());
    for sigma in Permutation::all(n) {
        let mut g = lowered.clone();
        for t in 0..n {
            g = mul_x(n, d, sigma.images()[t] + 1, t + 1, &g)?;
        }
        acc = acc.add(&g.scale(&classical_sign(&sigma)));
    }
    Ok(acc)
}

/// Both sides of the Capelli identity as truncated operators.
pub fn capelli_sides(n: usize, d: usize, shift: &[i64]) -> Result<(TruncatedWeylOp, TruncatedWeylOp)> {
    let lhs = TruncatedWeylOp::from_fn(n, d, |f| column_det_of_e(n, d, shift, f))?;
    let rhs = TruncatedWeylOp::from_fn(n, d, |f| det_x_det_d(n, d, f))?;
    Ok((lhs, rhs))
}

/// `diag(n-1, …, 0)`.
pub fn capelli_shift(n: usize) -> Vec<i64> {
    (0..n).rev().map(|k| k as i64).collect()
}

/// First failure of `[∂_ij, x_kl] = δ_ik δ_jl` on basis monomials of degree `< d`.
pub fn commutator_failure(n: usize, d: usize) -> Result<Option<String>> {
    for m in basis(n, d.saturating_sub(1)) {
        let f = CommPoly::monomial(m.clone(), num_traits::One::one());
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    for l in 1..=n {
                        let left = diff(n, i, j, &mul_x(n, d, k, l, &f)?);
                        let right = mul_x(n, d, k, l, &diff(n, i, j, &f))?;
                        let got = left.add(&right.scale(&-<Q as num_traits::One>::one()));
                        let want = if (i, j) == (k, l) { f.clone() } else { CommPoly::zero(f.vars()) };
                        if got != want {
                            return Ok(Some(format!("[d{i}{j}, x{k}{l}] on {m:?} gives {}", got.render())));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Compares both Capelli sides on every basis monomial of degree `≤ d`, one case per degree.
pub fn capelli_oracle(n: usize, d: usize) -> Result<NumericOutcome> {
    if n == 0 || n > super::ORACLE_MAX_N || d > MAX_TRUNCATION {
        return Err(Error::InvalidConfig(format!(
            "Weyl oracle needs 1 <= n <= {} and truncation <= {MAX_TRUNCATION}",
            super::ORACLE_MAX_N
        )));
    }
    let mut out = NumericOutcome::default();
    let failure = commutator_failure(n, d)?;
    out.case(format!("[d_ij, x_kl] = delta on degree < {d}"), d.saturating_sub(1), failure.is_none(), failure);

    let (lhs, rhs) = capelli_sides(n, d, &capelli_shift(n))?;
    for k in 0..=d {
        let monos = monomials_of_degree(n * n, k);
        let bad = monos.iter().find(|m| lhs.image(m) != rhs.image(m));
        let detail = bad.map(|m| {
            format!(
                "on {m:?}: lhs {} vs rhs {}",
                lhs.image(m).map(CommPoly::render).unwrap_or_default(),
                rhs.image(m).map(CommPoly::render).unwrap_or_default()
            )
        });
        out.case(
            format!("capelli n={n} D={d}, {} monomials of degree {k}", monos.len()),
            k,
            bad.is_none(),
            detail,
        );
    }

    let swapped: Vec<i64> = (0..n as i64).collect();
    out.controls.push(if swapped == capelli_shift(n) {
        ControlReport::inapplicable(Mutation::SwapDiag, "n = 1: the reversed shift is the same")
    } else {
        let (lhs, rhs) = capelli_sides(n, d, &swapped)?;
        let diff = lhs.first_difference(&rhs);
        ControlReport {
            mutation: Mutation::SwapDiag,
            applicable: true,
            verdict: Some(Verdict::from_equality(diff.is_none())),
            case: Some(format!("capelli n={n} D={d} with diag(0, …, {})", n - 1)),
            witness: diff.map(|(m, l, r)| format!("on {m:?}: lhs {} vs rhs {}", l.render(), r.render())),
            reason: None,
        }
    });
    out.notes.push(format!(
        "operators tabulated on all {} monomials of degree <= {d} in {} variables",
        lhs.basis_len(),
        n * n
    ));
    debug_assert!(basis(n, d).iter().all(|m| total(m) <= d));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn euler_operator_for_n1() {
        let (lhs, rhs) = capelli_sides(1, 4, &capelli_shift(1)).unwrap();
        for k in 0..=4u8 {
            let want = CommPoly::monomial(vec![k], Q::from_i64(k as i64));
            assert_eq!(lhs.image(&[k]), Some(&want));
            assert_eq!(rhs.image(&[k]), Some(&want));
        }
    }

    #[test]
    fn capelli_n2_holds_and_shift_matters() {
        let (lhs, rhs) = capelli_sides(2, 3, &capelli_shift(2)).unwrap();
        assert_eq!(lhs.first_difference(&rhs), None);
        let (lhs, rhs) = capelli_sides(2, 3, &[0, 0]).unwrap();
        assert!(lhs.first_difference(&rhs).is_some());
    }

    #[test]
    fn overflow_is_reported() {
        let f = CommPoly::monomial(vec![2, 0, 0, 0], Q::from_i64(1));
        assert_eq!(
            mul_x(2, 2, 1, 1, &f),
            Err(Error::TruncationOverflow { limit: 2, reached: 3 })
        );
    }

    #[test]
    fn commutator_exhaustive() {
        assert_eq!(commutator_failure(2, 3).unwrap(), None);
    }
}
