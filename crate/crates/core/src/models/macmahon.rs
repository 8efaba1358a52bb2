//! Classical MacMahon master theorem by brute-force expansion, plus the substitution test
//! against the free-algebra `h_d` and `e_k`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::det::{sym_function, SymKind};
use crate::error::{Error, Result};
use crate::freealg::{Family, NCPoly};
use crate::qcomb::increasing;
use crate::report::{ControlReport, Mutation, Verdict};
use crate::scalar::{ParamMatrix, Q};
use crate::suites::NumericOutcome;
use crate::tensor::AlgMatrix;

use super::{monomials_of_degree, CommPoly, NumericMatrix};

pub const DEFAULT_DEGREE: usize = 4;
pub const MAX_DEGREE: usize = 6;
/// Random matrices drawn per seed, on top of the zero and all-ones matrices.
pub const RANDOM_MATRICES: usize = 3;
const ENTRY_BOUND: i64 = 3;

/// `G(k) = [x^k] Π_i (Σ_j a_ij x_j)^{k_i}` for every `k` with `|k| = d`.
pub fn g_coefficients(a: &NumericMatrix, d: usize) -> BTreeMap<Vec<u8>, Q> {
    let n = a.dim();
    let forms: Vec<CommPoly> = (1..=n)
        .map(|i| {
            let mut f = CommPoly::zero(n);
            for j in 1..=n {
                let mut e = vec![0u8; n];
                e[j - 1] = 1;
                f.add_term(e, a.get(i, j));
            }
            f
        })
        .collect();
    monomials_of_degree(n, d)
        .into_iter()
        .map(|k| {
            let mut prod = CommPoly::one(n);
            for (i, &ki) in k.iter().enumerate() {
                for _ in 0..ki {
                    prod = prod.mul(&forms[i]);
                }
            }
            let g = prod.coeff(&k);
            (k, g)
        })
        .collect()
}

/// Coefficients of `1/det(I - TA)` with `T = diag(t_1, …, t_n)` for every `|k| ≤ d`, from
/// `det(I - TA) = Σ_S (-1)^{|S|} det A_SS Π_{i∈S} t_i`. With `sign_flip` the expansion of
/// `1/det(I + TA)` is returned instead.
pub fn inverse_det_series(a: &NumericMatrix, d: usize, sign_flip: bool) -> BTreeMap<Vec<u8>, Q> {
    let n = a.dim();
    let subsets: Vec<(Vec<usize>, Q)> = (1..=n)
        .flat_map(|r| increasing(n, r))
        .map(|s| {
            let idx = s.entries().to_vec();
            let minor = a.submatrix(&idx, &idx).det();
            let odd = idx.len() % 2 == 1;
            let c = if odd != sign_flip { -minor } else { minor };
            (idx, c)
        })
        .collect();
    let mut c: BTreeMap<Vec<u8>, Q> = BTreeMap::new();
    c.insert(vec![0; n], Q::one());
    for deg in 1..=d {
        for k in monomials_of_degree(n, deg) {
            let mut acc = Q::zero();
            for (s, coeff) in &subsets {
                if s.iter().all(|&i| k[i - 1] > 0) {
                    let mut prev = k.clone();
                    for &i in s {
                        prev[i - 1] -= 1;
                    }
                    acc -= coeff * &c[&prev];
                }
            }
            c.insert(k, acc);
        }
    }
    c
}

/// `Σ_{|k| = d} value(k)`.
fn degree_sum(map: &BTreeMap<Vec<u8>, Q>, d: usize) -> Q {
    map.iter()
        .filter(|(k, _)| super::total(k) == d)
        .map(|(_, v)| v.clone())
        .sum()
}

fn test_matrices(n: usize, seed: u64) -> Vec<(String, NumericMatrix)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![
        ("zero".to_string(), NumericMatrix::zeros(n)),
        (
            "all-ones".to_string(),
            NumericMatrix::new(vec![vec![Q::one(); n]; n]).expect("square"),
        ),
    ];
    for t in 0..RANDOM_MATRICES {
        out.push((format!("random #{t}"), NumericMatrix::random_integer(n, ENTRY_BOUND, &mut rng)));
    }
    out
}

/// Free-algebra `h_d(M)`, `e_k(M)` over the rationals in classical mode, evaluated at `A`.
fn substituted(kind: SymKind, k: usize, a: &NumericMatrix) -> Result<Q> {
    let n = a.dim();
    let mm = AlgMatrix::<Q>::generic(Family::M, n, n);
    let poly: NCPoly<Q> = sym_function(kind, k, &mm, &ParamMatrix::ones(n))?;
    Ok(poly.evaluate(&|l| a.get(l.row as usize, l.col as usize)))
}

fn principal_minor_sum(a: &NumericMatrix, k: usize) -> Q {
    increasing(a.dim(), k)
        .into_iter()
        .map(|s| a.submatrix(s.entries(), s.entries()).det())
        .sum()
}

pub fn oracle(n: usize, degree: usize, seed: u64) -> Result<NumericOutcome> {
    if n == 0 || n > super::ORACLE_MAX_N || degree > MAX_DEGREE {
        return Err(Error::InvalidConfig(format!(
            "MacMahon oracle needs 1 <= n <= {} and degree <= {MAX_DEGREE}",
            super::ORACLE_MAX_N
        )));
    }
    let mut out = NumericOutcome::default();
    let mut control_hit: Option<(String, String)> = None;
    let mut control_last = None;
    for (name, a) in test_matrices(n, seed) {
        let series = inverse_det_series(&a, degree, false);
        let flipped = inverse_det_series(&a, degree, true);
        for d in 1..=degree {
            let g = g_coefficients(&a, d);
            let bad = g.iter().find(|(k, v)| series.get(*k) != Some(*v));
            out.case(
                format!("{name} n={n}: G(k) = [t^k] 1/det(I - TA), |k| = {d}"),
                d,
                bad.is_none(),
                bad.map(|(k, v)| format!("k={k:?}: G = {v}, series {}", series[k])),
            );
            let total_g: Q = g.values().cloned().sum();
            let total_s = degree_sum(&series, d);
            let h = substituted(SymKind::H, d, &a)?;
            out.case(
                format!("{name} n={n}: sum G = [t^{d}] 1/det(I - tA) = h_{d}(A)"),
                d,
                total_g == total_s && total_s == h,
                Some(format!("G-sum {total_g}, series {total_s}, substituted h {h}")),
            );
            let label = format!("{name} n={n} degree {d}");
            if control_hit.is_none() {
                if total_g != degree_sum(&flipped, d) {
                    control_hit = Some((label, format!("G-sum {total_g} vs 1/det(I + tA) {}", degree_sum(&flipped, d))));
                } else {
                    control_last = Some(label);
                }
            }
        }
        for k in 1..=n {
            let e = substituted(SymKind::E, k, &a)?;
            let pm = principal_minor_sum(&a, k);
            out.case(
                format!("{name} n={n}: e_{k}(A) = principal {k}-minor sum"),
                k,
                e == pm,
                Some(format!("substituted e {e}, minors {pm}")),
            );
        }
    }
    out.controls.push(match control_hit {
        Some((case, witness)) => ControlReport {
            mutation: Mutation::DropSign,
            applicable: true,
            verdict: Some(Verdict::Unequal),
            case: Some(case),
            witness: Some(witness),
            reason: None,
        },
        None => ControlReport {
            mutation: Mutation::DropSign,
            applicable: true,
            verdict: Some(Verdict::Equal),
            case: control_last,
            witness: None,
            reason: None,
        },
    });
    out.notes.push(format!(
        "matrices: zero, all-ones and {RANDOM_MATRICES} random integer matrices with entries in -{ENTRY_BOUND}..={ENTRY_BOUND}; control compares against 1/det(I + tA)"
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn all_ones_gives_powers_of_two() {
        let a = NumericMatrix::from_ints(&[&[1, 1], &[1, 1]]).unwrap();
        let s = inverse_det_series(&a, 4, false);
        for d in 1..=4 {
            let g: Q = g_coefficients(&a, d).values().cloned().sum();
            assert_eq!(g, Q::from_i64(1 << d));
            assert_eq!(degree_sum(&s, d), Q::from_i64(1 << d));
        }
        assert_eq!(g_coefficients(&a, 2).values().cloned().sum::<Q>(), Q::from_i64(4));
    }

    #[test]
    fn scalar_geometric_series() {
        let a = NumericMatrix::from_ints(&[&[3]]).unwrap();
        let s = inverse_det_series(&a, 5, false);
        for d in 0..=5u8 {
            assert_eq!(s[&vec![d]], Q::from_i64(3i64.pow(d as u32)));
        }
    }

    #[test]
    fn zero_matrix_is_trivial() {
        let a = NumericMatrix::zeros(2);
        assert!(g_coefficients(&a, 3).values().all(|v| v.is_zero()));
    }

    #[test]
    fn oracle_passes_and_control_detects() {
        let out = oracle(2, 4, 1).unwrap();
        assert!(out.cases.iter().all(|c| c.verdict.holds()), "{:?}", out.cases);
        assert!(out.controls[0].detected());
    }
}
