//! Inverse-dependent identities on random invertible rational matrices at `q = p = 1`:
//! Jacobi's ratio theorem, Cayley's complementary identity, Sylvester's theorem and the
//! quasideterminant product. Minors go through the same `det`/`qcomb` code as the suites.

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::det::{minor_numeric, MinorSpec};
use crate::error::Result;
use crate::qcomb::{all_tuples, eps_index, increasing, MultiIndex, Permutation};
use crate::report::{ControlReport, Mutation, Verdict};
use crate::scalar::{ParamMatrix, Q};
use crate::suites::NumericOutcome;

use super::NumericMatrix;

pub const DEFAULT_TRIALS: usize = 20;
const ENTRY_BOUND: i64 = 5;
const MAX_RESAMPLES: usize = 1000;

fn ones(n: usize) -> ParamMatrix<Q> {
    ParamMatrix::ones(n)
}

/// Classical `cdet(M_{rows, cols})`, `1` for the empty minor.
fn cdet(m: &NumericMatrix, rows: &MultiIndex, cols: &MultiIndex) -> Result<Q> {
    if rows.is_empty() {
        return Ok(Q::one());
    }
    let spec = MinorSpec::cdet(rows.clone(), cols.clone());
    minor_numeric(&spec, &|i, j| m.get(i, j), &ones(m.dim()))
}

/// `ε(A^c ⊕ A^τ)` at `q = 1`.
fn eps_comp_rev(n: usize, a: &MultiIndex) -> Result<Q> {
    let c = a.complement_in(&MultiIndex::full(n))?;
    eps_index(&ones(n), &c.juxtapose(&a.reverse()))
}

fn repeat_free(n: usize, r: usize) -> Vec<MultiIndex> {
    all_tuples(n, r).into_iter().filter(|j| !j.has_repeats()).collect()
}

/// `ε(I^c ⊕ I^τ) det M cdet(M⁻¹_{IJ}) = ε(J^c ⊕ J^τ) cdet(M_{J^c I^c})` for increasing `I` and
/// repeat-free `J`; `signs = false` drops both ε factors. Returns the first failure.
pub fn jacobi_failure(m: &NumericMatrix, inv: &NumericMatrix, signs: bool) -> Result<Option<String>> {
    let n = m.dim();
    let full = MultiIndex::full(n);
    let det = m.det();
    for r in 1..=n {
        for i in increasing(n, r) {
            for j in repeat_free(n, r) {
                let (ei, ej) = if signs {
                    (eps_comp_rev(n, &i)?, eps_comp_rev(n, &j)?)
                } else {
                    (Q::one(), Q::one())
                };
                let lhs = ei * &det * cdet(inv, &i, &j)?;
                let jc = j.complement_in(&full)?;
                let ic = i.complement_in(&full)?;
                let rhs = ej * cdet(m, &jc, &ic)?;
                if lhs != rhs {
                    return Ok(Some(format!("I={i} J={j}: {lhs} vs {rhs}")));
                }
            }
        }
    }
    Ok(None)
}

/// `cdet(M⁻¹_{AB})` rewritten through Jacobi: `ε(B^c⊕B^τ)/ε(A^c⊕A^τ) det M⁻¹ cdet(M_{B^c A^c})`.
fn complementary_minor(m: &NumericMatrix, det: &Q, a: &MultiIndex, b: &MultiIndex) -> Result<Q> {
    let n = m.dim();
    let full = MultiIndex::full(n);
    let ratio = eps_comp_rev(n, b)? / eps_comp_rev(n, a)?;
    Ok(ratio / det * cdet(m, &b.complement_in(&full)?, &a.complement_in(&full)?)?)
}

/// Residual of the Laplace expansion along rows `I`,
/// `cdet(N) - Σ_J ε(I⊕I^c) ε(J⊕J^c) cdet(N_{IJ}) cdet(N_{I^cJ^c})`, with each minor supplied by `minor`.
fn laplace_residual(n: usize, i: &MultiIndex, minor: &impl Fn(&MultiIndex, &MultiIndex) -> Result<Q>) -> Result<Q> {
    let full = MultiIndex::full(n);
    let ic = i.complement_in(&full)?;
    let si = eps_index(&ones(n), &i.juxtapose(&ic))?;
    let mut acc = minor(&full, &full)?;
    for j in increasing(n, i.len()) {
        let jc = j.complement_in(&full)?;
        let sj = eps_index(&ones(n), &j.juxtapose(&jc))?;
        acc -= si.clone() * sj * minor(i, &j)? * minor(&ic, &jc)?;
    }
    Ok(acc)
}

/// Cayley's complementary identity applied to the Laplace expansions of `M⁻¹`. Also checks the
/// expansions hold for `M⁻¹` itself.
pub fn cayley_failure(m: &NumericMatrix, inv: &NumericMatrix) -> Result<Option<String>> {
    let n = m.dim();
    let det = m.det();
    for r in 1..n {
        for i in increasing(n, r) {
            let direct = laplace_residual(n, &i, &|a, b| cdet(inv, a, b))?;
            if !direct.is_zero() {
                return Ok(Some(format!("Laplace on M^-1 along I={i} leaves {direct}")));
            }
            let transformed = laplace_residual(n, &i, &|a, b| complementary_minor(m, &det, a, b))?;
            if !transformed.is_zero() {
                return Ok(Some(format!("complementary Laplace along I={i} leaves {transformed}")));
            }
        }
    }
    Ok(None)
}

/// Sylvester: for `K = {m+1..n}`, `B_rs = cdet(M_{(r⊕K)(s⊕K)}) / cdet(M_KK)` has
/// `cdet(B) = cdet(M) / cdet(M_KK)`. Blocks with singular `M_KK` are skipped and counted.
pub fn sylvester_failure(mat: &NumericMatrix, skipped: &mut usize) -> Result<Option<String>> {
    let n = mat.dim();
    for m in 1..n {
        let k = MultiIndex::new((m + 1..=n).collect::<Vec<_>>());
        let dk = cdet(mat, &k, &k)?;
        if dk.is_zero() {
            *skipped += 1;
            continue;
        }
        let mut rows = Vec::with_capacity(m);
        for r in 1..=m {
            let mut row = Vec::with_capacity(m);
            for s in 1..=m {
                let ri = MultiIndex::new(vec![r]).juxtapose(&k);
                let si = MultiIndex::new(vec![s]).juxtapose(&k);
                row.push(cdet(mat, &ri, &si)? / &dk);
            }
            rows.push(row);
        }
        let b = NumericMatrix::new(rows)?;
        let full_m = MultiIndex::full(m);
        let lhs = cdet(&b, &full_m, &full_m)?;
        let rhs = mat.det() / &dk;
        if lhs != rhs {
            return Ok(Some(format!("|K|={}: det B = {lhs}, det M / det M_KK = {rhs}", n - m)));
        }
    }
    Ok(None)
}

/// `|X|_{ab} = ((X⁻¹)_{ba})⁻¹`, 1-based positions; `None` when undefined.
fn quasidet(x: &NumericMatrix, a: usize, b: usize) -> Option<Q> {
    let y = x.inverse()?;
    let v = y.get(b, a);
    (!v.is_zero()).then(|| v.recip())
}

/// `cdet(M) = ε(J)/ε(I) Π_{k=1}^{n} |M_{J_k I_k}|_{j_k i_k}` over all pairs of permutations,
/// with `I_k = {i_1..i_k}^{or}`. Pairs with an undefined factor are skipped and counted.
pub fn quasidet_failure(m: &NumericMatrix, skipped: &mut usize) -> Result<Option<String>> {
    let n = m.dim();
    let det = m.det();
    let perms: Vec<MultiIndex> = Permutation::all(n)
        .map(|p| MultiIndex::new(p.images().iter().map(|&x| x + 1).collect::<Vec<_>>()))
        .collect();
    for i in &perms {
        for j in &perms {
            let mut prod = eps_index(&ones(n), j)? / eps_index(&ones(n), i)?;
            let mut defined = true;
            for k in 1..=n {
                let ik = MultiIndex::new(i.entries()[..k].to_vec()).sorted();
                let jk = MultiIndex::new(j.entries()[..k].to_vec()).sorted();
                let x = m.submatrix(jk.entries(), ik.entries());
                let a = jk.entries().iter().position(|&v| v == j.entries()[k - 1]).expect("member") + 1;
                let b = ik.entries().iter().position(|&v| v == i.entries()[k - 1]).expect("member") + 1;
                match quasidet(&x, a, b) {
                    Some(v) => prod *= v,
                    None => {
                        defined = false;
                        break;
                    }
                }
            }
            if !defined {
                *skipped += 1;
                continue;
            }
            if prod != det {
                return Ok(Some(format!("I={i} J={j}: product {prod} vs det {det}")));
            }
        }
    }
    Ok(None)
}

/// Random invertible integer matrices; returns the matrices and the number of singular draws.
pub fn invertible_samples(n: usize, trials: usize, seed: u64) -> (Vec<(NumericMatrix, NumericMatrix)>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut singular = 0;
    let mut out = Vec::with_capacity(trials);
    while out.len() < trials && singular < MAX_RESAMPLES {
        let m = NumericMatrix::random_integer(n, ENTRY_BOUND, &mut rng);
        match m.inverse() {
            Some(inv) => out.push((m, inv)),
            None => singular += 1,
        }
    }
    (out, singular)
}

pub fn oracle(n: usize, trials: usize, seed: u64) -> Result<NumericOutcome> {
    let mut out = NumericOutcome::default();
    let (samples, singular) = invertible_samples(n, trials, seed);
    let mut sylvester_skipped = 0;
    let mut quasidet_skipped = 0;
    let mut control: Option<(String, String)> = None;
    for (t, (m, inv)) in samples.iter().enumerate() {
        let f = jacobi_failure(m, inv, true)?;
        out.case(format!("jacobi n={n} trial {t}"), n, f.is_none(), f);
        let f = cayley_failure(m, inv)?;
        out.case(format!("cayley-complementary n={n} trial {t}"), n, f.is_none(), f);
        let f = sylvester_failure(m, &mut sylvester_skipped)?;
        out.case(format!("sylvester n={n} trial {t}"), n, f.is_none(), f);
        let f = quasidet_failure(m, &mut quasidet_skipped)?;
        out.case(format!("quasidet n={n} trial {t}"), n, f.is_none(), f);
        if control.is_none() && n >= 2 {
            if let Some(w) = jacobi_failure(m, inv, false)? {
                control = Some((format!("jacobi n={n} trial {t} without ε factors"), w));
            }
        }
    }
    out.controls.push(if n < 2 {
        ControlReport::inapplicable(Mutation::DropSign, "n = 1: every ε factor is 1")
    } else {
        let detected = control.is_some();
        let (case, witness) = control.map_or((None, None), |(c, w)| (Some(c), Some(w)));
        ControlReport {
            mutation: Mutation::DropSign,
            applicable: true,
            verdict: Some(Verdict::from_equality(!detected)),
            case,
            witness,
            reason: None,
        }
    });
    out.notes.push(format!(
        "{} invertible integer matrices with entries in -{ENTRY_BOUND}..={ENTRY_BOUND}; {singular} singular draws resampled",
        samples.len()
    ));
    if sylvester_skipped + quasidet_skipped > 0 {
        out.notes.push(format!(
            "skipped for singular blocks: {sylvester_skipped} Sylvester blocks, {quasidet_skipped} quasideterminant orderings"
        ));
    }
    out.notes.push(
        "quasideterminant product read with factors |M_{J_k I_k}|_{j_k i_k} for k = 1..n; the printed last factor |M_{J_{n-1}I_{n-1}}|_{j_n i_n} names an entry outside its submatrix and cannot be evaluated"
            .into(),
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn jacobi_n2_single_entry() {
        let m = NumericMatrix::from_ints(&[&[2, 1], &[5, 3]]).unwrap();
        let inv = m.inverse().unwrap();
        // det M (M⁻¹)_11 = M_22
        assert_eq!(m.det() * inv.get(1, 1), m.get(2, 2));
        assert_eq!(jacobi_failure(&m, &inv, true).unwrap(), None);
        assert!(jacobi_failure(&m, &inv, false).unwrap().is_some());
    }

    #[test]
    fn identity_matrix_is_trivial() {
        let m = NumericMatrix::identity(3);
        let inv = m.inverse().unwrap();
        let mut skipped = 0;
        assert_eq!(jacobi_failure(&m, &inv, true).unwrap(), None);
        assert_eq!(cayley_failure(&m, &inv).unwrap(), None);
        assert_eq!(sylvester_failure(&m, &mut skipped).unwrap(), None);
        assert_eq!(skipped, 0);
    }

    #[test]
    fn sylvester_n3_one_point_block() {
        let m = NumericMatrix::from_ints(&[&[2, 1, 0], &[1, 3, 1], &[4, 1, 5]]).unwrap();
        let mut skipped = 0;
        assert_eq!(sylvester_failure(&m, &mut skipped).unwrap(), None);
        let b11 = (m.get(1, 1) * m.get(3, 3) - m.get(1, 3) * m.get(3, 1)) / m.get(3, 3);
        assert_eq!(b11, Q::from_i64(2));
    }

    #[test]
    fn oracle_passes_for_small_sizes() {
        for n in 1..=3 {
            let out = oracle(n, 5, 11).unwrap();
            assert!(out.cases.iter().all(|c| c.verdict.holds()), "{:?}", out.cases);
        }
    }
}
