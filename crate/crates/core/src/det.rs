//! Quantum minors, symmetric functions of a generator matrix, and characteristic coefficients.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freealg::NCPoly;
use crate::qcomb::{eps_perm, multiplicity_factorial, mu_perm, MultiIndex, Permutation};
use crate::scalar::{ParamMatrix, Scalar};
use crate::tensor::{symmetrizer, AlgMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    /// Factors ordered by column; the permutation acts on rows.
    Column,
    /// Factors ordered by row; the permutation acts on columns.
    Row,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MinorKind {
    Det,
    Per,
    PerNormalized,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MinorSpec {
    pub orientation: Orientation,
    pub kind: MinorKind,
    pub rows: MultiIndex,
    pub cols: MultiIndex,
}

impl MinorSpec {
    pub fn new(orientation: Orientation, kind: MinorKind, rows: MultiIndex, cols: MultiIndex) -> Self {
        MinorSpec {
            orientation,
            kind,
            rows,
            cols,
        }
    }

    pub fn cdet(rows: MultiIndex, cols: MultiIndex) -> Self {
        Self::new(Orientation::Column, MinorKind::Det, rows, cols)
    }

    pub fn rdet(rows: MultiIndex, cols: MultiIndex) -> Self {
        Self::new(Orientation::Row, MinorKind::Det, rows, cols)
    }

    /// The index the permutation acts on.
    fn permuted_index(&self) -> &MultiIndex {
        match self.orientation {
            Orientation::Column => &self.rows,
            Orientation::Row => &self.cols,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows.len() != self.cols.len() {
            return Err(Error::LengthMismatch {
                expected: self.rows.len(),
                got: self.cols.len(),
            });
        }
        let idx = self.permuted_index();
        match self.kind {
            MinorKind::Det if !idx.is_increasing() => Err(Error::NotIncreasing(idx.0.clone())),
            MinorKind::PerNormalized if !idx.is_nondecreasing() => Err(Error::NotNonDecreasing(idx.0.clone())),
            _ => Ok(()),
        }
    }
}

/// One term of a minor expansion: coefficient and the 1-based entry positions in product order.
pub type MinorTerm<F> = (F, Vec<(usize, usize)>);

/// Expands a minor into `r!` weighted terms whose factors are 0-based positions `(row, col)`
/// inside the `r x r` submatrix. `params` feeds ε for determinants and μ for permanents.
pub fn positional_terms<F: Scalar>(spec: &MinorSpec, params: &ParamMatrix<F>) -> Result<Vec<MinorTerm<F>>> {
    spec.validate()?;
    let r = spec.rows.len();
    let idx = spec.permuted_index();
    let norm = match spec.kind {
        MinorKind::PerNormalized => F::from_i64(multiplicity_factorial(idx)? as i64).try_inv()?,
        _ => F::one(),
    };
    let mut out = Vec::new();
    for sigma in Permutation::all(r) {
        let w = match spec.kind {
            MinorKind::Det => eps_perm(params, idx, &sigma)?,
            MinorKind::Per | MinorKind::PerNormalized => mu_perm(params, idx, &sigma)?,
        };
        let s = sigma.images();
        let positions = (0..r)
            .map(|t| match spec.orientation {
                Orientation::Column => (s[t], t),
                Orientation::Row => (t, s[t]),
            })
            .collect();
        out.push((w * norm.clone(), positions));
    }
    Ok(out)
}

/// Expands a minor into `r!` weighted entry products, with 1-based labels from `rows` and `cols`.
pub fn minor_terms<F: Scalar>(spec: &MinorSpec, params: &ParamMatrix<F>) -> Result<Vec<MinorTerm<F>>> {
    Ok(positional_terms(spec, params)?
        .into_iter()
        .map(|(c, pos)| {
            let labels = pos.into_iter().map(|(a, b)| (spec.rows.0[a], spec.cols.0[b])).collect();
            (c, labels)
        })
        .collect())
}

/// The minor of a matrix with noncommutative entries.
pub fn minor<F: Scalar>(spec: &MinorSpec, mat: &AlgMatrix<F>, params: &ParamMatrix<F>) -> Result<NCPoly<F>> {
    spec.rows.check_range(mat.rows(), "minor row")?;
    spec.cols.check_range(mat.cols(), "minor column")?;
    minor_of(spec, params, |i, j| mat.at(i, j), false)
}

/// The minor of the `r x r` matrix whose 0-based position `(a, b)` holds `entry(a, b)`.
/// The labels in `spec` only feed the weights.
pub fn minor_positional<F: Scalar>(
    spec: &MinorSpec,
    params: &ParamMatrix<F>,
    entry: impl Fn(usize, usize) -> NCPoly<F>,
) -> Result<NCPoly<F>> {
    minor_of(spec, params, entry, true)
}

fn minor_of<F: Scalar>(
    spec: &MinorSpec,
    params: &ParamMatrix<F>,
    entry: impl Fn(usize, usize) -> NCPoly<F>,
    positional: bool,
) -> Result<NCPoly<F>> {
    let terms = if positional {
        positional_terms(spec, params)?
    } else {
        minor_terms(spec, params)?
    };
    let mut acc = NCPoly::zero();
    for (c, pos) in terms {
        let mut t = NCPoly::constant(c);
        for (i, j) in pos {
            t = t.nc_mul(&entry(i, j));
            if t.is_zero() {
                break;
            }
        }
        acc = acc + t;
    }
    Ok(acc)
}

/// The minor of a commutative numeric matrix, 1-based `value(i, j)`.
pub fn minor_numeric<F: Scalar>(spec: &MinorSpec, value: &impl Fn(usize, usize) -> F, params: &ParamMatrix<F>) -> Result<F> {
    Ok(minor_terms(spec, params)?
        .into_iter()
        .map(|(c, pos)| pos.into_iter().fold(c, |acc, (i, j)| acc * value(i, j)))
        .fold(F::zero(), |a, b| a + b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymKind {
    /// `e_k = tr A^{(k)} M_1 ⋯ M_k`
    E,
    /// `h_k = tr S^{(k)} M_1 ⋯ M_k`
    H,
}

/// `e_k` or `h_k` of a square matrix, with the projector built from `params`.
pub fn sym_function<F: Scalar>(kind: SymKind, k: usize, mat: &AlgMatrix<F>, params: &ParamMatrix<F>) -> Result<NCPoly<F>> {
    if mat.row_dims() != [params.dim()] || mat.col_dims() != [params.dim()] {
        return Err(Error::DimensionMismatch("symmetric functions need a square matrix".into()));
    }
    if k == 0 {
        return Ok(NCPoly::one());
    }
    let proj = symmetrizer(params, k, kind == SymKind::E)?;
    mat.chain(k)?.trace_left_mul(&proj)
}

/// `((-1)^k e_k)_{k = 0..n}`, the coefficient of `t^{n-k}` in the characteristic polynomial.
pub fn char_poly_coeffs<F: Scalar>(mat: &AlgMatrix<F>, params: &ParamMatrix<F>) -> Result<Vec<NCPoly<F>>> {
    let n = params.dim();
    (0..=n)
        .map(|k| {
            let e = sym_function(SymKind::E, k, mat, params)?;
            Ok(if k % 2 == 0 { e } else { e.scale(&-F::one()) })
        })
        .collect()
}

/// Sum of all principal column minors of size `k`.
pub fn principal_minor_sum<F: Scalar>(k: usize, mat: &AlgMatrix<F>, params: &ParamMatrix<F>) -> Result<NCPoly<F>> {
    let mut acc = NCPoly::zero();
    for i in crate::qcomb::increasing(params.dim(), k) {
        acc = acc + minor(&MinorSpec::cdet(i.clone(), i), mat, params)?;
    }
    Ok(acc)
}

/// Classical determinant by naive expansion, used as an oracle.
pub fn naive_det<F: Scalar>(a: &[Vec<F>]) -> F {
    let n = a.len();
    Permutation::all(n)
        .map(|s| {
            let sign = if s.sign() > 0 { F::one() } else { -F::one() };
            (0..n).fold(sign, |acc, i| acc * a[i][s.images()[i]].clone())
        })
        .fold(F::zero(), |x, y| x + y)
}

/// Classical permanent by naive expansion.
pub fn naive_per<F: Scalar>(a: &[Vec<F>]) -> F {
    let n = a.len();
    Permutation::all(n)
        .map(|s| (0..n).fold(F::one(), |acc, i| acc * a[i][s.images()[i]].clone()))
        .fold(F::zero(), |x, y| x + y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::{Family, Letter};
    use crate::scalar::{Fp61, Mode, ParameterAssignment};
    use num_traits::One;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type P = NCPoly<Fp61>;

    fn w(ls: &[(usize, usize)]) -> P {
        P::word(&ls.iter().map(|&(i, j)| Letter::m(i, j)).collect::<Vec<_>>())
    }

    fn mi(v: &[usize]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn small_minors() {
        let a = ParameterAssignment::<Fp61>::sample(2, 2, Mode::Generic, 3).unwrap();
        let m = AlgMatrix::generic(Family::M, 2, 2);
        assert_eq!(minor(&MinorSpec::cdet(mi(&[1]), mi(&[1])), &m, &a.q).unwrap(), w(&[(1, 1)]));
        let cdet = minor(&MinorSpec::cdet(mi(&[1, 2]), mi(&[1, 2])), &m, &a.q).unwrap();
        assert_eq!(cdet, w(&[(1, 1), (2, 2)]) - w(&[(2, 1), (1, 2)]).scale(a.q.at(2, 1)));
        let rper = MinorSpec::new(Orientation::Row, MinorKind::Per, mi(&[1, 2]), mi(&[1, 2]));
        assert_eq!(
            minor(&rper, &m, &a.p).unwrap(),
            w(&[(1, 1), (2, 2)]) + w(&[(1, 2), (2, 1)]).scale(a.p.at(1, 2))
        );
        let norm = MinorSpec::new(Orientation::Row, MinorKind::PerNormalized, mi(&[1, 2]), mi(&[1, 1]));
        assert_eq!(minor(&norm, &m, &a.p).unwrap(), w(&[(1, 1), (2, 1)]));
        let bad = MinorSpec::cdet(mi(&[2, 1]), mi(&[1, 2]));
        assert!(matches!(minor(&bad, &m, &a.q), Err(Error::NotIncreasing(_))));
        let bad_norm = MinorSpec::new(Orientation::Row, MinorKind::PerNormalized, mi(&[1, 2]), mi(&[2, 1]));
        assert!(minor(&bad_norm, &m, &a.p).is_err());
    }

    #[test]
    fn classical_minors_match_naive_expansion() {
        let one = ParamMatrix::<Fp61>::ones(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let a: Vec<Vec<Fp61>> = (0..3).map(|_| (0..3).map(|_| Fp61::new(rng.gen_range(0..100))).collect()).collect();
            let val = |i: usize, j: usize| a[i - 1][j - 1];
            let full = MultiIndex::full(3);
            let d = naive_det(&a);
            assert_eq!(minor_numeric(&MinorSpec::cdet(full.clone(), full.clone()), &val, &one).unwrap(), d);
            assert_eq!(minor_numeric(&MinorSpec::rdet(full.clone(), full.clone()), &val, &one).unwrap(), d);
            let per = MinorSpec::new(Orientation::Row, MinorKind::Per, full.clone(), full.clone());
            assert_eq!(minor_numeric(&per, &val, &one).unwrap(), naive_per(&a));
        }
    }

    #[test]
    fn symmetric_function_edges() {
        let a = ParameterAssignment::<Fp61>::sample(2, 2, Mode::Generic, 7).unwrap();
        let m = AlgMatrix::generic(Family::M, 2, 2);
        let tr = w(&[(1, 1)]) + w(&[(2, 2)]);
        assert_eq!(sym_function(SymKind::E, 1, &m, &a.q).unwrap(), tr);
        assert_eq!(sym_function(SymKind::H, 1, &m, &a.q).unwrap(), tr);
        assert_eq!(sym_function(SymKind::E, 0, &m, &a.q).unwrap(), P::one());
        assert!(sym_function(SymKind::E, 3, &m, &a.q).unwrap().is_zero());
        let c = char_poly_coeffs(&m, &a.q).unwrap();
        assert_eq!(c[0], P::one());
        assert_eq!(c[1], tr.scale(&-Fp61::one()));
        assert_eq!(c[2], sym_function(SymKind::E, 2, &m, &a.q).unwrap());
        let m1 = AlgMatrix::generic(Family::M, 1, 1);
        let c1 = char_poly_coeffs(&m1, &ParamMatrix::ones(1)).unwrap();
        assert_eq!(c1, vec![P::one(), w(&[(1, 1)]).scale(&-Fp61::one())]);
    }
}
