//! Classical (`q = p = 1`) realizations used as independent oracles: the Weyl algebra for
//! Capelli, brute-force MacMahon expansion, and numeric matrices for the inverse-dependent
//! identities. Everything here is exact over the rationals.

pub mod inverse;
pub mod macmahon;
pub mod weyl;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Q};
use crate::suites::{NumericOutcome, SuiteConfig, SuiteId};

/// Label carried by every report produced here.
pub const ORACLE_LABEL: &str = "classical specialization oracle";

/// Largest size the oracles accept.
pub const ORACLE_MAX_N: usize = 3;

/// Runs the oracle behind a catalogue entry. Sizes above [`ORACLE_MAX_N`] are clamped.
pub fn run(id: SuiteId, cfg: &SuiteConfig, seed: u64) -> Result<NumericOutcome> {
    let n = cfg.n.min(ORACLE_MAX_N);
    let mut out = match id {
        SuiteId::WeylCapelli => weyl::capelli_oracle(n, n + 1)?,
        SuiteId::ClassicalMacMahon => {
            let degree = cfg.degree.unwrap_or(macmahon::DEFAULT_DEGREE);
            macmahon::oracle(n, degree, seed)?
        }
        SuiteId::ClassicalInverse => inverse::oracle(n, inverse::DEFAULT_TRIALS, seed)?,
        _ => return Err(Error::InvalidConfig(format!("{id} is not a classical oracle"))),
    };
    if n != cfg.n {
        out.notes.push(format!("oracle size clamped from n={} to n={n}", cfg.n));
    }
    out.notes.insert(0, format!("{ORACLE_LABEL}; not a verification of the quantum statements"));
    Ok(out)
}

/// Commutative polynomial in numbered variables, keyed by exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CommPoly {
    vars: usize,
    terms: BTreeMap<Vec<u8>, Q>,
}

impl CommPoly {
    pub fn zero(vars: usize) -> Self {
        CommPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(exps: Vec<u8>, c: Q) -> Self {
        let mut p = CommPoly::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn one(vars: usize) -> Self {
        Self::monomial(vec![0; vars], Q::one())
    }

    pub fn var(vars: usize, v: usize) -> Self {
        let mut e = vec![0; vars];
        e[v] = 1;
        Self::monomial(e, Q::one())
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u8]) -> Q {
        self.terms.get(exps).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, exps: Vec<u8>, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = CommPoly::zero(self.vars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = CommPoly::zero(self.vars);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e = a.iter().zip(b).map(|(s, t)| s + t).collect();
                out.add_term(e, x * y);
            }
        }
        out
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| total(e)).max()
    }

    /// Multiplication by variable `v`.
    pub fn mul_var(&self, v: usize) -> Self {
        let mut out = CommPoly::zero(self.vars);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e[v] += 1;
            out.add_term(e, c.clone());
        }
        out
    }

    /// Partial derivative in variable `v`.
    pub fn diff(&self, v: usize) -> Self {
        let mut out = CommPoly::zero(self.vars);
        for (e, c) in &self.terms {
            if e[v] == 0 {
                continue;
            }
            let k = Q::from_i64(e[v] as i64);
            let mut e = e.clone();
            e[v] -= 1;
            out.add_term(e, c * k);
        }
        out
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(v, &k)| if k == 1 { format!("x{v}") } else { format!("x{v}^{k}") })
                    .collect();
                if mono.is_empty() {
                    c.to_string()
                } else {
                    format!("{c}*{}", mono.join("*"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

pub fn total(e: &[u8]) -> usize {
    e.iter().map(|&k| k as usize).sum()
}

/// All exponent vectors in `vars` variables of total degree exactly `d`.
pub fn monomials_of_degree(vars: usize, d: usize) -> Vec<Vec<u8>> {
    fn rec(vars: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() + 1 == vars {
            cur.push(left as u8);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in (0..=left).rev() {
            cur.push(k as u8);
            rec(vars, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if vars == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(vars, d, &mut Vec::with_capacity(vars), &mut out);
    out
}

/// A dense square matrix of rationals, 1-based accessors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericMatrix {
    entries: Vec<Vec<Q>>,
}

impl NumericMatrix {
    pub fn new(entries: Vec<Vec<Q>>) -> Result<Self> {
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("numeric matrix must be square".into()));
        }
        Ok(NumericMatrix { entries })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&v| Q::from_i64(v)).collect()).collect())
    }

    pub fn zeros(n: usize) -> Self {
        NumericMatrix {
            entries: vec![vec![Q::zero(); n]; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i][i] = Q::one();
        }
        m
    }

    /// Integer entries drawn uniformly from `-bound..=bound`.
    pub fn random_integer(n: usize, bound: i64, rng: &mut ChaCha8Rng) -> Self {
        NumericMatrix {
            entries: (0..n)
                .map(|_| (0..n).map(|_| Q::from_i64(rng.gen_range(-bound..=bound))).collect())
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        self.entries[i - 1][j - 1].clone()
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.entries
    }

    /// Rows and columns picked in the given (1-based) order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        NumericMatrix {
            entries: rows.iter().map(|&i| cols.iter().map(|&j| self.get(i, j)).collect()).collect(),
        }
    }

    pub fn det(&self) -> Q {
        if self.dim() == 0 {
            return Q::one();
        }
        crate::det::naive_det(&self.entries)
    }

    /// Gauss–Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.dim();
        let mut a: Vec<Vec<Q>> = self.entries.clone();
        let mut inv = Self::identity(n).entries;
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let d = a[col][col].recip();
            for j in 0..n {
                a[col][j] = &a[col][j] * &d;
                inv[col][j] = &inv[col][j] * &d;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..n {
                    let x = &a[col][j] * &f;
                    a[r][j] -= x;
                    let y = &inv[col][j] * &f;
                    inv[r][j] -= y;
                }
            }
        }
        Some(NumericMatrix { entries: inv })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_of_degree(4, 2).len(), 10);
        assert_eq!(monomials_of_degree(9, 4).len(), 495);
        assert_eq!(monomials_of_degree(1, 3), vec![vec![3]]);
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let m = NumericMatrix::random_integer(3, 4, &mut rng);
            let Some(inv) = m.inverse() else {
                assert!(m.det().is_zero());
                continue;
            };
            for i in 1..=3 {
                for j in 1..=3 {
                    let s: Q = (1..=3).map(|k| m.get(i, k) * inv.get(k, j)).sum();
                    assert_eq!(s, if i == j { Q::one() } else { Q::zero() });
                }
            }
        }
    }

    #[test]
    fn derivative_of_power() {
        let p = CommPoly::monomial(vec![3, 1], Q::one());
        assert_eq!(p.diff(0), CommPoly::monomial(vec![2, 1], Q::from_i64(3)));
        assert!(p.diff(0).diff(0).diff(0).diff(0).is_zero());
    }
}
