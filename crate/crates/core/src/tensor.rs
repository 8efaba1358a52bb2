//! Operators on tensor powers of `C^n` and matrices with noncommutative entries.
//!
//! Flat indices put the first tensor slot in the most significant position, and
//! tuples are 1-based: `e_{a_1} ⊗ ... ⊗ e_{a_k}` has flat index
//! `sum_s (a_s - 1) * prod_{t > s} n_t`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::freealg::{Family, Letter, NCPoly};
use crate::qcomb::{eps_perm, increasing, MultiIndex, Permutation};
use crate::scalar::{inv_factorial, ParamMatrix, ParameterAssignment, Scalar};

pub fn flat(dims: &[usize], tuple: &[usize]) -> usize {
    debug_assert_eq!(dims.len(), tuple.len());
    tuple
        .iter()
        .zip(dims)
        .fold(0, |acc, (&a, &n)| acc * n + (a - 1))
}

pub fn unflat(dims: &[usize], mut idx: usize) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for s in (0..dims.len()).rev() {
        out[s] = idx % dims[s] + 1;
        idx /= dims[s];
    }
    out
}

fn size(dims: &[usize]) -> usize {
    dims.iter().product()
}

/// Sparse field-valued operator between tensor products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarMatrix<F> {
    row_dims: Vec<usize>,
    col_dims: Vec<usize>,
    entries: BTreeMap<(usize, usize), F>,
}

impl<F: Scalar> ScalarMatrix<F> {
    pub fn zeros(dims: Vec<usize>) -> Self {
        Self::zeros_rect(dims.clone(), dims)
    }

    pub fn zeros_rect(row_dims: Vec<usize>, col_dims: Vec<usize>) -> Self {
        ScalarMatrix {
            row_dims,
            col_dims,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(dims: Vec<usize>) -> Self {
        let mut out = Self::zeros(dims);
        for i in 0..out.rows() {
            out.entries.insert((i, i), F::one());
        }
        out
    }

    /// Builds an operator from its action on basis tuples: `f(col)` lists `(row, coefficient)`.
    pub fn from_column_action(dims: Vec<usize>, f: impl Fn(&[usize]) -> Vec<(Vec<usize>, F)>) -> Self {
        let mut out = Self::zeros(dims.clone());
        for c in 0..size(&dims) {
            let t = unflat(&dims, c);
            for (r, v) in f(&t) {
                out.add_entry(flat(&dims, &r), c, v);
            }
        }
        out
    }

    pub fn row_dims(&self) -> &[usize] {
        &self.row_dims
    }

    pub fn col_dims(&self) -> &[usize] {
        &self.col_dims
    }

    pub fn rows(&self) -> usize {
        size(&self.row_dims)
    }

    pub fn cols(&self) -> usize {
        size(&self.col_dims)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, r: usize, c: usize) -> F {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(F::zero)
    }

    pub fn get_tuple(&self, r: &[usize], c: &[usize]) -> F {
        self.get(flat(&self.row_dims, r), flat(&self.col_dims, c))
    }

    pub fn add_entry(&mut self, r: usize, c: usize, v: F) {
        if v.is_zero() {
            return;
        }
        let e = self.entries.entry((r, c)).or_insert_with(F::zero);
        *e = e.clone() + v;
        if e.is_zero() {
            self.entries.remove(&(r, c));
        }
    }

    pub fn entries_iter(&self) -> impl Iterator<Item = (&(usize, usize), &F)> {
        self.entries.iter()
    }

    fn row_lists(&self) -> Vec<Vec<(usize, F)>> {
        let mut rows = vec![Vec::new(); self.rows()];
        for (&(r, c), v) in &self.entries {
            rows[r].push((c, v.clone()));
        }
        rows
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.col_dims != other.row_dims {
            return Err(Error::DimensionMismatch(format!(
                "{:?} times {:?}",
                self.col_dims, other.row_dims
            )));
        }
        let rhs = other.row_lists();
        let mut out = Self::zeros_rect(self.row_dims.clone(), other.col_dims.clone());
        for (&(r, t), a) in &self.entries {
            for (c, b) in &rhs[t] {
                out.add_entry(r, *c, a.clone() * b.clone());
            }
        }
        Ok(out)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.row_dims != other.row_dims || self.col_dims != other.col_dims {
            return Err(Error::DimensionMismatch("operator shapes differ".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (&(r, c), v) in &other.entries {
            out.add_entry(r, c, v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zeros_rect(self.row_dims.clone(), self.col_dims.clone());
        for (&(r, cc), v) in &self.entries {
            out.add_entry(r, cc, v.clone() * c.clone());
        }
        out
    }

    pub fn is_idempotent(&self) -> bool {
        self.row_dims == self.col_dims && self.mul(self).map(|sq| &sq == self).unwrap_or(false)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros_rect(self.col_dims.clone(), self.row_dims.clone());
        for (&(r, c), v) in &self.entries {
            out.entries.insert((c, r), v.clone());
        }
        out
    }

    /// `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut rd = self.row_dims.clone();
        rd.extend(&other.row_dims);
        let mut cd = self.col_dims.clone();
        cd.extend(&other.col_dims);
        let (orow, ocol) = (other.rows(), other.cols());
        let mut out = Self::zeros_rect(rd, cd);
        for (&(r1, c1), a) in &self.entries {
            for (&(r2, c2), b) in &other.entries {
                out.entries.insert((r1 * orow + r2, c1 * ocol + c2), a.clone() * b.clone());
            }
        }
        out
    }

    /// Embeds a square operator on two tensor factors into slots `(a, b)` of `dims`.
    pub fn embed_pair(&self, dims: &[usize], a: usize, b: usize) -> Result<Self> {
        if a == b || a >= dims.len() || b >= dims.len() {
            return Err(Error::DimensionMismatch(format!("invalid slot pair ({a},{b})")));
        }
        if self.row_dims != [dims[a], dims[b]] || self.col_dims != self.row_dims {
            return Err(Error::DimensionMismatch("pair operator does not match slot dims".into()));
        }
        let cols = self.row_lists_by_col();
        Ok(Self::from_column_action(dims.to_vec(), |t| {
            let c = flat(&self.col_dims, &[t[a], t[b]]);
            cols[c]
                .iter()
                .map(|(r, v)| {
                    let rt = unflat(&self.row_dims, *r);
                    let mut out = t.to_vec();
                    out[a] = rt[0];
                    out[b] = rt[1];
                    (out, v.clone())
                })
                .collect()
        }))
    }

    fn row_lists_by_col(&self) -> Vec<Vec<(usize, F)>> {
        let mut cols = vec![Vec::new(); self.cols()];
        for (&(r, c), v) in &self.entries {
            cols[c].push((r, v.clone()));
        }
        cols
    }

    /// Trace over the listed slots (0-based) of a square operator.
    pub fn partial_trace(&self, slots: &[usize]) -> Result<Self> {
        let (dims, keep) = trace_shape(&self.row_dims, &self.col_dims, slots)?;
        let mut out = Self::zeros(keep.iter().map(|&s| dims[s]).collect());
        for (&(r, c), v) in &self.entries {
            let (rt, ct) = (unflat(&dims, r), unflat(&dims, c));
            if slots.iter().all(|&s| rt[s] == ct[s]) {
                let rk: Vec<usize> = keep.iter().map(|&s| rt[s]).collect();
                let ck: Vec<usize> = keep.iter().map(|&s| ct[s]).collect();
                let (rr, cc) = (flat(&out.row_dims, &rk), flat(&out.col_dims, &ck));
                out.add_entry(rr, cc, v.clone());
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Result<F> {
        let slots: Vec<usize> = (0..self.row_dims.len()).collect();
        Ok(self.partial_trace(&slots)?.get(0, 0))
    }
}

fn trace_shape(row_dims: &[usize], col_dims: &[usize], slots: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    if row_dims != col_dims {
        return Err(Error::DimensionMismatch("partial trace needs a square operator".into()));
    }
    let k = row_dims.len();
    let mut seen = vec![false; k];
    for &s in slots {
        if s >= k || seen[s] {
            return Err(Error::DimensionMismatch(format!("invalid trace slot {s}")));
        }
        seen[s] = true;
    }
    let keep = (0..k).filter(|s| !seen[*s]).collect();
    Ok((row_dims.to_vec(), keep))
}

/// `P(e_a ⊗ e_b) = q_ab e_b ⊗ e_a`.
pub fn permutation_op<F: Scalar>(q: &ParamMatrix<F>) -> ScalarMatrix<F> {
    let n = q.dim();
    ScalarMatrix::from_column_action(vec![n, n], |t| vec![(vec![t[1], t[0]], q.at(t[0], t[1]).clone())])
}

/// `P^{(i, i+1)}` acting on slots `i, i+1` (0-based) of `(C^n)^{⊗k}`.
pub fn transposition_op<F: Scalar>(q: &ParamMatrix<F>, k: usize, i: usize) -> ScalarMatrix<F> {
    let n = q.dim();
    ScalarMatrix::from_column_action(vec![n; k], |t| {
        let mut r = t.to_vec();
        r.swap(i, i + 1);
        vec![(r, q.at(t[i], t[i + 1]).clone())]
    })
}

/// `P^σ` built from the bubble-sort reduced word of `σ`.
pub fn perm_op<F: Scalar>(q: &ParamMatrix<F>, sigma: &Permutation) -> ScalarMatrix<F> {
    let k = sigma.len();
    let mut acc = ScalarMatrix::identity(vec![q.dim(); k]);
    for i in sigma.reduced_word() {
        acc = acc.mul(&transposition_op(q, k, i)).expect("same shape");
    }
    acc
}

/// Normalization of the u-deformed antisymmetrizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QFactorial {
    /// `[i] = 1 + u^2 + ... + u^{2(i-1)}`
    Ascending,
    /// `[i] = (u^{2i} - u^{-2i}) / (u^2 - u^{-2})`
    Symmetric,
    /// `[i] = 1 + u^{-2} + ... + u^{-2(i-1)}`
    Descending,
}

impl QFactorial {
    pub const ALL: [QFactorial; 3] = [QFactorial::Ascending, QFactorial::Symmetric, QFactorial::Descending];

    pub fn name(self) -> &'static str {
        match self {
            QFactorial::Ascending => "1+u^2+...+u^(2(i-1))",
            QFactorial::Symmetric => "(u^(2i)-u^(-2i))/(u^2-u^(-2))",
            QFactorial::Descending => "1+u^(-2)+...+u^(-2(i-1))",
        }
    }

    pub fn integer<F: Scalar>(self, u: &F, i: usize) -> Result<F> {
        let u2 = u.clone() * u.clone();
        match self {
            QFactorial::Ascending => Ok((0..i).map(|e| u2.pow(e as u64)).fold(F::zero(), |a, b| a + b)),
            QFactorial::Descending => {
                let v = u2.try_inv()?;
                Ok((0..i).map(|e| v.pow(e as u64)).fold(F::zero(), |a, b| a + b))
            }
            QFactorial::Symmetric => {
                let num = u2.pow(i as u64) - u2.powi(-(i as i64))?;
                let den = u2.clone() - u2.try_inv()?;
                num.try_div(&den)
                    .map_err(|_| Error::VanishingNormalizer("u^2 - u^(-2)".into()))
            }
        }
    }

    pub fn factorial<F: Scalar>(self, u: &F, k: usize) -> Result<F> {
        let mut acc = F::one();
        for i in 1..=k {
            acc = acc * self.integer(u, i)?;
        }
        if acc.is_zero() {
            return Err(Error::VanishingNormalizer(format!("[{k}]! under {}", self.name())));
        }
        Ok(acc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjectorKind {
    AntisymQ,
    SymQ,
    AntisymP,
    SymP,
    MixedQP,
    YangianAntisym(QFactorial),
}

/// `(1/k!) Σ_σ (±1)^σ P_σ` built from the parameter matrix.
pub fn symmetrizer<F: Scalar>(params: &ParamMatrix<F>, k: usize, signed: bool) -> Result<ScalarMatrix<F>> {
    let norm = inv_factorial::<F>(k)?;
    let mut acc = ScalarMatrix::zeros(vec![params.dim(); k]);
    for sigma in Permutation::all(k) {
        let p = perm_op(params, &sigma);
        let coef = if signed && sigma.sign() < 0 { -norm.clone() } else { norm.clone() };
        acc = acc.add(&p.scale(&coef))?;
    }
    Ok(acc)
}

/// `Σ_{I, σ, ρ} w(I, σ, ρ) e_{I_σ, I_ρ}` over increasing `I` of length `k`.
pub fn block_operator<F: Scalar>(
    n: usize,
    k: usize,
    weight: impl Fn(&MultiIndex, &Permutation, &Permutation) -> Result<F>,
) -> Result<ScalarMatrix<F>> {
    let dims = vec![n; k];
    let mut out = ScalarMatrix::zeros(dims.clone());
    let perms: Vec<Permutation> = Permutation::all(k).collect();
    for i in increasing(n, k) {
        for sigma in &perms {
            let row = flat(&dims, i.permuted(sigma).entries());
            for rho in &perms {
                let col = flat(&dims, i.permuted(rho).entries());
                out.add_entry(row, col, weight(&i, sigma, rho)?);
            }
        }
    }
    Ok(out)
}

/// The normalized (anti)symmetrizers and their mixed and u-deformed variants on `(C^n)^{⊗k}`.
pub fn projector<F: Scalar>(assign: &ParameterAssignment<F>, kind: ProjectorKind, k: usize) -> Result<ScalarMatrix<F>> {
    match kind {
        ProjectorKind::AntisymQ => symmetrizer(&assign.q, k, true),
        ProjectorKind::SymQ => symmetrizer(&assign.q, k, false),
        ProjectorKind::AntisymP => symmetrizer(&assign.p, k, true),
        ProjectorKind::SymP => symmetrizer(&assign.p, k, false),
        ProjectorKind::MixedQP => {
            if assign.n != assign.m {
                return Err(Error::DimensionMismatch("mixed projector needs n = m".into()));
            }
            let norm = inv_factorial::<F>(k)?;
            block_operator(assign.n, k, |i, sigma, rho| {
                let num = eps_perm(&assign.p, i, rho)?;
                let den = eps_perm(&assign.q, i, sigma)?;
                Ok(num.try_div(&den)? * norm.clone())
            })
        }
        ProjectorKind::YangianAntisym(conv) => {
            let u = assign.u()?;
            let norm = conv.factorial(&u, k)?.try_inv()?;
            block_operator(assign.n, k, |i, sigma, rho| {
                Ok(eps_perm(&assign.p, i, rho)? * eps_perm(&assign.q, i, sigma)? * norm.clone())
            })
        }
    }
}

/// Matrix over the free algebra with tensor-factor shape metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgMatrix<F> {
    row_dims: Vec<usize>,
    col_dims: Vec<usize>,
    entries: BTreeMap<(usize, usize), NCPoly<F>>,
}

impl<F: Scalar> AlgMatrix<F> {
    pub fn zeros(row_dims: Vec<usize>, col_dims: Vec<usize>) -> Self {
        AlgMatrix {
            row_dims,
            col_dims,
            entries: BTreeMap::new(),
        }
    }

    /// `n x m` matrix of generators `family[i, j]`.
    pub fn generic(family: Family, n: usize, m: usize) -> Self {
        let mut out = Self::zeros(vec![n], vec![m]);
        for i in 1..=n {
            for j in 1..=m {
                out.set(i - 1, j - 1, NCPoly::letter(Letter::new(family, i, j)));
            }
        }
        out
    }

    /// Transposed generator matrix: entry `(i, j)` is `family[j, i]`.
    pub fn generic_transposed(family: Family, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(vec![rows], vec![cols]);
        for i in 1..=rows {
            for j in 1..=cols {
                out.set(i - 1, j - 1, NCPoly::letter(Letter::new(family, j, i)));
            }
        }
        out
    }

    pub fn identity(dims: Vec<usize>) -> Self {
        Self::from_scalar(&ScalarMatrix::identity(dims))
    }

    pub fn from_scalar(s: &ScalarMatrix<F>) -> Self {
        let mut out = Self::zeros(s.row_dims.clone(), s.col_dims.clone());
        for (&(r, c), v) in &s.entries {
            out.set(r, c, NCPoly::constant(v.clone()));
        }
        out
    }

    pub fn row_dims(&self) -> &[usize] {
        &self.row_dims
    }

    pub fn col_dims(&self) -> &[usize] {
        &self.col_dims
    }

    pub fn rows(&self) -> usize {
        size(&self.row_dims)
    }

    pub fn cols(&self) -> usize {
        size(&self.col_dims)
    }

    pub fn set(&mut self, r: usize, c: usize, p: NCPoly<F>) {
        if p.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), p);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> NCPoly<F> {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(NCPoly::zero)
    }

    /// Entry at 1-based tuples.
    pub fn get_tuple(&self, r: &[usize], c: &[usize]) -> NCPoly<F> {
        self.get(flat(&self.row_dims, r), flat(&self.col_dims, c))
    }

    /// Entry `(i, j)` of a plain matrix, 1-based.
    pub fn at(&self, i: usize, j: usize) -> NCPoly<F> {
        self.get(i - 1, j - 1)
    }

    pub fn entries_iter(&self) -> impl Iterator<Item = (&(usize, usize), &NCPoly<F>)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn add_to(&mut self, r: usize, c: usize, p: NCPoly<F>) {
        if p.is_zero() {
            return;
        }
        let cur = self.entries.remove(&(r, c)).unwrap_or_else(NCPoly::zero);
        self.set(r, c, cur + p);
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.row_dims != other.row_dims || self.col_dims != other.col_dims {
            return Err(Error::DimensionMismatch("matrix shapes differ".into()));
        }
        let mut out = self.clone();
        for (&(r, c), p) in &other.entries {
            out.add_to(r, c, p.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zeros(self.row_dims.clone(), self.col_dims.clone());
        for (&(r, cc), p) in &self.entries {
            out.set(r, cc, p.scale(c));
        }
        out
    }

    /// Noncommutative matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.col_dims != other.row_dims {
            return Err(Error::DimensionMismatch("inner dimensions differ".into()));
        }
        let mut rhs: Vec<Vec<(usize, &NCPoly<F>)>> = vec![Vec::new(); other.rows()];
        for (&(t, c), p) in &other.entries {
            rhs[t].push((c, p));
        }
        let mut out = Self::zeros(self.row_dims.clone(), other.col_dims.clone());
        for (&(r, t), a) in &self.entries {
            for &(c, b) in &rhs[t] {
                out.add_to(r, c, a.nc_mul(b));
            }
        }
        Ok(out)
    }

    pub fn left_mul(&self, a: &ScalarMatrix<F>) -> Result<Self> {
        if a.col_dims != self.row_dims {
            return Err(Error::DimensionMismatch("operator does not match row shape".into()));
        }
        let mut rows: Vec<Vec<(usize, &NCPoly<F>)>> = vec![Vec::new(); self.rows()];
        for (&(t, c), p) in &self.entries {
            rows[t].push((c, p));
        }
        let mut acc: BTreeMap<(usize, usize), NCPoly<F>> = BTreeMap::new();
        for (&(r, t), v) in &a.entries {
            for &(c, p) in &rows[t] {
                acc.entry((r, c)).or_default().add_scaled(p, v);
            }
        }
        let mut out = Self::zeros(a.row_dims.clone(), self.col_dims.clone());
        for ((r, c), p) in acc {
            out.set(r, c, p);
        }
        Ok(out)
    }

    pub fn right_mul(&self, b: &ScalarMatrix<F>) -> Result<Self> {
        if b.row_dims != self.col_dims {
            return Err(Error::DimensionMismatch("operator does not match column shape".into()));
        }
        let rows = b.row_lists();
        let mut acc: BTreeMap<(usize, usize), NCPoly<F>> = BTreeMap::new();
        for (&(r, t), p) in &self.entries {
            for (c, v) in &rows[t] {
                acc.entry((r, *c)).or_default().add_scaled(p, v);
            }
        }
        let mut out = Self::zeros(self.row_dims.clone(), b.col_dims.clone());
        for ((r, c), p) in acc {
            out.set(r, c, p);
        }
        Ok(out)
    }

    /// `self ⊗ other` with entries multiplied in the order `self`, `other`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut rd = self.row_dims.clone();
        rd.extend(&other.row_dims);
        let mut cd = self.col_dims.clone();
        cd.extend(&other.col_dims);
        let (orow, ocol) = (other.rows(), other.cols());
        let mut out = Self::zeros(rd, cd);
        for (&(r1, c1), a) in &self.entries {
            for (&(r2, c2), b) in &other.entries {
                out.set(r1 * orow + r2, c1 * ocol + c2, a.nc_mul(b));
            }
        }
        out
    }

    /// `X_1 X_2 ⋯ X_k`: entry `((i_1..i_k), (j_1..j_k))` is `X_{i_1 j_1} ⋯ X_{i_k j_k}`.
    pub fn chain(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidConfig("chain length must be positive".into()));
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.kron(self);
        }
        Ok(acc)
    }

    /// `X_1 ⋯ X_k` for a list of possibly different factors.
    pub fn chain_of(factors: &[&AlgMatrix<F>]) -> Result<Self> {
        let (first, rest) = factors
            .split_first()
            .ok_or_else(|| Error::InvalidConfig("empty chain".into()))?;
        Ok(rest.iter().fold((*first).clone(), |acc, f| acc.kron(f)))
    }

    pub fn partial_trace(&self, slots: &[usize]) -> Result<Self> {
        let (dims, keep) = trace_shape(&self.row_dims, &self.col_dims, slots)?;
        let kd: Vec<usize> = keep.iter().map(|&s| dims[s]).collect();
        let mut out = Self::zeros(kd.clone(), kd);
        for (&(r, c), p) in &self.entries {
            let (rt, ct) = (unflat(&dims, r), unflat(&dims, c));
            if slots.iter().all(|&s| rt[s] == ct[s]) {
                let rk: Vec<usize> = keep.iter().map(|&s| rt[s]).collect();
                let ck: Vec<usize> = keep.iter().map(|&s| ct[s]).collect();
                let (rr, cc) = (flat(&out.row_dims, &rk), flat(&out.col_dims, &ck));
                out.add_to(rr, cc, p.clone());
            }
        }
        Ok(out)
    }

    /// `tr(A · self)` without forming the product.
    pub fn trace_left_mul(&self, a: &ScalarMatrix<F>) -> Result<NCPoly<F>> {
        if a.col_dims != self.row_dims || a.row_dims != self.col_dims {
            return Err(Error::DimensionMismatch("trace of a non-square product".into()));
        }
        let mut acc = NCPoly::zero();
        for (&(r, t), v) in &a.entries {
            if let Some(p) = self.entries.get(&(t, r)) {
                acc.add_scaled(p, v);
            }
        }
        Ok(acc)
    }

    pub fn trace(&self) -> Result<NCPoly<F>> {
        let slots: Vec<usize> = (0..self.row_dims.len()).collect();
        Ok(self.partial_trace(&slots)?.get(0, 0))
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.col_dims.clone(), self.row_dims.clone());
        for (&(r, c), p) in &self.entries {
            out.set(c, r, p.clone());
        }
        out
    }

    /// Applies a letter substitution to every entry.
    pub fn substitute(&self, image: &impl Fn(Letter) -> NCPoly<F>) -> Self {
        let mut out = Self::zeros(self.row_dims.clone(), self.col_dims.clone());
        for (&(r, c), p) in &self.entries {
            out.set(r, c, p.substitute(image));
        }
        out
    }
}

/// Star product `B * C = tr_1 P B_1 C_2`, i.e. `(B * C)_{bc} = Σ_a q_ba B_ba C_ac`.
pub fn star_product<F: Scalar>(q: &ParamMatrix<F>, b: &AlgMatrix<F>, c: &AlgMatrix<F>) -> Result<AlgMatrix<F>> {
    let n = q.dim();
    for x in [b, c] {
        if x.row_dims != [n] || x.col_dims != [n] {
            return Err(Error::DimensionMismatch("star product needs n x n matrices".into()));
        }
    }
    let mut out = AlgMatrix::zeros(vec![n], vec![n]);
    for bb in 1..=n {
        for cc in 1..=n {
            let mut acc = NCPoly::zero();
            for a in 1..=n {
                acc.add_scaled(&b.at(bb, a).nc_mul(&c.at(a, cc)), q.at(bb, a));
            }
            out.set(bb - 1, cc - 1, acc);
        }
    }
    Ok(out)
}

/// `M^{[0]} = 1`, `M^{[k]} = M^{[k-1]} * M`.
pub fn star_power<F: Scalar>(q: &ParamMatrix<F>, m: &AlgMatrix<F>, k: usize) -> Result<AlgMatrix<F>> {
    let mut acc = AlgMatrix::identity(vec![q.dim()]);
    for _ in 0..k {
        acc = star_product(q, &acc, m)?;
    }
    Ok(acc)
}

/// Applies a `k`-slot projector to the slots `first..first + k` of an `l`-slot matrix from the left.
pub fn embed_block<F: Scalar>(op: &ScalarMatrix<F>, dims: &[usize], first: usize) -> Result<ScalarMatrix<F>> {
    let k = op.row_dims.len();
    if first + k > dims.len() || op.row_dims[..] != dims[first..first + k] {
        return Err(Error::DimensionMismatch("block does not fit".into()));
    }
    let before = ScalarMatrix::identity(dims[..first].to_vec());
    let after = ScalarMatrix::identity(dims[first + k..].to_vec());
    let mut out = if first == 0 { op.clone() } else { before.kron(op) };
    if first + k < dims.len() {
        out = out.kron(&after);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};
    use crate::scalar::{factorial, Fp61, Mode};

    fn assign(n: usize, seed: u64) -> ParameterAssignment<Fp61> {
        ParameterAssignment::sample(n, n, Mode::Generic, seed).unwrap()
    }

    #[test]
    fn flat_roundtrip() {
        let dims = [2, 3, 2];
        for i in 0..12 {
            assert_eq!(flat(&dims, &unflat(&dims, i)), i);
        }
        assert_eq!(flat(&dims, &[2, 1, 1]), 6);
    }

    #[test]
    fn permutation_op_examples() {
        let a = assign(2, 1);
        let p = permutation_op(&a.q);
        assert_eq!(p.get_tuple(&[1, 1], &[1, 1]), Fp61::one());
        assert_eq!(p.get_tuple(&[2, 1], &[1, 2]), *a.q.at(1, 2));
        assert_eq!(p.get_tuple(&[1, 2], &[1, 2]), Fp61::zero());
        assert_eq!(p.mul(&p).unwrap(), ScalarMatrix::identity(vec![2, 2]));
        // tr_1 P = identity
        assert_eq!(p.partial_trace(&[0]).unwrap(), ScalarMatrix::identity(vec![2]));
    }

    #[test]
    fn antisymmetrizer_k2() {
        let a = assign(2, 4);
        let aq = projector(&a, ProjectorKind::AntisymQ, 2).unwrap();
        let half = Fp61::from_i64(2).try_inv().unwrap();
        let expect = ScalarMatrix::identity(vec![2, 2]).sub(&permutation_op(&a.q)).unwrap().scale(&half);
        assert_eq!(aq, expect);
        assert_eq!(aq.trace().unwrap(), Fp61::one());
        for kind in [ProjectorKind::AntisymQ, ProjectorKind::SymP, ProjectorKind::MixedQP] {
            assert_eq!(projector(&a, kind, 1).unwrap(), ScalarMatrix::identity(vec![2]));
        }
    }

    #[test]
    fn mixed_projector_scale() {
        // A_qp^(n) = u v^T / n! with v·u = Σ_σ ε(p,σ)/ε(q,σ); it is idempotent only when that sum is n!
        let a = assign(2, 8);
        let m = projector(&a, ProjectorKind::MixedQP, 2).unwrap();
        let sq = m.mul(&m).unwrap();
        let s = Fp61::one() + *a.p.at(2, 1) * a.q.at(2, 1).try_inv().unwrap();
        let two = factorial::<Fp61>(2);
        assert_eq!(sq, m.scale(&s.try_div(&two).unwrap()));
    }

    #[test]
    fn yangian_normalizations() {
        let a = ParameterAssignment::<Fp61>::sample(2, 2, Mode::Yangian, 3).unwrap();
        let u = a.u().unwrap();
        let u2 = u * u;
        assert_eq!(QFactorial::Ascending.factorial(&u, 2).unwrap(), Fp61::one() + u2);
        assert_eq!(
            QFactorial::Symmetric.factorial(&u, 2).unwrap(),
            u2 + u2.try_inv().unwrap()
        );
        assert_eq!(
            QFactorial::Descending.factorial(&u, 2).unwrap(),
            Fp61::one() + u2.try_inv().unwrap()
        );
        let y = projector(&a, ProjectorKind::YangianAntisym(QFactorial::Descending), 2).unwrap();
        assert!(y.is_idempotent());
        let y_asc = projector(&a, ProjectorKind::YangianAntisym(QFactorial::Ascending), 2).unwrap();
        assert!(!y_asc.is_idempotent());
    }

    #[test]
    fn chain_entries() {
        let m = AlgMatrix::<Fp61>::generic(Family::M, 2, 2);
        assert_eq!(m.chain(1).unwrap(), m);
        let c2 = m.chain(2).unwrap();
        assert_eq!((c2.rows(), c2.cols()), (4, 4));
        assert_eq!(c2.get_tuple(&[1, 2], &[1, 2]), NCPoly::word(&[Letter::m(1, 1), Letter::m(2, 2)]));
        assert!(c2.entries_iter().all(|(_, p)| p.len() == 1 && p.max_weight() == Some(2)));
    }

    #[test]
    fn star_product_matches_tensor_route() {
        let a = assign(3, 2);
        let m = AlgMatrix::<Fp61>::generic(Family::M, 3, 3);
        let direct = star_product(&a.q, &m, &m).unwrap();
        let b1c2 = m.chain(2).unwrap();
        let route = b1c2.left_mul(&permutation_op(&a.q)).unwrap().partial_trace(&[0]).unwrap();
        assert_eq!(direct, route);
        assert_eq!(star_power(&a.q, &m, 1).unwrap(), m);
        let classical = ParamMatrix::<Fp61>::ones(3);
        assert_eq!(star_power(&classical, &m, 2).unwrap(), m.mul(&m).unwrap());
    }

    #[test]
    fn embedding_and_traces() {
        let a = assign(2, 5);
        let p = permutation_op(&a.q);
        assert_eq!(p.embed_pair(&[2, 2, 2], 0, 1).unwrap(), transposition_op(&a.q, 3, 0));
        assert_eq!(embed_block(&p, &[2, 2, 2], 1).unwrap(), transposition_op(&a.q, 3, 1));
        let id = ScalarMatrix::<Fp61>::identity(vec![3]);
        assert_eq!(id.trace().unwrap(), Fp61::from_i64(3));
        assert!(p.partial_trace(&[2]).is_err());
        let big = p.kron(&p);
        assert_eq!(
            big.partial_trace(&[0, 2]).unwrap(),
            big.partial_trace(&[2]).unwrap().partial_trace(&[0]).unwrap()
        );
    }
}
