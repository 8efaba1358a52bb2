//! Sparse noncommutative polynomials over indexed generator families.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    M,
    N,
    H,
    X,
    Y,
    Psi,
    Phi,
}

impl Family {
    pub fn weight(self) -> usize {
        match self {
            Family::H => 2,
            _ => 1,
        }
    }

    /// Vector families carry a single index.
    pub fn is_vector(self) -> bool {
        matches!(self, Family::X | Family::Y | Family::Psi | Family::Phi)
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::M => "M",
            Family::N => "N",
            Family::H => "H",
            Family::X => "X",
            Family::Y => "Y",
            Family::Psi => "Psi",
            Family::Phi => "Phi",
        }
    }
}

/// A generator symbol. Indices are 1-based; `col` is 0 for vector families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub family: Family,
    pub row: u8,
    pub col: u8,
}

impl Letter {
    pub fn new(family: Family, row: usize, col: usize) -> Self {
        Letter {
            family,
            row: row as u8,
            col: col as u8,
        }
    }

    pub fn m(i: usize, j: usize) -> Self {
        Self::new(Family::M, i, j)
    }

    pub fn n(i: usize, j: usize) -> Self {
        Self::new(Family::N, i, j)
    }

    pub fn h(i: usize, j: usize) -> Self {
        Self::new(Family::H, i, j)
    }

    pub fn vector(family: Family, i: usize) -> Self {
        Self::new(family, i, 0)
    }

    pub fn weight(self) -> usize {
        self.family.weight()
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.family.is_vector() {
            write!(f, "{}[{}]", self.family.name(), self.row)
        } else {
            write!(f, "{}[{},{}]", self.family.name(), self.row, self.col)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub SmallVec<[Letter; 8]>);

impl Word {
    pub fn empty() -> Self {
        Word(SmallVec::new())
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        Word(SmallVec::from_slice(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|l| l.weight()).sum()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Declared generator families with their index ranges.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Alphabet {
    pub families: BTreeMap<Family, (usize, usize)>,
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, family: Family, rows: usize, cols: usize) -> Self {
        self.families.insert(family, (rows, if family.is_vector() { 0 } else { cols }));
        self
    }

    pub fn contains(&self, l: &Letter) -> bool {
        match self.families.get(&l.family) {
            None => false,
            Some(&(r, c)) => {
                let row_ok = l.row >= 1 && (l.row as usize) <= r;
                let col_ok = if l.family.is_vector() {
                    l.col == 0
                } else {
                    l.col >= 1 && (l.col as usize) <= c
                };
                row_ok && col_ok
            }
        }
    }

    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for (&fam, &(r, c)) in &self.families {
            for i in 1..=r {
                if fam.is_vector() {
                    out.push(Letter::vector(fam, i));
                } else {
                    for j in 1..=c {
                        out.push(Letter::new(fam, i, j));
                    }
                }
            }
        }
        out
    }

    pub fn merge(&self, other: &Alphabet) -> Result<Alphabet> {
        let mut out = self.clone();
        for (&fam, &dims) in &other.families {
            match out.families.get(&fam) {
                Some(&d) if d != dims => {
                    return Err(Error::DimensionMismatch(format!(
                        "family {} declared as {:?} and {:?}",
                        fam.name(),
                        d,
                        dims
                    )))
                }
                _ => {
                    out.families.insert(fam, dims);
                }
            }
        }
        Ok(out)
    }

    pub fn check(&self, poly: &NCPoly<impl Scalar>) -> Result<()> {
        for w in poly.terms.keys() {
            for l in w.letters() {
                if !self.contains(l) {
                    return Err(Error::ForeignLetter(l.to_string()));
                }
            }
        }
        Ok(())
    }
}

/// Sparse element of the free associative algebra; stored coefficients are never zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NCPoly<F> {
    terms: BTreeMap<Word, F>,
}

impl<F: Scalar> Default for NCPoly<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Scalar> NCPoly<F> {
    pub fn zero() -> Self {
        NCPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::monomial(Word::empty(), c)
    }

    pub fn monomial(w: Word, c: F) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn letter(l: Letter) -> Self {
        Self::monomial(Word::from_letters(&[l]), F::one())
    }

    pub fn word(letters: &[Letter]) -> Self {
        Self::monomial(Word::from_letters(letters), F::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, F)>) -> Self {
        let mut p = Self::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn add_term(&mut self, w: Word, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> F {
        self.terms.get(w).cloned().unwrap_or_else(F::zero)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        NCPoly {
            terms: self
                .terms
                .iter()
                .map(|(w, a)| (w.clone(), a.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &F) {
        for (w, a) in &other.terms {
            self.add_term(w.clone(), a.clone() * c.clone());
        }
    }

    pub fn nc_mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (w1, a) in &self.terms {
            for (w2, b) in &other.terms {
                out.add_term(w1.concat(w2), a.clone() * b.clone());
            }
        }
        out
    }

    pub fn weighted_component(&self, d: usize) -> Self {
        NCPoly {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.weight() == d)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Nonzero homogeneous components keyed by weight.
    pub fn components(&self) -> BTreeMap<usize, Self> {
        let mut out: BTreeMap<usize, Self> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(w.weight())
                .or_default()
                .terms
                .insert(w.clone(), c.clone());
        }
        out
    }

    pub fn max_weight(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.weight()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|w| w.weight());
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Applies the algebra homomorphism determined by `image` on letters.
    pub fn substitute(&self, image: &impl Fn(Letter) -> NCPoly<F>) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let mut acc = Self::constant(c.clone());
            for &l in w.letters() {
                acc = acc.nc_mul(&image(l));
            }
            out = out + acc;
        }
        out
    }

    /// Evaluates into a commutative field by sending each letter to a value.
    pub fn evaluate(&self, value: &impl Fn(Letter) -> F) -> F {
        let mut out = F::zero();
        for (w, c) in &self.terms {
            let mut t = c.clone();
            for &l in w.letters() {
                t = t * value(l);
            }
            out = out + t;
        }
        out
    }

    /// Text form `c * M[1,1]M[2,2] + ...`; `0` for the zero polynomial.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                s.push_str(" + ");
            }
            let _ = write!(s, "{c} * {w}");
        }
        s
    }
}

impl<F: Scalar> fmt::Display for NCPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<F: Scalar> Add for NCPoly<F> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        if self.terms.len() < rhs.terms.len() {
            return rhs + self;
        }
        for (w, c) in rhs.terms {
            self.add_term(w, c);
        }
        self
    }
}

impl<F: Scalar> Sub for NCPoly<F> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (w, c) in rhs.terms {
            self.add_term(w, -c);
        }
        self
    }
}

impl<F: Scalar> Neg for NCPoly<F> {
    type Output = Self;
    fn neg(self) -> Self {
        NCPoly {
            terms: self.terms.into_iter().map(|(w, c)| (w, -c)).collect(),
        }
    }
}

impl<F: Scalar> Mul for &NCPoly<F> {
    type Output = NCPoly<F>;
    fn mul(self, rhs: Self) -> NCPoly<F> {
        self.nc_mul(rhs)
    }
}

impl<F: Scalar> Mul for NCPoly<F> {
    type Output = NCPoly<F>;
    fn mul(self, rhs: Self) -> NCPoly<F> {
        self.nc_mul(&rhs)
    }
}

impl<F: Scalar> std::iter::Sum for NCPoly<F> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Fp61;
    use num_traits::One;
    use proptest::prelude::*;

    type P = NCPoly<Fp61>;

    fn m(i: usize, j: usize) -> P {
        P::letter(Letter::m(i, j))
    }

    #[test]
    fn unit_and_distributivity_examples() {
        assert_eq!(P::one() * m(1, 1), m(1, 1));
        let lhs = (m(1, 1) + m(1, 2)) * m(2, 1);
        let rhs = P::word(&[Letter::m(1, 1), Letter::m(2, 1)]) + P::word(&[Letter::m(1, 2), Letter::m(2, 1)]);
        assert_eq!(lhs, rhs);
        let sq = P::word(&[Letter::m(1, 1), Letter::m(2, 2)]);
        let prod = &sq * &sq;
        assert_eq!(prod.len(), 1);
        let w = Word::from_letters(&[Letter::m(1, 1), Letter::m(2, 2), Letter::m(1, 1), Letter::m(2, 2)]);
        assert!(prod.coeff(&w).is_one());
    }

    #[test]
    fn components() {
        let p = P::one() + m(1, 1) + m(1, 1) * m(2, 2);
        assert_eq!(p.weighted_component(2), m(1, 1) * m(2, 2));
        let h = P::letter(Letter::h(1, 1));
        assert_eq!(h.weighted_component(2), h);
        assert!(h.weighted_component(1).is_zero());
        assert!(P::zero().weighted_component(3).is_zero());
    }

    #[test]
    fn cancellation_drops_terms() {
        let p = m(1, 2) - m(1, 2);
        assert!(p.is_zero());
        assert_eq!(p.render(), "0");
    }

    #[test]
    fn rendering() {
        let p = m(1, 1) * m(2, 2) - P::letter(Letter::vector(Family::Psi, 1)).scale(&Fp61::from_i64(3));
        assert_eq!(
            p.render(),
            format!("1 * M[1,1]M[2,2] + {} * Psi[1]", Fp61::from_i64(-3))
        );
    }

    #[test]
    fn alphabet_check() {
        let a = Alphabet::new().with(Family::M, 2, 2);
        assert!(a.check(&(m(1, 1) * m(2, 2))).is_ok());
        assert!(a.check(&m(3, 1)).is_err());
        assert!(a.check(&P::letter(Letter::n(1, 1))).is_err());
    }

    fn arb_poly() -> impl Strategy<Value = P> {
        let letter = (0usize..3, 1usize..3, 1usize..3).prop_map(|(f, i, j)| match f {
            0 => Letter::m(i, j),
            1 => Letter::n(i, j),
            _ => Letter::h(i, j),
        });
        let term = (prop::collection::vec(letter, 0..4), 1u64..20);
        prop::collection::vec(term, 0..5).prop_map(|ts| {
            P::from_terms(ts.into_iter().map(|(ls, c)| (Word::from_letters(&ls), Fp61::new(c))))
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!((&(&a * &b)) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(b.clone() + c.clone()), &a * &b + &a * &c);
            prop_assert_eq!(&(a.clone() + b.clone()) * &c, &a * &c + &b * &c);
            prop_assert_eq!(&P::one() * &a, a.clone());
            prop_assert_eq!(&a * &P::one(), a.clone());
        }

        #[test]
        fn components_partition(a in arb_poly()) {
            let sum: P = a.components().into_values().sum();
            prop_assert_eq!(&sum, &a);
            for d in 0..9 {
                let c = a.weighted_component(d);
                prop_assert_eq!(c.weighted_component(d), c.clone());
                prop_assert!(c.is_homogeneous());
            }
        }
    }
}
