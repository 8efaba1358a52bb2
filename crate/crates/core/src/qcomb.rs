//! Multi-indices, permutations, and the ε/μ weights built from inversions.

use std::fmt;

use itertools::Itertools;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{ParamMatrix, Scalar};

/// Finite sequence of 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn new(v: impl Into<Vec<usize>>) -> Self {
        MultiIndex(v.into())
    }

    /// `(1, 2, ..., n)`.
    pub fn full(n: usize) -> Self {
        MultiIndex((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn is_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn has_repeats(&self) -> bool {
        !self.0.iter().all_unique()
    }

    /// `I^τ`
    pub fn reverse(&self) -> Self {
        MultiIndex(self.0.iter().rev().copied().collect())
    }

    /// `I^or`
    pub fn sorted(&self) -> Self {
        let mut v = self.0.clone();
        v.sort_unstable();
        MultiIndex(v)
    }

    /// `I ⊕ J`
    pub fn juxtapose(&self, other: &MultiIndex) -> Self {
        MultiIndex(self.0.iter().chain(&other.0).copied().collect())
    }

    /// `(i_{σ(1)}, ..., i_{σ(r)})`
    pub fn permuted(&self, sigma: &Permutation) -> Self {
        MultiIndex(sigma.images().iter().map(|&s| self.0[s]).collect())
    }

    pub fn check_range(&self, bound: usize, what: &'static str) -> Result<()> {
        for &i in &self.0 {
            if i == 0 || i > bound {
                return Err(Error::IndexOutOfRange { what, index: i, bound });
            }
        }
        Ok(())
    }

    /// `K` with the entries of `self` deleted; `self` must be repeat-free and contained in `K`.
    pub fn complement_in(&self, k: &MultiIndex) -> Result<MultiIndex> {
        if self.has_repeats() {
            return Err(Error::RepeatedEntries(self.0.clone()));
        }
        if !k.is_increasing() {
            return Err(Error::NotIncreasing(k.0.clone()));
        }
        if !self.0.iter().all(|i| k.0.contains(i)) {
            return Err(Error::NotContained {
                sub: self.0.clone(),
                ambient: k.0.clone(),
            });
        }
        Ok(MultiIndex(k.0.iter().copied().filter(|x| !self.0.contains(x)).collect()))
    }

    /// Number of times `j` occurs.
    pub fn multiplicity(&self, j: usize) -> usize {
        self.0.iter().filter(|&&x| x == j).count()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// Complement within `K`.
pub fn complement(i: &MultiIndex, k: &MultiIndex) -> Result<MultiIndex> {
    i.complement_in(k)
}

/// Permutation of `{0, ..., k-1}` stored by images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Permutation((0..k).collect())
    }

    /// From 0-based images, validating bijectivity.
    pub fn from_images(v: Vec<usize>) -> Result<Self> {
        let k = v.len();
        let mut seen = vec![false; k];
        for &x in &v {
            if x >= k || seen[x] {
                return Err(Error::NotAPermutation(v));
            }
            seen[x] = true;
        }
        Ok(Permutation(v))
    }

    /// From 1-based one-line notation `(σ(1), ..., σ(k))`.
    pub fn from_one_line(v: &[usize]) -> Result<Self> {
        if v.contains(&0) {
            return Err(Error::NotAPermutation(v.to_vec()));
        }
        Self::from_images(v.iter().map(|x| x - 1).collect())
            .map_err(|_| Error::NotAPermutation(v.to_vec()))
    }

    pub fn all(k: usize) -> impl Iterator<Item = Permutation> {
        (0..k).permutations(k).map(Permutation)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// Pairs `s < t` with `σ(s) > σ(t)`, 0-based.
    pub fn inversions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.0.len();
        (0..k)
            .flat_map(move |s| (s + 1..k).map(move |t| (s, t)))
            .filter(|&(s, t)| self.0[s] > self.0[t])
    }

    pub fn inversion_count(&self) -> usize {
        self.inversions().count()
    }

    pub fn sign(&self) -> i64 {
        if self.inversion_count() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn inverse(&self) -> Self {
        let mut v = vec![0; self.0.len()];
        for (s, &t) in self.0.iter().enumerate() {
            v[t] = s;
        }
        Permutation(v)
    }

    /// `(self ∘ other)(s) = self(other(s))`.
    pub fn compose(&self, other: &Permutation) -> Self {
        Permutation(other.0.iter().map(|&s| self.0[s]).collect())
    }

    /// Adjacent transpositions `s_i = (i, i+1)` whose left-to-right product equals `self`.
    pub fn reduced_word(&self) -> Vec<usize> {
        // bubble sort the one-line form; each swap at position i records s_i
        let mut v = self.0.clone();
        let mut swaps = Vec::new();
        let k = v.len();
        for pass in 0..k {
            for i in 0..k.saturating_sub(1 + pass) {
                if v[i] > v[i + 1] {
                    v.swap(i, i + 1);
                    swaps.push(i);
                }
            }
        }
        swaps.reverse();
        swaps
    }
}

/// The sorting permutation of a repeat-free index: `I = I^or` permuted by it.
pub fn sorting_permutation(i: &MultiIndex) -> Result<Permutation> {
    if i.has_repeats() {
        return Err(Error::RepeatedEntries(i.0.clone()));
    }
    let sorted = i.sorted();
    Permutation::from_images(
        i.0.iter()
            .map(|x| sorted.0.iter().position(|y| y == x).expect("same entries"))
            .collect(),
    )
}

/// `ε(q̂, I)`: zero on repeats, otherwise the product of `-q_{i_s i_t}` over inversions.
pub fn eps_index<F: Scalar>(q: &ParamMatrix<F>, i: &MultiIndex) -> Result<F> {
    i.check_range(q.dim(), "ε multi-index")?;
    if i.has_repeats() {
        return Ok(F::zero());
    }
    let v = i.entries();
    let mut acc = F::one();
    for s in 0..v.len() {
        for t in s + 1..v.len() {
            if v[s] > v[t] {
                acc = acc * -q.at(v[s], v[t]).clone();
            }
        }
    }
    Ok(acc)
}

/// `ε(q̂, I, σ)` for increasing `I`.
pub fn eps_perm<F: Scalar>(q: &ParamMatrix<F>, i: &MultiIndex, sigma: &Permutation) -> Result<F> {
    if !i.is_increasing() {
        return Err(Error::NotIncreasing(i.0.clone()));
    }
    if sigma.len() != i.len() {
        return Err(Error::LengthMismatch {
            expected: i.len(),
            got: sigma.len(),
        });
    }
    i.check_range(q.dim(), "ε multi-index")?;
    let v = i.entries();
    let s = sigma.images();
    let mut acc = F::one();
    for (a, b) in sigma.inversions() {
        acc = acc * -q.at(v[s[a]], v[s[b]]).clone();
    }
    Ok(acc)
}

/// `μ(p̂, J, σ)`: product of `p_{j_{σ(t)} j_{σ(s)}}` over inversions, no signs.
pub fn mu_perm<F: Scalar>(p: &ParamMatrix<F>, j: &MultiIndex, sigma: &Permutation) -> Result<F> {
    if sigma.len() != j.len() {
        return Err(Error::LengthMismatch {
            expected: j.len(),
            got: sigma.len(),
        });
    }
    j.check_range(p.dim(), "μ multi-index")?;
    let v = j.entries();
    let s = sigma.images();
    let mut acc = F::one();
    for (a, b) in sigma.inversions() {
        acc = acc * p.at(v[s[b]], v[s[a]]).clone();
    }
    Ok(acc)
}

/// `v(α_J)`: product of the factorials of the multiplicities of a non-decreasing index.
pub fn multiplicity_factorial(j: &MultiIndex) -> Result<u64> {
    if !j.is_nondecreasing() {
        return Err(Error::NotNonDecreasing(j.0.clone()));
    }
    Ok(j.0
        .iter()
        .dedup_with_count()
        .map(|(c, _)| (1..=c as u64).product::<u64>())
        .product())
}

/// All increasing multi-indices of length `r` with entries in `1..=n`.
pub fn increasing(n: usize, r: usize) -> Vec<MultiIndex> {
    (1..=n).combinations(r).map(MultiIndex).collect()
}

/// All non-decreasing multi-indices of length `r` with entries in `1..=n`.
pub fn nondecreasing(n: usize, r: usize) -> Vec<MultiIndex> {
    (1..=n).combinations_with_replacement(r).map(MultiIndex).collect()
}

/// All multi-indices of length `r` with entries in `1..=n`.
pub fn all_tuples(n: usize, r: usize) -> Vec<MultiIndex> {
    if r == 0 {
        return vec![MultiIndex::default()];
    }
    (0..r)
        .map(|_| 1..=n)
        .multi_cartesian_product()
        .map(MultiIndex)
        .collect()
}

/// Classical sign check helper: `ε` with all parameters equal to one.
pub fn classical_sign<F: Scalar>(sigma: &Permutation) -> F {
    if sigma.sign() == 1 {
        F::one()
    } else {
        -F::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};
    use crate::scalar::{Fp61, Mode, ParameterAssignment};
    use proptest::prelude::*;

    fn params(n: usize, seed: u64) -> ParamMatrix<Fp61> {
        ParameterAssignment::<Fp61>::sample(n, n, Mode::Generic, seed).unwrap().q
    }

    fn mi(v: &[usize]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn eps_index_examples() {
        let q = params(3, 1);
        assert_eq!(eps_index(&q, &mi(&[1, 2])).unwrap(), Fp61::one());
        assert_eq!(eps_index(&q, &mi(&[2, 1])).unwrap(), -*q.at(2, 1));
        assert_eq!(eps_index(&q, &mi(&[1, 1, 2])).unwrap(), Fp61::zero());
        assert_eq!(eps_index(&q, &mi(&[3, 1, 2])).unwrap(), *q.at(3, 1) * *q.at(3, 2));
        assert!(eps_index(&q, &mi(&[4])).is_err());
    }

    #[test]
    fn eps_perm_examples() {
        let q = params(3, 2);
        let id = Permutation::identity(3);
        assert_eq!(eps_perm(&q, &MultiIndex::full(3), &id).unwrap(), Fp61::one());
        let s21 = Permutation::from_one_line(&[2, 1]).unwrap();
        assert_eq!(eps_perm(&q, &MultiIndex::full(2), &s21).unwrap(), -*q.at(2, 1));
        let s321 = Permutation::from_one_line(&[3, 2, 1]).unwrap();
        assert_eq!(
            eps_perm(&q, &MultiIndex::full(3), &s321).unwrap(),
            -(*q.at(3, 2) * *q.at(3, 1) * *q.at(2, 1))
        );
        assert!(matches!(eps_perm(&q, &mi(&[2, 1]), &s21), Err(Error::NotIncreasing(_))));
        assert!(Permutation::from_one_line(&[1, 1]).is_err());
    }

    #[test]
    fn mu_perm_examples() {
        let p = params(3, 3);
        assert_eq!(mu_perm(&p, &MultiIndex::full(3), &Permutation::identity(3)).unwrap(), Fp61::one());
        let s21 = Permutation::from_one_line(&[2, 1]).unwrap();
        assert_eq!(mu_perm(&p, &MultiIndex::full(2), &s21).unwrap(), *p.at(1, 2));
        let s321 = Permutation::from_one_line(&[3, 2, 1]).unwrap();
        assert_eq!(
            mu_perm(&p, &MultiIndex::full(3), &s321).unwrap(),
            *p.at(2, 3) * *p.at(1, 3) * *p.at(1, 2)
        );
    }

    #[test]
    fn complement_examples() {
        assert_eq!(complement(&mi(&[2]), &mi(&[1, 2, 3])).unwrap(), mi(&[1, 3]));
        assert_eq!(complement(&mi(&[1, 3]), &mi(&[1, 2, 3, 4])).unwrap(), mi(&[2, 4]));
        assert_eq!(complement(&mi(&[]), &mi(&[1, 2])).unwrap(), mi(&[1, 2]));
        assert!(complement(&mi(&[5]), &mi(&[1, 2])).is_err());
        assert!(complement(&mi(&[1, 1]), &mi(&[1, 2])).is_err());
    }

    #[test]
    fn eps_index_equals_eps_perm_of_sorted() {
        let q = params(4, 9);
        for r in 0..=4 {
            for i in all_tuples(4, r) {
                if i.has_repeats() {
                    continue;
                }
                let sigma = sorting_permutation(&i).unwrap();
                assert_eq!(i.sorted().permuted(&sigma), i);
                assert_eq!(eps_index(&q, &i).unwrap(), eps_perm(&q, &i.sorted(), &sigma).unwrap());
            }
        }
    }

    #[test]
    fn classical_reduction() {
        let one = ParamMatrix::<Fp61>::ones(4);
        for sigma in Permutation::all(4) {
            assert_eq!(eps_perm(&one, &MultiIndex::full(4), &sigma).unwrap(), classical_sign(&sigma));
            assert_eq!(mu_perm(&one, &MultiIndex::full(4), &sigma).unwrap(), Fp61::one());
        }
    }

    #[test]
    fn reduced_word_reproduces_permutation() {
        for k in 1..=5 {
            for sigma in Permutation::all(k) {
                let word = sigma.reduced_word();
                assert_eq!(word.len(), sigma.inversion_count());
                let mut acc = Permutation::identity(k);
                for i in word {
                    let mut t: Vec<usize> = (0..k).collect();
                    t.swap(i, i + 1);
                    acc = acc.compose(&Permutation::from_images(t).unwrap());
                }
                assert_eq!(acc, sigma);
            }
        }
    }

    #[test]
    fn multiplicity_factorials() {
        assert_eq!(multiplicity_factorial(&mi(&[1, 1, 2])).unwrap(), 2);
        assert_eq!(multiplicity_factorial(&mi(&[2, 2, 2])).unwrap(), 6);
        assert_eq!(multiplicity_factorial(&mi(&[])).unwrap(), 1);
        assert!(multiplicity_factorial(&mi(&[2, 1])).is_err());
    }

    fn arb_perm(max: usize) -> impl Strategy<Value = Permutation> {
        (1..=max)
            .prop_flat_map(|k| Just((0..k).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|v| Permutation::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn sign_is_multiplicative(a in arb_perm(6), seed in any::<u64>()) {
            let b = Permutation::all(a.len()).nth(seed as usize % (1..=a.len()).product::<usize>()).unwrap();
            prop_assert_eq!(a.compose(&b).sign(), a.sign() * b.sign());
            prop_assert_eq!(a.compose(&a.inverse()), Permutation::identity(a.len()));
            prop_assert_eq!(a.inverse().sign(), a.sign());
        }

        #[test]
        fn eps_perm_is_eps_index_of_permuted(sigma in arb_perm(4), seed in any::<u64>()) {
            let q = params(4, seed);
            let k = sigma.len();
            let i = increasing(4, k)[seed as usize % increasing(4, k).len()].clone();
            let permuted = i.permuted(&sigma);
            prop_assert_eq!(eps_index(&q, &permuted).unwrap(), eps_perm(&q, &i, &sigma).unwrap());
            prop_assert_eq!(sorting_permutation(&permuted).unwrap(), sigma);
        }

        #[test]
        fn eps_of_reverse_inverts_parameters(n in 1usize..5, seed in any::<u64>()) {
            let q = params(n, seed);
            let full = MultiIndex::full(n);
            let mut expected = Fp61::one();
            for a in 1..=n {
                for b in a + 1..=n {
                    expected = expected * -*q.at(b, a);
                }
            }
            prop_assert_eq!(eps_index(&q, &full.reverse()).unwrap(), expected);
        }
    }
}
