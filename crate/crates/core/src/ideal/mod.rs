//! Relation presentations and degree-bounded two-sided ideal membership.

mod echelon;
mod membership;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freealg::{Alphabet, Family, Letter, NCPoly};
use crate::scalar::{ParamMatrix, ParameterAssignment, Scalar};
use crate::tensor::{AlgMatrix, ScalarMatrix};

pub use echelon::{Echelon, SparseRow};
pub use membership::{ComponentStats, DegreeComponent, IdealEngine, Membership, Verdict, DEFAULT_GUARD_WORDS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ManinColumn,
    ManinCross,
    Commuting,
    CapelliCross,
    Comodule,
    Custom,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::ManinColumn => "manin-column",
            Provenance::ManinCross => "manin-cross",
            Provenance::Commuting => "commuting",
            Provenance::CapelliCross => "capelli-cross",
            Provenance::Comodule => "comodule",
            Provenance::Custom => "custom",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation<F> {
    pub poly: NCPoly<F>,
    pub provenance: Provenance,
}

/// Generators of a two-sided ideal, each weighted-homogeneous.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationSet<F> {
    pub alphabet: Alphabet,
    pub relations: Vec<Relation<F>>,
}

impl<F: Scalar> RelationSet<F> {
    pub fn new(alphabet: Alphabet) -> Self {
        RelationSet {
            alphabet,
            relations: Vec::new(),
        }
    }

    /// Adds a relation; zero polynomials are skipped.
    pub fn push(&mut self, poly: NCPoly<F>, provenance: Provenance) -> Result<()> {
        if poly.is_zero() {
            return Ok(());
        }
        self.alphabet.check(&poly)?;
        if !poly.is_homogeneous() {
            return Err(Error::InvalidConfig(format!(
                "relation is not weighted-homogeneous: {poly}"
            )));
        }
        if poly.max_weight() == Some(0) {
            return Err(Error::InvalidConfig("relation has a constant term".into()));
        }
        self.relations.push(Relation { poly, provenance });
        Ok(())
    }

    pub fn union(&self, other: &RelationSet<F>) -> Result<Self> {
        let mut out = RelationSet::new(self.alphabet.merge(&other.alphabet)?);
        out.relations = self.relations.clone();
        out.relations.extend(other.relations.iter().cloned());
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn polys(&self) -> impl Iterator<Item = &NCPoly<F>> {
        self.relations.iter().map(|r| &r.poly)
    }
}

fn letter_poly<F: Scalar>(fam: Family, i: usize, j: usize) -> NCPoly<F> {
    NCPoly::letter(Letter::new(fam, i, j))
}

fn word2<F: Scalar>(a: Letter, b: Letter) -> NCPoly<F> {
    NCPoly::word(&[a, b])
}

/// Manin relations for an `n x m` generator matrix of `family` with parameters `(q, p)`.
pub fn manin_relations_for<F: Scalar>(
    family: Family,
    q: &ParamMatrix<F>,
    p: &ParamMatrix<F>,
) -> Result<RelationSet<F>> {
    let alphabet = Alphabet::new().with(family, q.dim(), p.dim());
    manin_relations_view(alphabet, |i, j| Letter::new(family, i, j), q, p)
}

/// Manin relations for the matrix whose `(i, j)` entry is the generator `entry(i, j)`.
/// Used for transposed views such as `N^t`.
pub fn manin_relations_view<F: Scalar>(
    alphabet: Alphabet,
    entry: impl Fn(usize, usize) -> Letter,
    q: &ParamMatrix<F>,
    p: &ParamMatrix<F>,
) -> Result<RelationSet<F>> {
    let (n, m) = (q.dim(), p.dim());
    let mut rels = RelationSet::new(alphabet);
    let g = |i, j| entry(i, j);
    for i in 1..=n {
        for j in i + 1..=n {
            let qji = q.at(j, i).clone();
            for k in 1..=m {
                // M_ik M_jk = q_ji M_jk M_ik
                let r = word2::<F>(g(i, k), g(j, k)) - word2::<F>(g(j, k), g(i, k)).scale(&qji);
                rels.push(r, Provenance::ManinColumn)?;
            }
            for k in 1..=m {
                for l in k + 1..=m {
                    let pkl = p.at(k, l).clone();
                    let r = word2::<F>(g(i, k), g(j, l))
                        - word2::<F>(g(j, l), g(i, k)).scale(&(qji.clone() * pkl.clone()))
                        + word2::<F>(g(i, l), g(j, k)).scale(&pkl)
                        - word2::<F>(g(j, k), g(i, l)).scale(&qji);
                    rels.push(r, Provenance::ManinCross)?;
                }
            }
        }
    }
    Ok(rels)
}

/// Manin relations on the `M` family for the assignment's `(q, p)`.
pub fn manin_relations<F: Scalar>(n: usize, m: usize, assign: &ParameterAssignment<F>) -> Result<RelationSet<F>> {
    if assign.q.dim() != n || assign.p.dim() != m {
        return Err(Error::DimensionMismatch(format!(
            "assignment is {}x{}, requested {n}x{m}",
            assign.q.dim(),
            assign.p.dim()
        )));
    }
    manin_relations_for(Family::M, &assign.q, &assign.p)
}

/// `[a, b] = 0` for every pair of letters from the two families.
pub fn commuting_relations<F: Scalar>(a: (Family, usize, usize), b: (Family, usize, usize)) -> Result<RelationSet<F>> {
    let alphabet = Alphabet::new().with(a.0, a.1, a.2).with(b.0, b.1, b.2);
    let mut rels = RelationSet::new(alphabet.clone());
    let la: Vec<Letter> = Alphabet::new().with(a.0, a.1, a.2).letters();
    let lb: Vec<Letter> = Alphabet::new().with(b.0, b.1, b.2).letters();
    for &x in &la {
        for &y in &lb {
            rels.push(word2::<F>(x, y) - word2::<F>(y, x), Provenance::Commuting)?;
        }
    }
    Ok(rels)
}

/// Quantum-plane relations `x_j x_i = p_ij x_i x_j` (`i < j`) on the `X` family.
pub fn plane_relations<F: Scalar>(p: &ParamMatrix<F>) -> Result<RelationSet<F>> {
    let m = p.dim();
    let mut rels = RelationSet::new(Alphabet::new().with(Family::X, m, 0));
    let x = |i| Letter::vector(Family::X, i);
    for i in 1..=m {
        for j in i + 1..=m {
            rels.push(word2::<F>(x(j), x(i)) - word2::<F>(x(i), x(j)).scale(p.at(i, j)), Provenance::Comodule)?;
        }
    }
    Ok(rels)
}

/// Exterior relations `psi_i^2 = 0` and `psi_j psi_i = -q_ji psi_i psi_j` on the `Psi` family.
pub fn exterior_relations<F: Scalar>(q: &ParamMatrix<F>) -> Result<RelationSet<F>> {
    let n = q.dim();
    let mut rels = RelationSet::new(Alphabet::new().with(Family::Psi, n, 0));
    let psi = |i| Letter::vector(Family::Psi, i);
    for i in 1..=n {
        rels.push(word2::<F>(psi(i), psi(i)), Provenance::Comodule)?;
        for j in i + 1..=n {
            rels.push(word2::<F>(psi(j), psi(i)) + word2::<F>(psi(i), psi(j)).scale(q.at(j, i)), Provenance::Comodule)?;
        }
    }
    Ok(rels)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CapelliVariant {
    /// `M` is `(q, 1)`-Manin; column determinants.
    DetCol,
    /// `N^t` is `(q, 1)`-Manin; row determinants.
    DetRow,
    /// `N` is `(1, p)`-Manin; row permanents.
    Per,
    /// `M^t` is `(1, p)`-Manin with the extra `M`-`H` relation; column permanents.
    PerCol,
}

impl CapelliVariant {
    pub const ALL: [CapelliVariant; 4] = [Self::DetCol, Self::DetRow, Self::Per, Self::PerCol];

    pub fn name(self) -> &'static str {
        match self {
            Self::DetCol => "det-col",
            Self::DetRow => "det-row",
            Self::Per => "per",
            Self::PerCol => "per-col",
        }
    }

    /// Size of the parameter matrix the variant needs, given `(n, m, s)`.
    pub fn param_dim(self, n: usize, _m: usize, s: usize) -> usize {
        match self {
            Self::DetCol | Self::PerCol => n,
            Self::DetRow | Self::Per => s,
        }
    }
}

/// `M_ij N_kl - N_kl M_ij + delta_jk h_il` for `M` `n x m`, `N` `m x s`, `H` `n x s`.
pub fn capelli_cross_relations<F: Scalar>(n: usize, m: usize, s: usize) -> Result<RelationSet<F>> {
    let alphabet = Alphabet::new().with(Family::M, n, m).with(Family::N, m, s).with(Family::H, n, s);
    let mut rels = RelationSet::new(alphabet);
    for i in 1..=n {
        for j in 1..=m {
            for k in 1..=m {
                for l in 1..=s {
                    let mut r = word2::<F>(Letter::m(i, j), Letter::n(k, l)) - word2::<F>(Letter::n(k, l), Letter::m(i, j));
                    if j == k {
                        r = r + NCPoly::letter(Letter::h(i, l));
                    }
                    rels.push(r, Provenance::CapelliCross)?;
                }
            }
        }
    }
    Ok(rels)
}

/// `(1 + P_p')(M_1 H_2 - H_1 M_2 P_{m x s}) = 0` entrywise:
/// `M_aj H_bl - H_al M_bj + p_ab (M_bj H_al - H_bl M_aj)`.
pub fn column_permanent_mh_relations<F: Scalar>(m: usize, s: usize, p: &ParamMatrix<F>) -> Result<RelationSet<F>> {
    let n = p.dim();
    let alphabet = Alphabet::new().with(Family::M, n, m).with(Family::H, n, s);
    let mut rels = RelationSet::new(alphabet);
    let x = |a: usize, b: usize, j: usize, l: usize| -> NCPoly<F> {
        word2::<F>(Letter::m(a, j), Letter::h(b, l)) - word2::<F>(Letter::h(a, l), Letter::m(b, j))
    };
    for a in 1..=n {
        for b in 1..=n {
            for j in 1..=m {
                for l in 1..=s {
                    rels.push(x(a, b, j, l) + x(b, a, j, l).scale(p.at(a, b)), Provenance::CapelliCross)?;
                }
            }
        }
    }
    Ok(rels)
}

/// Relations of one Capelli-type setting: the variant's Manin relations plus the cross relations.
/// `params` is `q` for the determinant variants and `p` for the permanent ones.
pub fn capelli_relations<F: Scalar>(
    n: usize,
    m: usize,
    s: usize,
    params: &ParamMatrix<F>,
    variant: CapelliVariant,
) -> Result<RelationSet<F>> {
    let need = variant.param_dim(n, m, s);
    if params.dim() != need {
        return Err(Error::DimensionMismatch(format!(
            "{} needs a {need}x{need} parameter matrix, got {}",
            variant.name(),
            params.dim()
        )));
    }
    let manin = match variant {
        CapelliVariant::DetCol => manin_relations_for(Family::M, params, &ParamMatrix::ones(m))?,
        CapelliVariant::DetRow => manin_relations_view(
            Alphabet::new().with(Family::N, m, s),
            |a, b| Letter::n(b, a),
            params,
            &ParamMatrix::ones(m),
        )?,
        CapelliVariant::Per => manin_relations_for(Family::N, &ParamMatrix::ones(m), params)?,
        CapelliVariant::PerCol => manin_relations_view(
            Alphabet::new().with(Family::M, n, m),
            |a, b| Letter::m(b, a),
            &ParamMatrix::ones(m),
            params,
        )?,
    };
    let mut rels = manin.union(&capelli_cross_relations(n, m, s)?)?;
    if variant == CapelliVariant::PerCol {
        rels = rels.union(&column_permanent_mh_relations(m, s, params)?)?;
    }
    Ok(rels)
}

/// Makes every generator of `central` commute with every letter of the alphabet.
pub fn central_augmentation<F: Scalar>(rels: &RelationSet<F>, central: Family) -> Result<RelationSet<F>> {
    let mut out = rels.clone();
    let letters = rels.alphabet.letters();
    for a in letters.iter().filter(|l| l.family == central) {
        for b in &letters {
            if b.family != central || a < b {
                out.push(word2::<F>(*a, *b) - word2::<F>(*b, *a), Provenance::Custom)?;
            }
        }
    }
    Ok(out)
}

/// One relation per entry of `A M_1 M_2 (1 - B)`, with `M` the `family` generator matrix.
pub fn relations_from_idempotent<F: Scalar>(
    family: Family,
    a: &ScalarMatrix<F>,
    b: &ScalarMatrix<F>,
) -> Result<RelationSet<F>> {
    if !a.is_idempotent() {
        return Err(Error::NotIdempotent("A"));
    }
    if !b.is_idempotent() {
        return Err(Error::NotIdempotent("B"));
    }
    let n = *a.row_dims().first().ok_or_else(|| Error::DimensionMismatch("empty shape".into()))?;
    let m = *b.row_dims().first().ok_or_else(|| Error::DimensionMismatch("empty shape".into()))?;
    if a.row_dims() != [n, n] || b.row_dims() != [m, m] {
        return Err(Error::DimensionMismatch("idempotents must act on a square of C^n".into()));
    }
    let chain = AlgMatrix::generic(family, n, m).chain(2)?;
    let s = ScalarMatrix::identity(vec![m, m]).sub(b)?;
    let lhs = chain.left_mul(a)?.right_mul(&s)?;
    let mut rels = RelationSet::new(Alphabet::new().with(family, n, m));
    for poly in lhs.entries_iter().map(|(_, p)| p) {
        rels.push(poly.clone(), Provenance::Custom)?;
    }
    Ok(rels)
}

/// Polynomial for the generator `family[i, j]`.
pub fn gen<F: Scalar>(family: Family, i: usize, j: usize) -> NCPoly<F> {
    letter_poly(family, i, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Fp61, Mode};
    use crate::tensor::{projector, ProjectorKind};

    fn assign(n: usize, m: usize, seed: u64) -> ParameterAssignment<Fp61> {
        ParameterAssignment::sample(n, m, Mode::Generic, seed).unwrap()
    }

    #[test]
    fn manin_counts() {
        assert_eq!(manin_relations(2, 2, &assign(2, 2, 1)).unwrap().len(), 3);
        assert_eq!(manin_relations(1, 1, &assign(1, 1, 1)).unwrap().len(), 0);
        assert_eq!(manin_relations(2, 3, &assign(2, 3, 1)).unwrap().len(), 6);
        assert_eq!(manin_relations(3, 3, &assign(3, 3, 1)).unwrap().len(), 9 + 9);
        assert!(manin_relations(2, 3, &assign(2, 2, 1)).is_err());
    }

    #[test]
    fn relations_are_weight_two() {
        let r = manin_relations(3, 2, &assign(3, 2, 4)).unwrap();
        assert!(r.polys().all(|p| p.is_homogeneous() && p.max_weight() == Some(2)));
    }

    #[test]
    fn idempotent_presentation_matches_explicit_relations() {
        for seed in 0..3 {
            for (n, m) in [(2, 2), (2, 3), (3, 2)] {
                let a = assign(n, m, seed);
                let explicit = manin_relations(n, m, &a).unwrap();
                let aq = projector(&a, ProjectorKind::AntisymQ, 2).unwrap();
                let ap = projector(&a, ProjectorKind::AntisymP, 2).unwrap();
                let derived = relations_from_idempotent(Family::M, &aq, &ap).unwrap();
                let mut e1 = IdealEngine::new(explicit.clone());
                let mut e2 = IdealEngine::new(derived.clone());
                for r in derived.polys() {
                    assert!(e1.is_member(r).unwrap().is_member());
                }
                for r in explicit.polys() {
                    assert!(e2.is_member(r).unwrap().is_member());
                }
            }
        }
    }

    #[test]
    fn vacuous_idempotent_cases() {
        let a = assign(2, 2, 0);
        let zero = ScalarMatrix::<Fp61>::zeros(vec![2, 2]);
        let one = ScalarMatrix::<Fp61>::identity(vec![2, 2]);
        let ap = projector(&a, ProjectorKind::AntisymP, 2).unwrap();
        assert!(relations_from_idempotent(Family::M, &zero, &ap).unwrap().is_empty());
        assert!(relations_from_idempotent(Family::M, &ap, &one).unwrap().is_empty());
        // A = 1: every entry of M_1 M_2 (1 - B) is a relation
        let rels = relations_from_idempotent(Family::M, &one, &ap).unwrap();
        assert!(!rels.is_empty());
        let p = ScalarMatrix::<Fp61>::identity(vec![2, 2]).scale(&Fp61::from_i64(2));
        assert!(matches!(relations_from_idempotent(Family::M, &p, &ap), Err(Error::NotIdempotent(_))));
    }
}
