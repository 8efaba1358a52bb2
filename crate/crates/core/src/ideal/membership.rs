use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use super::echelon::{Echelon, SparseRow};
use super::RelationSet;
use crate::error::{Error, Result};
use crate::freealg::{Letter, NCPoly, Word};
use crate::scalar::Scalar;

pub const DEFAULT_GUARD_WORDS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<F> {
    Member,
    /// Normal form of the lowest-weight component that failed to reduce to zero.
    NonMember { witness: NCPoly<F> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership<F> {
    pub verdict: Verdict<F>,
    /// Words in the connected pieces the polynomial touched.
    pub touched_words: usize,
    /// Rank of the ideal restricted to those pieces.
    pub touched_rank: usize,
}

impl<F> Membership<F> {
    pub fn is_member(&self) -> bool {
        matches!(self.verdict, Verdict::Member)
    }

    /// Every touched piece lies entirely in the ideal, so membership carried no information.
    pub fn is_vacuous(&self) -> bool {
        self.touched_words > 0 && self.touched_words == self.touched_rank
    }
}

/// Rank data for a full weighted-degree component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentStats {
    pub degree: usize,
    pub words: usize,
    pub rank: usize,
}

/// Words linked by spanning vectors `w r w'`; the ideal is a direct sum over pieces.
#[derive(Debug)]
struct Piece<F> {
    words: Vec<Word>,
    index: HashMap<Word, u32>,
    echelon: Echelon<F>,
}

/// A spanning vector `prefix * relation * suffix`.
type Spanner = (u32, Word, Word);

/// Membership oracle for one relation set; caches every piece it builds.
#[derive(Debug)]
pub struct IdealEngine<F> {
    rels: RelationSet<F>,
    terms: Vec<Vec<(Word, F)>>,
    term_index: HashMap<Word, Vec<u32>>,
    term_lens: Vec<usize>,
    word_piece: HashMap<Word, u32>,
    pieces: Vec<Piece<F>>,
    guard_words: usize,
}

impl<F: Scalar> IdealEngine<F> {
    pub fn new(rels: RelationSet<F>) -> Self {
        Self::with_guard(rels, DEFAULT_GUARD_WORDS)
    }

    pub fn with_guard(rels: RelationSet<F>, guard_words: usize) -> Self {
        let terms: Vec<Vec<(Word, F)>> = rels
            .relations
            .iter()
            .map(|r| r.poly.terms().map(|(w, c)| (w.clone(), c.clone())).collect())
            .collect();
        let mut term_index: HashMap<Word, Vec<u32>> = HashMap::new();
        let mut lens = BTreeSet::new();
        for (ri, ts) in terms.iter().enumerate() {
            for (w, _) in ts {
                term_index.entry(w.clone()).or_default().push(ri as u32);
                lens.insert(w.len());
            }
        }
        IdealEngine {
            rels,
            terms,
            term_index,
            term_lens: lens.into_iter().collect(),
            word_piece: HashMap::new(),
            pieces: Vec::new(),
            guard_words,
        }
    }

    pub fn relations(&self) -> &RelationSet<F> {
        &self.rels
    }

    /// Spanning vectors having `u` in their support.
    fn spanners_through(&self, u: &Word, out: &mut Vec<Spanner>) {
        let letters = u.letters();
        for k in 0..letters.len() {
            for &len in &self.term_lens {
                if k + len > letters.len() {
                    break;
                }
                let factor = Word::from_letters(&letters[k..k + len]);
                if let Some(rs) = self.term_index.get(&factor) {
                    let pre = Word::from_letters(&letters[..k]);
                    let suf = Word::from_letters(&letters[k + len..]);
                    for &r in rs {
                        out.push((r, pre.clone(), suf.clone()));
                    }
                }
            }
        }
    }

    fn spanner_terms<'a>(&'a self, s: &'a Spanner) -> impl Iterator<Item = (Word, &'a F)> + 'a {
        self.terms[s.0 as usize]
            .iter()
            .map(move |(t, c)| (s.1.concat(t).concat(&s.2), c))
    }

    fn build_piece(&mut self, start: &Word) -> Result<u32> {
        if let Some(&id) = self.word_piece.get(start) {
            return Ok(id);
        }
        let mut seen: HashSet<Word> = HashSet::new();
        let mut spanners: HashSet<Spanner> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start.clone());
        let mut buf = Vec::new();
        while let Some(u) = queue.pop_front() {
            buf.clear();
            self.spanners_through(&u, &mut buf);
            for s in buf.drain(..) {
                if spanners.contains(&s) {
                    continue;
                }
                for (w, _) in self.spanner_terms(&s) {
                    if !seen.contains(&w) {
                        seen.insert(w.clone());
                        queue.push_back(w);
                    }
                }
                spanners.insert(s);
                if seen.len() > self.guard_words {
                    return Err(Error::GuardExceeded {
                        words: seen.len(),
                        limit: self.guard_words,
                    });
                }
            }
        }
        let mut words: Vec<Word> = seen.into_iter().collect();
        words.sort();
        let index: HashMap<Word, u32> = words.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
        let mut spanners: Vec<Spanner> = spanners.into_iter().collect();
        spanners.sort();
        let mut echelon = Echelon::new();
        for s in &spanners {
            let mut row: SparseRow<F> = self
                .spanner_terms(s)
                .map(|(w, c)| (index[&w], c.clone()))
                .collect();
            row.sort_by_key(|e| e.0);
            echelon.insert(row);
        }
        let id = self.pieces.len() as u32;
        for w in &words {
            self.word_piece.insert(w.clone(), id);
        }
        self.pieces.push(Piece { words, index, echelon });
        Ok(id)
    }

    /// Decides membership of `poly` in the ideal, component by component.
    pub fn is_member(&mut self, poly: &NCPoly<F>) -> Result<Membership<F>> {
        self.rels.alphabet.check(poly)?;
        let mut touched = BTreeSet::new();
        let mut witness = None;
        for (_, comp) in poly.components() {
            let mut by_piece: HashMap<u32, Vec<(Word, F)>> = HashMap::new();
            for (w, c) in comp.terms() {
                let id = self.build_piece(w)?;
                touched.insert(id);
                by_piece.entry(id).or_default().push((w.clone(), c.clone()));
            }
            if witness.is_some() {
                continue;
            }
            let mut ids: Vec<u32> = by_piece.keys().copied().collect();
            ids.sort_unstable();
            let mut rem = NCPoly::zero();
            for id in ids {
                let piece = &self.pieces[id as usize];
                let mut row: SparseRow<F> = by_piece[&id]
                    .iter()
                    .map(|(w, c)| (piece.index[w], c.clone()))
                    .collect();
                row.sort_by_key(|e| e.0);
                for (col, c) in piece.echelon.reduce(row) {
                    rem.add_term(piece.words[col as usize].clone(), c);
                }
            }
            if !rem.is_zero() {
                witness = Some(rem);
            }
        }
        let touched_words = touched.iter().map(|&i| self.pieces[i as usize].words.len()).sum();
        let touched_rank = touched.iter().map(|&i| self.pieces[i as usize].echelon.rank()).sum();
        Ok(Membership {
            verdict: match witness {
                None => Verdict::Member,
                Some(w) => Verdict::NonMember { witness: w },
            },
            touched_words,
            touched_rank,
        })
    }

    /// Number of words of weight `d` over the declared alphabet.
    pub fn word_count(&self, d: usize) -> u128 {
        let letters = self.rels.alphabet.letters();
        let mut counts = vec![0u128; d + 1];
        counts[0] = 1;
        for e in 1..=d {
            counts[e] = letters
                .iter()
                .filter(|l| l.weight() <= e)
                .map(|l| counts[e - l.weight()])
                .fold(0u128, |a, b| a.saturating_add(b));
        }
        counts[d]
    }

    /// Exact rank of the weight-`d` component, summed over all pieces; `None` above `limit` words.
    pub fn component_stats(&mut self, d: usize, limit: usize) -> Result<Option<ComponentStats>> {
        let total = self.word_count(d);
        if total > limit as u128 {
            return Ok(None);
        }
        let words = all_words(&self.rels.alphabet.letters(), d);
        let mut ids = BTreeSet::new();
        for w in &words {
            ids.insert(self.build_piece(w)?);
        }
        let rank = ids.iter().map(|&i| self.pieces[i as usize].echelon.rank()).sum();
        Ok(Some(ComponentStats {
            degree: d,
            words: words.len(),
            rank,
        }))
    }

    /// Pieces through the given probe words; `(words, rank)` summed.
    pub fn probe(&mut self, words: &[Word]) -> Result<(usize, usize)> {
        let mut ids = BTreeSet::new();
        for w in words {
            ids.insert(self.build_piece(w)?);
        }
        Ok(ids.iter().fold((0, 0), |(a, b), &i| {
            let p = &self.pieces[i as usize];
            (a + p.words.len(), b + p.echelon.rank())
        }))
    }
}

/// All words of weight exactly `d`.
pub fn all_words(letters: &[Letter], d: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(letters: &[Letter], left: usize, cur: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if left == 0 {
            out.push(Word::from_letters(cur));
            return;
        }
        for &l in letters {
            if l.weight() <= left {
                cur.push(l);
                rec(letters, left - l.weight(), cur, out);
                cur.pop();
            }
        }
    }
    rec(letters, d, &mut cur, &mut out);
    out.sort();
    out
}

/// The full weight-`d` linear span of `w r w'`, reduced over one global word basis.
#[derive(Debug, Clone)]
pub struct DegreeComponent<F> {
    pub degree: usize,
    pub words: Vec<Word>,
    index: HashMap<Word, u32>,
    pub echelon: Echelon<F>,
}

impl<F: Scalar> DegreeComponent<F> {
    /// Builds the component directly from every spanning vector, without the piece decomposition.
    pub fn build(rels: &RelationSet<F>, d: usize, guard_words: usize) -> Result<Self> {
        let engine = IdealEngine::with_guard(rels.clone(), guard_words);
        let count = engine.word_count(d);
        if count > guard_words as u128 {
            return Err(Error::GuardExceeded {
                words: count.min(usize::MAX as u128) as usize,
                limit: guard_words,
            });
        }
        let words = all_words(&rels.alphabet.letters(), d);
        let index: HashMap<Word, u32> = words.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
        let mut echelon = Echelon::new();
        for (ri, r) in rels.relations.iter().enumerate() {
            let rw = match r.poly.max_weight() {
                Some(x) if x <= d => x,
                _ => continue,
            };
            let _ = ri;
            for a in 0..=d - rw {
                for pre in all_words(&rels.alphabet.letters(), a) {
                    for suf in all_words(&rels.alphabet.letters(), d - rw - a) {
                        let mut row: SparseRow<F> = r
                            .poly
                            .terms()
                            .map(|(t, c)| (index[&pre.concat(t).concat(&suf)], c.clone()))
                            .collect();
                        row.sort_by_key(|e| e.0);
                        echelon.insert(row);
                    }
                }
            }
        }
        Ok(DegreeComponent {
            degree: d,
            words,
            index,
            echelon,
        })
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn is_member(&self, poly: &NCPoly<F>) -> Result<bool> {
        let mut row: SparseRow<F> = Vec::new();
        for (w, c) in poly.terms() {
            match self.index.get(w) {
                Some(&i) => row.push((i, c.clone())),
                None => {
                    return Err(Error::DimensionMismatch(format!(
                        "word {w} is not of weight {}",
                        self.degree
                    )))
                }
            }
        }
        row.sort_by_key(|e| e.0);
        Ok(self.echelon.reduce(row).iter().all(|e| e.1.is_zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::Family;
    use crate::ideal::{manin_relations, Provenance};
    use crate::scalar::{Fp61, Mode, ParameterAssignment};
    use proptest::prelude::*;

    fn rels(n: usize, m: usize, seed: u64) -> RelationSet<Fp61> {
        let a = ParameterAssignment::sample(n, m, Mode::Generic, seed).unwrap();
        manin_relations(n, m, &a).unwrap()
    }

    #[test]
    fn component_ranks() {
        let r11 = rels(1, 1, 0);
        for d in 2..5 {
            assert_eq!(DegreeComponent::build(&r11, d, 1000).unwrap().rank(), 0);
        }
        let r = rels(2, 2, 3);
        let c2 = DegreeComponent::build(&r, 2, 1000).unwrap();
        assert_eq!((c2.words.len(), c2.rank()), (16, 3));
        let c3 = DegreeComponent::build(&r, 3, 1000).unwrap();
        assert_eq!(c3.words.len(), 64);
        assert!(c3.rank() <= 24 && c3.rank() < 64);
        let mut e = IdealEngine::new(r.clone());
        assert_eq!(
            e.component_stats(3, 1000).unwrap().unwrap(),
            ComponentStats { degree: 3, words: 64, rank: c3.rank() }
        );
    }

    #[test]
    fn membership_examples() {
        let r = rels(2, 2, 5);
        let mut e = IdealEngine::new(r.clone());
        for p in r.polys() {
            assert!(e.is_member(p).unwrap().is_member());
        }
        let m1122 = NCPoly::<Fp61>::word(&[Letter::m(1, 1), Letter::m(2, 2)]);
        let res = e.is_member(&m1122).unwrap();
        assert!(!res.is_member());
        assert!(e.is_member(&NCPoly::zero()).unwrap().is_member());
        let foreign = NCPoly::<Fp61>::letter(Letter::n(1, 1));
        assert!(matches!(e.is_member(&foreign), Err(Error::ForeignLetter(_))));
    }

    #[test]
    fn guard_trips() {
        let r = rels(3, 3, 1);
        let mut e = IdealEngine::with_guard(r, 3);
        let w = NCPoly::<Fp61>::word(&[Letter::m(1, 1), Letter::m(2, 2), Letter::m(3, 3)]);
        assert!(matches!(e.is_member(&w), Err(Error::GuardExceeded { .. })));
    }

    #[test]
    fn weight_two_letters_count() {
        let mut rs = RelationSet::<Fp61>::new(crate::freealg::Alphabet::new().with(Family::M, 1, 1).with(Family::H, 1, 1));
        rs.push(
            NCPoly::word(&[Letter::m(1, 1), Letter::m(1, 1)]) - NCPoly::letter(Letter::h(1, 1)),
            Provenance::Custom,
        )
        .unwrap();
        let e = IdealEngine::new(rs);
        // weight 2: MM, H; weight 3: MMM, MH, HM
        assert_eq!(e.word_count(2), 2);
        assert_eq!(e.word_count(3), 3);
    }

    fn arb_word(max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
        prop::collection::vec((1usize..3, 1usize..3).prop_map(|(i, j)| Letter::m(i, j)), 0..=max_len)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn two_sided_closure(seed in 0u64..1000, ri in 0usize..3, pre in arb_word(2), suf in arb_word(2)) {
            let r = rels(2, 2, seed);
            let rel = r.relations[ri].poly.clone();
            let p = NCPoly::word(&pre).nc_mul(&rel).nc_mul(&NCPoly::word(&suf));
            let mut e = IdealEngine::new(r);
            prop_assert!(e.is_member(&p).unwrap().is_member());
        }

        #[test]
        fn pieces_agree_with_global_component(seed in 0u64..1000, coeffs in prop::collection::vec(0u64..4, 64)) {
            let r = rels(2, 2, seed);
            let comp = DegreeComponent::build(&r, 3, 1000).unwrap();
            // random combination of a few spanning vectors and a few words
            let mut p = NCPoly::<Fp61>::zero();
            for (i, &c) in coeffs.iter().enumerate().take(24) {
                if c == 0 { continue; }
                let rel = &r.relations[i % 3].poly;
                let l = Letter::m(1 + (i / 3) % 2, 1 + (i / 6) % 2);
                let t = if i % 2 == 0 { NCPoly::letter(l).nc_mul(rel) } else { rel.nc_mul(&NCPoly::letter(l)) };
                p.add_scaled(&t, &Fp61::new(c));
            }
            if coeffs[63] == 3 {
                p.add_term(comp.words[(coeffs[62] as usize * 17) % 64].clone(), Fp61::new(1));
            }
            let mut e = IdealEngine::new(r.clone());
            prop_assert_eq!(e.is_member(&p).unwrap().is_member(), comp.is_member(&p).unwrap());
        }

        #[test]
        fn rank_independent_of_relation_order(seed in 0u64..1000) {
            let r = rels(2, 3, seed);
            let mut rev = r.clone();
            rev.relations.reverse();
            let a = DegreeComponent::build(&r, 3, 10_000).unwrap().rank();
            let b = DegreeComponent::build(&rev, 3, 10_000).unwrap().rank();
            prop_assert_eq!(a, b);
        }
    }
}
