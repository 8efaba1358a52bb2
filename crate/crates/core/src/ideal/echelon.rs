use std::collections::HashMap;

use crate::scalar::Scalar;

/// Sparse row: strictly increasing column ids with nonzero coefficients.
pub type SparseRow<F> = Vec<(u32, F)>;

/// Row-echelon basis with normalized pivots; the pivot of a row is its smallest column.
#[derive(Debug, Clone)]
pub struct Echelon<F> {
    rows: Vec<SparseRow<F>>,
    pivot_of: HashMap<u32, usize>,
}

impl<F: Scalar> Default for Echelon<F> {
    fn default() -> Self {
        Self::new()
    }
}

/// `a[k..] - c * b`, assuming every column of `b` is at least `a[k].0`.
fn sub_scaled_tail<F: Scalar>(a: &mut SparseRow<F>, k: usize, b: &SparseRow<F>, c: &F) {
    let tail = a.split_off(k);
    let mut out = Vec::with_capacity(tail.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < tail.len() || j < b.len() {
        let take_a = j >= b.len() || (i < tail.len() && tail[i].0 < b[j].0);
        let take_b = i >= tail.len() || (j < b.len() && b[j].0 < tail[i].0);
        if take_a {
            out.push(tail[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -(c.clone() * b[j].1.clone())));
            j += 1;
        } else {
            let v = tail[i].1.clone() - c.clone() * b[j].1.clone();
            if !v.is_zero() {
                out.push((tail[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    a.extend(out);
}

impl<F: Scalar> Echelon<F> {
    pub fn new() -> Self {
        Echelon {
            rows: Vec::new(),
            pivot_of: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseRow<F>] {
        &self.rows
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = u32> + '_ {
        self.rows.iter().map(|r| r[0].0)
    }

    /// Reduces `row` to its normal form: the result has no entry in a pivot column.
    pub fn reduce(&self, mut row: SparseRow<F>) -> SparseRow<F> {
        let mut k = 0;
        while k < row.len() {
            match self.pivot_of.get(&row[k].0) {
                Some(&r) => {
                    let c = row[k].1.clone();
                    sub_scaled_tail(&mut row, k, &self.rows[r], &c);
                }
                None => k += 1,
            }
        }
        row
    }

    /// Adds `row` to the span; returns whether the rank grew.
    pub fn insert(&mut self, row: SparseRow<F>) -> bool {
        let mut row = row;
        loop {
            if row.is_empty() {
                return false;
            }
            match self.pivot_of.get(&row[0].0) {
                Some(&r) => {
                    let c = row[0].1.clone();
                    sub_scaled_tail(&mut row, 0, &self.rows[r], &c);
                }
                None => break,
            }
        }
        let lead_inv = row[0].1.try_inv().expect("nonzero lead");
        if !lead_inv.is_one() {
            for e in row.iter_mut() {
                e.1 = e.1.clone() * lead_inv.clone();
            }
        }
        self.pivot_of.insert(row[0].0, self.rows.len());
        self.rows.push(row);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::scalar::{Fp61, Q};
    use proptest::prelude::*;

    fn f(v: i64) -> Fp61 {
        Fp61::from_i64(v)
    }

    #[test]
    fn small_rank() {
        let mut e = Echelon::new();
        assert!(e.insert(vec![(0, f(1)), (1, f(2))]));
        assert!(e.insert(vec![(1, f(1)), (2, f(1))]));
        assert!(!e.insert(vec![(0, f(2)), (1, f(5)), (2, f(1))]));
        assert_eq!(e.rank(), 2);
        assert!(e.reduce(vec![(0, f(1)), (1, f(3)), (2, f(1))]).is_empty());
        assert_eq!(e.reduce(vec![(2, f(7))]), vec![(2, f(7))]);
    }

    #[test]
    fn rational_elimination() {
        let q = |a: i64, b: i64| Q::new(a.into(), b.into());
        let mut e = Echelon::new();
        e.insert(vec![(0, q(2, 3)), (1, q(1, 1))]);
        let r = e.reduce(vec![(0, q(1, 1))]);
        assert_eq!(r, vec![(1, q(-3, 2))]);
    }

    fn dense_rank(rows: &[Vec<i64>], cols: usize) -> usize {
        let mut m: Vec<Vec<Fp61>> = rows.iter().map(|r| r.iter().map(|&x| f(x)).collect()).collect();
        let mut rank = 0;
        for c in 0..cols {
            if let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) {
                m.swap(rank, p);
                let inv = m[rank][c].try_inv().unwrap();
                for r in 0..m.len() {
                    if r != rank && !m[r][c].is_zero() {
                        let k = m[r][c] * inv;
                        for cc in 0..cols {
                            let v = m[rank][cc];
                            m[r][cc] = m[r][cc] - k * v;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    proptest! {
        #[test]
        fn rank_matches_dense_oracle(rows in prop::collection::vec(prop::collection::vec(-2i64..3, 6), 0..8)) {
            let mut e = Echelon::new();
            for r in &rows {
                let sparse: SparseRow<Fp61> = r.iter().enumerate()
                    .filter(|(_, &x)| x != 0).map(|(i, &x)| (i as u32, f(x))).collect();
                e.insert(sparse);
            }
            prop_assert_eq!(e.rank(), dense_rank(&rows, 6));
        }

        #[test]
        fn rank_invariant_under_row_permutation(rows in prop::collection::vec(prop::collection::vec(-2i64..3, 5), 0..7)) {
            let build = |rs: &[Vec<i64>]| {
                let mut e = Echelon::new();
                for r in rs {
                    e.insert(r.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i as u32, f(x))).collect());
                }
                e.rank()
            };
            let mut rev = rows.clone();
            rev.reverse();
            prop_assert_eq!(build(&rows), build(&rev));
        }
    }
}
