//! Exact rational sparse linear algebra: reduced row echelon form and
//! expression of vectors in a row space.
//!
//! Rows switch between a sorted sparse representation and a dense one when
//! fill-in exceeds half the column count. Pivoting picks the earliest column
//! and, among candidate rows, the one of smallest total bit size, which keeps
//! the small sparse relation systems small. All arithmetic is rational; there
//! is no rounding anywhere in this module.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::rational::{bit_size, Rational};

/// One row, sparse (sorted by column) or dense depending on fill-in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowVec {
    Sparse(Vec<(usize, Rational)>),
    Dense(Vec<Rational>),
}

impl RowVec {
    pub fn zero() -> Self {
        RowVec::Sparse(Vec::new())
    }

    /// Builds from (column, value) pairs; collisions add up, zeros drop out.
    pub fn from_entries(ncols: usize, entries: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut acc: Vec<(usize, Rational)> = Vec::new();
        for (col, val) in entries {
            assert!(col < ncols, "column index out of range");
            acc.push((col, val));
        }
        acc.sort_by_key(|(c, _)| *c);
        let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(acc.len());
        for (col, val) in acc {
            match merged.last_mut() {
                Some((c, v)) if *c == col => *v += val,
                _ => merged.push((col, val)),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        let mut row = RowVec::Sparse(merged);
        row.normalize_repr(ncols);
        row
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RowVec::Sparse(v) => v.is_empty(),
            RowVec::Dense(v) => v.iter().all(|x| x.is_zero()),
        }
    }

    pub fn nnz(&self) -> usize {
        match self {
            RowVec::Sparse(v) => v.len(),
            RowVec::Dense(v) => v.iter().filter(|x| !x.is_zero()).count(),
        }
    }

    /// Leading (smallest) nonzero column, if any.
    pub fn leading_col(&self) -> Option<usize> {
        match self {
            RowVec::Sparse(v) => v.first().map(|(c, _)| *c),
            RowVec::Dense(v) => v.iter().position(|x| !x.is_zero()),
        }
    }

    pub fn get(&self, col: usize) -> Rational {
        match self {
            RowVec::Sparse(v) => v
                .binary_search_by_key(&col, |(c, _)| *c)
                .map(|i| v[i].1.clone())
                .unwrap_or_else(|_| Rational::zero()),
            RowVec::Dense(v) => v.get(col).cloned().unwrap_or_else(Rational::zero),
        }
    }

    /// Nonzero entries in column order.
    pub fn entries(&self) -> Vec<(usize, Rational)> {
        match self {
            RowVec::Sparse(v) => v.clone(),
            RowVec::Dense(v) => v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(c, x)| (c, x.clone()))
                .collect(),
        }
    }

    pub fn scale(&mut self, by: &Rational) {
        assert!(!by.is_zero());
        match self {
            RowVec::Sparse(v) => v.iter_mut().for_each(|(_, x)| *x *= by),
            RowVec::Dense(v) => v.iter_mut().for_each(|x| {
                if !x.is_zero() {
                    *x *= by;
                }
            }),
        }
    }

    /// `self += coeff * other`.
    pub fn axpy(&mut self, coeff: &Rational, other: &RowVec, ncols: usize) {
        if coeff.is_zero() || other.is_zero() {
            return;
        }
        match self {
            RowVec::Dense(dst) => {
                for (col, val) in other.entries() {
                    dst[col] += coeff * val;
                }
            }
            RowVec::Sparse(dst) => {
                let mut out: Vec<(usize, Rational)> = Vec::with_capacity(dst.len() + other.nnz());
                let mut a = dst.iter().peekable();
                let mut b = other.entries().into_iter().peekable();
                loop {
                    match (a.peek(), b.peek()) {
                        (Some((ca, _)), Some((cb, _))) if ca < cb => {
                            let (c, v) = a.next().unwrap();
                            out.push((*c, v.clone()));
                        }
                        (Some((ca, _)), Some((cb, _))) if ca > cb => {
                            let (c, v) = b.next().unwrap();
                            out.push((c, coeff * v));
                        }
                        (Some(_), Some(_)) => {
                            let (c, va) = a.next().unwrap();
                            let (_, vb) = b.next().unwrap();
                            let v = va + coeff * vb;
                            if !v.is_zero() {
                                out.push((*c, v));
                            }
                        }
                        (Some(_), None) => {
                            let (c, v) = a.next().unwrap();
                            out.push((*c, v.clone()));
                        }
                        (None, Some(_)) => {
                            let (c, v) = b.next().unwrap();
                            out.push((c, coeff * v));
                        }
                        (None, None) => break,
                    }
                }
                *dst = out;
            }
        }
        self.normalize_repr(ncols);
    }

    /// Total bit size of all entries, the pivot-selection measure.
    pub fn total_bits(&self) -> u64 {
        self.entries().iter().map(|(_, v)| bit_size(v)).sum()
    }

    /// Dense fallback when fill-in exceeds 50% of the row; back to sparse
    /// when it recedes.
    fn normalize_repr(&mut self, ncols: usize) {
        let nnz = self.nnz();
        match self {
            RowVec::Sparse(v) if ncols > 0 && nnz * 2 > ncols => {
                let mut dense = vec![Rational::zero(); ncols];
                for (c, x) in v.drain(..) {
                    dense[c] = x;
                }
                *self = RowVec::Dense(dense);
            }
            RowVec::Dense(v) if nnz * 2 <= ncols => {
                let sparse = v
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(c, x)| (c, x.clone()))
                    .collect();
                *self = RowVec::Sparse(sparse);
            }
            _ => {}
        }
    }
}

/// A list of rows over a fixed column count. Column labels (words or index
/// forms) are kept by the caller.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    ncols: usize,
    rows: Vec<RowVec>,
}

impl SparseMatrix {
    pub fn new(ncols: usize) -> Self {
        SparseMatrix { ncols, rows: Vec::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[RowVec] {
        &self.rows
    }

    pub fn push_row(&mut self, row: RowVec) {
        if !row.is_zero() {
            self.rows.push(row);
        }
    }

    pub fn push_entries(&mut self, entries: impl IntoIterator<Item = (usize, Rational)>) {
        self.push_row(RowVec::from_entries(self.ncols, entries));
    }
}

/// The result of [`rref`]: rank, pivot columns in order, and the reduced rows
/// (row `i` is monic with leading column `pivots[i]` and zeros in every other
/// pivot column).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub rows: SparseMatrix,
}

/// Reduced row echelon form over the rationals.
pub fn rref(m: &SparseMatrix) -> Rref {
    let ncols = m.ncols;
    let mut work: Vec<RowVec> = m.rows.iter().filter(|r| !r.is_zero()).cloned().collect();
    let mut done: Vec<RowVec> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();

    loop {
        // Earliest leading column among the remaining rows, then the row of
        // smallest total bit size with that leading column.
        let mut best: Option<(usize, usize, u64)> = None;
        for (i, row) in work.iter().enumerate() {
            let col = row.leading_col().expect("zero rows are dropped eagerly");
            let bits = row.total_bits();
            let better = match best {
                None => true,
                Some((_, bcol, bbits)) => col < bcol || (col == bcol && bits < bbits),
            };
            if better {
                best = Some((i, col, bits));
            }
        }
        let Some((idx, col, _)) = best else { break };
        let mut pivot = work.swap_remove(idx);
        let inv = pivot.get(col).recip();
        if !inv.is_one() {
            pivot.scale(&inv);
        }
        // Eliminate from every other row.
        for row in work.iter_mut() {
            let c = row.get(col);
            if !c.is_zero() {
                row.axpy(&-c, &pivot, ncols);
            }
        }
        work.retain(|r| !r.is_zero());
        for row in done.iter_mut() {
            let c = row.get(col);
            if !c.is_zero() {
                row.axpy(&-c, &pivot, ncols);
            }
        }
        done.push(pivot);
        pivots.push(col);
    }

    // Rows in pivot-column order.
    let mut order: Vec<usize> = (0..done.len()).collect();
    order.sort_by_key(|&i| pivots[i]);
    let rows = order.iter().map(|&i| done[i].clone()).collect::<Vec<_>>();
    pivots.sort_unstable();
    Rref {
        rank: rows.len(),
        pivots,
        rows: SparseMatrix { ncols, rows },
    }
}

/// Expresses `v` as an exact linear combination of the reduced rows, or
/// reports that it introduces a new direction.
pub fn express(v: &RowVec, reduced: &Rref) -> Option<Vec<Rational>> {
    let ncols = reduced.rows.ncols;
    let mut rest = v.clone();
    let mut coeffs = Vec::with_capacity(reduced.rank);
    for (row, &pivot_col) in reduced.rows.rows.iter().zip(reduced.pivots.iter()) {
        let c = rest.get(pivot_col);
        if !c.is_zero() {
            rest.axpy(&-c.clone(), row, ncols);
        }
        coeffs.push(c);
    }
    rest.is_zero().then_some(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_int};
    use proptest::prelude::*;

    fn mat(ncols: usize, rows: &[&[(usize, i64)]]) -> SparseMatrix {
        let mut m = SparseMatrix::new(ncols);
        for r in rows {
            m.push_entries(r.iter().map(|&(c, v)| (c, q_int(v))));
        }
        m
    }

    #[test]
    fn identity_is_fixed() {
        let m = mat(3, &[&[(0, 1)], &[(1, 1)], &[(2, 1)]]);
        let r = rref(&m);
        assert_eq!(r.rank, 3);
        assert_eq!(r.pivots, vec![0, 1, 2]);
        assert_eq!(r.rows, m);
    }

    #[test]
    fn single_row_scales_monic() {
        let m = mat(2, &[&[(0, 2), (1, 4)]]);
        let r = rref(&m);
        assert_eq!(r.rank, 1);
        assert_eq!(r.rows.rows()[0].entries(), vec![(0, q_int(1)), (1, q_int(2))]);
    }

    #[test]
    fn dependent_row_drops_rank() {
        // third row = first - second
        let m = mat(
            3,
            &[&[(0, 1), (1, 1)], &[(1, 1), (2, 1)], &[(0, 1), (2, -1)]],
        );
        assert_eq!(rref(&m).rank, 2);
    }

    #[test]
    fn express_examples() {
        let m = mat(3, &[&[(0, 1), (2, 1)], &[(1, 1), (2, -1)]]);
        let r = rref(&m);
        let row0 = r.rows.rows()[0].clone();
        assert_eq!(express(&row0, &r), Some(vec![q_int(1), q_int(0)]));
        assert_eq!(express(&RowVec::zero(), &r), Some(vec![q_int(0), q_int(0)]));
        let mut combo = RowVec::zero();
        combo.axpy(&q_int(2), &r.rows.rows()[0], 3);
        combo.axpy(&q_int(-3), &r.rows.rows()[1], 3);
        assert_eq!(express(&combo, &r), Some(vec![q_int(2), q_int(-3)]));
        // Outside the span.
        let v = RowVec::from_entries(3, [(0, q_int(1))]);
        assert_eq!(express(&v, &r), None);
    }

    #[test]
    fn dense_fallback_round_trip() {
        let mut row = RowVec::from_entries(4, [(0, q_int(1))]);
        assert!(matches!(row, RowVec::Sparse(_)));
        row.axpy(
            &q_int(1),
            &RowVec::from_entries(4, [(1, q_int(1)), (2, q_int(1))]),
            4,
        );
        assert!(matches!(row, RowVec::Dense(_)), "fill-in 3/4 goes dense");
        row.axpy(
            &q_int(-1),
            &RowVec::from_entries(4, [(1, q_int(1)), (2, q_int(1))]),
            4,
        );
        assert!(matches!(row, RowVec::Sparse(_)), "back to sparse at 1/4");
        assert_eq!(row.entries(), vec![(0, q_int(1))]);
    }

    #[test]
    fn fractional_entries_stay_exact() {
        let mut m = SparseMatrix::new(2);
        m.push_entries([(0, q(1, 3)), (1, q(1, 7))]);
        let r = rref(&m);
        assert_eq!(r.rows.rows()[0].entries(), vec![(0, q_int(1)), (1, q(3, 7))]);
    }

    fn arb_matrix() -> impl Strategy<Value = SparseMatrix> {
        (1usize..6, 1usize..7).prop_flat_map(|(ncols, nrows)| {
            prop::collection::vec(
                prop::collection::vec((-4i64..5).prop_map(q_int), ncols),
                nrows,
            )
            .prop_map(move |rows| {
                let mut m = SparseMatrix::new(ncols);
                for r in rows {
                    m.push_entries(r.into_iter().enumerate());
                }
                m
            })
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(m in arb_matrix()) {
            let r = rref(&m);
            let again = rref(&r.rows);
            prop_assert_eq!(r.rank, again.rank);
            prop_assert_eq!(&r.pivots, &again.pivots);
            prop_assert_eq!(&r.rows, &again.rows);
        }

        #[test]
        fn row_space_is_preserved(m in arb_matrix()) {
            let r = rref(&m);
            // Every original row lies in the span of the reduced rows...
            for row in m.rows() {
                prop_assert!(express(row, &r).is_some());
            }
            // ...and every reduced row lies in the span of the original rows.
            for row in r.rows.rows() {
                prop_assert!(express(row, &r).is_some());
            }
        }

        #[test]
        fn express_recovers_combinations(m in arb_matrix(), c0 in -3i64..4, c1 in -3i64..4) {
            let r = rref(&m);
            if r.rank >= 2 {
                let mut v = RowVec::zero();
                v.axpy(&q_int(c0), &r.rows.rows()[0], m.ncols());
                v.axpy(&q_int(c1), &r.rows.rows()[1], m.ncols());
                let coeffs = express(&v, &r).unwrap();
                prop_assert_eq!(&coeffs[0], &q_int(c0));
                prop_assert_eq!(&coeffs[1], &q_int(c1));
                for c in &coeffs[2..] {
                    prop_assert!(c.is_zero());
                }
            }
        }
    }
}
