//! Regularized double-shuffle relation systems, per-weight reduction tables,
//! and dimension upper bounds.
//!
//! Two relation families are generated per weight:
//!
//! * shuffle−stuffle differences `ζ_{u⧢v} − ζ_{u∗v}` for all convergent word
//!   pairs of total weight `w`, and
//! * the regularized family `ζ(e₁⧢w − e₁∗w) = 0` over convergent `w` of
//!   weight `w − 1`, in which every divergent index cancels symbolically
//!   before storage (this is checked, not assumed), with `ζ(1) = 0`.
//!
//! Row reduction of the resulting system yields a [`ReductionTable`]: an
//! ordered basis (chosen greedily preferring low depth, then
//! lexicographically small exponent strings) together with the exact
//! expansion of every convergent index of that weight in the basis.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::One;

use crate::linalg::{rref, SparseMatrix};
use crate::rational::Rational;
use crate::word::{
    convergent_indexes, index_of_word, shuffle, stuffle, word_of_index, Graded, Letter, MzvIndex,
    QLinComb, Word, WordError,
};

/// Errors from relation generation and reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationError {
    /// A divergent index reached [`reduce`]; regularize first.
    DivergentSymbol(MzvIndex),
    /// No table covers this weight/level.
    MissingTable { level: u8, weight: u32 },
    /// Underlying word-algebra failure.
    Word(WordError),
    /// Divergent terms failed to cancel in the regularized family.
    ResidualDivergence,
}

impl fmt::Display for RelationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationError::DivergentSymbol(p) => {
                write!(f, "divergent symbol {p}; regularize first")
            }
            RelationError::MissingTable { level, weight } => {
                write!(f, "no reduction table for level {level}, weight {weight}")
            }
            RelationError::Word(e) => write!(f, "{e}"),
            RelationError::ResidualDivergence => {
                write!(f, "divergent terms did not cancel in a regularized relation")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for RelationError {}

impl From<WordError> for RelationError {
    fn from(e: WordError) -> Self {
        RelationError::Word(e)
    }
}

/// The double-shuffle relation system of one weight: a list of rational
/// combinations of convergent indexes that are each identically zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSet {
    pub weight: u32,
    pub level: u8,
    pub relations: Vec<QLinComb<MzvIndex>>,
}

/// All convergent MZV words of a given weight: first letter a root, last
/// letter not `root 0`.
pub fn convergent_words(weight: u32, level: u8) -> Vec<Word> {
    convergent_indexes(weight, level)
        .into_iter()
        .map(|p| word_of_index(&p).1)
        .collect()
}

fn word_side(u: &Word, v: &Word) -> Result<QLinComb<MzvIndex>, WordError> {
    // ζ_{u⧢v} expressed over indexes. Shuffle preserves total depth, so the
    // conversion signs (-1)^depth are constant across terms and cancel
    // against the product sign (-1)^{d_u+d_v}.
    let mut out = QLinComb::zero();
    for (word, c) in shuffle(u, v)?.iter() {
        let (_, idx) = index_of_word(word)?;
        out.add_term(idx, c.clone());
    }
    Ok(out)
}

/// The regularized double-shuffle relation system at the given weight.
///
/// Weights below two have no relations.
pub fn generate_relations(weight: u32, level: u8) -> Result<RelationSet, RelationError> {
    let mut relations = Vec::new();
    if weight >= 2 {
        // (a) ζ_{u⧢v} = ζ_{u∗v} over convergent pairs.
        for wu in 2..=weight / 2 {
            let wv = weight - wu;
            let us = convergent_words(wu, level);
            let vs = convergent_words(wv, level);
            for (i, u) in us.iter().enumerate() {
                let vs_slice: &[Word] = if wu == wv { &vs[i..] } else { &vs[..] };
                for v in vs_slice {
                    let (_, p) = index_of_word(u)?;
                    let (_, q) = index_of_word(v)?;
                    let rel = word_side(u, v)?.sub(&stuffle(&p, &q)?);
                    push_relation(&mut relations, rel, weight)?;
                }
            }
        }
        // (b) ζ(e₁ ⧢ w − e₁ ∗ w) = 0 over convergent w of weight − 1; the
        // divergent indexes must cancel between the two sides.
        let e1 = Word::new(level, alloc::vec![Letter::Root(0)]).expect("valid letter");
        let zeta1 = index_of_word(&e1)?.1;
        for w in convergent_words(weight - 1, level) {
            let (_, p) = index_of_word(&w)?;
            let rel = word_side(&e1, &w)?.sub(&stuffle(&zeta1, &p)?);
            push_relation(&mut relations, rel, weight)?;
        }
    }
    Ok(RelationSet { weight, level, relations })
}

fn push_relation(
    relations: &mut Vec<QLinComb<MzvIndex>>,
    rel: QLinComb<MzvIndex>,
    weight: u32,
) -> Result<(), RelationError> {
    if rel.is_zero() {
        return Ok(());
    }
    debug_assert_eq!(rel.homogeneous_weight(), Some(weight));
    if rel.iter().any(|(p, _)| !p.is_convergent()) {
        return Err(RelationError::ResidualDivergence);
    }
    relations.push(rel);
    Ok(())
}

/// Per-weight basis of convergent indexes and the exact expansion of every
/// convergent index of that weight in the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTable {
    pub weight: u32,
    pub level: u8,
    /// Ordered basis, most preferred first (low depth, then small exponents).
    pub basis: Vec<MzvIndex>,
    /// For every convergent index: coefficients on `basis` positions.
    pub rows: BTreeMap<MzvIndex, Vec<(usize, Rational)>>,
}

impl ReductionTable {
    /// The expansion of one index in the basis.
    pub fn row(&self, p: &MzvIndex) -> Option<&[(usize, Rational)]> {
        self.rows.get(p).map(|v| v.as_slice())
    }
}

/// Preference order for basis elements: low depth first, then
/// lexicographically small exponent strings, then twists.
fn basis_preference(a: &MzvIndex, b: &MzvIndex) -> core::cmp::Ordering {
    a.depth()
        .cmp(&b.depth())
        .then_with(|| a.exponents().cmp(b.exponents()))
        .then_with(|| a.twists().cmp(b.twists()))
}

/// Builds the reduction table of one weight from the double-shuffle system.
pub fn build_table(weight: u32, level: u8) -> Result<ReductionTable, RelationError> {
    let relset = generate_relations(weight, level)?;
    let mut columns = convergent_indexes(weight, level);
    // Most preferred basis candidates go last so that elimination consumes
    // the least preferred columns as pivots and leaves the preferred ones
    // free.
    columns.sort_by(basis_preference);
    columns.reverse();
    let col_of: BTreeMap<&MzvIndex, usize> =
        columns.iter().enumerate().map(|(i, p)| (p, i)).collect();

    let mut matrix = SparseMatrix::new(columns.len());
    for rel in &relset.relations {
        matrix.push_entries(rel.iter().map(|(p, c)| (col_of[p], c.clone())));
    }
    let reduced = rref(&matrix);

    let pivot_set: BTreeMap<usize, usize> = reduced
        .pivots
        .iter()
        .enumerate()
        .map(|(row, &col)| (col, row))
        .collect();
    let mut basis: Vec<MzvIndex> = columns
        .iter()
        .enumerate()
        .filter(|(i, _)| !pivot_set.contains_key(i))
        .map(|(_, p)| p.clone())
        .collect();
    basis.sort_by(basis_preference);
    let basis_pos: BTreeMap<&MzvIndex, usize> =
        basis.iter().enumerate().map(|(i, p)| (p, i)).collect();

    let mut rows = BTreeMap::new();
    for (i, p) in columns.iter().enumerate() {
        let expansion: Vec<(usize, Rational)> = match pivot_set.get(&i) {
            None => alloc::vec![(basis_pos[p], Rational::one())],
            Some(&rrow) => {
                // Row reads: pivot + Σ c_j · basis_j = 0.
                let mut e: Vec<(usize, Rational)> = reduced.rows.rows()[rrow]
                    .entries()
                    .into_iter()
                    .filter(|(col, _)| *col != i)
                    .map(|(col, c)| (basis_pos[&columns[col]], -c))
                    .collect();
                e.sort_by_key(|(pos, _)| *pos);
                e
            }
        };
        rows.insert(p.clone(), expansion);
    }
    Ok(ReductionTable { weight, level, basis, rows })
}

/// A set of reduction tables keyed by level and weight.
#[derive(Clone, Debug, Default)]
pub struct TableSet {
    tables: BTreeMap<(u8, u32), ReductionTable>,
}

impl TableSet {
    pub fn new() -> Self {
        TableSet { tables: BTreeMap::new() }
    }

    pub fn insert(&mut self, table: ReductionTable) {
        self.tables.insert((table.level, table.weight), table);
    }

    pub fn get(&self, level: u8, weight: u32) -> Option<&ReductionTable> {
        self.tables.get(&(level, weight))
    }

    pub fn iter(&self) -> impl Iterator<Item = &ReductionTable> {
        self.tables.values()
    }

    /// Fetches or builds the table for one level and weight.
    pub fn ensure(&mut self, level: u8, weight: u32) -> Result<&ReductionTable, RelationError> {
        if !self.tables.contains_key(&(level, weight)) {
            self.insert(build_table(weight, level)?);
        }
        Ok(&self.tables[&(level, weight)])
    }
}

/// Rewrites a combination of convergent indexes over basis elements only.
///
/// Indexes of different weights may be mixed; each is reduced through its own
/// weight's table. Divergent indexes are rejected.
pub fn reduce(
    expr: &QLinComb<MzvIndex>,
    tables: &TableSet,
) -> Result<QLinComb<MzvIndex>, RelationError> {
    let mut out = QLinComb::zero();
    for (p, c) in expr.iter() {
        if !p.is_convergent() {
            return Err(RelationError::DivergentSymbol(p.clone()));
        }
        if p.depth() == 0 {
            out.add_term(p.clone(), c.clone());
            continue;
        }
        let table = tables
            .get(p.level(), p.weight())
            .ok_or(RelationError::MissingTable { level: p.level(), weight: p.weight() })?;
        let row = table
            .row(p)
            .ok_or(RelationError::MissingTable { level: p.level(), weight: p.weight() })?;
        for (pos, coeff) in row {
            out.add_term(table.basis[*pos].clone(), c * coeff);
        }
    }
    Ok(out)
}

/// Upper bounds for the dimension of the weight-`n` span of convergent
/// indexes: entry `n` is the basis size of the weight-`n` table
/// (`entry[0] = 1` for the empty index).
pub fn dims_upper_bound(max_weight: u32, level: u8) -> Result<Vec<usize>, RelationError> {
    let mut out = Vec::with_capacity(max_weight as usize + 1);
    out.push(1);
    for w in 1..=max_weight {
        out.push(build_table(w, level)?.basis.len());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_int};

    fn zeta(e: &[u32]) -> MzvIndex {
        MzvIndex::zeta(e)
    }

    #[test]
    fn weight_two_has_no_relations() {
        assert!(generate_relations(2, 1).unwrap().relations.is_empty());
        assert!(generate_relations(1, 1).unwrap().relations.is_empty());
    }

    #[test]
    fn weight_three_hoffman_gives_euler_relation() {
        let set = generate_relations(3, 1).unwrap();
        // ζ(1,2) − ζ(3) = 0, up to scale, must be among the relations.
        let mut expected = QLinComb::single(zeta(&[1, 2]));
        expected.add_term(zeta(&[3]), q_int(-1));
        assert!(
            set.relations
                .iter()
                .any(|r| r == &expected || r == &expected.scale(&q_int(-1))),
            "relations: {:?}",
            set.relations
        );
    }

    #[test]
    fn euler_family_from_hoffman_words() {
        // e₁ ⧢ w − e₁ ∗ w with w = word of ζ(n) gives
        // Σ_{i=1}^{n-1} ζ(i, n+1-i) − ζ(n+1) = 0.
        for n in 2..=5u32 {
            let e1 = Word::parse("1", 1).unwrap();
            let w = word_of_index(&zeta(&[n])).1;
            let (_, p) = index_of_word(&w).unwrap();
            let rel = word_side(&e1, &w)
                .unwrap()
                .sub(&stuffle(&zeta(&[1]), &p).unwrap());
            let mut expected = QLinComb::zero();
            for i in 1..n {
                expected.add_term(zeta(&[i, n + 1 - i]), q_int(1));
            }
            expected.add_term(zeta(&[n + 1]), q_int(-1));
            assert_eq!(rel, expected, "n = {n}");
        }
    }

    #[test]
    fn divergent_terms_always_cancel() {
        for level in [1u8, 2] {
            for weight in 2..=6u32 {
                // generate_relations errors if a divergent index survives.
                generate_relations(weight, level).unwrap();
            }
        }
    }

    #[test]
    fn weight_four_table_collapses_to_one_symbol() {
        let t = build_table(4, 1).unwrap();
        assert_eq!(t.basis.len(), 1);
        assert_eq!(t.basis[0], zeta(&[4]));
        // ζ(2,2) = (3/4) ζ(4) and ζ(1,3) = (1/4) ζ(4); every convergent
        // weight-4 index is an integer multiple of ζ(1,3).
        assert_eq!(t.row(&zeta(&[2, 2])).unwrap(), &[(0, q(3, 4))]);
        assert_eq!(t.row(&zeta(&[1, 3])).unwrap(), &[(0, q(1, 4))]);
        assert_eq!(t.row(&zeta(&[1, 1, 2])).unwrap(), &[(0, q_int(1))]);
        for (p, row) in &t.rows {
            let ratio = &row[0].1 / q(1, 4);
            assert!(ratio.is_integer(), "{p} is not an integer multiple of zeta(1,3)");
        }
    }

    #[test]
    fn weight_three_reduces_euler() {
        let mut tables = TableSet::new();
        tables.ensure(1, 3).unwrap();
        let reduced = reduce(&QLinComb::single(zeta(&[1, 2])), &tables).unwrap();
        assert_eq!(reduced, QLinComb::single(zeta(&[3])));
    }

    #[test]
    fn reduce_is_idempotent_and_fixes_basis() {
        let mut tables = TableSet::new();
        for w in 2..=6 {
            tables.ensure(1, w).unwrap();
        }
        for w in 4..=6u32 {
            for p in convergent_indexes(w, 1) {
                let once = reduce(&QLinComb::single(p.clone()), &tables).unwrap();
                let twice = reduce(&once, &tables).unwrap();
                assert_eq!(once, twice);
            }
        }
        // A basis element reduces to itself.
        let t = tables.get(1, 5).unwrap();
        for b in &t.basis {
            assert_eq!(
                reduce(&QLinComb::single(b.clone()), &tables).unwrap(),
                QLinComb::single(b.clone())
            );
        }
    }

    #[test]
    fn reduce_rejects_divergent() {
        let tables = TableSet::new();
        let err = reduce(&QLinComb::single(zeta(&[2, 1])), &tables).unwrap_err();
        assert!(matches!(err, RelationError::DivergentSymbol(_)));
    }

    #[test]
    fn zeta_two_squared_reduces() {
        // stuffle(ζ(2), ζ(2)) = 2 ζ(2,2) + ζ(4) → (5/2) ζ(4).
        let mut tables = TableSet::new();
        tables.ensure(1, 4).unwrap();
        let prod = stuffle(&zeta(&[2]), &zeta(&[2])).unwrap();
        let reduced = reduce(&prod, &tables).unwrap();
        assert_eq!(reduced, QLinComb::from_term(zeta(&[4]), q(5, 2)));
    }

    #[test]
    fn expansions_kill_every_relation() {
        // Substituting each table row back into each relation yields zero.
        for level in [1u8, 2] {
            for weight in 3..=5u32 {
                let t = build_table(weight, level).unwrap();
                let set = generate_relations(weight, level).unwrap();
                for rel in &set.relations {
                    let mut acc: QLinComb<MzvIndex> = QLinComb::zero();
                    for (p, c) in rel.iter() {
                        for (pos, coeff) in t.row(p).unwrap() {
                            acc.add_term(t.basis[*pos].clone(), c * coeff);
                        }
                    }
                    assert!(acc.is_zero(), "level {level} weight {weight}: {rel}");
                }
            }
        }
    }

    #[test]
    fn dims_match_zagier_numbers_to_ten() {
        // The table sizes must realize 1, 0, 1, 1, 1, 2, 2, 3, 4, 5, 7.
        let dims = dims_upper_bound(10, 1).unwrap();
        assert_eq!(dims, alloc::vec![1, 0, 1, 1, 1, 2, 2, 3, 4, 5, 7]);
    }

    #[test]
    fn low_depth_basis_preference() {
        // Depth-1 ζ(n) is preferred wherever rank permits.
        for w in [4u32, 5, 6, 7] {
            let t = build_table(w, 1).unwrap();
            assert_eq!(t.basis[0], zeta(&[w]), "weight {w}");
        }
    }

    #[test]
    fn level_two_small_tables() {
        // Weight 1: only φ(1) converges, no relations → dimension 1.
        let t = build_table(1, 2).unwrap();
        assert_eq!(t.basis.len(), 1);
        assert_eq!(t.basis[0], MzvIndex::phi(&[1]));
        let t2 = build_table(2, 2).unwrap();
        assert!(t2.basis.len() >= 2, "level-2 weight-2 span is at least two-dimensional");
    }
}
