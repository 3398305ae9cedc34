//! Letters, words, index forms, and the two commutative products.
//!
//! A [`Word`] is a finite sequence of letters over `{0} ∪ {λ^r : 0 ≤ r < N}`
//! where `λ` is a primitive `N`-th root of unity; levels `N = 1` (letters
//! `{0, 1}`) and `N = 2` (letters `{0, 1, -1}`) are supported. Concatenation
//! reads left to right with new letters appended on the right, so the *last*
//! letter governs the outermost integration of the associated iterated
//! integral.
//!
//! An [`MzvIndex`] is the dual encoding `(n_1,…,n_d; ε_1,…,ε_d)` of the same
//! object as a nested sum `Σ_{0<k_1<…<k_d} Π ε_i^{k_i} k_i^{-n_i}`; twists
//! `ε_i` are stored as root indices mod `N`.
//!
//! The two products:
//!
//! * [`shuffle`] interleaves words: `au ⧢ bv = a(u ⧢ bv) + b(au ⧢ v)`,
//!   with the empty word as unit.
//! * [`stuffle`] merges index forms from the outermost entry inward,
//!   adding exponents and multiplying twists on collision.
//!
//! Both are commutative and associative and grade by weight; shuffle also
//! preserves total depth exactly, while stuffle only filters it.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::rational::{format_q, Rational};

/// A single letter: the puncture `0` or a root of unity `λ^r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// The letter at `σ = 0`.
    Zero,
    /// The letter at `σ = λ^r`; at level 1 only `Root(0) = 1`, at level 2
    /// `Root(0) = 1` and `Root(1) = -1`.
    Root(u8),
}

impl Letter {
    /// `true` for a root-of-unity letter.
    pub fn is_root(self) -> bool {
        matches!(self, Letter::Root(_))
    }
}

/// The supported alphabets: `level ∈ {1, 2}`, letter set `{0} ∪ {λ^r}` of
/// `N + 1` elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Alphabet {
    level: u8,
}

impl Alphabet {
    pub fn new(level: u8) -> Result<Self, WordError> {
        if level == 1 || level == 2 {
            Ok(Alphabet { level })
        } else {
            Err(WordError::BadLevel(level))
        }
    }

    pub fn level(self) -> u8 {
        self.level
    }

    /// All letters of the alphabet, `0` first then roots by index.
    pub fn letters(self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(self.level as usize + 1);
        out.push(Letter::Zero);
        for r in 0..self.level {
            out.push(Letter::Root(r));
        }
        out
    }
}

/// Errors from word-algebra operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordError {
    /// Operands live over different alphabets.
    MixedAlphabets,
    /// Index-form operands have different levels.
    MixedLevels,
    /// The word starts with the letter `0`, so it has no index form.
    LeadingZero,
    /// Level outside `{1, 2}`.
    BadLevel(u8),
    /// A letter whose root index exceeds the level.
    BadLetter,
    /// Exponent and twist vectors of different length, or a zero exponent.
    BadIndex,
    /// Unknown character in a word literal.
    BadWordText(char),
}

impl fmt::Display for WordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordError::MixedAlphabets => write!(f, "mixed alphabets"),
            WordError::MixedLevels => write!(f, "mixed levels"),
            WordError::LeadingZero => {
                write!(f, "word starts with 0; it has no index form")
            }
            WordError::BadLevel(l) => write!(f, "unsupported level {l} (expected 1 or 2)"),
            WordError::BadLetter => write!(f, "letter outside the alphabet"),
            WordError::BadIndex => write!(f, "malformed index (length mismatch or zero exponent)"),
            WordError::BadWordText(c) => write!(f, "invalid word character {c:?}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for WordError {}

/// Weight and depth, the two gradings shared by words and index forms.
pub trait Graded {
    /// Number of letters / sum of exponents.
    fn weight(&self) -> u32;
    /// Number of non-zero letters / number of entries.
    fn depth(&self) -> u32;
}

/// A finite word over an [`Alphabet`]. Value type with canonical ordering
/// (by weight, then lexicographically with `0 < root 0 < root 1`), so maps
/// keyed by words are deterministic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    level: u8,
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(level: u8, letters: Vec<Letter>) -> Result<Self, WordError> {
        Alphabet::new(level)?;
        if letters.iter().any(|l| matches!(l, Letter::Root(r) if *r >= level)) {
            return Err(WordError::BadLetter);
        }
        Ok(Word { level, letters })
    }

    pub fn empty(level: u8) -> Self {
        Word { level, letters: Vec::new() }
    }

    /// Parses compact text over `{0, 1, m}` (`m` is the letter at `-1`);
    /// `"e"` denotes the empty word. The level is the smallest that fits
    /// unless `min_level` demands more.
    pub fn parse(text: &str, min_level: u8) -> Result<Self, WordError> {
        Alphabet::new(min_level.max(1))?;
        let mut letters = Vec::new();
        let mut level = min_level.max(1);
        if text == "e" {
            return Word::new(level, letters);
        }
        for c in text.chars() {
            match c {
                '0' => letters.push(Letter::Zero),
                '1' => letters.push(Letter::Root(0)),
                'm' => {
                    letters.push(Letter::Root(1));
                    level = level.max(2);
                }
                ',' | ' ' => {}
                other => return Err(WordError::BadWordText(other)),
            }
        }
        Word::new(level, letters)
    }

    pub fn level(&self) -> u8 {
        self.level
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// `true` iff the last letter differs from `root 0` (σ = 1), so the
    /// value at `z = 1` exists as a convergent series.
    pub fn is_convergent_at_one(&self) -> bool {
        !matches!(self.letters.last(), Some(Letter::Root(0)))
    }

    /// `true` iff the word is not `0^n` for some `n ≥ 1`, so it carries no
    /// logarithm of `z` at the origin.
    pub fn is_log_free_at_zero(&self) -> bool {
        self.letters.is_empty() || self.letters.iter().any(|l| l.is_root())
    }

    /// Both gradings at once: an MZV word proper starts with a root letter
    /// and converges at one.
    pub fn is_mzv_word(&self) -> bool {
        matches!(self.letters.first(), Some(Letter::Root(_))) && self.is_convergent_at_one()
    }
}

impl Graded for Word {
    fn weight(&self) -> u32 {
        self.letters.len() as u32
    }

    fn depth(&self) -> u32 {
        self.letters.iter().filter(|l| l.is_root()).count() as u32
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.letters.cmp(&other.letters))
            .then_with(|| self.level.cmp(&other.level))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for l in &self.letters {
            match l {
                Letter::Zero => write!(f, "0")?,
                Letter::Root(0) => write!(f, "1")?,
                Letter::Root(_) => write!(f, "m")?,
            }
        }
        Ok(())
    }
}

/// The composition-plus-twist form `(n_1,…,n_d; ε_1,…,ε_d)`, exponents
/// `n_i ≥ 1`, twists stored as root indices mod the level.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MzvIndex {
    level: u8,
    exponents: Vec<u32>,
    twists: Vec<u8>,
}

impl MzvIndex {
    pub fn new(level: u8, exponents: Vec<u32>, twists: Vec<u8>) -> Result<Self, WordError> {
        Alphabet::new(level)?;
        if exponents.len() != twists.len()
            || exponents.iter().any(|&n| n == 0)
            || twists.iter().any(|&t| t >= level)
        {
            return Err(WordError::BadIndex);
        }
        Ok(MzvIndex { level, exponents, twists })
    }

    /// `ζ(n_1,…,n_d)`: level 1, all twists trivial.
    pub fn zeta(exponents: &[u32]) -> Self {
        MzvIndex::new(1, exponents.to_owned(), alloc::vec![0; exponents.len()])
            .expect("valid zeta index")
    }

    /// `φ(n_1,…,n_d)`: level 2 with every twist equal to `-1`.
    pub fn phi(exponents: &[u32]) -> Self {
        MzvIndex::new(2, exponents.to_owned(), alloc::vec![1; exponents.len()])
            .expect("valid phi index")
    }

    pub fn empty(level: u8) -> Self {
        MzvIndex { level, exponents: Vec::new(), twists: Vec::new() }
    }

    pub fn level(&self) -> u8 {
        self.level
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn twists(&self) -> &[u8] {
        &self.twists
    }

    /// The outer sum converges iff the index is empty, the last exponent is
    /// at least two, or the last twist is nontrivial (alternating outer sum).
    pub fn is_convergent(&self) -> bool {
        match (self.exponents.last(), self.twists.last()) {
            (None, _) => true,
            (Some(&n), Some(&t)) => n >= 2 || t != 0,
            _ => unreachable!(),
        }
    }

    /// Lifts to a higher level (twist indices scale with the root order).
    pub fn lift_to_level(&self, level: u8) -> Result<Self, WordError> {
        Alphabet::new(level)?;
        if level == self.level {
            return Ok(self.clone());
        }
        if level % self.level != 0 {
            return Err(WordError::MixedLevels);
        }
        let k = level / self.level;
        MzvIndex::new(
            level,
            self.exponents.clone(),
            self.twists.iter().map(|&t| t * k).collect(),
        )
    }
}

impl Graded for MzvIndex {
    fn weight(&self) -> u32 {
        self.exponents.iter().sum()
    }

    fn depth(&self) -> u32 {
        self.exponents.len() as u32
    }
}

impl PartialOrd for MzvIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MzvIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.exponents.cmp(&other.exponents))
            .then_with(|| self.twists.cmp(&other.twists))
            .then_with(|| self.level.cmp(&other.level))
    }
}

impl fmt::Display for MzvIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "1");
        }
        let all_trivial = self.twists.iter().all(|&t| t == 0);
        let all_minus = self.level == 2 && self.twists.iter().all(|&t| t == 1);
        let name = if all_minus { "phi" } else { "zeta" };
        write!(f, "{name}(")?;
        for (i, n) in self.exponents.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        if !all_trivial && !all_minus {
            write!(f, ";")?;
            for &t in &self.twists {
                write!(f, "{}", if t == 0 { '+' } else { '-' })?;
            }
        }
        write!(f, ")")
    }
}

/// A finite formal rational-linear combination with no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QLinComb<K: Ord> {
    terms: BTreeMap<K, Rational>,
}

impl<K: Ord + Clone> Default for QLinComb<K> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<K: Ord + Clone> QLinComb<K> {
    pub fn zero() -> Self {
        QLinComb { terms: BTreeMap::new() }
    }

    pub fn single(key: K) -> Self {
        Self::from_term(key, Rational::one())
    }

    pub fn from_term(key: K, coeff: Rational) -> Self {
        let mut c = Self::zero();
        c.add_term(key, coeff);
        c
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

    pub fn coeff(&self, key: &K) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, key: K, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(key);
        match entry {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, by: &Rational) -> Self {
        if by.is_zero() {
            return Self::zero();
        }
        QLinComb {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c * by)).collect(),
        }
    }

    /// Ascending iteration in the canonical key order.
    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rational)> {
        self.terms.iter()
    }

    /// Applies a signed key map, merging collisions.
    pub fn map_signed<J: Ord + Clone>(&self, mut f: impl FnMut(&K) -> (i8, J)) -> QLinComb<J> {
        let mut out = QLinComb::zero();
        for (k, c) in &self.terms {
            let (sign, j) = f(k);
            let c = if sign < 0 { -c.clone() } else { c.clone() };
            out.add_term(j, c);
        }
        out
    }
}

impl<K: Ord + Clone + Graded> QLinComb<K> {
    /// The common weight of all terms, if the combination is homogeneous.
    pub fn homogeneous_weight(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let w = it.next()?.weight();
        it.all(|k| k.weight() == w).then_some(w)
    }
}

fn fmt_terms<'a, K: fmt::Display + 'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (&'a K, &'a Rational)>,
) -> fmt::Result {
    let mut first = true;
    for (k, c) in terms {
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
            first = false;
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        if mag.is_one() {
            write!(f, "{k}")?;
        } else {
            write!(f, "{}*{k}", format_q(&mag))?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for QLinComb<Word> {
    /// Word combinations print in descending canonical order,
    /// e.g. `2*110 + 101`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.terms.iter().rev())
    }
}

impl fmt::Display for QLinComb<MzvIndex> {
    /// Index combinations print in ascending canonical order,
    /// e.g. `zeta(1,2) - zeta(3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.terms.iter())
    }
}

/// Commutative shuffle product of two words over the same alphabet.
///
/// Every term has weight `|u| + |v|` and depth `d(u) + d(v)`; the total
/// coefficient mass is `C(|u|+|v|, |u|)`.
pub fn shuffle(u: &Word, v: &Word) -> Result<QLinComb<Word>, WordError> {
    if u.level != v.level {
        return Err(WordError::MixedAlphabets);
    }
    let mut counts: BTreeMap<Vec<Letter>, u64> = BTreeMap::new();
    shuffle_rec(&u.letters, &v.letters, &mut Vec::new(), &mut counts);
    let mut out = QLinComb::zero();
    for (letters, n) in counts {
        out.add_term(
            Word { level: u.level, letters },
            Rational::from_integer(n.into()),
        );
    }
    Ok(out)
}

fn shuffle_rec(
    a: &[Letter],
    b: &[Letter],
    prefix: &mut Vec<Letter>,
    out: &mut BTreeMap<Vec<Letter>, u64>,
) {
    if a.is_empty() && b.is_empty() {
        *out.entry(prefix.clone()).or_insert(0) += 1;
        return;
    }
    if a.is_empty() || b.is_empty() {
        let rest = if a.is_empty() { b } else { a };
        let mut whole = prefix.clone();
        whole.extend_from_slice(rest);
        *out.entry(whole).or_insert(0) += 1;
        return;
    }
    prefix.push(a[0]);
    shuffle_rec(&a[1..], b, prefix, out);
    prefix.pop();
    prefix.push(b[0]);
    shuffle_rec(a, &b[1..], prefix, out);
    prefix.pop();
}

/// Commutative stuffle (quasi-shuffle) product of two index forms.
///
/// The recursion merges the outermost entries: with `p = p'·x` and
/// `q = q'·y`, `p ∗ q = (p ∗ q')·y + (p' ∗ q)·x + (p' ∗ q')·(x ⊕ y)` where
/// `x ⊕ y` adds exponents and multiplies twists. Weight is additive; depth is
/// only filtered (each term's depth lies between `max` and the sum).
pub fn stuffle(p: &MzvIndex, q: &MzvIndex) -> Result<QLinComb<MzvIndex>, WordError> {
    if p.level != q.level {
        return Err(WordError::MixedLevels);
    }
    let level = p.level;
    let mut out = QLinComb::zero();
    let mut suffix: Vec<(u32, u8)> = Vec::new();
    stuffle_rec(
        level,
        &zip_index(p),
        &zip_index(q),
        &mut suffix,
        &mut out,
    );
    Ok(out)
}

fn zip_index(p: &MzvIndex) -> Vec<(u32, u8)> {
    p.exponents.iter().copied().zip(p.twists.iter().copied()).collect()
}

fn stuffle_rec(
    level: u8,
    p: &[(u32, u8)],
    q: &[(u32, u8)],
    suffix: &mut Vec<(u32, u8)>,
    out: &mut QLinComb<MzvIndex>,
) {
    if p.is_empty() && q.is_empty() {
        let mut entries: Vec<(u32, u8)> = suffix.clone();
        entries.reverse();
        let (exponents, twists) = entries.into_iter().unzip();
        out.add_term(MzvIndex { level, exponents, twists }, Rational::one());
        return;
    }
    if p.is_empty() || q.is_empty() {
        let rest = if p.is_empty() { q } else { p };
        let mut entries: Vec<(u32, u8)> = rest.to_vec();
        entries.extend(suffix.iter().rev().copied());
        let (exponents, twists) = entries.into_iter().unzip();
        out.add_term(MzvIndex { level, exponents, twists }, Rational::one());
        return;
    }
    let (px, p_rest) = p.split_last().expect("nonempty");
    let (qy, q_rest) = q.split_last().expect("nonempty");
    suffix.push(*px);
    stuffle_rec(level, p_rest, q, suffix, out);
    suffix.pop();
    suffix.push(*qy);
    stuffle_rec(level, p, q_rest, suffix, out);
    suffix.pop();
    suffix.push((px.0 + qy.0, (px.1 + qy.1) % level));
    stuffle_rec(level, p_rest, q_rest, suffix, out);
    suffix.pop();
}

/// Word form of an index: `ζ(n_1,…,n_d; ε) = sign · ζ_w` with
/// `sign = (-1)^d` and `w = σ_1 0^{n_1-1} … σ_d 0^{n_d-1}`, where
/// `σ_i = (ε_i ε_{i+1} ⋯ ε_d)^{-1}`.
pub fn word_of_index(p: &MzvIndex) -> (i8, Word) {
    let level = p.level;
    let d = p.exponents.len();
    let mut letters = Vec::with_capacity(p.weight() as usize);
    let mut twist_tail: u32 = 0;
    let mut sigma_roots = Vec::with_capacity(d);
    for &t in p.twists.iter().rev() {
        twist_tail += u32::from(t);
        // σ_i = λ^{-Σ_{j≥i} t_j mod N}
        sigma_roots.push(((level as u32 - (twist_tail % level as u32)) % level as u32) as u8);
    }
    sigma_roots.reverse();
    for (i, &n) in p.exponents.iter().enumerate() {
        letters.push(Letter::Root(sigma_roots[i]));
        for _ in 1..n {
            letters.push(Letter::Zero);
        }
    }
    let sign = if d % 2 == 0 { 1 } else { -1 };
    (sign, Word { level, letters })
}

/// Index form of a word starting with a non-zero letter: the inverse of
/// [`word_of_index`], with the same sign `(-1)^depth`.
pub fn index_of_word(w: &Word) -> Result<(i8, MzvIndex), WordError> {
    if w.letters.is_empty() {
        return Ok((1, MzvIndex::empty(w.level)));
    }
    if !matches!(w.letters.first(), Some(Letter::Root(_))) {
        return Err(WordError::LeadingZero);
    }
    let level = w.level;
    let mut sigma_roots: Vec<u8> = Vec::new();
    let mut exponents: Vec<u32> = Vec::new();
    for &l in &w.letters {
        match l {
            Letter::Root(r) => {
                sigma_roots.push(r);
                exponents.push(1);
            }
            Letter::Zero => *exponents.last_mut().expect("block started") += 1,
        }
    }
    let d = exponents.len();
    let mut twists = Vec::with_capacity(d);
    for i in 0..d {
        // ε_i = σ_{i+1} / σ_i, with σ_{d+1} read as 1.
        let next = if i + 1 < d { sigma_roots[i + 1] } else { 0 };
        twists.push(((level + next - sigma_roots[i]) % level) as u8);
    }
    let sign = if d % 2 == 0 { 1 } else { -1 };
    Ok((sign, MzvIndex { level, exponents, twists }))
}

/// All convergent indexes of the given weight and level, in canonical order.
pub fn convergent_indexes(weight: u32, level: u8) -> Vec<MzvIndex> {
    let mut out = Vec::new();
    let mut exps: Vec<u32> = Vec::new();
    let mut tws: Vec<u8> = Vec::new();
    fn rec(remaining: u32, level: u8, exps: &mut Vec<u32>, tws: &mut Vec<u8>, out: &mut Vec<MzvIndex>) {
        if remaining == 0 {
            let idx = MzvIndex {
                level,
                exponents: exps.clone(),
                twists: tws.clone(),
            };
            if idx.is_convergent() {
                out.push(idx);
            }
            return;
        }
        for n in 1..=remaining {
            exps.push(n);
            for t in 0..level {
                tws.push(t);
                rec(remaining - n, level, exps, tws, out);
                tws.pop();
            }
            exps.pop();
        }
    }
    if weight == 0 {
        out.push(MzvIndex::empty(level));
        return out;
    }
    rec(weight, level, &mut exps, &mut tws, &mut out);
    out.sort();
    out
}
