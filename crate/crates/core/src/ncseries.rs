//! Weight-truncated noncommutative series in the two letters `e₀, e₁` over a
//! graded commutative symbol algebra, with the generating series of MZVs,
//! its monodromy operators, the classical-polylog coproduct, and the
//! f-alphabet with its deconcatenation coproduct.
//!
//! The symbol algebra is polynomial over the rationals in the graded
//! generators `T` (weight one, standing for `2πi`) and basis MZV symbols
//! (weight = the index weight). `iπ` is not quotiented away; keeping `T`
//! explicit makes the monodromy computable while the reduction tables keep
//! relations like `ζ(4) = (2/5) ζ(2)²` intact. A numeric evaluator hook maps
//! `T ↦ 2πi` and each basis symbol to its value.
//!
//! The generating series `Z` carries the regularized limit at one: both
//! weight-one coefficients vanish (`ζ(1) = 0`), words ending in `e₁` are
//! rewritten through the shuffle recursion, and words with leading `e₀`
//! blocks contribute their finite combination of convergent values.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arb::{ArbComplex, ArbReal};
use crate::numerics::{Evaluator, NumericsError};
use crate::rational::{binomial, factorial, format_q, Rational};
use crate::relations::{reduce, RelationError, TableSet};
use crate::word::{shuffle, Graded, Letter, MzvIndex, QLinComb, Word};

/// A graded generator of the symbol algebra.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SymbolGen {
    /// `T = 2πi`, weight one.
    TwoPiI,
    /// A basis MZV symbol, weight equal to the index weight.
    Mzv(MzvIndex),
}

impl SymbolGen {
    pub fn weight(&self) -> u32 {
        match self {
            SymbolGen::TwoPiI => 1,
            SymbolGen::Mzv(p) => p.weight(),
        }
    }
}

impl fmt::Display for SymbolGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolGen::TwoPiI => write!(f, "T"),
            SymbolGen::Mzv(p) => write!(f, "{p}"),
        }
    }
}

/// A commutative monomial: sorted generator/exponent pairs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(SymbolGen, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn gen(g: SymbolGen) -> Self {
        Monomial(alloc::vec![(g, 1)])
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out: BTreeMap<SymbolGen, u32> = BTreeMap::new();
        for (g, e) in self.0.iter().chain(other.0.iter()) {
            *out.entry(g.clone()).or_insert(0) += e;
        }
        Monomial(out.into_iter().collect())
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(|(g, e)| g.weight() * e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(SymbolGen, u32)] {
        &self.0
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (g, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{g}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// An element of the symbol algebra: a rational polynomial in the graded
/// generators. Numeric evaluation is a ring homomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn gen(g: SymbolGen) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::gen(g), Rational::one());
        Poly { terms }
    }

    /// Linear combination of MZV symbols.
    pub fn from_mzv_comb(comb: &QLinComb<MzvIndex>) -> Self {
        let mut out = Poly::zero();
        for (p, c) in comb.iter() {
            let key = if p.depth() == 0 {
                Monomial::one()
            } else {
                Monomial::gen(SymbolGen::Mzv(p.clone()))
            };
            out.add_term(key, c.clone());
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, c);
            }
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the polynomial is the constant `c`.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().expect("nonempty");
            if m.is_one() {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, by: &Rational) -> Self {
        if by.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * by)).collect() }
    }

    /// Largest monomial weight present.
    pub fn max_weight(&self) -> u32 {
        self.terms.keys().map(Monomial::weight).max().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// The numeric value with `T ↦ 2πi` and MZV symbols by [`Evaluator`].
    pub fn eval_numeric(&self, ev: &mut Evaluator) -> Result<ArbComplex, NumericsError> {
        let policy = ev.policy();
        let mut acc = ArbComplex::zero(policy);
        for (m, c) in &self.terms {
            let mut term = ArbComplex::from_real(ArbReal::from_rational(c, policy));
            for (g, e) in m.factors() {
                let base = match g {
                    SymbolGen::TwoPiI => {
                        ArbComplex::new(ArbReal::zero(policy), ev.pi().mul_int(2))
                    }
                    SymbolGen::Mzv(p) => ArbComplex::from_real(ev.eval_index(p)?),
                };
                for _ in 0..*e {
                    term = term.mul(&base);
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
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
            if m.is_one() {
                write!(f, "{}", format_q(&mag))?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_q(&mag))?;
            }
        }
        Ok(())
    }
}

/// Errors from series construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeriesError {
    /// Inverse of a series whose leading coefficient is not a nonzero
    /// rational constant.
    NonUnitLeadingTerm,
    /// Missing reduction tables for the requested truncation weight.
    Tables(RelationError),
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::NonUnitLeadingTerm => {
                write!(f, "series inverse needs an invertible constant leading coefficient")
            }
            SeriesError::Tables(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SeriesError {}

impl From<RelationError> for SeriesError {
    fn from(e: RelationError) -> Self {
        SeriesError::Tables(e)
    }
}

/// A weight-truncated noncommutative series in `e₀, e₁` with symbol-algebra
/// coefficients. Words are level-1 words: `0 ↦ e₀`, `1 ↦ e₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NcSeries {
    trunc: u32,
    terms: BTreeMap<Word, Poly>,
}

/// The word `e_i` as a level-1 word letter.
fn letter_word(letter: Letter) -> Word {
    Word::new(1, alloc::vec![letter]).expect("valid letter")
}

fn concat(a: &Word, b: &Word) -> Word {
    let mut letters = a.letters().to_vec();
    letters.extend_from_slice(b.letters());
    Word::new(1, letters).expect("valid concatenation")
}

impl NcSeries {
    pub fn zero(trunc: u32) -> Self {
        NcSeries { trunc, terms: BTreeMap::new() }
    }

    pub fn one(trunc: u32) -> Self {
        let mut s = NcSeries::zero(trunc);
        s.set_coeff(Word::empty(1), Poly::one());
        s
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn coeff(&self, w: &Word) -> Poly {
        self.terms.get(w).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn set_coeff(&mut self, w: Word, c: Poly) {
        if w.weight() > self.trunc || c.is_zero() {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, c);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Poly)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let trunc = self.trunc.min(other.trunc);
        let mut out = NcSeries::zero(trunc);
        for (w, c) in self.terms.iter().chain(other.terms.iter()) {
            if w.weight() <= trunc {
                out.set_coeff(w.clone(), out.coeff(w).add(c));
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, by: &Rational) -> Self {
        NcSeries {
            trunc: self.trunc,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), c.scale(by)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(&Word::empty(1)).as_constant() == Some(Rational::one())
    }
}

impl fmt::Display for NcSeries {
    /// Words as bracketed letter strings with their symbol coefficients,
    /// e.g. `1 + (zeta(2))*[01] + (-1*zeta(2))*[10] + O(weight 3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut ordered: Vec<(&Word, &Poly)> = self.terms.iter().collect();
        ordered.sort_by_key(|(w, _)| (w.weight(), (*w).clone()));
        let mut first = true;
        for (w, c) in ordered {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if w.weight() == 0 {
                write!(f, "{c}")?;
            } else if c.as_constant() == Some(Rational::one()) {
                write!(f, "[{w}]")?;
            } else {
                write!(f, "({c})*[{w}]")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(weight {})", self.trunc + 1)
    }
}

/// Noncommutative product, truncated beyond the smaller weight bound.
pub fn nc_mul(a: &NcSeries, b: &NcSeries) -> NcSeries {
    let trunc = a.trunc.min(b.trunc);
    let mut out = NcSeries::zero(trunc);
    for (wa, ca) in a.terms.iter() {
        if wa.weight() > trunc {
            continue;
        }
        for (wb, cb) in b.terms.iter() {
            if wa.weight() + wb.weight() > trunc {
                continue;
            }
            let w = concat(wa, wb);
            let c = out.coeff(&w).add(&ca.mul(cb));
            out.set_coeff(w, c);
        }
    }
    out
}

/// Inverse of a series with invertible constant leading coefficient:
/// `(c + N)^{-1} = c^{-1} Σ (-N/c)^k`.
pub fn nc_inverse(a: &NcSeries) -> Result<NcSeries, SeriesError> {
    let lead = a
        .coeff(&Word::empty(1))
        .as_constant()
        .filter(|c| !c.is_zero())
        .ok_or(SeriesError::NonUnitLeadingTerm)?;
    let inv_lead = lead.recip();
    let mut tail = a.clone();
    tail.set_coeff(Word::empty(1), Poly::zero());
    let scaled = tail.scale(&-inv_lead.clone());
    let mut out = NcSeries::one(a.trunc);
    let mut power = NcSeries::one(a.trunc);
    for _ in 0..a.trunc {
        power = nc_mul(&power, &scaled);
        if power.terms.is_empty() {
            break;
        }
        out = out.add(&power);
    }
    Ok(out.scale(&inv_lead))
}

/// `exp(c · e_letter)` truncated at the weight bound.
pub fn nc_exp(coef: &Poly, letter: Letter, trunc: u32) -> NcSeries {
    let mut out = NcSeries::one(trunc);
    let mut word = Word::empty(1);
    let mut power = Poly::one();
    for k in 1..=trunc {
        word = concat(&word, &letter_word(letter));
        power = power.mul(coef);
        out.set_coeff(
            word.clone(),
            power.scale(&Rational::from_integer(factorial(u64::from(k))).recip()),
        );
    }
    out
}

/// Shuffle-regularized value of any word in `{e₀,e₁}*` at `z → 1`, as a
/// combination of convergent indexes, with `ζ(e₀) = ζ(e₁) = 0`.
///
/// Words not ending in `e₁` converge (leading `e₀` blocks contribute the
/// finite composition with `ln z → 0`); trailing `e₁` blocks are peeled by
/// the shuffle recursion `u ⧢ e₁ = (trailing e₁ count)·w + shorter-tailed
/// words`.
pub fn reg_word_value(w: &Word) -> QLinComb<MzvIndex> {
    let letters = w.letters();
    if letters.is_empty() {
        // Handled by the caller (the unit coefficient).
        return QLinComb::zero();
    }
    if letters.iter().all(|l| *l == Letter::Zero) {
        return QLinComb::zero(); // (ln z)^n / n! → 0 at z = 1
    }
    match letters.last() {
        Some(Letter::Root(0)) => {
            let u = Word::new(1, letters[..letters.len() - 1].to_vec()).expect("valid prefix");
            let trailing = letters.iter().rev().take_while(|l| **l == Letter::Root(0)).count();
            let product = shuffle(&u, &letter_word(Letter::Root(0))).expect("same alphabet");
            // ζ_reg(u)·ζ_reg(e₁) = 0 and the coefficient of w itself is the
            // trailing-block length.
            let mut acc = QLinComb::zero();
            for (word, c) in product.iter() {
                if word == w {
                    continue;
                }
                acc = acc.add(&reg_word_value(word).scale(c));
            }
            acc.scale(&(-Rational::from_integer(BigInt::from(trailing)).recip()))
        }
        _ => convergent_word_value(letters),
    }
}

/// `L_w(1)` for a word not ending in `e₁`, by the composition identity with
/// every `ln z` factor set to zero: only `k₀ = 0` survives, giving
/// `(-1)^{d+n₀} Σ_{k_i ≥ n_i, Σk = n₀+Σn} Π C(k_i-1, n_i-1) ζ(k₁,…,k_d)`.
fn convergent_word_value(letters: &[Letter]) -> QLinComb<MzvIndex> {
    let mut leading = 0u32;
    let mut blocks: Vec<u32> = Vec::new();
    for l in letters {
        match l {
            Letter::Zero => match blocks.last_mut() {
                None => leading += 1,
                Some(n) => *n += 1,
            },
            Letter::Root(_) => blocks.push(1),
        }
    }
    let d = blocks.len();
    debug_assert!(d > 0 && *blocks.last().expect("nonempty") >= 2 || leading + (d as u32) < 2);
    let sign = if (d as u32 + leading) % 2 == 0 { 1i64 } else { -1 };
    let mut out = QLinComb::zero();
    let mut slots = alloc::vec![0u32; d];
    distribute_excess(leading, 0, &mut slots, &mut |extra| {
        let ks: Vec<u32> = blocks.iter().zip(extra.iter()).map(|(n, e)| n + e).collect();
        let mut coef = BigInt::from(sign);
        for (k, n) in ks.iter().zip(blocks.iter()) {
            coef *= binomial(u64::from(*k) - 1, u64::from(*n) - 1);
        }
        out.add_term(MzvIndex::zeta(&ks), Rational::from_integer(coef));
    });
    out
}

fn distribute_excess(total: u32, at: usize, slots: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    if slots.is_empty() {
        if total == 0 {
            f(&[]);
        }
        return;
    }
    if at + 1 == slots.len() {
        slots[at] = total;
        f(slots);
        return;
    }
    for v in 0..=total {
        slots[at] = v;
        distribute_excess(total - v, at + 1, slots, f);
    }
}

/// The generating series of regularized MZVs, truncated at `trunc`, with
/// coefficients reduced to basis symbols. Requires tables for level 1 up to
/// the truncation weight.
pub fn associator(trunc: u32, tables: &TableSet) -> Result<NcSeries, SeriesError> {
    let mut out = NcSeries::one(trunc);
    let mut words: Vec<Word> = alloc::vec![Word::empty(1)];
    for _ in 1..=trunc {
        let mut next = Vec::with_capacity(words.len() * 2);
        for w in &words {
            for l in [Letter::Zero, Letter::Root(0)] {
                next.push(concat(w, &letter_word(l)));
            }
        }
        for w in &next {
            let comb = reg_word_value(w);
            if comb.is_zero() {
                continue;
            }
            let reduced = reduce(&comb, tables)?;
            out.set_coeff(w.clone(), Poly::from_mzv_comb(&reduced));
        }
        words = next;
    }
    Ok(out)
}

/// A monodromy operator: left multiplication by an invertible series.
#[derive(Clone, Debug)]
pub struct Monodromy {
    series: NcSeries,
}

impl Monodromy {
    pub fn series(&self) -> &NcSeries {
        &self.series
    }

    pub fn apply(&self, l: &NcSeries) -> NcSeries {
        nc_mul(&self.series, l)
    }

    pub fn inverse(&self) -> Result<Monodromy, SeriesError> {
        Ok(Monodromy { series: nc_inverse(&self.series)? })
    }
}

/// Monodromy around `z = 0`: left multiplication by `exp(T e₀)`.
pub fn monodromy_m0(trunc: u32) -> Monodromy {
    Monodromy { series: nc_exp(&Poly::gen(SymbolGen::TwoPiI), Letter::Zero, trunc) }
}

/// Monodromy around `z = 1`: left multiplication by `Z exp(T e₁) Z⁻¹`.
pub fn monodromy_m1(trunc: u32, tables: &TableSet) -> Result<Monodromy, SeriesError> {
    let z = associator(trunc, tables)?;
    let e = nc_exp(&Poly::gen(SymbolGen::TwoPiI), Letter::Root(0), trunc);
    let z_inv = nc_inverse(&z)?;
    Ok(Monodromy { series: nc_mul(&nc_mul(&z, &e), &z_inv) })
}

// ---------------------------------------------------------------------
// Classical-polylog coproduct
// ---------------------------------------------------------------------

/// Formal generators for the classical-polylog coproduct.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PolyLogGen {
    One,
    /// `Li_n(z)`, `n ≥ 1`.
    Li(u32),
    /// `(ln z)^k / k!`, `k ≥ 1`.
    LogPow(u32),
}

impl fmt::Display for PolyLogGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyLogGen::One => write!(f, "1"),
            PolyLogGen::Li(n) => write!(f, "Li{n}"),
            PolyLogGen::LogPow(k) => write!(f, "log^{k}/{k}!"),
        }
    }
}

fn logpow(k: u32) -> PolyLogGen {
    if k == 0 {
        PolyLogGen::One
    } else {
        PolyLogGen::LogPow(k)
    }
}

pub type TensorSum = QLinComb<(PolyLogGen, PolyLogGen)>;

/// `Δ Li_n = Li_n ⊗ 1 + Σ_{k=0}^{n-1} (ln z)^k/k! ⊗ Li_{n-k}`.
pub fn coproduct_polylog(n: u32) -> TensorSum {
    assert!(n >= 1);
    let mut out = TensorSum::zero();
    out.add_term((PolyLogGen::Li(n), PolyLogGen::One), Rational::one());
    for k in 0..n {
        out.add_term((logpow(k), PolyLogGen::Li(n - k)), Rational::one());
    }
    out
}

/// The coproduct of a single generator (used to check coassociativity).
pub fn coproduct_gen(g: &PolyLogGen) -> TensorSum {
    match g {
        PolyLogGen::One => QLinComb::single((PolyLogGen::One, PolyLogGen::One)),
        PolyLogGen::Li(n) => coproduct_polylog(*n),
        PolyLogGen::LogPow(k) => {
            // ln z is primitive; (ln z)^k/k! deconcatenates binomially.
            let mut out = TensorSum::zero();
            for i in 0..=*k {
                out.add_term((logpow(i), logpow(k - i)), Rational::one());
            }
            out
        }
    }
}

// ---------------------------------------------------------------------
// f-alphabet
// ---------------------------------------------------------------------

/// A monomial `f₂^a · f_{i₁} ⋯ f_{i_r}` in the concatenation algebra with the
/// central weight-two generator adjoined; the `i_j` are odd and at least 3.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FWord {
    pub f2_power: u32,
    pub odd: Vec<u32>,
}

/// Errors in f-alphabet words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadFIndex(pub u32);

impl fmt::Display for BadFIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f-alphabet letters are f2, f3, f5, …; got f{}", self.0)
    }
}

#[cfg(feature = "std")]
impl std::error::Error for BadFIndex {}

impl FWord {
    pub fn new(f2_power: u32, odd: Vec<u32>) -> Result<Self, BadFIndex> {
        if let Some(&bad) = odd.iter().find(|&&i| i < 3 || i % 2 == 0) {
            return Err(BadFIndex(bad));
        }
        Ok(FWord { f2_power, odd })
    }

    pub fn weight(&self) -> u32 {
        2 * self.f2_power + self.odd.iter().sum::<u32>()
    }
}

impl fmt::Display for FWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.f2_power == 0 && self.odd.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        if self.f2_power > 0 {
            write!(f, "f2")?;
            if self.f2_power > 1 {
                write!(f, "^{}", self.f2_power)?;
            }
            first = false;
        }
        for i in &self.odd {
            if !first {
                write!(f, "*")?;
            }
            write!(f, "f{i}")?;
            first = false;
        }
        Ok(())
    }
}

pub type FTensorSum = QLinComb<(FWord, FWord)>;

/// Deconcatenation coproduct on the odd letters, with `Δ(f₂) = 1 ⊗ f₂`
/// extending it to the polynomial comodule: the `f₂` power stays entirely in
/// the right tensor factor.
pub fn deconcat_coproduct(w: &FWord) -> FTensorSum {
    let mut out = FTensorSum::zero();
    for k in 0..=w.odd.len() {
        let left = FWord { f2_power: 0, odd: w.odd[..k].to_vec() };
        let right = FWord { f2_power: w.f2_power, odd: w.odd[k..].to_vec() };
        out.add_term((left, right), Rational::one());
    }
    out
}

/// Coefficients of `1/(1 - t² - t³)`: `d₀ = 1, d₁ = 0, d₂ = 1`, then
/// `d_{n} = d_{n-2} + d_{n-3}`.
pub fn motivic_dims(max_n: u32) -> Vec<u64> {
    let mut d = Vec::with_capacity(max_n as usize + 1);
    for n in 0..=max_n as usize {
        let v = match n {
            0 => 1,
            1 => 0,
            2 => 1,
            _ => d[n - 2] + d[n - 3],
        };
        d.push(v);
    }
    d
}

/// Number of compositions of `n` into parts from `{2, 3}` (the count of
/// Hoffman words of weight `n`).
pub fn hoffman_count(n: u32) -> u64 {
    let mut h = Vec::with_capacity(n as usize + 1);
    for k in 0..=n as usize {
        let v = match k {
            0 => 1,
            1 => 0,
            2 => 1,
            _ => h[k - 2] + h[k - 3],
        };
        h.push(v);
    }
    h[n as usize]
}

/// All f-alphabet monomials of weight at most `max_weight`.
pub fn fwords_up_to(max_weight: u32) -> Vec<FWord> {
    let mut odd_words: Vec<Vec<u32>> = alloc::vec![Vec::new()];
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<u32>> = alloc::vec![Vec::new()];
    while let Some(word) = frontier.pop() {
        let w: u32 = word.iter().sum();
        let mut i = 3;
        while w + i <= max_weight {
            let mut next = word.clone();
            next.push(i);
            odd_words.push(next.clone());
            frontier.push(next);
            i += 2;
        }
    }
    for odd in odd_words {
        let w: u32 = odd.iter().sum();
        for a in 0..=(max_weight - w) / 2 {
            out.push(FWord { f2_power: a, odd: odd.clone() });
        }
    }
    out.sort();
    out
}
