//! Lowering of parsed expressions to numeric values and to symbolic
//! index combinations.

use std::fmt;

use periodlab_core::arb::ArbComplex;
use periodlab_core::numerics::{sigmas_of_word, Evaluator, NumericsError, QComplex};
use periodlab_core::rational::Rational;
use periodlab_core::relations::{reduce, RelationError, TableSet};
use periodlab_core::word::{stuffle, Graded, MzvIndex, QLinComb, WordError};

use num_traits::One;

use crate::expr::{phi_to_index, Expr};

/// Errors from expression evaluation: domain failures map to exit code 1.
#[derive(Clone, Debug)]
pub enum EngineError {
    Numerics(NumericsError),
    Relations(RelationError),
    Word(WordError),
    /// The expression contains parts (Li/L calls) with no symbolic meaning.
    NotSymbolic(String),
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::Numerics(e) => write!(f, "{e}"),
            EngineError::Relations(e) => write!(f, "{e}"),
            EngineError::Word(e) => write!(f, "{e}"),
            EngineError::NotSymbolic(what) => {
                write!(f, "{what} has no index form; use `eval` instead")
            }
        }
    }
}

impl std::error::Error for EngineError {}

impl From<NumericsError> for EngineError {
    fn from(e: NumericsError) -> Self {
        EngineError::Numerics(e)
    }
}

impl From<RelationError> for EngineError {
    fn from(e: RelationError) -> Self {
        EngineError::Relations(e)
    }
}

impl From<WordError> for EngineError {
    fn from(e: WordError) -> Self {
        EngineError::Word(e)
    }
}

/// Numeric evaluation of an expression.
pub fn eval_numeric(e: &Expr, ev: &mut Evaluator) -> Result<ArbComplex, EngineError> {
    let policy = ev.policy();
    match e {
        Expr::ZetaIndex { index, .. } => Ok(ArbComplex::from_real(ev.eval_index(index)?)),
        Expr::PhiIndex { exponents, .. } => Ok(ArbComplex::from_real(ev.eval_phi(exponents)?)),
        Expr::LiCall { exponents, args, .. } => Ok(ev.eval_li(exponents, args)?),
        Expr::WordEval { word, arg, .. } => Ok(ev.eval_word(&sigmas_of_word(word), arg)?),
        Expr::Number { value, .. } => Ok(value.to_arb(policy)),
        Expr::Product(fs) => {
            let mut acc = ArbComplex::from_int(1, policy);
            for f in fs {
                acc = acc.mul(&eval_numeric(f, ev)?);
            }
            Ok(acc)
        }
        Expr::Sum(ts) => {
            let mut acc = ArbComplex::zero(policy);
            for (neg, t) in ts {
                let v = eval_numeric(t, ev)?;
                acc = if *neg { acc.sub(&v) } else { acc.add(&v) };
            }
            Ok(acc)
        }
    }
}

/// The highest alphabet level appearing in an expression.
fn max_level(e: &Expr) -> u8 {
    match e {
        Expr::ZetaIndex { index, .. } => index.level(),
        Expr::PhiIndex { .. } => 2,
        Expr::LiCall { .. } | Expr::WordEval { .. } | Expr::Number { .. } => 1,
        Expr::Product(fs) => fs.iter().map(max_level).max().unwrap_or(1),
        Expr::Sum(ts) => ts.iter().map(|(_, t)| max_level(t)).max().unwrap_or(1),
    }
}

/// Symbolic lowering: the expression as a rational combination of indexes,
/// with products expanded through the stuffle product (the one canonical
/// multiplication path for reduction). Everything is lifted to the highest
/// level present so mixed-level sums combine.
pub fn lower_symbolic(e: &Expr) -> Result<QLinComb<MzvIndex>, EngineError> {
    let level = max_level(e);
    lower_at_level(e, level)
}

fn lower_at_level(e: &Expr, level: u8) -> Result<QLinComb<MzvIndex>, EngineError> {
    match e {
        Expr::ZetaIndex { index, .. } => Ok(QLinComb::single(index.lift_to_level(level)?)),
        Expr::PhiIndex { exponents, .. } => {
            let (sign, index) = phi_to_index(exponents);
            Ok(QLinComb::from_term(index.lift_to_level(level)?, sign))
        }
        Expr::Number { value, .. } => {
            if !value.is_real() {
                return Err(EngineError::NotSymbolic("a complex literal".into()));
            }
            Ok(QLinComb::from_term(MzvIndex::empty(level), value.re.clone()))
        }
        Expr::LiCall { .. } => Err(EngineError::NotSymbolic("Li[…](…)".into())),
        Expr::WordEval { .. } => Err(EngineError::NotSymbolic("L[…](…)".into())),
        Expr::Product(fs) => {
            let mut acc = QLinComb::from_term(MzvIndex::empty(level), Rational::one());
            for f in fs {
                let rhs = lower_at_level(f, level)?;
                let mut next = QLinComb::zero();
                for (p, cp) in acc.iter() {
                    for (q, cq) in rhs.iter() {
                        let prod = stuffle(p, q)?;
                        next = next.add(&prod.scale(&(cp * cq)));
                    }
                }
                acc = next;
            }
            Ok(acc)
        }
        Expr::Sum(ts) => {
            let mut acc = QLinComb::zero();
            for (neg, t) in ts {
                let v = lower_at_level(t, level)?;
                acc = if *neg { acc.sub(&v) } else { acc.add(&v) };
            }
            Ok(acc)
        }
    }
}

/// Reduces a symbolic combination over the per-weight bases, making sure the
/// needed tables exist first.
pub fn reduce_with_tables(
    comb: &QLinComb<MzvIndex>,
    tables: &mut TableSet,
    cache_dir: Option<&std::path::Path>,
) -> Result<QLinComb<MzvIndex>, EngineError> {
    for (p, _) in comb.iter() {
        if p.depth() > 0 {
            crate::cache::ensure_tables(tables, p.level(), p.weight(), cache_dir)?;
        }
    }
    Ok(reduce(comb, tables)?)
}
