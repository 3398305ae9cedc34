//! Exact and arbitrary-precision computations with multiple zeta values,
//! alternating Euler sums and hyperlogarithms.
//!
//! The crate is organized around a small number of value types:
//!
//! * [`word::Word`] / [`word::MzvIndex`] — the two encodings of an iterated
//!   sum/integral: a letter sequence over `{0} ∪ roots-of-unity`, and the
//!   composition-plus-twist form `(n_1,…,n_d; ε_1,…,ε_d)`.
//! * [`word::QLinComb`] — formal rational-linear combinations, the value
//!   space of the shuffle and stuffle products.
//! * [`relations::ReductionTable`] — per-weight bases of MZV symbols with the
//!   exact-rational expansion of every convergent index in that basis.
//! * [`arb::ArbReal`] / [`arb::ArbComplex`] — fixed-point big-integer reals
//!   and complexes with tracked rounding error, the value space of all
//!   numeric evaluation.
//! * [`ncseries::NcSeries`] — weight-truncated noncommutative series in two
//!   letters over a graded symbol algebra, housing the generating series of
//!   MZVs and its monodromy operators.
//!
//! Everything is a pure function over immutable values; there is no global
//! state, so concurrent use is unrestricted. The crate is `no_std`-compatible
//! (with `alloc`); the companion `periodlab` crate carries IO, the expression
//! grammar and the command line.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod arb;
pub mod linalg;
pub mod ncseries;
pub mod numerics;
pub mod periods;
pub mod rational;
pub mod relations;
pub mod word;

#[cfg(any(test, feature = "oracle"))]
pub mod oracle;

pub use rational::Rational;
