//! Exact rational scalars and small integer helpers shared across the crate.
//!
//! All symbolic coefficients are [`Rational`] (arbitrary-size numerator and
//! denominator, always reduced, denominator positive — `num_rational`
//! maintains both invariants).

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

/// Exact rational number used for every symbolic coefficient.
pub type Rational = num_rational::BigRational;

/// `n` as a rational.
pub fn q_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p/q` as a rational. Panics on `q == 0`.
pub fn q(p: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(den))
}

/// Parses `"p"` or `"p/q"` with optional sign, as written by [`format_q`].
pub fn parse_q(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_q(x: &Rational) -> String {
    use alloc::format;
    if x.denom().is_one() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Total bit size of numerator and denominator; the pivot-selection measure
/// in the linear algebra kernel.
pub fn bit_size(x: &Rational) -> u64 {
    x.numer().bits() + x.denom().bits()
}

/// Exact binomial coefficient `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc.into()
}

/// Exact factorial `n!`.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= BigUint::from(i);
    }
    acc.into()
}

/// First Bernoulli numbers `B_0 … B_n` (with `B_1 = -1/2`), by the defining
/// recurrence `sum_{k<=m} C(m+1,k) B_k = 0`.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(Rational::one());
            continue;
        }
        let mut acc = Rational::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += Rational::from_integer(binomial(m as u64 + 1, k as u64)) * bk;
        }
        b.push(-acc / Rational::from_integer(BigInt::from(m as u64 + 1)));
    }
    b
}

/// `x^n` for integer exponents of either sign. Panics on `0^-n`.
pub fn q_pow(x: &Rational, n: i64) -> Rational {
    if n >= 0 {
        num_traits::pow::pow(x.clone(), n as usize)
    } else {
        assert!(!x.is_zero(), "zero to a negative power");
        num_traits::pow::pow(x.clone(), (-n) as usize).recip()
    }
}

/// Floor of log2 of a positive rational, exact to within one.
pub fn log2_approx(x: &Rational) -> i64 {
    assert!(x.is_positive(), "log2 of a non-positive rational");
    x.numer().bits() as i64 - x.denom().bits() as i64
}
