//! Arbitrary-precision real and complex arithmetic with tracked error.
//!
//! Values are fixed-point: `value = mant / 2^prec` with a `BigInt` mantissa.
//! Every value carries a conservative absolute error bound in units of one
//! ulp (`2^-prec`); arithmetic propagates it, series add their truncation
//! tails to it, and [`ArbReal::error_exp`] reports the bound as a decimal
//! exponent. Additions and subtractions are exact in this representation;
//! only multiplication, division and roots round.
//!
//! A [`PrecisionPolicy`] fixes the requested decimal digits and the guard
//! digits (default 15); working precision is their sum, so a final answer
//! whose tracked error stays within the guard margin is correct to the
//! requested count. There is no global state: constants (π, ln 2) live in an
//! explicit [`ConstCache`] owned by the caller.

use alloc::string::String;
use alloc::string::ToString;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Rational;

const LOG2_10: f64 = 3.321928094887362;

/// `2^e` as an `f64` without the standard library.
fn pow2_f64(e: i32) -> f64 {
    let mut v = 1.0f64;
    let step = if e >= 0 { 2.0 } else { 0.5 };
    for _ in 0..e.unsigned_abs().min(4096) {
        v *= step;
    }
    v
}

/// Requested decimal digits plus guard digits; fixes the working precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub digits: u32,
    pub guard: u32,
}

impl PrecisionPolicy {
    /// Policy with the default 15 guard digits.
    pub fn new(digits: u32) -> Self {
        PrecisionPolicy { digits, guard: 15 }
    }

    pub fn with_guard(digits: u32, guard: u32) -> Self {
        PrecisionPolicy { digits, guard }
    }

    /// Working precision in bits.
    pub fn working_bits(self) -> u32 {
        ((self.digits + self.guard) as f64 * LOG2_10) as u32 + 12
    }

    /// `true` if the tracked error keeps the value good to the requested
    /// digits: `|error| < 10^-digits`.
    pub fn certifies(self, x: &ArbReal) -> bool {
        match x.error_exp() {
            None => true,
            Some(e) => e <= -(self.digits as i64),
        }
    }
}

/// Fixed-point real: `mant / 2^prec`, with tracked error `err` in ulps and
/// the requested output digit count.
#[derive(Clone, Debug)]
pub struct ArbReal {
    mant: BigInt,
    prec: u32,
    err: BigInt,
    digits: u32,
}

fn shr_round(x: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        return x.clone();
    }
    let half = BigInt::one() << (k - 1);
    if x.is_negative() {
        -((-x + half) >> k)
    } else {
        (x + half) >> k
    }
}

/// Ceiling division for non-negative arguments.
fn div_ceil(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(!a.is_negative() && b.is_positive());
    (a + b - BigInt::one()) / b
}

impl ArbReal {
    pub fn zero(policy: PrecisionPolicy) -> Self {
        ArbReal {
            mant: BigInt::zero(),
            prec: policy.working_bits(),
            err: BigInt::zero(),
            digits: policy.digits,
        }
    }

    pub fn from_int(n: i64, policy: PrecisionPolicy) -> Self {
        let prec = policy.working_bits();
        ArbReal {
            mant: BigInt::from(n) << prec,
            prec,
            err: BigInt::zero(),
            digits: policy.digits,
        }
    }

    /// Exact-up-to-one-ulp conversion of a rational.
    pub fn from_rational(x: &Rational, policy: PrecisionPolicy) -> Self {
        let prec = policy.working_bits();
        let scaled = x.numer() << prec;
        let (mant, rem) = num_integer::Integer::div_rem(&scaled, x.denom());
        let err = if rem.is_zero() { BigInt::zero() } else { BigInt::one() };
        ArbReal { mant, prec, err, digits: policy.digits }
    }

    /// Raw parts: `mant / 2^prec` with error `err` ulps.
    pub fn from_parts(mant: BigInt, prec: u32, err: BigInt, digits: u32) -> Self {
        ArbReal { mant, prec, err, digits }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn err_ulps(&self) -> &BigInt {
        &self.err
    }

    pub fn is_zero_value(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative_value(&self) -> bool {
        self.mant.is_negative()
    }

    /// Widens the truncation-error budget, in ulps.
    pub fn add_err_ulps(&mut self, ulps: BigInt) {
        debug_assert!(!ulps.is_negative());
        self.err += ulps;
    }

    /// Rescales to a new precision (rounding once when narrowing).
    pub fn with_prec(&self, prec: u32) -> Self {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let k = prec - self.prec;
                ArbReal {
                    mant: &self.mant << k,
                    prec,
                    err: &self.err << k,
                    digits: self.digits,
                }
            }
            Ordering::Less => {
                let k = self.prec - prec;
                ArbReal {
                    mant: shr_round(&self.mant, k),
                    prec,
                    err: (&self.err >> k) + 1,
                    digits: self.digits,
                }
            }
        }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let prec = self.prec.max(other.prec);
        (self.with_prec(prec), other.with_prec(prec))
    }

    pub fn neg(&self) -> Self {
        ArbReal {
            mant: -&self.mant,
            prec: self.prec,
            err: self.err.clone(),
            digits: self.digits,
        }
    }

    pub fn abs(&self) -> Self {
        ArbReal {
            mant: self.mant.abs(),
            prec: self.prec,
            err: self.err.clone(),
            digits: self.digits,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        ArbReal {
            mant: &a.mant + &b.mant,
            prec: a.prec,
            err: &a.err + &b.err,
            digits: a.digits.max(b.digits),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let prec = a.prec;
        let mant = shr_round(&(&a.mant * &b.mant), prec);
        // |Δ(ab)| ≤ |Δa||b| + |Δb||a| + |Δa||Δb| + rounding
        let err = ((&a.err * b.mant.abs()) >> prec)
            + ((&b.err * a.mant.abs()) >> prec)
            + ((&a.err * &b.err) >> prec)
            + 4;
        ArbReal { mant, prec, err, digits: a.digits.max(b.digits) }
    }

    /// Multiplies by a small exact integer.
    pub fn mul_int(&self, k: i64) -> Self {
        ArbReal {
            mant: &self.mant * k,
            prec: self.prec,
            err: &self.err * k.unsigned_abs(),
            digits: self.digits,
        }
    }

    /// Exact scaling by `2^k`.
    pub fn scale2(&self, k: i32) -> Self {
        if k >= 0 {
            ArbReal {
                mant: &self.mant << k as u32,
                prec: self.prec,
                err: &self.err << k as u32,
                digits: self.digits,
            }
        } else {
            let s = (-k) as u32;
            ArbReal {
                mant: shr_round(&self.mant, s),
                prec: self.prec,
                err: (&self.err >> s) + 1,
                digits: self.digits,
            }
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        assert!(
            !b.mant.is_zero() && b.err < b.mant.abs(),
            "division by a value indistinguishable from zero"
        );
        let prec = a.prec;
        let babs = b.mant.abs();
        let mant = {
            let num = &a.mant << prec;
            let q = &num / &babs;
            if b.mant.is_negative() {
                -q
            } else {
                q
            }
        };
        // |Δ(a/b)| ≤ |Δa|/|b| + |Δb||a|/b² + rounding; in ulps of the result.
        let err = div_ceil(&(&a.err << prec), &babs)
            + div_ceil(&(&b.err * mant.abs()), &babs)
            + 2;
        ArbReal { mant, prec, err, digits: a.digits.max(b.digits) }
    }

    pub fn div_int(&self, k: i64) -> Self {
        assert!(k != 0);
        let kk = BigInt::from(k);
        ArbReal {
            mant: {
                let q = &self.mant / &kk;
                q
            },
            prec: self.prec,
            err: div_ceil(&self.err, &kk.abs()) + 1,
            digits: self.digits,
        }
    }

    /// Square root of a non-negative value.
    pub fn sqrt(&self) -> Self {
        assert!(!self.mant.is_negative(), "sqrt of a negative value");
        let prec = self.prec;
        let mant = BigInt::from(
            (self.mant.magnitude() << prec).sqrt(),
        );
        // Δ√a ≈ Δa / (2√a); guard against tiny values.
        let err = if mant.is_zero() {
            &self.err + 1
        } else {
            div_ceil(&(&self.err << prec), &(BigInt::from(2) * &mant)) + 2
        };
        ArbReal { mant, prec, err, digits: self.digits }
    }

    /// Comparison of central values (ignores the tracked error).
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        let (a, b) = self.aligned(other);
        a.mant.cmp(&b.mant)
    }

    /// The value as an exact rational `mant / 2^prec`.
    pub fn to_rational(&self) -> Rational {
        Rational::new(self.mant.clone(), BigInt::one() << self.prec)
    }

    /// Nearest `f64`, for coarse planning only.
    pub fn to_f64(&self) -> f64 {
        let bits = self.mant.bits() as i64;
        let shift = (bits - 53).max(0) as u32;
        let top = (&self.mant >> shift).to_f64().unwrap_or(0.0);
        top * pow2_f64(shift as i32 - self.prec as i32)
    }

    /// Smallest decimal exponent `e` with `|error| ≤ 10^e`, or `None` when
    /// the value is tracked as exact.
    pub fn error_exp(&self) -> Option<i64> {
        if self.err.is_zero() {
            return None;
        }
        // err / 2^prec ≤ 10^e  ⇔  err ≤ 10^e · 2^prec
        let mut e = ((self.err.bits() as i64 - self.prec as i64) as f64 / LOG2_10) as i64;
        let check = |e: i64| -> bool {
            // err · 10^max(0,-e) ≤ 2^prec · 10^max(0,e)
            let ten = BigInt::from(10u8);
            let lhs = &self.err * num_traits::pow::pow(ten.clone(), (-e).max(0) as usize);
            let rhs = (BigInt::one() << self.prec)
                * num_traits::pow::pow(ten, e.max(0) as usize);
            lhs <= rhs
        };
        while !check(e) {
            e += 1;
        }
        while e > i64::MIN + 1 && check(e - 1) {
            e -= 1;
        }
        Some(e)
    }

    /// Positional decimal string with `digits` fractional digits.
    pub fn to_decimal(&self) -> String {
        use alloc::format;
        let neg = self.mant.is_negative();
        let mag = self.mant.magnitude().clone();
        let scaled: BigUint = (mag * BigUint::from(10u8).pow(self.digits)) >> self.prec;
        let s = scaled.to_string();
        let d = self.digits as usize;
        let (int_part, frac_part) = if s.len() > d {
            (s[..s.len() - d].to_string(), s[s.len() - d..].to_string())
        } else {
            (String::from("0"), format!("{:0>width$}", s, width = d))
        };
        let sign = if neg { "-" } else { "" };
        if d == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }
}

impl fmt::Display for ArbReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal())
    }
}

/// Complex value over two [`ArbReal`] components.
#[derive(Clone, Debug)]
pub struct ArbComplex {
    pub re: ArbReal,
    pub im: ArbReal,
}

impl ArbComplex {
    pub fn new(re: ArbReal, im: ArbReal) -> Self {
        ArbComplex { re, im }
    }

    pub fn zero(policy: PrecisionPolicy) -> Self {
        ArbComplex { re: ArbReal::zero(policy), im: ArbReal::zero(policy) }
    }

    pub fn from_real(re: ArbReal) -> Self {
        let im = ArbReal {
            mant: BigInt::zero(),
            prec: re.prec,
            err: BigInt::zero(),
            digits: re.digits,
        };
        ArbComplex { re, im }
    }

    pub fn from_int(n: i64, policy: PrecisionPolicy) -> Self {
        Self::from_real(ArbReal::from_int(n, policy))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero_value() && self.im.err.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        ArbComplex { re: self.re.add(&other.re), im: self.im.add(&other.im) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        ArbComplex { re: self.re.sub(&other.re), im: self.im.sub(&other.im) }
    }

    pub fn neg(&self) -> Self {
        ArbComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let re = self.re.mul(&other.re).sub(&self.im.mul(&other.im));
        let im = self.re.mul(&other.im).add(&self.im.mul(&other.re));
        ArbComplex { re, im }
    }

    pub fn mul_real(&self, other: &ArbReal) -> Self {
        ArbComplex { re: self.re.mul(other), im: self.im.mul(other) }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        ArbComplex { re: self.re.mul_int(k), im: self.im.mul_int(k) }
    }

    pub fn div(&self, other: &Self) -> Self {
        let denom = other.norm_sqr();
        let num = self.mul(&other.conj());
        ArbComplex { re: num.re.div(&denom), im: num.im.div(&denom) }
    }

    pub fn div_int(&self, k: i64) -> Self {
        ArbComplex { re: self.re.div_int(k), im: self.im.div_int(k) }
    }

    pub fn conj(&self) -> Self {
        ArbComplex { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn norm_sqr(&self) -> ArbReal {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self) -> ArbReal {
        self.norm_sqr().sqrt()
    }

    pub fn max_err_exp(&self) -> Option<i64> {
        match (self.re.error_exp(), self.im.error_exp()) {
            (None, e) | (e, None) => e,
            (Some(a), Some(b)) => Some(a.max(b)),
        }
    }
}

/// Per-precision cache of shared constants, owned explicitly by the caller.
#[derive(Debug)]
pub struct ConstCache {
    policy: PrecisionPolicy,
    pi: Option<ArbReal>,
    ln2: Option<ArbReal>,
}

impl ConstCache {
    pub fn new(policy: PrecisionPolicy) -> Self {
        ConstCache { policy, pi: None, ln2: None }
    }

    pub fn policy(&self) -> PrecisionPolicy {
        self.policy
    }

    /// π by Machin's formula `π = 16 atan(1/5) − 4 atan(1/239)`.
    pub fn pi(&mut self) -> ArbReal {
        if self.pi.is_none() {
            let p = self.policy.working_bits() + 16;
            let a = atan_inv_int(5, p, self.policy.digits);
            let b = atan_inv_int(239, p, self.policy.digits);
            let pi = a.mul_int(16).sub(&b.mul_int(4));
            self.pi = Some(pi.with_prec(self.policy.working_bits()));
        }
        self.pi.clone().expect("just created")
    }

    /// `ln 2 = 2 atanh(1/3)`.
    pub fn ln2(&mut self) -> ArbReal {
        if self.ln2.is_none() {
            let p = self.policy.working_bits() + 16;
            let v = atanh_inv_int(3, p, self.policy.digits);
            self.ln2 = Some(v.mul_int(2).with_prec(self.policy.working_bits()));
        }
        self.ln2.clone().expect("just created")
    }
}

/// `atan(1/k)` for integer `k ≥ 2` by the alternating Taylor series,
/// in pure integer arithmetic (error ≤ 2 ulps).
fn atan_inv_int(k: i64, prec: u32, digits: u32) -> ArbReal {
    let k2 = BigInt::from(k) * BigInt::from(k);
    let mut power = (BigInt::one() << prec) / BigInt::from(k);
    let mut acc = BigInt::zero();
    let mut n: i64 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * n + 1);
        if n % 2 == 0 {
            acc += &term;
        } else {
            acc -= &term;
        }
        power /= &k2;
        n += 1;
    }
    // Truncated alternating series: tail below the first dropped term, plus
    // one ulp per floor division (n of them, each < 1 ulp, bounded by n + 2).
    ArbReal { mant: acc, prec, err: BigInt::from(n + 2), digits }
}

/// `atanh(1/k)` for integer `k ≥ 2`, same scheme with positive terms.
fn atanh_inv_int(k: i64, prec: u32, digits: u32) -> ArbReal {
    let k2 = BigInt::from(k) * BigInt::from(k);
    let mut power = (BigInt::one() << prec) / BigInt::from(k);
    let mut acc = BigInt::zero();
    let mut n: i64 = 0;
    while !power.is_zero() {
        acc += &power / BigInt::from(2 * n + 1);
        power /= &k2;
        n += 1;
    }
    // Geometric tail with ratio 1/k² ≤ 1/4: below twice the dropped term.
    ArbReal { mant: acc, prec, err: BigInt::from(n + 4), digits }
}

/// `exp(x)` with argument reduction by ln 2.
pub fn exp(x: &ArbReal, cache: &mut ConstCache) -> ArbReal {
    let ln2 = cache.ln2().with_prec(x.prec);
    // k = round(x / ln 2)
    let k = {
        let q = x.div(&ln2);
        let half = BigInt::one() << (q.prec - 1);
        let shifted = if q.mant.is_negative() {
            -((-&q.mant + &half) >> q.prec)
        } else {
            (&q.mant + &half) >> q.prec
        };
        shifted.to_i64().expect("exp argument out of range")
    };
    let r = x.sub(&ln2.mul_int(k));
    // |r| ≤ ln2/2 + slack; Taylor terms decay by at least ~0.36/n.
    let one = ArbReal {
        mant: BigInt::one() << x.prec,
        prec: x.prec,
        err: BigInt::zero(),
        digits: x.digits,
    };
    let mut sum = one.clone();
    let mut term = one;
    let mut n: i64 = 1;
    loop {
        term = term.mul(&r).div_int(n);
        if term.mant.is_zero() {
            break;
        }
        sum = sum.add(&term);
        n += 1;
        assert!(n < 10_000, "exp series failed to converge");
    }
    // Tail below twice the first dropped term (ratio ≤ 1/2 well before here).
    let mut out = sum.scale2(k as i32);
    out.add_err_ulps(BigInt::from(4));
    out
}

/// Natural logarithm of a positive value.
pub fn ln(x: &ArbReal, cache: &mut ConstCache) -> ArbReal {
    assert!(x.mant.is_positive(), "ln of a non-positive value");
    let prec = x.prec;
    // Normalize x = m · 2^k with m ∈ [1, 2).
    let k = x.mant.bits() as i64 - 1 - prec as i64;
    let m = x.scale2(-k as i32);
    // ln m = 2 atanh(t), t = (m-1)/(m+1) ∈ [0, 1/3).
    let one = ArbReal::from_parts(BigInt::one() << prec, prec, BigInt::zero(), x.digits);
    let t = m.sub(&one).div(&m.add(&one));
    let t2 = t.mul(&t);
    let mut term = t.clone();
    let mut sum = t;
    let mut n: i64 = 1;
    loop {
        term = term.mul(&t2);
        let contrib = term.div_int(2 * n + 1);
        if contrib.mant.is_zero() {
            break;
        }
        sum = sum.add(&contrib);
        n += 1;
        assert!(n < 10_000, "ln series failed to converge");
    }
    let mut out = sum.mul_int(2).add(&cache.ln2().with_prec(prec).mul_int(k));
    // Geometric tail, ratio t² < 1/8.
    out.add_err_ulps(BigInt::from(4));
    out
}

/// `arctan` for any real argument.
pub fn atan(x: &ArbReal, cache: &mut ConstCache) -> ArbReal {
    let prec = x.prec;
    let one = ArbReal::from_parts(BigInt::one() << prec, prec, BigInt::zero(), x.digits);
    if *x.mant.magnitude() > (BigUint::one() << prec) {
        // atan(x) = sign(x)·π/2 − atan(1/x)
        let half_pi = cache.pi().with_prec(prec).scale2(-1);
        let inv = one.div(x);
        let rest = atan(&inv, cache);
        return if x.mant.is_negative() {
            half_pi.neg().sub(&rest)
        } else {
            half_pi.sub(&rest)
        };
    }
    // Halve the angle twice: t ← t / (1 + √(1+t²)); |t| ≤ 1 drops below 0.2.
    let mut t = x.clone();
    for _ in 0..2 {
        let root = one.add(&t.mul(&t)).sqrt();
        t = t.div(&one.add(&root));
    }
    let t2 = t.mul(&t);
    let mut term = t.clone();
    let mut sum = t;
    let mut n: i64 = 1;
    loop {
        term = term.mul(&t2);
        let contrib = term.div_int(2 * n + 1);
        if contrib.mant.is_zero() {
            break;
        }
        if n % 2 == 1 {
            sum = sum.sub(&contrib);
        } else {
            sum = sum.add(&contrib);
        }
        n += 1;
        assert!(n < 10_000, "atan series failed to converge");
    }
    let mut out = sum.mul_int(4);
    out.add_err_ulps(BigInt::from(8));
    out
}

/// Two-argument arctangent with the usual quadrant conventions.
pub fn atan2(y: &ArbReal, x: &ArbReal, cache: &mut ConstCache) -> ArbReal {
    let pi = cache.pi().with_prec(x.prec.max(y.prec));
    if x.mant.is_positive() {
        atan(&y.div(x), cache)
    } else if x.mant.is_negative() {
        let base = atan(&y.div(x), cache);
        if y.mant.is_negative() {
            base.sub(&pi)
        } else {
            base.add(&pi)
        }
    } else if y.mant.is_positive() {
        pi.scale2(-1)
    } else if y.mant.is_negative() {
        pi.scale2(-1).neg()
    } else {
        panic!("atan2(0, 0) is undefined");
    }
}

/// `cos(x)`, reducing by multiples of 2π first.
pub fn cos(x: &ArbReal, cache: &mut ConstCache) -> ArbReal {
    let prec = x.prec;
    let two_pi = cache.pi().with_prec(prec).mul_int(2);
    let mut r = x.clone();
    // |r| ≤ π after subtracting round(x/2π)·2π.
    let q = r.div(&two_pi);
    let k = shr_round(&q.mant, q.prec);
    if !k.is_zero() {
        let k_real = ArbReal::from_parts(&k << prec, prec, BigInt::zero(), x.digits);
        r = r.sub(&two_pi.mul(&k_real));
    }
    let r2 = r.mul(&r);
    let one = ArbReal::from_parts(BigInt::one() << prec, prec, BigInt::zero(), x.digits);
    let mut sum = one.clone();
    let mut term = one;
    let mut n: i64 = 1;
    loop {
        term = term.mul(&r2).div_int(2 * n - 1).div_int(2 * n);
        if term.mant.is_zero() {
            break;
        }
        if n % 2 == 1 {
            sum = sum.sub(&term);
        } else {
            sum = sum.add(&term);
        }
        n += 1;
        assert!(n < 10_000, "cos series failed to converge");
    }
    sum.add_err_ulps(BigInt::from(4));
    sum
}

/// `x^s = exp(s ln x)` for positive `x`.
pub fn pow_real(x: &ArbReal, s: &ArbReal, cache: &mut ConstCache) -> ArbReal {
    exp(&s.mul(&ln(x, cache)), cache)
}

/// Principal complex logarithm: `ln|z| + i·arg z`.
pub fn ln_complex(z: &ArbComplex, cache: &mut ConstCache) -> ArbComplex {
    let norm2 = z.norm_sqr();
    let re = ln(&norm2, cache).scale2(-1);
    let im = atan2(&z.im, &z.re, cache);
    ArbComplex::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    const PI_50: &str = "3.14159265358979323846264338327950288419716939937511";
    const LN2_50: &str = "0.69314718055994530941723212145817656807550013436026";
    const SQRT2_50: &str = "1.41421356237309504880168872420969807856967187537695";
    const E_50: &str = "2.71828182845904523536028747135266249775724709369996";

    fn policy50() -> PrecisionPolicy {
        PrecisionPolicy::new(50)
    }

    fn assert_digits(x: &ArbReal, expected: &str) {
        // Compare all but the last printed digit (the reference strings are
        // rounded, the printer truncates toward zero after rounding at ulp).
        let got = x.to_decimal();
        assert_eq!(&got[..got.len() - 1], &expected[..expected.len() - 1], "got {got}");
    }

    #[test]
    fn addition_is_exact() {
        let p = policy50();
        let a = ArbReal::from_rational(&q(1, 3), p);
        let b = ArbReal::from_rational(&q(2, 3), p);
        let one = a.add(&b);
        assert_eq!(one.err_ulps(), &BigInt::from(2));
        assert!(one.sub(&ArbReal::from_int(1, p)).mant().magnitude().bits() <= 1);
    }

    #[test]
    fn pi_and_ln2_digits() {
        let mut cache = ConstCache::new(policy50());
        assert_digits(&cache.pi(), PI_50);
        assert_digits(&cache.ln2(), LN2_50);
        assert!(cache.pi().error_exp().unwrap() <= -50);
        assert!(cache.ln2().error_exp().unwrap() <= -50);
    }

    #[test]
    fn sqrt_and_exp_digits() {
        let p = policy50();
        let mut cache = ConstCache::new(p);
        assert_digits(&ArbReal::from_int(2, p).sqrt(), SQRT2_50);
        assert_digits(&exp(&ArbReal::from_int(1, p), &mut cache), E_50);
    }

    #[test]
    fn ln_inverts_exp() {
        let p = policy50();
        let mut cache = ConstCache::new(p);
        for v in [1i64, 2, 7, 100] {
            let x = ArbReal::from_int(v, p);
            let back = exp(&ln(&x, &mut cache), &mut cache);
            let diff = back.sub(&x).abs();
            assert!(p.certifies(&back));
            assert!(diff.to_f64() < 1e-55, "v = {v}");
        }
        // ln respects exact powers of two.
        let x = ArbReal::from_rational(&q(1, 8), p);
        let got = ln(&x, &mut cache);
        let expect = cache.ln2().mul_int(-3);
        assert!(got.sub(&expect).to_f64().abs() < 1e-55);
    }

    #[test]
    fn atan_and_cos_special_values() {
        let p = policy50();
        let mut cache = ConstCache::new(p);
        let one = ArbReal::from_int(1, p);
        // atan(1) = π/4
        let got = atan(&one, &mut cache);
        let expect = cache.pi().scale2(-2);
        assert!(got.sub(&expect).to_f64().abs() < 1e-55);
        // atan2(1, 1) = π/4 and atan2(1, -1) = 3π/4
        let got = atan2(&one, &one, &mut cache);
        assert!(got.sub(&expect).to_f64().abs() < 1e-55);
        let got = atan2(&one, &one.neg(), &mut cache);
        let expect = cache.pi().mul_int(3).scale2(-2);
        assert!(got.sub(&expect).to_f64().abs() < 1e-55);
        // cos(π/3) = 1/2
        let third = cache.pi().div_int(3);
        let got = cos(&third, &mut cache);
        let expect = ArbReal::from_rational(&q(1, 2), p);
        assert!(got.sub(&expect).to_f64().abs() < 1e-55);
        assert!(p.certifies(&got));
        // Reduction: cos(x + 2π) = cos(x).
        let shifted = cos(&third.add(&cache.pi().mul_int(2)), &mut cache);
        assert!(shifted.sub(&got).to_f64().abs() < 1e-48);
    }

    #[test]
    fn pow_real_matches_sqrt() {
        let p = policy50();
        let mut cache = ConstCache::new(p);
        let two = ArbReal::from_int(2, p);
        let half = ArbReal::from_rational(&q(1, 2), p);
        let got = pow_real(&two, &half, &mut cache);
        assert!(got.sub(&two.sqrt()).to_f64().abs() < 1e-55);
    }

    #[test]
    fn complex_arithmetic_and_log() {
        let p = policy50();
        let mut cache = ConstCache::new(p);
        let z = ArbComplex::new(ArbReal::from_int(1, p), ArbReal::from_int(2, p));
        let w = ArbComplex::new(ArbReal::from_int(3, p), ArbReal::from_int(-1, p));
        let prod = z.mul(&w);
        assert!(prod.re.sub(&ArbReal::from_int(5, p)).to_f64().abs() < 1e-55);
        assert!(prod.im.sub(&ArbReal::from_int(5, p)).to_f64().abs() < 1e-55);
        let ratio = prod.div(&w);
        assert!(ratio.re.sub(&z.re).to_f64().abs() < 1e-50);
        assert!(ratio.im.sub(&z.im).to_f64().abs() < 1e-50);
        // ln(2i) = ln 2 + iπ/2
        let two_i = ArbComplex::new(ArbReal::zero(p), ArbReal::from_int(2, p));
        let l = ln_complex(&two_i, &mut cache);
        assert!(l.re.sub(&cache.ln2()).to_f64().abs() < 1e-50);
        assert!(l.im.sub(&cache.pi().scale2(-1)).to_f64().abs() < 1e-50);
    }

    #[test]
    fn decimal_output_and_error_exponent() {
        let p = PrecisionPolicy::new(6);
        let x = ArbReal::from_rational(&q(1, 3), p);
        assert_eq!(x.to_decimal(), "0.333333");
        assert_eq!(ArbReal::from_rational(&q(-1, 4), p).to_decimal(), "-0.250000");
        assert!(x.error_exp().unwrap() <= -6);
        assert_eq!(ArbReal::from_int(7, p).error_exp(), None);
        let mut noisy = ArbReal::from_int(1, p);
        noisy.add_err_ulps(BigInt::one() << (noisy.prec() - 1));
        assert_eq!(noisy.error_exp(), Some(0));
    }

    #[test]
    fn rescaling_tracks_error() {
        let p = policy50();
        let x = ArbReal::from_rational(&q(22, 7), p);
        let narrow = x.with_prec(64);
        assert!(narrow.err_ulps() >= &BigInt::one());
        let wide = narrow.with_prec(x.prec());
        assert!(wide.sub(&x).to_f64().abs() < 1e-18);
    }
}
