//! The expression grammar and AST.
//!
//! ```text
//! expr    := term (('+'|'-') term)*
//! term    := factor ('*' factor)*
//! factor  := 'zeta(' ints [';' signs] ')' | 'phi(' ints ')'
//!          | 'Li[' ints '](' numbers ')' | 'L[' letters '](' number ')'
//!          | number | '(' expr ')'
//! letters := ('0'|'1'|'m') {',' ('0'|'1'|'m')}
//! ints    := int {',' int}
//! numbers := number {',' number}
//! number  := decimal | 'p/q' | 'a+bi'
//! signs   := ('+'|'-')+          (one per index entry; an extension that
//!                                  lets level-two relations round-trip)
//! ```
//!
//! `phi(n₁,…,n_d)` is input sugar for `(-1)^d · zeta(n₁,…,n_d;--…-)`: the
//! alternating sum with unit-offset signs, matching `φ(s) = Σ(-1)^{n-1}n^-s`.
//! Parsing and printing round-trip on canonical forms.

use std::fmt;

use periodlab_core::numerics::QComplex;
use periodlab_core::rational::{q_int, Rational};
use periodlab_core::word::{Letter, MzvIndex, Word};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A parse error with the byte position it occurred at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at position {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ParseError {}

/// Source span (byte offsets) of a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

/// Expression AST. Indexes are validated at parse time (`n_i ≥ 1`, sign
/// strings of matching length).
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    /// `zeta(n₁,…,n_d)` or `zeta(n₁,…,n_d; s₁…s_d)`.
    ZetaIndex { index: MzvIndex, span: Span },
    /// `phi(n₁,…,n_d)`: carries the `(-1)^d` sign at lowering time.
    PhiIndex { exponents: Vec<u32>, span: Span },
    /// `Li[k₁,…,k_r](z₁,…,z_r)`.
    LiCall { exponents: Vec<u32>, args: Vec<QComplex>, span: Span },
    /// `L[letters](z)`.
    WordEval { word: Word, arg: QComplex, span: Span },
    /// A rational or complex-rational literal.
    Number { value: QComplex, span: Span },
    /// `factor * factor * …` (at least two).
    Product(Vec<Expr>),
    /// `term ± term ± …` (at least two; the leading term is positive).
    Sum(Vec<(bool, Expr)>),
}

impl Expr {
    pub fn span(&self) -> Span {
        match self {
            Expr::ZetaIndex { span, .. }
            | Expr::PhiIndex { span, .. }
            | Expr::LiCall { span, .. }
            | Expr::WordEval { span, .. }
            | Expr::Number { span, .. } => *span,
            Expr::Product(fs) => Span {
                start: fs.first().map_or(0, |f| f.span().start),
                end: fs.last().map_or(0, |f| f.span().end),
            },
            Expr::Sum(ts) => Span {
                start: ts.first().map_or(0, |(_, t)| t.span().start),
                end: ts.last().map_or(0, |(_, t)| t.span().end),
            },
        }
    }
}

fn fmt_rational(x: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if x.denom().is_one() {
        write!(f, "{}", x.numer())
    } else {
        write!(f, "{}/{}", x.numer(), x.denom())
    }
}

fn fmt_qcomplex(z: &QComplex, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if z.im.is_zero() {
        fmt_rational(&z.re, f)
    } else {
        fmt_rational(&z.re, f)?;
        if z.im.is_positive() {
            write!(f, "+")?;
        }
        fmt_rational(&z.im, f)?;
        write!(f, "i")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::ZetaIndex { index, .. } => write!(f, "{index}"),
            Expr::PhiIndex { exponents, .. } => {
                write!(f, "phi(")?;
                for (i, n) in exponents.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{n}")?;
                }
                write!(f, ")")
            }
            Expr::LiCall { exponents, args, .. } => {
                write!(f, "Li[")?;
                for (i, n) in exponents.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{n}")?;
                }
                write!(f, "](")?;
                for (i, z) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    fmt_qcomplex(z, f)?;
                }
                write!(f, ")")
            }
            Expr::WordEval { word, arg, .. } => {
                write!(f, "L[")?;
                for (i, l) in word.letters().iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    match l {
                        Letter::Zero => write!(f, "0")?,
                        Letter::Root(0) => write!(f, "1")?,
                        Letter::Root(_) => write!(f, "m")?,
                    }
                }
                write!(f, "](")?;
                fmt_qcomplex(arg, f)?;
                write!(f, ")")
            }
            Expr::Number { value, .. } => fmt_qcomplex(value, f),
            Expr::Product(fs) => {
                for (i, e) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    if matches!(e, Expr::Sum(_)) {
                        write!(f, "({e})")?;
                    } else {
                        write!(f, "{e}")?;
                    }
                }
                Ok(())
            }
            Expr::Sum(ts) => {
                for (i, (neg, e)) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " {} ", if *neg { '-' } else { '+' })?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
        }
    }
}

/// Parses one expression, requiring the full input to be consumed.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

/// Parses a bare index (`zeta(…)` form), used by the table cache.
pub fn parse_index(text: &str) -> Result<MzvIndex, ParseError> {
    match parse(text)? {
        Expr::ZetaIndex { index, .. } => Ok(index),
        _ => Err(ParseError { pos: 0, msg: format!("expected an index, got {text:?}") }),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {:?}", c as char)))
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let first = self.term()?;
        let mut terms = vec![(false, first)];
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    terms.push((false, self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    terms.push((true, self.term()?));
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 {
            terms.pop().expect("one term").1
        } else {
            Expr::Sum(terms)
        })
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![self.factor()?];
        while self.peek() == Some(b'*') {
            self.pos += 1;
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().expect("one factor")
        } else {
            Expr::Product(factors)
        })
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.eat_keyword("zeta") {
            self.eat(b'(')?;
            let exponents = self.int_list()?;
            if exponents.is_empty() {
                return Err(self.err("zeta needs at least one exponent"));
            }
            let twists = if self.peek() == Some(b';') {
                self.pos += 1;
                let signs = self.sign_run(exponents.len())?;
                Some(signs)
            } else {
                None
            };
            self.eat(b')')?;
            let level = match &twists {
                Some(t) if t.iter().any(|&x| x == 1) => 2,
                _ => 1,
            };
            let twists = twists.unwrap_or_else(|| vec![0; exponents.len()]);
            let index = MzvIndex::new(level, exponents, twists)
                .map_err(|e| self.err(format!("{e}")))?;
            return Ok(Expr::ZetaIndex { index, span: Span { start, end: self.pos } });
        }
        if self.eat_keyword("phi") {
            self.eat(b'(')?;
            let exponents = self.int_list()?;
            if exponents.is_empty() {
                return Err(self.err("phi needs at least one exponent"));
            }
            self.eat(b')')?;
            return Ok(Expr::PhiIndex { exponents, span: Span { start, end: self.pos } });
        }
        if self.eat_keyword("Li") {
            self.eat(b'[')?;
            let exponents = self.int_list()?;
            if exponents.is_empty() {
                return Err(self.err("Li needs at least one exponent"));
            }
            self.eat(b']')?;
            self.eat(b'(')?;
            let mut args = vec![self.number()?];
            while self.peek() == Some(b',') {
                self.pos += 1;
                args.push(self.number()?);
            }
            self.eat(b')')?;
            if args.len() != exponents.len() {
                return Err(self.err(format!(
                    "Li takes as many arguments as exponents ({} vs {})",
                    exponents.len(),
                    args.len()
                )));
            }
            return Ok(Expr::LiCall { exponents, args, span: Span { start, end: self.pos } });
        }
        if self.eat_keyword("L") {
            self.eat(b'[')?;
            let mut letters = Vec::new();
            let mut level = 1u8;
            loop {
                match self.peek() {
                    Some(b'0') => letters.push(Letter::Zero),
                    Some(b'1') => letters.push(Letter::Root(0)),
                    Some(b'm') => {
                        letters.push(Letter::Root(1));
                        level = 2;
                    }
                    _ => return Err(self.err("expected a letter 0, 1 or m")),
                }
                self.pos += 1;
                if self.peek() == Some(b',') {
                    self.pos += 1;
                } else {
                    break;
                }
            }
            self.eat(b']')?;
            self.eat(b'(')?;
            let arg = self.number()?;
            self.eat(b')')?;
            let word = Word::new(level, letters).map_err(|e| self.err(format!("{e}")))?;
            return Ok(Expr::WordEval { word, arg, span: Span { start, end: self.pos } });
        }
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.eat(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'-' || c == b'.' => {
                let value = self.number()?;
                Ok(Expr::Number { value, span: Span { start, end: self.pos } })
            }
            _ => Err(self.err("expected zeta(…), phi(…), Li[…](…), L[…](…), a number, or (…)")),
        }
    }

    fn sign_run(&mut self, expected: usize) -> Result<Vec<u8>, ParseError> {
        let mut out = Vec::with_capacity(expected);
        loop {
            match self.peek() {
                Some(b'+') => out.push(0),
                Some(b'-') => out.push(1),
                _ => break,
            }
            self.pos += 1;
        }
        if out.len() != expected {
            return Err(self.err(format!("expected {expected} signs, got {}", out.len())));
        }
        Ok(out)
    }

    fn int_list(&mut self) -> Result<Vec<u32>, ParseError> {
        let mut out = vec![self.small_int()?];
        while self.peek() == Some(b',') {
            self.pos += 1;
            out.push(self.small_int()?);
        }
        Ok(out)
    }

    fn small_int(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let n: u32 = text.parse().map_err(|_| self.err("integer out of range"))?;
        if n == 0 {
            return Err(self.err("indexes are at least 1"));
        }
        Ok(n)
    }

    /// `decimal | p/q | a+bi` with optional leading sign; `i` marks a pure
    /// imaginary part (`a+bi`, `a-bi`, `bi`).
    fn number(&mut self) -> Result<QComplex, ParseError> {
        let (first, first_imag) = self.signed_rational()?;
        if first_imag {
            return Ok(QComplex::new(Rational::zero(), first));
        }
        match self.src.get(self.pos).copied() {
            Some(b'+') | Some(b'-') => {
                let save = self.pos;
                let neg = self.src[self.pos] == b'-';
                self.pos += 1;
                match self.unsigned_rational() {
                    Ok((mag, true)) => {
                        let im = if neg { -mag } else { mag };
                        Ok(QComplex::new(first, im))
                    }
                    _ => {
                        self.pos = save;
                        Ok(QComplex::real(first))
                    }
                }
            }
            _ => Ok(QComplex::real(first)),
        }
    }

    fn signed_rational(&mut self) -> Result<(Rational, bool), ParseError> {
        self.skip_ws();
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let (mag, imag) = self.unsigned_rational()?;
        Ok((if neg { -mag } else { mag }, imag))
    }

    /// Returns the value and whether it carried the `i` suffix.
    fn unsigned_rational(&mut self) -> Result<(Rational, bool), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut int_part = String::new();
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            int_part.push(self.src[self.pos] as char);
            self.pos += 1;
        }
        let mut value: Rational;
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            let mut frac = String::new();
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                frac.push(self.src[self.pos] as char);
                self.pos += 1;
            }
            if int_part.is_empty() && frac.is_empty() {
                return Err(self.err("expected digits"));
            }
            let digits = format!("{int_part}{frac}");
            let num: BigInt = digits.parse().map_err(|_| self.err("bad number"))?;
            let den = num_traits::pow::pow(BigInt::from(10), frac.len());
            value = Rational::new(num, den);
        } else {
            if int_part.is_empty() {
                return Err(self.err("expected digits"));
            }
            let num: BigInt = int_part.parse().map_err(|_| self.err("bad number"))?;
            value = Rational::from_integer(num);
            if self.src.get(self.pos) == Some(&b'/') {
                self.pos += 1;
                let mut den = String::new();
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    den.push(self.src[self.pos] as char);
                    self.pos += 1;
                }
                if den.is_empty() {
                    return Err(self.err("expected a denominator"));
                }
                let den: BigInt = den.parse().map_err(|_| self.err("bad denominator"))?;
                if den.is_zero() {
                    return Err(ParseError { pos: start, msg: "zero denominator".into() });
                }
                value /= Rational::from_integer(den);
            }
        }
        if self.src.get(self.pos) == Some(&b'i') {
            self.pos += 1;
            return Ok((value, true));
        }
        Ok((value, false))
    }
}

/// Lowers `phi(n₁,…,n_d)` to its signed index: `(-1)^d, (n; all -1)`.
pub fn phi_to_index(exponents: &[u32]) -> (Rational, MzvIndex) {
    let sign = if exponents.len() % 2 == 1 { q_int(-1) } else { q_int(1) };
    let index = MzvIndex::new(2, exponents.to_vec(), vec![1; exponents.len()])
        .expect("valid alternating index");
    (sign, index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use periodlab_core::rational::q;
    use proptest::prelude::*;

    #[test]
    fn parse_examples() {
        let e = parse("zeta(3,5)").unwrap();
        assert!(matches!(e, Expr::ZetaIndex { ref index, .. } if index == &MzvIndex::zeta(&[3, 5])));

        let e = parse("phi(1,3) * zeta(2)").unwrap();
        match e {
            Expr::Product(fs) => {
                assert_eq!(fs.len(), 2);
                assert!(matches!(fs[0], Expr::PhiIndex { ref exponents, .. } if exponents == &[1, 3]));
                assert!(matches!(fs[1], Expr::ZetaIndex { .. }));
            }
            other => panic!("expected a product, got {other:?}"),
        }

        let e = parse("L[1,0](1/2)").unwrap();
        match e {
            Expr::WordEval { word, arg, .. } => {
                assert_eq!(word, Word::parse("10", 1).unwrap());
                assert_eq!(arg, QComplex::real(q(1, 2)));
            }
            other => panic!("expected a word evaluation, got {other:?}"),
        }

        let e = parse("Li[1,3](1/5, 1/7)").unwrap();
        assert!(matches!(e, Expr::LiCall { ref exponents, .. } if exponents == &[1, 3]));

        let e = parse("zeta(1,2;-+)").unwrap();
        match e {
            Expr::ZetaIndex { index, .. } => {
                assert_eq!(index, MzvIndex::new(2, vec![1, 2], vec![1, 0]).unwrap());
            }
            other => panic!("{other:?}"),
        }

        let e = parse("0.25 + 2/5+1/10i").unwrap();
        match e {
            Expr::Sum(ts) => {
                assert!(matches!(
                    &ts[1].1,
                    Expr::Number { value, .. } if value == &QComplex::new(q(2, 5), q(1, 10))
                ));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parse_errors_have_positions() {
        let e = parse("zeta()").unwrap_err();
        assert!(e.pos >= 5, "{e}");
        assert!(parse("zeta(0)").is_err(), "zero exponents are invalid");
        let e = parse("zeta(2").unwrap_err();
        assert!(e.msg.contains("expected"));
        assert!(parse("zeta(1,2;-)").is_err(), "sign count must match");
        assert!(parse("Li[2](1/2, 1/3)").is_err(), "arity mismatch");
        assert!(parse("1/0").is_err());
        assert!(parse("zeta(2) zeta(3)").is_err(), "missing operator");
    }

    #[test]
    fn phi_lowering_signs() {
        let (s1, p1) = phi_to_index(&[1]);
        assert_eq!(s1, q_int(-1));
        assert_eq!(p1, MzvIndex::new(2, vec![1], vec![1]).unwrap());
        let (s2, _) = phi_to_index(&[1, 3]);
        assert_eq!(s2, q_int(1));
    }

    fn arb_simple_rational() -> impl Strategy<Value = Rational> {
        (0i64..400, 1i64..40).prop_map(|(n, d)| q(n, d))
    }

    fn arb_qcomplex() -> impl Strategy<Value = QComplex> {
        (arb_simple_rational(), prop::option::of((any::<bool>(), arb_simple_rational())))
            .prop_map(|(re, im)| match im {
                None => QComplex::real(re),
                Some((neg, mag)) => {
                    QComplex::new(re, if neg && !mag.is_zero() { -mag } else { mag })
                }
            })
    }

    fn arb_leaf() -> impl Strategy<Value = Expr> {
        let span = Span { start: 0, end: 0 };
        prop_oneof![
            prop::collection::vec(1u32..6, 1..4).prop_map(move |exponents| Expr::PhiIndex {
                exponents,
                span
            }),
            prop::collection::vec((1u32..6, 0u8..2), 1..4).prop_map(move |entries| {
                let (exponents, twists): (Vec<u32>, Vec<u8>) = entries.into_iter().unzip();
                let level = if twists.iter().any(|&t| t == 1) { 2 } else { 1 };
                Expr::ZetaIndex {
                    index: MzvIndex::new(level, exponents, twists).unwrap(),
                    span,
                }
            }),
            (prop::collection::vec(1u32..5, 1..3), prop::collection::vec(arb_qcomplex(), 1..3))
                .prop_map(move |(mut exponents, mut args)| {
                    let n = exponents.len().min(args.len());
                    exponents.truncate(n);
                    args.truncate(n);
                    Expr::LiCall { exponents, args, span }
                }),
            (prop::collection::vec(0u8..3, 1..5), arb_qcomplex()).prop_map(move |(ls, arg)| {
                let letters: Vec<Letter> = ls
                    .iter()
                    .map(|&x| if x == 0 { Letter::Zero } else { Letter::Root(x - 1) })
                    .collect();
                let level = if letters.contains(&Letter::Root(1)) { 2 } else { 1 };
                Expr::WordEval { word: Word::new(level, letters).unwrap(), arg, span }
            }),
            arb_qcomplex().prop_map(move |value| Expr::Number { value, span }),
        ]
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        arb_leaf().prop_recursive(3, 24, 4, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::Product),
                (inner.clone(), prop::collection::vec((any::<bool>(), inner), 1..3))
                    .prop_map(|(first, rest)| {
                        let mut terms = vec![(false, first)];
                        terms.extend(rest);
                        Expr::Sum(terms)
                    }),
            ]
        })
    }

    /// Spans differ after a round trip; compare everything else.
    fn strip_spans(e: &Expr) -> Expr {
        let span = Span { start: 0, end: 0 };
        match e {
            Expr::ZetaIndex { index, .. } => Expr::ZetaIndex { index: index.clone(), span },
            Expr::PhiIndex { exponents, .. } => {
                Expr::PhiIndex { exponents: exponents.clone(), span }
            }
            Expr::LiCall { exponents, args, .. } => {
                Expr::LiCall { exponents: exponents.clone(), args: args.clone(), span }
            }
            Expr::WordEval { word, arg, .. } => {
                Expr::WordEval { word: word.clone(), arg: arg.clone(), span }
            }
            Expr::Number { value, .. } => Expr::Number { value: value.clone(), span },
            Expr::Product(fs) => Expr::Product(fs.iter().map(strip_spans).collect()),
            Expr::Sum(ts) => Expr::Sum(ts.iter().map(|(n, t)| (*n, strip_spans(t))).collect()),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn print_parse_round_trip(e in arb_expr()) {
            let text = e.to_string();
            let parsed = parse(&text).unwrap_or_else(|err| panic!("{text}: {err}"));
            prop_assert_eq!(strip_spans(&parsed), strip_spans(&e), "{}", text);
        }
    }
}
