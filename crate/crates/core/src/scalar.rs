//! Scalars that stay exact rationals for as long as possible and fall back to
//! tracked-error floats otherwise.

use std::fmt;

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::bigfloat::BigFloat;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(Rational),
    Float(BigFloat),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(Rational::new())
    }

    pub fn one() -> Self {
        Scalar::Exact(Rational::from(1))
    }

    pub fn from_i64(v: i64) -> Self {
        Scalar::Exact(Rational::from(v))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::Exact(Rational::from((n, d)))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    /// Zero with certainty: an exact zero, or a float zero with no error.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => *r == 0,
            Scalar::Float(f) => f.is_exact_zero(),
        }
    }

    pub fn to_bigfloat(&self, prec: u32) -> BigFloat {
        match self {
            Scalar::Exact(r) => BigFloat::from_rational(prec, r),
            Scalar::Float(f) => f.to_prec(prec),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64(),
            Scalar::Float(f) => f.to_f64(),
        }
    }

    /// Precision to use when this scalar meets an exact one.
    fn float_prec(&self) -> Option<u32> {
        match self {
            Scalar::Float(f) => Some(f.prec()),
            Scalar::Exact(_) => None,
        }
    }

    fn binary(
        &self,
        rhs: &Scalar,
        exact: impl FnOnce(&Rational, &Rational) -> Rational,
        float: impl FnOnce(&BigFloat, &BigFloat) -> BigFloat,
    ) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(exact(a, b)),
            _ => {
                let prec = self
                    .float_prec()
                    .into_iter()
                    .chain(rhs.float_prec())
                    .max()
                    .expect("at least one float operand");
                Scalar::Float(float(&self.to_bigfloat(prec), &rhs.to_bigfloat(prec)))
            }
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        self.binary(rhs, |a, b| Rational::from(a + b), |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        if rhs.is_zero() {
            return self.clone();
        }
        self.binary(rhs, |a, b| Rational::from(a - b), |a, b| a - b)
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        self.binary(rhs, |a, b| Rational::from(a * b), |a, b| a * b)
    }

    /// Division; the divisor must not be an exact zero.
    pub fn div(&self, rhs: &Scalar) -> Result<Scalar> {
        if rhs.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        if self.is_zero() {
            return Ok(Scalar::zero());
        }
        Ok(self.binary(rhs, |a, b| Rational::from(a / b), |a, b| a / b))
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(Rational::from(-r)),
            Scalar::Float(f) => Scalar::Float(-f),
        }
    }

    pub fn mul_rational(&self, r: &Rational) -> Scalar {
        self.mul(&Scalar::Exact(r.clone()))
    }

    pub fn powi(&self, k: i32) -> Result<Scalar> {
        match self {
            Scalar::Exact(r) => {
                if *r == 0 && k < 0 {
                    return Err(Error::Domain("zero to a negative power".into()));
                }
                let mut num = Integer::from(r.numer().pow(k.unsigned_abs()));
                let mut den = Integer::from(r.denom().pow(k.unsigned_abs()));
                if k < 0 {
                    std::mem::swap(&mut num, &mut den);
                }
                Ok(Scalar::Exact(Rational::from((num, den))))
            }
            Scalar::Float(f) => Ok(Scalar::Float(f.powi(k))),
        }
    }

    /// Square root; stays exact for squares of rationals.
    pub fn sqrt(&self, prec: u32) -> Result<Scalar> {
        if let Scalar::Exact(r) = self {
            if *r < 0 {
                return Err(Error::Domain("square root of a negative number".into()));
            }
            if r.numer().is_perfect_square() && r.denom().is_perfect_square() {
                let n = Integer::from(r.numer().sqrt_ref());
                let d = Integer::from(r.denom().sqrt_ref());
                return Ok(Scalar::Exact(Rational::from((n, d))));
            }
        }
        let f = self.to_bigfloat(self.float_prec().unwrap_or(prec));
        if *f.value() < 0 {
            return Err(Error::Domain("square root of a negative number".into()));
        }
        Ok(Scalar::Float(f.sqrt()))
    }

    /// Decimal string: exact rationals as `p/q`, floats at full precision.
    pub fn render(&self) -> String {
        match self {
            Scalar::Exact(r) => r.to_string(),
            Scalar::Float(f) => f.to_decimal(),
        }
    }

    /// Decimal string at a given working precision, whatever the variant.
    pub fn decimal(&self, prec: u32) -> String {
        match self {
            Scalar::Exact(r) => BigFloat::from_rational(prec, r).to_decimal(),
            Scalar::Float(f) => f.to_decimal(),
        }
    }

    /// Exact equality for exact scalars; tolerance-plus-error otherwise.
    pub fn approx_eq(&self, other: &Scalar, tol: f64, prec: u32) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => self.to_bigfloat(prec).approx_eq(&other.to_bigfloat(prec), tol),
        }
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Exact(r)
    }
}

impl From<BigFloat> for Scalar {
    fn from(f: BigFloat) -> Self {
        Scalar::Float(f)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_i64(v)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// A multiplicative constant with the text it was written as.
///
/// The label lets symbolic output say `sqrt(2/pi)·ζ(3)` instead of a long
/// decimal.
#[derive(Clone, Debug)]
pub struct Prefactor {
    pub label: String,
    pub value: Scalar,
}

impl Prefactor {
    pub fn one() -> Self {
        Prefactor {
            label: "1".into(),
            value: Scalar::one(),
        }
    }

    pub fn exact(r: Rational) -> Self {
        Prefactor {
            label: r.to_string(),
            value: Scalar::Exact(r),
        }
    }

    pub fn parse(text: &str, prec: u32) -> Result<Self> {
        let value = parse_expr(text, prec)?;
        let label = match &value {
            Scalar::Exact(r) => r.to_string(),
            Scalar::Float(_) => text.split_whitespace().collect::<String>(),
        };
        Ok(Prefactor { label, value })
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.value, Scalar::Exact(r) if *r == 1)
    }
}

/// Parses a small arithmetic language: decimal and integer literals, `+ - * / ^`,
/// parentheses, `sqrt`, `exp`, `ln`, and the constants `pi` and `e`.
///
/// Literals are read exactly, so `"0.1"` is the rational 1/10.
pub fn parse_expr(text: &str, prec: u32) -> Result<Scalar> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        prec,
    };
    let v = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!(
            "unexpected trailing input in {text:?}"
        )));
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let lit: String = chars[start..i].iter().collect();
            out.push(Tok::Num(parse_decimal(&lit)?));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {text:?}")));
        }
    }
    Ok(out)
}

/// Reads a decimal literal (optional fraction and exponent) as an exact rational.
pub fn parse_decimal(lit: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("malformed number {lit:?}"));
    let (mantissa, exp) = match lit.find(['e', 'E']) {
        Some(k) => (&lit[..k], lit[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (lit, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(k) => (&mantissa[..k], &mantissa[k + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if frac_part.contains('.') {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let n = Integer::from_str_radix(if digits.is_empty() { "0" } else { &digits }, 10)
        .map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = Integer::from(10);
    let r = if scale >= 0 {
        Rational::from(n * Integer::from((&ten).pow(scale as u32)))
    } else {
        Rational::from((n, Integer::from((&ten).pow((-scale) as u32))))
    };
    Ok(r)
}

/// Parses `"p/q"`, an integer, or a decimal literal into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, t.strip_prefix('+').unwrap_or(t).trim()),
    };
    let r = match body.split_once('/') {
        Some((n, d)) => {
            let n = parse_decimal(n.trim())?;
            let d = parse_decimal(d.trim())?;
            if d == 0 {
                return Err(Error::Parse(format!("zero denominator in {text:?}")));
            }
            n / d
        }
        None => parse_decimal(body)?,
    };
    Ok(if neg { -r } else { r })
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
    prec: u32,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<()> {
        if self.eat(op) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected '{op}'")))
        }
    }

    fn expr(&mut self) -> Result<Scalar> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Scalar> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                acc = acc.div(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Scalar> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = self.unary()?;
        self.pow(base, e)
    }

    fn pow(&self, base: Scalar, e: Scalar) -> Result<Scalar> {
        if let Scalar::Exact(r) = &e {
            if r.is_integer() {
                let k = r
                    .numer()
                    .to_i32()
                    .ok_or_else(|| Error::Parse("exponent too large".into()))?;
                return base.powi(k);
            }
            if *r.denom() == 2 {
                let half = base.sqrt(self.prec)?;
                let k = Integer::from(r.numer()).to_i32().ok_or_else(|| Error::Parse("exponent too large".into()))?;
                return half.powi(k);
            }
            let b = base.to_bigfloat(self.prec);
            if *b.value() <= 0 {
                return Err(Error::Domain("non-integer power of a non-positive number".into()));
            }
            return Ok(Scalar::Float(b.pow_rational(r)));
        }
        let b = base.to_bigfloat(self.prec);
        if *b.value() <= 0 {
            return Err(Error::Domain("non-integer power of a non-positive number".into()));
        }
        Ok(Scalar::Float((&b.ln() * &e.to_bigfloat(self.prec)).exp()))
    }

    fn atom(&mut self) -> Result<Scalar> {
        match self.peek().cloned() {
            Some(Tok::Num(r)) => {
                self.pos += 1;
                Ok(Scalar::Exact(r))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "pi" => return Ok(Scalar::Float(BigFloat::pi(self.prec))),
                    "e" => return Ok(Scalar::Float(BigFloat::euler_e(self.prec))),
                    _ => {}
                }
                self.expect('(')?;
                let arg = self.expr()?;
                self.expect(')')?;
                match name.as_str() {
                    "sqrt" => arg.sqrt(self.prec),
                    "exp" => {
                        if arg.is_zero() {
                            Ok(Scalar::one())
                        } else {
                            Ok(Scalar::Float(arg.to_bigfloat(self.prec).exp()))
                        }
                    }
                    "ln" | "log" => {
                        let b = arg.to_bigfloat(self.prec);
                        if *b.value() <= 0 {
                            return Err(Error::Domain("logarithm of a non-positive number".into()));
                        }
                        if matches!(&arg, Scalar::Exact(r) if *r == 1) {
                            Ok(Scalar::zero())
                        } else {
                            Ok(Scalar::Float(b.ln()))
                        }
                    }
                    other => Err(Error::Parse(format!("unknown function {other:?}"))),
                }
            }
            Some(Tok::Op(c)) => Err(Error::Parse(format!("unexpected '{c}'"))),
            None => Err(Error::Parse("unexpected end of expression".into())),
        }
    }
}
