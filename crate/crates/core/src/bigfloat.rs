//! Arbitrary-precision reals with a tracked absolute error bound.
//!
//! Values are MPFR floats (`rug::Float`); the error bound is a low-precision
//! float that is always rounded upward, so it stays a valid upper bound on
//! `|value − true value|` as long as every operation goes through this type.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::{Constant, Round};
use rug::ops::{AssignRound, Pow};
use rug::{Float, Integer, Rational};

/// Precision of the error-bound float.
const ERR_PREC: u32 = 64;

/// Smallest and largest supported working precisions, in bits.
pub const MIN_PRECISION: u32 = 32;
pub const MAX_PRECISION: u32 = 1 << 16;

/// Default working precision, in bits.
pub const DEFAULT_PRECISION: u32 = 256;

fn up<T>(src: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(ERR_PREC, src, Round::Up).0
}

/// One unit in the last place of `x` at its own precision (0 for zero).
fn ulp(x: &Float) -> Float {
    if x.is_infinite() || x.is_nan() {
        return Float::with_val(ERR_PREC, rug::float::Special::Infinity);
    }
    match x.get_exp() {
        Some(e) => {
            let mut u = Float::with_val(ERR_PREC, 1u32);
            u <<= e - x.prec() as i32;
            u
        }
        None => Float::new(ERR_PREC),
    }
}

/// Rounds `src` to nearest at `prec` and returns the rounding error bound
/// (zero when the result is exact).
fn round_op<T>(prec: u32, src: T) -> (Float, Float)
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    let (v, ord) = Float::with_val_round(prec, src, Round::Nearest);
    let e = if ord == Ordering::Equal {
        Float::new(ERR_PREC)
    } else {
        ulp(&v)
    };
    (v, e)
}

fn abs_up(x: &Float) -> Float {
    up(&*x.as_abs())
}

fn abs_down(x: &Float) -> Float {
    Float::with_val_round(ERR_PREC, &*x.as_abs(), Round::Down).0
}

/// Number of significant decimal digits that round-trips a `prec`-bit float.
pub fn decimal_digits(prec: u32) -> usize {
    1 + (f64::from(prec) * std::f64::consts::LOG10_2).ceil() as usize
}

#[derive(Clone, Debug)]
pub struct BigFloat {
    value: Float,
    err: Float,
}

impl BigFloat {
    /// Wraps a value that is exact (error bound zero).
    pub fn exact(value: Float) -> Self {
        BigFloat {
            value,
            err: Float::new(ERR_PREC),
        }
    }

    /// Wraps a value with a caller-supplied error bound.
    pub fn with_error(value: Float, err: f64) -> Self {
        let err = up(err.abs());
        BigFloat { value, err }
    }

    /// Rounds `value` to `prec` bits and records the rounding error.
    pub fn rounded(prec: u32, value: &Float) -> Self {
        let v = Float::with_val(prec, value);
        let err = if v == *value { Float::new(ERR_PREC) } else { ulp(&v) };
        BigFloat { value: v, err }
    }

    pub fn from_rational(prec: u32, r: &Rational) -> Self {
        let (value, ord) = Float::with_val_round(prec, r, Round::Nearest);
        let err = if ord == Ordering::Equal {
            Float::new(ERR_PREC)
        } else {
            ulp(&value)
        };
        BigFloat { value, err }
    }

    pub fn from_integer(prec: u32, i: &Integer) -> Self {
        let (value, ord) = Float::with_val_round(prec, i, Round::Nearest);
        let err = if ord == Ordering::Equal {
            Float::new(ERR_PREC)
        } else {
            ulp(&value)
        };
        BigFloat { value, err }
    }

    pub fn from_i64(prec: u32, v: i64) -> Self {
        Self::from_integer(prec, &Integer::from(v))
    }

    pub fn zero(prec: u32) -> Self {
        Self::exact(Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::exact(Float::with_val(prec, 1u32))
    }

    pub fn pi(prec: u32) -> Self {
        let value = Float::with_val(prec, Constant::Pi);
        let err = ulp(&value);
        BigFloat { value, err }
    }

    pub fn euler_e(prec: u32) -> Self {
        Self::one(prec).exp()
    }

    /// Parses a decimal string (as produced by [`BigFloat::to_decimal`]).
    pub fn parse(prec: u32, s: &str) -> Option<Self> {
        let parsed = Float::parse(s.trim()).ok()?;
        let value = Float::with_val(prec, parsed);
        let err = ulp(&value);
        Some(BigFloat { value, err })
    }

    pub fn prec(&self) -> u32 {
        self.value.prec()
    }

    pub fn value(&self) -> &Float {
        &self.value
    }

    pub fn into_value(self) -> Float {
        self.value
    }

    pub fn error_bound(&self) -> &Float {
        &self.err
    }

    pub fn error_f64(&self) -> f64 {
        self.err.to_f64_round(Round::Up)
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.err.is_finite()
    }

    /// True when the value is exactly zero and carries no error.
    pub fn is_exact_zero(&self) -> bool {
        self.value.is_zero() && self.err.is_zero()
    }

    /// Widens the error bound by `extra`.
    pub fn add_error(&mut self, extra: &Float) {
        self.err = up(&self.err + &*extra.as_abs());
    }

    pub fn with_added_error(mut self, extra: f64) -> Self {
        self.add_error(&up(extra.abs()));
        self
    }

    /// Rounds to a new precision, folding the rounding into the bound.
    pub fn to_prec(&self, prec: u32) -> Self {
        let mut r = Self::rounded(prec, &self.value);
        r.add_error(&self.err);
        r
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            value: self.value.clone().abs(),
            err: self.err.clone(),
        }
    }

    /// `|self − other|` as an `f64`, rounded up.
    pub fn abs_diff(&self, other: &BigFloat) -> f64 {
        let d = Float::with_val(self.prec().max(other.prec()), &self.value - &other.value);
        d.abs().to_f64_round(Round::Up)
    }

    /// `|self − other| ≤ tol + combined error bounds`.
    pub fn approx_eq(&self, other: &BigFloat, tol: f64) -> bool {
        let d = Float::with_val(self.prec().max(other.prec()), &self.value - &other.value);
        let slack = up(&self.err + &other.err);
        let slack = up(&slack + tol.abs());
        *d.as_abs() <= slack
    }

    pub fn sqrt(&self) -> Self {
        let value = self.value.clone().sqrt();
        let prop = if self.err.is_zero() {
            Float::new(ERR_PREC)
        } else if value.is_zero() {
            up(self.err.sqrt_ref())
        } else {
            up(&self.err / &abs_down(&value))
        };
        let err = up(&prop + &ulp(&value));
        BigFloat { value, err }
    }

    pub fn exp(&self) -> Self {
        let value = self.value.clone().exp();
        // e^{x}(e^{δ} − 1) with e^{δ} − 1 ≤ δ·e^{δ}
        let growth = up(self.err.exp_ref());
        let prop = up(&abs_up(&value) * &self.err);
        let prop = up(&prop * &growth);
        let err = up(&prop + &ulp(&value));
        BigFloat { value, err }
    }

    /// Natural logarithm; the argument must be positive beyond its error.
    pub fn ln(&self) -> Self {
        let value = self.value.clone().ln();
        let lower = Float::with_val_round(ERR_PREC, &self.value - &self.err, Round::Down).0;
        let prop = if self.err.is_zero() {
            Float::new(ERR_PREC)
        } else if lower > 0 {
            up(&self.err / &lower)
        } else {
            Float::with_val(ERR_PREC, rug::float::Special::Infinity)
        };
        let err = up(&prop + &ulp(&value));
        BigFloat { value, err }
    }

    /// `self^e` for a positive base and a rational exponent.
    pub fn pow_rational(&self, e: &Rational) -> Self {
        if e.is_integer() {
            if let Some(k) = e.numer().to_i32() {
                return self.powi(k);
            }
        }
        let prec = self.prec();
        let ef = Float::with_val(prec + 32, e);
        let value = Float::with_val(prec, (&self.value).pow(&ef));
        let lower = Float::with_val_round(ERR_PREC, &self.value - &self.err, Round::Down).0;
        let prop = if self.err.is_zero() {
            Float::new(ERR_PREC)
        } else if lower > 0 {
            // |e|·|x^e|·δ/(x − δ), inflated by 2 for the curvature term
            let rel = up(&self.err / &lower);
            let rel = up(&rel * &abs_up(&ef));
            let rel = up(&rel * 2u32);
            up(&rel * &abs_up(&value))
        } else {
            Float::with_val(ERR_PREC, rug::float::Special::Infinity)
        };
        let err = up(&prop + &ulp(&value));
        BigFloat { value, err }
    }

    /// Integer power by repeated multiplication (errors propagate through `*`).
    pub fn powi(&self, k: i32) -> Self {
        if k == 0 {
            return Self::one(self.prec());
        }
        let mut base = self.clone();
        let mut n = k.unsigned_abs();
        let mut acc = Self::one(self.prec());
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        if k < 0 {
            &Self::one(self.prec()) / &acc
        } else {
            acc
        }
    }

    pub fn mul_rational(&self, r: &Rational) -> Self {
        self * &BigFloat::from_rational(self.prec(), r)
    }

    /// Decimal rendering with enough digits to round-trip the value.
    pub fn to_decimal(&self) -> String {
        self.value
            .to_string_radix(10, Some(decimal_digits(self.prec())))
    }

    /// Decimal rendering of the error bound (a few significant digits).
    pub fn error_decimal(&self) -> String {
        self.err.to_string_radix(10, Some(6))
    }

    pub fn cmp_value(&self, other: &BigFloat) -> Option<Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal())
    }
}

fn result_prec(a: &BigFloat, b: &BigFloat) -> u32 {
    a.prec().max(b.prec())
}

impl<'a> Add<&'a BigFloat> for &'a BigFloat {
    type Output = BigFloat;
    fn add(self, rhs: &'a BigFloat) -> BigFloat {
        let (value, rounding) = round_op(result_prec(self, rhs), &self.value + &rhs.value);
        let err = up(&self.err + &rhs.err);
        let err = up(&err + &rounding);
        BigFloat { value, err }
    }
}

impl<'a> Sub<&'a BigFloat> for &'a BigFloat {
    type Output = BigFloat;
    fn sub(self, rhs: &'a BigFloat) -> BigFloat {
        let (value, rounding) = round_op(result_prec(self, rhs), &self.value - &rhs.value);
        let err = up(&self.err + &rhs.err);
        let err = up(&err + &rounding);
        BigFloat { value, err }
    }
}

impl<'a> Mul<&'a BigFloat> for &'a BigFloat {
    type Output = BigFloat;
    fn mul(self, rhs: &'a BigFloat) -> BigFloat {
        let (value, rounding) = round_op(result_prec(self, rhs), &self.value * &rhs.value);
        // |a|δb + |b|δa + δaδb
        let t1 = up(&abs_up(&self.value) * &rhs.err);
        let t2 = up(&abs_up(&rhs.value) * &self.err);
        let t3 = up(&self.err * &rhs.err);
        let err = up(&t1 + &t2);
        let err = up(&err + &t3);
        let err = up(&err + &rounding);
        BigFloat { value, err }
    }
}

impl<'a> Div<&'a BigFloat> for &'a BigFloat {
    type Output = BigFloat;
    fn div(self, rhs: &'a BigFloat) -> BigFloat {
        let (value, rounding) = round_op(result_prec(self, rhs), &self.value / &rhs.value);
        let err = if self.err.is_zero() && rhs.err.is_zero() {
            rounding
        } else {
            // (δa + |a/b|·δb) / (|b| − δb)
            let denom = Float::with_val_round(
                ERR_PREC,
                &abs_down(&rhs.value) - &rhs.err,
                Round::Down,
            )
            .0;
            if denom <= 0 {
                Float::with_val(ERR_PREC, rug::float::Special::Infinity)
            } else {
                let num = up(&abs_up(&value) * &rhs.err);
                let num = up(&num + &self.err);
                let prop = up(&num / &denom);
                up(&prop + &rounding)
            }
        };
        BigFloat { value, err }
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat {
            value: -self.value.clone(),
            err: self.err.clone(),
        }
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat {
            value: -self.value,
            err: self.err,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: &'a BigFloat) -> BigFloat {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<BigFloat> for &'a BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

/// Sums in iteration order.
pub fn sum<'a, I: IntoIterator<Item = &'a BigFloat>>(prec: u32, items: I) -> BigFloat {
    items
        .into_iter()
        .fold(BigFloat::zero(prec), |acc, x| &acc + x)
}
