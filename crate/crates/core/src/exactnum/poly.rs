use std::fmt;

use rug::Rational;

use super::{binomial, Field};
use crate::error::Result;

/// Dense univariate polynomial, coefficients in ascending degree.
#[derive(Clone, Debug)]
pub struct Polynomial<T: Field> {
    coeffs: Vec<T>,
}

impl<T: Field> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = T::one();
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc.mul(x).add(c))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.mul(&T::from_i64(k as i64)))
                .collect(),
        )
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k).add(&rhs.coeff(k))).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k).sub(&rhs.coeff(k))).collect())
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out)
    }

    /// `P(a·x + b)` via binomial expansion.
    pub fn compose_affine(&self, a: &T, b: &T) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![T::zero(); n];
        let mut a_pow = vec![T::one(); n];
        let mut b_pow = vec![T::one(); n];
        for k in 1..n {
            a_pow[k] = a_pow[k - 1].mul(a);
            b_pow[k] = b_pow[k - 1].mul(b);
        }
        for (k, c) in self.coeffs.iter().enumerate() {
            for (j, slot) in out.iter_mut().enumerate().take(k + 1) {
                let binom = T::from_rational(Rational::from(binomial(k as i64, j as i64)));
                let term = c.mul(&binom).mul(&a_pow[j]).mul(&b_pow[k - j]);
                *slot = slot.add(&term);
            }
        }
        Self::new(out)
    }

    /// Maps coefficients into another field.
    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Polynomial<U> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }

    pub fn try_map<U: Field>(&self, f: impl Fn(&T) -> Result<U>) -> Result<Polynomial<U>> {
        Ok(Polynomial::new(
            self.coeffs.iter().map(f).collect::<Result<Vec<_>>>()?,
        ))
    }
}

impl PartialEq for Polynomial<Rational> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for Polynomial<Rational> {}

impl<T: Field + fmt::Display> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn poly(c: &[(i64, i64)]) -> Polynomial<Rational> {
        Polynomial::new(c.iter().map(|&(n, d)| q(n, d)).collect())
    }

    #[test]
    fn trims_trailing_zeros() {
        let p = poly(&[(1, 1), (0, 1), (0, 1)]);
        assert_eq!(p.degree(), Some(0));
        assert!(poly(&[(0, 1)]).is_zero());
    }

    #[test]
    fn eval_and_derivative() {
        // x² − x + 1/6
        let b2 = poly(&[(1, 6), (-1, 1), (1, 1)]);
        assert_eq!(b2.eval(&q(1, 2)), q(-1, 12));
        assert_eq!(b2.derivative(), poly(&[(-1, 1), (2, 1)]));
    }

    #[test]
    fn affine_composition() {
        // (x + 1)² at 1 − x
        let p = poly(&[(1, 1), (2, 1), (1, 1)]);
        let r = p.compose_affine(&q(-1, 1), &q(1, 1));
        assert_eq!(r, poly(&[(4, 1), (-4, 1), (1, 1)]));
    }

    #[test]
    fn product() {
        let a = poly(&[(1, 1), (1, 1)]);
        let b = poly(&[(-1, 1), (1, 1)]);
        assert_eq!(a.mul(&b), poly(&[(-1, 1), (0, 1), (1, 1)]));
    }
}
