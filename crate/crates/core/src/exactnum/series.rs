use rug::Rational;

use super::Field;
use crate::error::{Error, Result};

/// Power series truncated to a fixed number of terms (`t^0 … t^{len−1}`).
#[derive(Clone, Debug)]
pub struct Series<T: Field> {
    coeffs: Vec<T>,
}

impl<T: Field> Series<T> {
    /// Pads or truncates `coeffs` to `len` terms.
    pub fn new(mut coeffs: Vec<T>, len: usize) -> Self {
        coeffs.resize(len, T::zero());
        Series { coeffs }
    }

    pub fn one(len: usize) -> Self {
        Self::new(vec![T::one()], len)
    }

    /// `e^{a t} = Σ aᵏ tᵏ/k!`.
    pub fn exp_linear(a: &T, len: usize) -> Self {
        let mut coeffs = Vec::with_capacity(len);
        let mut term = T::one();
        for k in 0..len {
            if k > 0 {
                term = term
                    .mul(a)
                    .mul(&T::from_rational(Rational::from((1, k as u64))));
            }
            coeffs.push(term.clone());
        }
        Series { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &T {
        &self.coeffs[k]
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Series {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        Series {
            coeffs: self.coeffs.iter().map(|c| c.mul(s)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.len().min(rhs.len());
        let coeffs = (0..n)
            .map(|k| {
                (0..=k).fold(T::zero(), |acc, i| {
                    if self.coeffs[i].is_zero() || rhs.coeffs[k - i].is_zero() {
                        acc
                    } else {
                        acc.add(&self.coeffs[i].mul(&rhs.coeffs[k - i]))
                    }
                })
            })
            .collect();
        Series { coeffs }
    }

    /// Multiplies by `t^k`, dropping terms past the truncation.
    pub fn shift(&self, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k.min(self.len())];
        coeffs.extend(self.coeffs.iter().take(self.len().saturating_sub(k)).cloned());
        Series { coeffs }
    }

    /// Reciprocal; the constant term must be nonzero.
    pub fn inv(&self) -> Result<Self> {
        let n = self.len();
        if n == 0 {
            return Ok(self.clone());
        }
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::Domain("series reciprocal needs a nonzero constant term".into()));
        }
        let inv0 = T::one().div(c0)?;
        let mut out = vec![inv0.clone()];
        for k in 1..n {
            let s = (1..=k).fold(T::zero(), |acc, i| acc.add(&self.coeffs[i].mul(&out[k - i])));
            out.push(s.mul(&inv0).neg());
        }
        Ok(Series { coeffs: out })
    }

    /// `exp(f)` for `f(0) = 0`, from `n g_n = Σ k f_k g_{n−k}`.
    pub fn exp(&self) -> Result<Self> {
        let n = self.len();
        if n > 0 && !self.coeffs[0].is_zero() {
            return Err(Error::Domain("series exp needs a zero constant term".into()));
        }
        let mut g: Vec<T> = Vec::with_capacity(n);
        for m in 0..n {
            if m == 0 {
                g.push(T::one());
                continue;
            }
            let s = (1..=m).fold(T::zero(), |acc, k| {
                acc.add(&self.coeffs[k].mul(&g[m - k]).mul(&T::from_i64(k as i64)))
            });
            g.push(s.mul(&T::from_rational(Rational::from((1, m as u64)))));
        }
        Ok(Series { coeffs: g })
    }

    /// `log(g)` for `g(0) = 1`, from `n f_n = n g_n − Σ_{k<n} k f_k g_{n−k}`.
    pub fn log(&self) -> Result<Self> {
        let n = self.len();
        if n == 0 {
            return Ok(self.clone());
        }
        let one = T::one();
        if !self.coeffs[0].sub(&one).is_zero() {
            return Err(Error::Domain("series log needs constant term 1".into()));
        }
        let mut f: Vec<T> = vec![T::zero()];
        for m in 1..n {
            let s = (1..m).fold(T::zero(), |acc, k| {
                acc.add(&f[k].mul(&self.coeffs[m - k]).mul(&T::from_i64(k as i64)))
            });
            let v = self.coeffs[m]
                .mul(&T::from_i64(m as i64))
                .sub(&s)
                .mul(&T::from_rational(Rational::from((1, m as u64))));
            f.push(v);
        }
        Ok(Series { coeffs: f })
    }

    /// Integer power by binary exponentiation (negative powers via `inv`).
    pub fn powi(&self, k: i64) -> Result<Self> {
        let mut base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one(self.len());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// General power `exp(d·log(self))`; the constant term must be 1.
    pub fn pow(&self, d: &T) -> Result<Self> {
        self.log()?.scale(d).exp()
    }
}
