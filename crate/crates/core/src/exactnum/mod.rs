//! Exact integer and rational combinatorics.

mod poly;
mod series;

pub use poly::Polynomial;
pub use series::Series;

use std::fmt::Debug;
use std::sync::RwLock;

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Minimal field interface shared by exact rationals and mixed scalars.
pub trait Field: Clone + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: Rational) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(Rational::from(v))
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Rational::new()
    }
    fn one() -> Self {
        Rational::from(1)
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn add(&self, rhs: &Self) -> Self {
        Rational::from(self + rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Rational::from(self - rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Rational::from(self * rhs)
    }
    fn div(&self, rhs: &Self) -> Result<Self> {
        if *rhs == 0 {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(Rational::from(self / rhs))
    }
    fn neg(&self) -> Self {
        Rational::from(-self)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn from_rational(r: Rational) -> Self {
        Scalar::Exact(r)
    }
    fn add(&self, rhs: &Self) -> Self {
        Scalar::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Scalar::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Scalar::mul(self, rhs)
    }
    fn div(&self, rhs: &Self) -> Result<Self> {
        Scalar::div(self, rhs)
    }
    fn neg(&self) -> Self {
        Scalar::neg(self)
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

/// Triangular table grown row by row on demand.
struct Triangle {
    rows: RwLock<Vec<Vec<Integer>>>,
    step: fn(&[Integer], usize) -> Vec<Integer>,
}

impl Triangle {
    const fn new(step: fn(&[Integer], usize) -> Vec<Integer>) -> Self {
        Triangle {
            rows: RwLock::new(Vec::new()),
            step,
        }
    }

    fn get(&self, n: usize, k: usize) -> Integer {
        if k > n {
            return Integer::new();
        }
        {
            let rows = self.rows.read().expect("stirling table poisoned");
            if let Some(row) = rows.get(n) {
                return row[k].clone();
            }
        }
        let mut rows = self.rows.write().expect("stirling table poisoned");
        if rows.is_empty() {
            rows.push(vec![Integer::from(1)]);
        }
        while rows.len() <= n {
            let m = rows.len() - 1;
            let next = (self.step)(&rows[m], m);
            rows.push(next);
        }
        rows[n][k].clone()
    }
}

fn stirling1_row(prev: &[Integer], m: usize) -> Vec<Integer> {
    // [m+1, k] = m·[m, k] + [m, k−1]
    (0..=m + 1)
        .map(|k| {
            let mut v = Integer::new();
            if k <= m {
                v += &prev[k] * Integer::from(m);
            }
            if k >= 1 {
                v += &prev[k - 1];
            }
            v
        })
        .collect()
}

fn stirling2_row(prev: &[Integer], m: usize) -> Vec<Integer> {
    // {m+1, k} = k·{m, k} + {m, k−1}
    (0..=m + 1)
        .map(|k| {
            let mut v = Integer::new();
            if k <= m {
                v += &prev[k] * Integer::from(k);
            }
            if k >= 1 {
                v += &prev[k - 1];
            }
            v
        })
        .collect()
}

static STIRLING1: Triangle = Triangle::new(stirling1_row);
static STIRLING2: Triangle = Triangle::new(stirling2_row);

/// Unsigned Stirling number of the first kind `[m k]` (cycle count).
pub fn stirling_first_unsigned(m: usize, k: usize) -> Integer {
    STIRLING1.get(m, k)
}

/// Stirling number of the second kind `{n k}` (set partitions).
pub fn stirling_second(n: usize, k: usize) -> Integer {
    STIRLING2.get(n, k)
}

/// `C(n, k)`, zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: i64, k: i64) -> Integer {
    if n < 0 || k < 0 || k > n {
        return Integer::new();
    }
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}

pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// `ζ_N({1}_{p−1}) = e_{p−1}(1, 1/2, …, 1/N)`.
pub fn truncated_mzv_ones(n: usize, p: usize) -> Rational {
    assert!(p >= 1, "p must be positive");
    let depth = p - 1;
    let mut e = vec![Rational::new(); depth + 1];
    e[0] = Rational::from(1);
    for j in 1..=n {
        let inv = Rational::from((1, j as u64));
        for k in (1..=depth.min(j)).rev() {
            let t = Rational::from(&e[k - 1] * &inv);
            e[k] += t;
        }
    }
    e.swap_remove(depth)
}

static BERNOULLI: RwLock<Vec<Rational>> = RwLock::new(Vec::new());

/// Bernoulli number `B_n` with `B_1 = −1/2`.
pub fn bernoulli_number(n: usize) -> Rational {
    {
        let cache = BERNOULLI.read().expect("bernoulli cache poisoned");
        if let Some(b) = cache.get(n) {
            return b.clone();
        }
    }
    let mut cache = BERNOULLI.write().expect("bernoulli cache poisoned");
    while cache.len() <= n {
        let m = cache.len();
        if m == 0 {
            cache.push(Rational::from(1));
            continue;
        }
        if m > 1 && m % 2 == 1 {
            cache.push(Rational::new());
            continue;
        }
        let mut s = Rational::new();
        for (k, b) in cache.iter().enumerate() {
            s += Rational::from(b * binomial(m as i64 + 1, k as i64));
        }
        cache.push(-s / Rational::from(m as u64 + 1));
    }
    cache[n].clone()
}
