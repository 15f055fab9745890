//! Riemann zeta at integer arguments.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::bigfloat::BigFloat;
use crate::error::{Error, Result};
use crate::exactnum::{bernoulli_number, factorial};

const GUARD: u32 = 32;

fn cache() -> &'static Mutex<HashMap<(u32, u32), BigFloat>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), BigFloat>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `ζ(2k) = r_k·π^{2k}` with `r_k = (−1)^{k+1} B_{2k} 2^{2k−1} / (2k)!`.
pub fn even_zeta_rational(s: u32) -> Rational {
    assert!(s >= 2 && s.is_multiple_of(2), "even argument required");
    let k = s / 2;
    let b = bernoulli_number(s as usize);
    let mut r = b * Rational::from(Integer::from(1) << (s - 1)) / Rational::from(factorial(s));
    if k.is_multiple_of(2) {
        r = -r;
    }
    r
}

/// `ζ(s)` for integer `s ≥ 2` with error at most `2^{−prec}`.
pub fn zeta(s: u32, prec: u32) -> Result<BigFloat> {
    if s < 2 {
        return Err(Error::Domain(format!("zeta needs s ≥ 2, got {s}")));
    }
    if let Some(v) = cache().lock().expect("zeta cache poisoned").get(&(s, prec)) {
        return Ok(v.clone());
    }
    let v = if s.is_multiple_of(2) {
        let wp = prec + GUARD;
        BigFloat::pi(wp)
            .powi(s as i32)
            .mul_rational(&even_zeta_rational(s))
            .to_prec(prec)
    } else {
        borwein(s, prec)
    };
    cache()
        .lock()
        .expect("zeta cache poisoned")
        .insert((s, prec), v.clone());
    Ok(v)
}

/// Borwein's alternating-series algorithm with Chebyshev weights `d_k`.
///
/// `ζ(s) = −1/(d_n(1 − 2^{1−s})) Σ_{k<n} (−1)^k (d_k − d_n)/(k+1)^s + γ`,
/// `|γ| ≤ 3/(3+√8)^n / |1 − 2^{1−s}|`.
fn borwein(s: u32, prec: u32) -> BigFloat {
    let wp = prec + GUARD;
    // 6·(3+√8)^{−n} ≤ 2^{−(prec+8)}
    let n = ((f64::from(prec) + 11.0) / (3.0 + 8f64.sqrt()).log2()).ceil() as u32 + 1;
    let mut d = Vec::with_capacity(n as usize + 1);
    let mut acc = Integer::new();
    for i in 0..=n {
        let num = Integer::from(n) * factorial(n + i - 1) * (Integer::from(1) << (2 * i));
        let den = factorial(n - i) * factorial(2 * i);
        acc += num / den;
        d.push(acc.clone());
    }
    let dn = &d[n as usize];
    let mut sum = BigFloat::zero(wp);
    for k in 0..n as usize {
        let mut term = Rational::from((Integer::from(&d[k] - dn), Integer::from(k + 1).pow(s)));
        if k % 2 == 1 {
            term = -term;
        }
        sum = &sum + &BigFloat::from_rational(wp, &term);
    }
    // 1 − 2^{1−s}
    let factor = Rational::from(1) - Rational::from((1, Integer::from(1) << (s - 1)));
    let scale = -(Rational::from(dn) * &factor).recip();
    let value = sum.mul_rational(&scale);
    let trunc = 3.0 / (3.0 + 8f64.sqrt()).powi(n as i32) / factor.to_f64();
    value.with_added_error(trunc).to_prec(prec)
}
