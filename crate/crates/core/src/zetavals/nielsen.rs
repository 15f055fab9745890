//! Nielsen generalized polylogarithms and their special values at ±1.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::ops::Pow;
use rug::{Float, Rational};

use super::accel::alternating_sum;
use super::zetapoly::ZetaPolynomial;
use crate::bigfloat::BigFloat;
use crate::error::{Error, Result};
use crate::exactnum::binomial;

fn bbb_table() -> &'static Mutex<Vec<Vec<ZetaPolynomial>>> {
    static TABLE: OnceLock<Mutex<Vec<Vec<ZetaPolynomial>>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![vec![ZetaPolynomial::constant(Rational::from(1))]]))
}

/// Homogeneous parts `F_d` of `exp(Σ_{k≥2} (x^k + y^k − (x+y)^k) ζ(k)/k)`;
/// `F_d[i]` is the coefficient of `x^i y^{d−i}`.
///
/// Uses `d·F_d = Σ_k k·E_k·F_{d−k}` with `k·E_k[a] = −C(k,a)ζ(k)`, `0 < a < k`.
fn bbb_component(d: usize) -> Vec<ZetaPolynomial> {
    let mut table = bbb_table().lock().expect("bbb table poisoned");
    while table.len() <= d {
        let deg = table.len();
        let mut row = vec![ZetaPolynomial::zero(); deg + 1];
        for k in 2..=deg {
            let prev = &table[deg - k];
            let zk = ZetaPolynomial::zeta(k as u32);
            for a in 1..k {
                let coeff = -Rational::from(binomial(k as i64, a as i64));
                let ek = zk.scale(&coeff);
                for (j, f) in prev.iter().enumerate() {
                    if f.is_zero() {
                        continue;
                    }
                    row[a + j] = row[a + j].add(&ek.mul(f));
                }
            }
        }
        let inv = Rational::from((1, deg as u64));
        let row = row.into_iter().map(|p| p.scale(&inv)).collect();
        table.push(row);
    }
    table[d].clone()
}

/// `s_{m,p} = S_{m,p}(1) = ζ(m+1, {1}_{p−1})` as a polynomial in ζ values.
///
/// It is the coefficient of `x^m y^p` in `1 − exp(Σ_{k≥2} (x^k+y^k−(x+y)^k) ζ(k)/k)`.
pub fn mzv_height_one(m: usize, p: usize) -> ZetaPolynomial {
    assert!(m >= 1 && p >= 1, "m, p must be positive");
    let row = bbb_component(m + p);
    row[m].scale(&Rational::from(-1))
}

/// Coefficients `c_j = [j p]/(j!·j^m) = ζ_{j−1}({1}_{p−1})/j^{m+1}` for `j ≥ 1`.
struct NielsenTerms {
    m: u32,
    p: usize,
    e: Vec<Float>,
    j: u32,
}

impl NielsenTerms {
    fn new(m: usize, p: usize, wp: u32) -> Self {
        let mut e = vec![Float::new(wp); p];
        e[0] = Float::with_val(wp, 1u32);
        NielsenTerms {
            m: m as u32,
            p,
            e,
            j: 0,
        }
    }

    fn next(&mut self, wp: u32) -> Float {
        if self.j >= 1 {
            // absorb 1/j into the elementary symmetric sums
            let jf = self.j;
            for k in (1..self.p).rev() {
                let t = Float::with_val(wp, &self.e[k - 1] / jf);
                self.e[k] += t;
            }
        }
        self.j += 1;
        let jp = Float::with_val(wp, self.j).pow(self.m + 1);
        Float::with_val(wp, &self.e[self.p - 1] / &jp)
    }
}

fn direct_series(m: usize, p: usize, z: &Rational, prec: u32) -> BigFloat {
    let wp = prec + 32;
    let zf = Float::with_val(wp, z);
    let r = z.clone().abs().to_f64();
    let target = 2f64.powi(-(prec as i32) - 4);
    let mut terms = NielsenTerms::new(m, p, wp);
    let mut sum = Float::new(wp);
    let mut zp = Float::with_val(wp, 1u32);
    let mut n = 0u32;
    loop {
        let c = terms.next(wp);
        zp *= &zf;
        sum += Float::with_val(wp, &c * &zp);
        n += 1;
        // c_j ≤ 1, so the tail after N terms is at most |z|^{N+1}/(1 − |z|)
        let tail = r.powi(n as i32 + 1) / (1.0 - r);
        if tail < target {
            let roundoff = f64::from(n + 4) * 2f64.powi(-(wp as i32) + 2);
            return BigFloat::with_error(sum, tail + roundoff).to_prec(prec);
        }
    }
}

/// `S_{m,p}(z) = Σ_{j≥p} [j p] z^j / (j!·j^m)` for real `|z| ≤ 1`.
pub fn nielsen_s(m: usize, p: usize, z: &Rational, prec: u32) -> Result<BigFloat> {
    if m == 0 || p == 0 {
        return Err(Error::Domain("Nielsen S needs m, p ≥ 1".into()));
    }
    if z.clone().abs() > 1 {
        return Err(Error::Domain(format!("Nielsen S needs |z| ≤ 1, got {z}")));
    }
    if *z == 0 {
        return Ok(BigFloat::zero(prec));
    }
    if *z == 1 {
        return Ok(mzv_height_one(m, p).evaluate(prec)?.to_prec(prec));
    }
    if *z <= Rational::from((-1, 2)) {
        let r = Rational::from(-z);
        let mut terms = NielsenTerms::new(m, p, prec + 32);
        let mut rp: Option<Float> = None;
        let acc = alternating_sum(
            |_, wp| {
                let c = terms.next(wp);
                let next = match rp.take() {
                    None => Float::with_val(wp, &r),
                    Some(prev) => Float::with_val(wp, &prev * &r),
                };
                let t = Float::with_val(wp, &c * &next);
                rp = Some(next);
                t
            },
            prec,
        );
        // Σ_{j≥1} (−1)^j c_j r^j = −Σ_{k≥0} (−1)^k c_{k+1} r^{k+1}
        return Ok(-acc.value);
    }
    Ok(direct_series(m, p, z, prec))
}

fn sigma_cache() -> &'static Mutex<HashMap<(usize, usize, u32), BigFloat>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize, u32), BigFloat>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `σ_{m,p} = (−1)^p S_{m,p}(−1)`.
pub fn sigma(m: usize, p: usize, prec: u32) -> Result<BigFloat> {
    if let Some(v) = sigma_cache().lock().expect("sigma cache poisoned").get(&(m, p, prec)) {
        return Ok(v.clone());
    }
    let s = nielsen_s(m, p, &Rational::from(-1), prec)?;
    let v = if p.is_multiple_of(2) { s } else { -s };
    sigma_cache()
        .lock()
        .expect("sigma cache poisoned")
        .insert((m, p, prec), v.clone());
    Ok(v)
}

/// `s_{m,p}` evaluated numerically.
pub fn s_value(m: usize, p: usize, prec: u32) -> Result<BigFloat> {
    mzv_height_one(m, p).evaluate(prec)
}

/// `Σ_{ν≤j} C(j+k−ν−1, k−1)σ_{ν,j+k−ν} + Σ_{ν≤k} C(j+k−ν−1, j−1)σ_{ν,j+k−ν} − s_{j,k}`.
pub fn kolbig_identity_residual(j: usize, k: usize, prec: u32) -> Result<BigFloat> {
    if j == 0 || k == 0 {
        return Err(Error::Domain("Kölbig identity needs j, k ≥ 1".into()));
    }
    let wp = prec + 16;
    let n = (j + k) as i64;
    let mut acc = BigFloat::zero(wp);
    for nu in 1..=j {
        let c = Rational::from(binomial(n - nu as i64 - 1, k as i64 - 1));
        acc = &acc + &sigma(nu, j + k - nu, wp)?.mul_rational(&c);
    }
    for nu in 1..=k {
        let c = Rational::from(binomial(n - nu as i64 - 1, j as i64 - 1));
        acc = &acc + &sigma(nu, j + k - nu, wp)?.mul_rational(&c);
    }
    Ok(&acc - &s_value(j, k, wp)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bbb_low_weights() {
        assert_eq!(mzv_height_one(3, 1), ZetaPolynomial::zeta(4));
        assert_eq!(mzv_height_one(1, 2), ZetaPolynomial::zeta(3));
        // ζ(3,1) = ζ(4)/4
        assert_eq!(
            mzv_height_one(2, 2),
            ZetaPolynomial::zeta(4).scale(&Rational::from((1, 4)))
        );
        // duality ζ(m+1,{1}_{p−1}) = ζ(p+1,{1}_{m−1})
        for m in 1..6 {
            for p in 1..6 {
                assert_eq!(mzv_height_one(m, p), mzv_height_one(p, m));
            }
        }
    }

    #[test]
    fn weights_are_homogeneous() {
        for m in 1..7 {
            for p in 1..7 {
                assert_eq!(mzv_height_one(m, p).weight(), Some((m + p) as u32));
            }
        }
    }

    #[test]
    fn zero_argument() {
        let v = nielsen_s(3, 2, &Rational::new(), 64).unwrap();
        assert!(v.is_exact_zero());
        assert!(nielsen_s(1, 1, &Rational::from((3, 2)), 64).is_err());
    }
}
