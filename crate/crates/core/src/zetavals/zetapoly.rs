//! Polynomials with rational coefficients in the values ζ(k), k ≥ 2.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rug::Rational;

use super::zeta::{even_zeta_rational, zeta};
use crate::bigfloat::BigFloat;
use crate::error::Result;

/// A product `ζ(k₁)ζ(k₂)⋯` stored as sorted arguments. At most one even
/// argument survives, since `ζ(2a)ζ(2b)` is a rational multiple of `ζ(2a+2b)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn args(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Canonical form plus the rational factor absorbed while merging evens.
    fn canonical(mut args: Vec<u32>) -> (Rational, Monomial) {
        let (evens, mut odds): (Vec<u32>, Vec<u32>) = args.drain(..).partition(|k| k % 2 == 0);
        let mut factor = Rational::from(1);
        if evens.len() > 1 {
            let total: u32 = evens.iter().sum();
            for &e in &evens {
                factor *= even_zeta_rational(e);
            }
            factor /= even_zeta_rational(total);
            odds.push(total);
        } else {
            odds.extend(evens);
        }
        odds.sort_unstable();
        (factor, Monomial(odds))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn power_groups(args: &[u32]) -> Vec<(u32, usize)> {
    let mut out: Vec<(u32, usize)> = Vec::new();
    for &a in args {
        match out.last_mut() {
            Some((k, e)) if *k == a => *e += 1,
            _ => out.push((a, 1)),
        }
    }
    out
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = power_groups(&self.0)
            .into_iter()
            .map(|(k, e)| {
                if e == 1 {
                    format!("ζ({k})")
                } else {
                    format!("ζ({k})^{e}")
                }
            })
            .collect();
        f.write_str(&parts.join("·"))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZetaPolynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl ZetaPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    /// The single value `ζ(k)`.
    pub fn zeta(k: u32) -> Self {
        assert!(k >= 2, "ζ(k) needs k ≥ 2");
        let mut p = Self::zero();
        p.add_term(Monomial(vec![k]), Rational::from(1));
        p
    }

    /// `c·ζ(k₁)⋯ζ(k_r)` for arbitrary argument order.
    pub fn term(c: Rational, args: Vec<u32>) -> Self {
        let (factor, m) = Monomial::canonical(args);
        let mut p = Self::zero();
        p.add_term(m, c * factor);
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_default();
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common weight of all monomials, if homogeneous and nonzero.
    pub fn weight(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::weight);
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&Rational::from(-1)))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if *r == 0 {
            return Self::zero();
        }
        ZetaPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), Rational::from(c * r)))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let args: Vec<u32> = ma.0.iter().chain(&mb.0).copied().collect();
                let (factor, m) = Monomial::canonical(args);
                out.add_term(m, Rational::from(ca * cb) * factor);
            }
        }
        out
    }

    /// Numeric value with a propagated error bound.
    pub fn evaluate(&self, prec: u32) -> Result<BigFloat> {
        let wp = prec + 16;
        let mut sum = BigFloat::zero(wp);
        for (m, c) in &self.terms {
            let mut t = BigFloat::from_rational(wp, c);
            for &k in &m.0 {
                t = &t * &zeta(k, wp)?;
            }
            sum = &sum + &t;
        }
        Ok(sum)
    }

    /// Rendering with each even zeta value written as a rational times π^{2k}.
    pub fn render_pi(&self) -> String {
        let mut grouped: BTreeMap<Monomial, Rational> = BTreeMap::new();
        let mut pi_power: BTreeMap<Monomial, u32> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (evens, odds): (Vec<u32>, Vec<u32>) = m.0.iter().partition(|k| *k % 2 == 0);
            let mut coeff = c.clone();
            let pow: u32 = evens.iter().sum();
            for e in evens {
                coeff *= even_zeta_rational(e);
            }
            let key = Monomial(odds);
            pi_power.insert(key.clone(), pow);
            grouped.insert(key, coeff);
        }
        let mut keys: Vec<&Monomial> = grouped.keys().collect();
        keys.sort_by(|a, b| pi_power[*b].cmp(&pi_power[*a]).then_with(|| a.cmp(b)));
        let mut parts = Vec::new();
        for m in keys {
            let pow = pi_power[m];
            let mut factors = Vec::new();
            match pow {
                0 => {}
                1 => factors.push("π".to_string()),
                _ => factors.push(format!("π^{pow}")),
            }
            if !m.0.is_empty() {
                factors.push(m.to_string());
            }
            parts.push((grouped[m].clone(), factors.join("·")));
        }
        join_terms(parts)
    }
}

fn join_terms(parts: Vec<(Rational, String)>) -> String {
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (c, body)) in parts.into_iter().enumerate() {
        let neg = c < 0;
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        match (mag == 1, body.is_empty()) {
            (_, true) => out.push_str(&mag.to_string()),
            (true, false) => out.push_str(&body),
            (false, false) => {
                out.push_str(&mag.to_string());
                out.push('·');
                out.push_str(&body);
            }
        }
    }
    out
}

impl fmt::Display for ZetaPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self
            .terms
            .iter()
            .map(|(m, c)| {
                let body = if m.0.is_empty() { String::new() } else { m.to_string() };
                (c.clone(), body)
            })
            .collect();
        f.write_str(&join_terms(parts))
    }
}
