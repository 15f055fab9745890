//! Appell-type polynomial families and the moment coefficients β_ν.
//!
//! A family is generated by its seed `𝒜(t)` through
//! `e^{xt}𝒜(t) = Σ P_n(x) tⁿ/n!`. A function written as
//! `f(u) = b·u^s·𝒜(c·ln u)` has moments `φ_r = ∫₀¹ f(u)u^r du` whose large-`r`
//! expansion `Σ β_ν / r^{ν+1}` has `β_ν = b(−1)^ν c^ν P_ν((1+s)/c)`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::exactnum::{binomial, factorial, stirling_second, Field, Polynomial, Series};
use crate::scalar::{Prefactor, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Monomial,
    Bernoulli,
    Euler,
    Genocchi,
    Hermite,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Monomial => "monomial",
            FamilyKind::Bernoulli => "bernoulli",
            FamilyKind::Euler => "euler",
            FamilyKind::Genocchi => "genocchi",
            FamilyKind::Hermite => "hermite",
        }
    }

    fn uses_order(self) -> bool {
        matches!(
            self,
            FamilyKind::Bernoulli | FamilyKind::Euler | FamilyKind::Genocchi
        )
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "monomial" => Ok(FamilyKind::Monomial),
            "bernoulli" => Ok(FamilyKind::Bernoulli),
            "euler" => Ok(FamilyKind::Euler),
            "genocchi" => Ok(FamilyKind::Genocchi),
            "hermite" | "hermite_probabilist" => Ok(FamilyKind::Hermite),
            other => Err(Error::UnsupportedSeed(format!("unknown family {other:?}"))),
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A seed family with its order `d` (ignored for monomial and Hermite).
#[derive(Clone, Debug)]
pub struct AppellFamily {
    pub kind: FamilyKind,
    pub d: Scalar,
}

impl AppellFamily {
    pub fn new(kind: FamilyKind, d: Scalar) -> Self {
        AppellFamily { kind, d }
    }

    pub fn monomial() -> Self {
        Self::new(FamilyKind::Monomial, Scalar::zero())
    }

    pub fn hermite() -> Self {
        Self::new(FamilyKind::Hermite, Scalar::zero())
    }

    pub fn euler(d: Rational) -> Self {
        Self::new(FamilyKind::Euler, Scalar::Exact(d))
    }

    pub fn bernoulli(d: Rational) -> Self {
        Self::new(FamilyKind::Bernoulli, Scalar::Exact(d))
    }

    pub fn genocchi(d: Rational) -> Self {
        Self::new(FamilyKind::Genocchi, Scalar::Exact(d))
    }

    fn integer_order(&self) -> Option<i64> {
        match &self.d {
            Scalar::Exact(r) if r.is_integer() => r.numer().to_i64(),
            _ => None,
        }
    }

    /// Taylor coefficients of the seed, `len` terms.
    pub fn seed_series(&self, len: usize) -> Result<Series<Scalar>> {
        let base = |coeffs: Vec<Scalar>| Series::new(coeffs, len);
        let power = |s: Series<Scalar>| -> Result<Series<Scalar>> {
            match self.integer_order() {
                Some(k) => s.powi(k),
                None => s.pow(&self.d),
            }
        };
        let inv_factorial = |k: usize| Scalar::Exact(Rational::from((1, factorial(k as u32))));
        match self.kind {
            FamilyKind::Monomial => Ok(Series::one(len)),
            FamilyKind::Hermite => {
                let coeffs = (0..len)
                    .map(|k| {
                        if k % 2 == 1 {
                            return Scalar::zero();
                        }
                        let m = (k / 2) as u32;
                        let mut r = Rational::from((1, factorial(m)));
                        r /= Rational::from(-2).pow(m);
                        Scalar::Exact(r)
                    })
                    .collect();
                Ok(base(coeffs))
            }
            FamilyKind::Bernoulli => {
                // t/(e^t − 1) = 1 / Σ t^k/(k+1)!
                let denom = base((0..len).map(|k| inv_factorial(k + 1)).collect());
                power(denom.inv()?)
            }
            FamilyKind::Euler => power(euler_base(len)?),
            FamilyKind::Genocchi => {
                let k = self.integer_order().filter(|&k| k >= 0).ok_or_else(|| {
                    Error::UnsupportedSeed(format!(
                        "genocchi seed needs a non-negative integer order, got {}",
                        self.d
                    ))
                })?;
                Ok(euler_base(len)?.powi(k)?.shift(k as usize))
            }
        }
    }

    /// `𝒜(t)` at a real point.
    pub fn seed_value(&self, t: &Float) -> Result<Float> {
        let prec = t.prec();
        let one = Float::with_val(prec, 1u32);
        let raw = match self.kind {
            FamilyKind::Monomial => return Ok(one),
            FamilyKind::Hermite => {
                let sq = Float::with_val(prec, t.square_ref());
                return Ok(Float::with_val(prec, -sq / 2u32).exp());
            }
            FamilyKind::Bernoulli => {
                if t.is_zero() {
                    one
                } else {
                    let em1 = Float::with_val(prec, t.exp_m1_ref());
                    Float::with_val(prec, t / &em1)
                }
            }
            FamilyKind::Euler => {
                let e = Float::with_val(prec, t.exp_ref());
                Float::with_val(prec, 2u32 / (e + 1u32))
            }
            FamilyKind::Genocchi => {
                let e = Float::with_val(prec, t.exp_ref());
                Float::with_val(prec, 2u32 * t.clone() / (e + 1u32))
            }
        };
        if let Some(k) = self.integer_order() {
            let k = i32::try_from(k).map_err(|_| Error::Domain("seed order too large".into()))?;
            return Ok(Float::with_val(prec, (&raw).pow(k)));
        }
        if raw <= 0 {
            return Err(Error::Domain("non-integer power of a non-positive seed value".into()));
        }
        let d = self.d.to_bigfloat(prec + 16);
        Ok(Float::with_val(prec, (&raw).pow(d.value())))
    }
}

/// `2/(1 + e^t)` as a series.
fn euler_base(len: usize) -> Result<Series<Scalar>> {
    let coeffs = (0..len)
        .map(|k| {
            if k == 0 {
                Scalar::one()
            } else {
                Scalar::Exact(Rational::from((1, factorial(k as u32) * 2u32)))
            }
        })
        .collect();
    Series::new(coeffs, len).inv()
}

impl fmt::Display for AppellFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind.uses_order() {
            write!(f, "{}(d={})", self.kind, self.d)
        } else {
            write!(f, "{}", self.kind)
        }
    }
}

/// `P_0 … P_{n_max}` from the seed's Taylor coefficients.
///
/// With `s_j = j!·[t^j]𝒜`, `P_n(x) = Σ_k C(n,k) s_{n−k} x^k`. Exact
/// whenever the order `d` is rational.
pub fn appell_polynomials(family: &AppellFamily, n_max: usize) -> Result<Vec<Polynomial<Scalar>>> {
    let seed = family.seed_series(n_max + 2)?;
    let s: Vec<Scalar> = (0..=n_max)
        .map(|j| seed.coeff(j).mul(&Scalar::Exact(Rational::from(factorial(j as u32)))))
        .collect();
    Ok((0..=n_max)
        .map(|n| {
            Polynomial::new(
                (0..=n)
                    .map(|k| s[n - k].mul(&Scalar::Exact(Rational::from(binomial(n as i64, k as i64)))))
                    .collect(),
            )
        })
        .collect())
}

/// The reflection constant ω with `𝒜(−t) = e^{ωt}𝒜(t)`, if the seed has one.
///
/// The closed-form answer is confirmed on Taylor coefficients through order 12.
pub fn reflection_omega(family: &AppellFamily) -> Option<Scalar> {
    let omega = match family.kind {
        FamilyKind::Monomial | FamilyKind::Hermite => Scalar::zero(),
        FamilyKind::Bernoulli | FamilyKind::Euler => family.d.clone(),
        FamilyKind::Genocchi => match family.integer_order() {
            Some(k) if k % 2 == 0 => family.d.clone(),
            _ => return None,
        },
    };
    const ORDER: usize = 13;
    let seed = family.seed_series(ORDER).ok()?;
    let reflected = Series::new(
        seed.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 1 { c.neg() } else { c.clone() })
            .collect(),
        ORDER,
    );
    let lhs = reflected.mul(&Series::exp_linear(&omega.neg(), ORDER));
    let tol = match &family.d {
        Scalar::Float(f) => 2f64.powi(-(f.prec() as i32) / 2),
        Scalar::Exact(_) => 0.0,
    };
    let prec = match &family.d {
        Scalar::Float(f) => f.prec(),
        Scalar::Exact(_) => 64,
    };
    let agrees = lhs
        .coeffs()
        .iter()
        .zip(seed.coeffs())
        .all(|(a, b)| a.approx_eq(b, tol, prec));
    agrees.then_some(omega)
}

/// Pointwise evaluator `u ↦ f(u)` at the precision of the argument.
pub type Pointwise = Arc<dyn Fn(&Float) -> Float + Send + Sync>;

/// `f(u) = b·u^s·𝒜(c·ln u)`.
#[derive(Clone, Debug)]
pub struct AppellForm {
    pub family: AppellFamily,
    pub b: Prefactor,
    pub c: Scalar,
    pub s: Rational,
}

impl AppellForm {
    pub fn new(family: AppellFamily, b: Prefactor, c: Scalar) -> Self {
        AppellForm {
            family,
            b,
            c,
            s: Rational::new(),
        }
    }

    pub fn with_shift(mut self, s: Rational) -> Self {
        self.s = s;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.c.is_zero() {
            return Err(Error::Domain("Appell form needs c ≠ 0".into()));
        }
        if self.b.value.is_zero() {
            return Err(Error::Domain("Appell form needs b ≠ 0".into()));
        }
        Ok(())
    }

    pub fn pointwise(&self, prec: u32) -> Pointwise {
        let form = self.clone();
        let b = self.b.value.to_bigfloat(prec + 32).into_value();
        let c = self.c.to_bigfloat(prec + 32).into_value();
        let s = self.s.clone();
        Arc::new(move |u: &Float| {
            let p = u.prec();
            let ln = Float::with_val(p + 16, u.ln_ref());
            let t = Float::with_val(p + 16, &c * &ln);
            let seed = form
                .family
                .seed_value(&t)
                .unwrap_or_else(|_| Float::with_val(p, rug::float::Special::Nan));
            let mut v = Float::with_val(p + 16, &b * &seed);
            if s != 0 {
                let sf = Float::with_val(p + 16, &s);
                let us = Float::with_val(p + 16, &sf * &ln).exp();
                v *= us;
            }
            Float::with_val_round(p, &v, Round::Nearest).0
        })
    }
}

/// Derivative data `f(1), f′(1), …` (times an optional common prefactor).
#[derive(Clone)]
pub struct DerivativeForm {
    pub prefactor: Prefactor,
    pub values_at_1: Vec<Scalar>,
    pub pointwise: Option<Pointwise>,
}

impl fmt::Debug for DerivativeForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DerivativeForm")
            .field("prefactor", &self.prefactor)
            .field("values_at_1", &self.values_at_1)
            .field("pointwise", &self.pointwise.is_some())
            .finish()
    }
}

impl DerivativeForm {
    pub fn new(values_at_1: Vec<Scalar>) -> Self {
        DerivativeForm {
            prefactor: Prefactor::one(),
            values_at_1,
            pointwise: None,
        }
    }
}

#[derive(Clone, Debug)]
pub enum FDescriptor {
    Appell(AppellForm),
    Derivatives(DerivativeForm),
}

impl FDescriptor {
    /// β_0 … β_{n_max}.
    pub fn beta(&self, n_max: usize) -> Result<BetaSequence> {
        match self {
            FDescriptor::Appell(form) => beta_from_appell(form, n_max),
            FDescriptor::Derivatives(form) => {
                let mut seq = beta_from_derivatives(&form.values_at_1, n_max)?;
                seq.prefactor = form.prefactor.clone();
                Ok(seq)
            }
        }
    }

    /// Largest ν for which β_ν is available, or `None` when unbounded.
    pub fn max_beta_index(&self) -> Option<usize> {
        match self {
            FDescriptor::Appell(_) => None,
            FDescriptor::Derivatives(d) => d.values_at_1.len().checked_sub(1),
        }
    }

    pub fn pointwise(&self, prec: u32) -> Option<Pointwise> {
        match self {
            FDescriptor::Appell(form) => Some(form.pointwise(prec)),
            FDescriptor::Derivatives(d) => d.pointwise.clone(),
        }
    }

    pub fn prefactor(&self) -> &Prefactor {
        match self {
            FDescriptor::Appell(form) => &form.b,
            FDescriptor::Derivatives(d) => &d.prefactor,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Appell,
    Derivatives,
}

/// β_ν = prefactor·values[ν].
#[derive(Clone, Debug)]
pub struct BetaSequence {
    pub prefactor: Prefactor,
    pub values: Vec<Scalar>,
    pub provenance: Provenance,
}

impl BetaSequence {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Full β_ν including the prefactor.
    pub fn beta(&self, nu: usize) -> Scalar {
        self.prefactor.value.mul(&self.values[nu])
    }

    pub fn all_exact(&self) -> bool {
        self.values.iter().all(Scalar::is_exact)
    }

    pub fn require(&self, n: usize) -> Result<()> {
        if self.values.len() < n {
            return Err(Error::InsufficientDerivatives {
                needed: n.saturating_sub(1),
                available: self.values.len(),
            });
        }
        Ok(())
    }
}

/// β_ν = b(−1)^ν c^ν P_ν((1+s)/c), with `b` kept as the prefactor.
pub fn beta_from_appell(form: &AppellForm, n_max: usize) -> Result<BetaSequence> {
    form.validate()?;
    let polys = appell_polynomials(&form.family, n_max)?;
    let shift = Scalar::Exact(Rational::from(1) + &form.s);
    let x = shift.div(&form.c)?;
    let mut c_pow = Scalar::one();
    let mut values = Vec::with_capacity(n_max + 1);
    for (nu, p) in polys.iter().enumerate() {
        let mut v = p.eval(&x).mul(&c_pow);
        if nu % 2 == 1 {
            v = v.neg();
        }
        values.push(v);
        c_pow = c_pow.mul(&form.c);
    }
    Ok(BetaSequence {
        prefactor: form.b.clone(),
        values,
        provenance: Provenance::Appell,
    })
}

/// β_ν = (−1)^ν Σ_ℓ {ν+1, ℓ+1} f^{(ℓ)}(1).
pub fn beta_from_derivatives(values_at_1: &[Scalar], n_max: usize) -> Result<BetaSequence> {
    if values_at_1.len() < n_max + 1 {
        return Err(Error::InsufficientDerivatives {
            needed: n_max,
            available: values_at_1.len(),
        });
    }
    let values = (0..=n_max)
        .map(|nu| {
            let s = (0..=nu).fold(Scalar::zero(), |acc, l| {
                let st = Scalar::Exact(Rational::from(stirling_second(nu + 1, l + 1)));
                acc.add(&st.mul(&values_at_1[l]))
            });
            if nu % 2 == 1 {
                s.neg()
            } else {
                s
            }
        })
        .collect();
    Ok(BetaSequence {
        prefactor: Prefactor::one(),
        values,
        provenance: Provenance::Derivatives,
    })
}

/// `f^{(k)}(1)` for `k ≤ n` from the Taylor series of `f(1 + h)`.
pub fn derivatives_from_taylor<T: Field>(taylor: &Series<T>) -> Vec<T> {
    taylor
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| c.mul(&T::from_rational(Rational::from(factorial(k as u32)))))
        .collect()
}
