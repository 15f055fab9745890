//! Coefficients of `I_n = ∫₀¹ f(u)(1 + q·uⁿ)^{w/n} du ∼ ∫₀¹ f + Σ_{p≥2} a_p/n^p`.

use std::fmt;

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::appell::{BetaSequence, FDescriptor};
use crate::bigfloat::BigFloat;
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::quadrature::{integrate_with_kernel, QuadratureResult, Substitution, TanhSinh};
use crate::scalar::{Prefactor, Scalar};
use crate::symmetry::solvability_check;
use crate::zetavals::{mzv_height_one, nielsen_s, ZetaPolynomial};

/// A known closed form for `∫₀¹ f`.
#[derive(Clone, Debug)]
pub struct ClosedForm {
    pub label: String,
    pub value: BigFloat,
}

#[derive(Clone, Debug)]
pub struct IntegralSpec {
    pub q: Rational,
    pub w: Rational,
    pub f: FDescriptor,
    pub orders: usize,
    pub precision: u32,
    pub limit: Option<ClosedForm>,
    pub substitution: Substitution,
    pub exec: Execution,
}

impl IntegralSpec {
    pub fn new(q: Rational, w: Rational, f: FDescriptor, orders: usize, precision: u32) -> Self {
        IntegralSpec {
            q,
            w,
            f,
            orders,
            precision,
            limit: None,
            substitution: Substitution::Identity,
            exec: Execution::default(),
        }
    }

    pub fn with_limit(mut self, limit: ClosedForm) -> Self {
        self.limit = Some(limit);
        self
    }

    pub fn with_substitution(mut self, s: Substitution) -> Self {
        self.substitution = s;
        self
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.q > 1 || self.q < -1 {
            return Err(Error::Domain(format!("q = {} must lie in [−1, 1]", self.q)));
        }
        if self.w == 0 {
            return Err(Error::Domain("w must be nonzero".into()));
        }
        if self.q == -1 && self.w <= 0 {
            return Err(Error::Domain(format!(
                "q = −1 requires w > 0 (got w = {})",
                self.w
            )));
        }
        if self.orders < 2 {
            return Err(Error::Domain("orders must be at least 2".into()));
        }
        if !(crate::bigfloat::MIN_PRECISION..=crate::bigfloat::MAX_PRECISION).contains(&self.precision) {
            return Err(Error::Domain(format!(
                "precision {} outside [{}, {}] bits",
                self.precision,
                crate::bigfloat::MIN_PRECISION,
                crate::bigfloat::MAX_PRECISION
            )));
        }
        if let Some(max) = self.f.max_beta_index() {
            if self.orders > max + 2 {
                return Err(Error::InsufficientDerivatives {
                    needed: self.orders - 2,
                    available: max + 1,
                });
            }
        }
        if let FDescriptor::Appell(form) = &self.f {
            form.validate()?;
        }
        Ok(())
    }
}

/// `∫₀¹ f` either from a closed form or by quadrature.
#[derive(Clone, Debug)]
pub struct LimitConstant {
    pub value: BigFloat,
    pub closed_form: Option<String>,
    pub quadrature: Option<QuadratureResult>,
}

/// One summand `(−w)^{p−ℓ}·β_{ℓ−1}·S_{ℓ,p−ℓ}(−q)`.
#[derive(Clone, Debug)]
pub struct Term {
    pub ell: usize,
    pub k: usize,
    pub weight: Rational,
    pub beta: Scalar,
    pub nielsen: BigFloat,
    pub contribution: BigFloat,
}

/// `prefactor·poly`, a closed form in ordinary zeta values.
#[derive(Clone, Debug)]
pub struct ZetaForm {
    pub prefactor: Prefactor,
    pub poly: ZetaPolynomial,
}

impl ZetaForm {
    pub fn evaluate(&self, prec: u32) -> Result<BigFloat> {
        let v = self.poly.evaluate(prec)?;
        Ok(&v * &self.prefactor.value.to_bigfloat(prec + 16))
    }
}

impl fmt::Display for ZetaForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.prefactor.value.as_rational() {
            Some(r) => write!(f, "{}", self.poly.scale(r).render_pi()),
            None => write!(f, "{}·({})", self.prefactor.label, self.poly.render_pi()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Coefficient {
    pub p: usize,
    pub value: BigFloat,
    pub terms: Vec<Term>,
    pub zeta_form: Option<ZetaForm>,
}

#[derive(Clone, Debug)]
pub struct ExpansionResult {
    pub q: Rational,
    pub w: Rational,
    pub precision: u32,
    pub a0: LimitConstant,
    pub coefficients: Vec<Coefficient>,
    pub beta: BetaSequence,
}

impl ExpansionResult {
    /// `a_p` for any `p ≥ 0`; `a_1 = 0` and orders beyond the table are `None`.
    pub fn a(&self, p: usize) -> Option<BigFloat> {
        match p {
            0 => Some(self.a0.value.clone()),
            1 => Some(BigFloat::zero(self.precision)),
            _ => self.coefficient(p).map(|c| c.value.clone()),
        }
    }

    pub fn coefficient(&self, p: usize) -> Option<&Coefficient> {
        self.coefficients.iter().find(|c| c.p == p)
    }

    pub fn max_order(&self) -> usize {
        self.coefficients.last().map_or(1, |c| c.p)
    }

    /// `a0 + Σ_{p=2}^{P} a_p/n^p`.
    pub fn partial_sum(&self, n: u64, order: usize) -> BigFloat {
        let prec = self.precision + 32;
        let mut total = self.a0.value.to_prec(prec);
        let inv_n = BigFloat::from_rational(prec, &Rational::from((1, n)));
        for c in self.coefficients.iter().filter(|c| c.p <= order) {
            total = &total + &(&c.value * &inv_n.powi(c.p as i32));
        }
        total
    }
}

fn guard(prec: u32) -> u32 {
    prec + 32
}

pub fn limit_constant(spec: &IntegralSpec) -> Result<LimitConstant> {
    if let Some(cf) = &spec.limit {
        return Ok(LimitConstant {
            value: cf.value.to_prec(spec.precision),
            closed_form: Some(cf.label.clone()),
            quadrature: None,
        });
    }
    let wp = guard(spec.precision);
    let f = spec.f.pointwise(wp).ok_or(Error::NonEvaluableF)?;
    let ts = TanhSinh::new(wp).with_execution(spec.exec);
    let r = integrate_with_kernel(&f, |_| Float::with_val(wp, 1), spec.substitution, &ts)?;
    Ok(LimitConstant {
        value: r.value.to_prec(spec.precision),
        closed_form: None,
        quadrature: Some(r),
    })
}

fn nielsen_table(spec: &IntegralSpec, wp: u32) -> Result<Vec<((usize, usize), BigFloat)>> {
    let z = Rational::from(-&spec.q);
    let pairs: Vec<(usize, usize)> = (2..=spec.orders)
        .flat_map(|p| (1..p).map(move |ell| (ell, p - ell)))
        .collect();
    let values = par::try_map(spec.exec, &pairs, |&(m, k)| nielsen_s(m, k, &z, wp))?;
    Ok(pairs.into_iter().zip(values).collect())
}

/// All `a_2 … a_P` with their term decomposition.
///
/// Zeta forms are attached for `q = −1` (height-one MZVs) and for `q = 1`
/// whenever the pair-sum symmetry holds at that order.
pub fn expansion_coefficients(spec: &IntegralSpec) -> Result<ExpansionResult> {
    spec.validate()?;
    let wp = guard(spec.precision);
    let beta = spec.f.beta(spec.orders - 2)?;
    beta.require(spec.orders - 1)?;
    let a0 = limit_constant(spec)?;
    let table = nielsen_table(spec, wp)?;
    let lookup = |m: usize, k: usize| -> &BigFloat {
        &table.iter().find(|(key, _)| *key == (m, k)).expect("precomputed").1
    };
    let neg_w = Rational::from(-&spec.w);
    let mut coefficients = Vec::with_capacity(spec.orders - 1);
    for p in 2..=spec.orders {
        let mut terms = Vec::with_capacity(p - 1);
        for ell in 1..p {
            let k = p - ell;
            let weight = Rational::from((&neg_w).pow(k as i32));
            let b = beta.beta(ell - 1);
            let nielsen = lookup(ell, k).clone();
            let contribution = &b.to_bigfloat(wp).mul_rational(&weight) * &nielsen;
            terms.push(Term {
                ell,
                k,
                weight,
                beta: b,
                nielsen,
                contribution,
            });
        }
        let value = crate::bigfloat::sum(wp, terms.iter().map(|t| &t.contribution)).to_prec(spec.precision);
        let zeta_form = if spec.q == -1 {
            zeta_form_q_minus1(p, &spec.w, &beta).ok()
        } else if spec.q == 1 {
            zeta_form_q_one(p, &spec.w, &beta)
        } else {
            None
        };
        coefficients.push(Coefficient {
            p,
            value,
            terms,
            zeta_form,
        });
    }
    Ok(ExpansionResult {
        q: spec.q.clone(),
        w: spec.w.clone(),
        precision: spec.precision,
        a0,
        coefficients,
        beta,
    })
}

fn exact_values(beta: &BetaSequence, n: usize) -> Result<Vec<Rational>> {
    beta.values[..n]
        .iter()
        .map(|v| v.as_rational().cloned().ok_or(Error::Inexact))
        .collect()
}

/// `Σ_ℓ (−w)^{p−ℓ}·β_{ℓ−1}·s_{ℓ,p−ℓ}` with every `s` expanded in ζ values.
fn zeta_form_q_minus1(p: usize, w: &Rational, beta: &BetaSequence) -> Result<ZetaForm> {
    let values = exact_values(beta, p - 1)?;
    let neg_w = Rational::from(-w);
    let mut poly = ZetaPolynomial::zero();
    for ell in 1..p {
        let c = Rational::from((&neg_w).pow((p - ell) as i32)) * &values[ell - 1];
        poly = poly.add(&mzv_height_one(ell, p - ell).scale(&c));
    }
    Ok(ZetaForm {
        prefactor: beta.prefactor.clone(),
        poly,
    })
}

/// `Σ_ν ρ_{p,ν}·s_{ν,p−ν}` when the pair-sums are symmetric.
fn zeta_form_q_one(p: usize, w: &Rational, beta: &BetaSequence) -> Option<ZetaForm> {
    let report = solvability_check(p, &Scalar::Exact(w.clone()), beta).ok()?;
    if !report.exact {
        return None;
    }
    let rho = report.rho?;
    let mut poly = ZetaPolynomial::zero();
    for (i, r) in rho.iter().enumerate() {
        let nu = i + 1;
        poly = poly.add(&mzv_height_one(nu, p - nu).scale(r.as_rational()?));
    }
    Some(ZetaForm {
        prefactor: beta.prefactor.clone(),
        poly,
    })
}

/// Attaches the ζ-polynomial form to every coefficient of a `q = −1` expansion.
pub fn reduce_to_zeta_q_minus1(mut result: ExpansionResult) -> Result<ExpansionResult> {
    if result.q != -1 {
        return Err(Error::Domain(format!(
            "zeta reduction through s-values needs q = −1 (got q = {})",
            result.q
        )));
    }
    for c in &mut result.coefficients {
        c.zeta_form = Some(zeta_form_q_minus1(c.p, &result.w, &result.beta)?);
    }
    Ok(result)
}

/// `φ_r = ∫₀¹ f(u)·u^r du`.
pub fn moment_phi(f: &FDescriptor, r: u32, precision: u32) -> Result<QuadratureResult> {
    moment_phi_with(f, r, Substitution::Identity, &TanhSinh::new(guard(precision)))
}

pub fn moment_phi_with(
    f: &FDescriptor,
    r: u32,
    subst: Substitution,
    ts: &TanhSinh,
) -> Result<QuadratureResult> {
    if r == 0 {
        return Err(Error::Domain("moment order r must be at least 1".into()));
    }
    let prec = ts.prec;
    let fp = f.pointwise(prec).ok_or(Error::NonEvaluableF)?;
    integrate_with_kernel(
        &fp,
        |ln_u| Float::with_val(prec, ln_u * r).exp(),
        subst,
        ts,
    )
}
