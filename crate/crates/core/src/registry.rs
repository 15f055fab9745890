//! Built-in example integrands with closed-form limits and tabulated coefficients.

use std::sync::Arc;

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::appell::{derivatives_from_taylor, AppellFamily, AppellForm, DerivativeForm, FDescriptor};
use crate::bigfloat::BigFloat;
use crate::error::{Error, Result};
use crate::exactnum::Series;
use crate::expansion::{ClosedForm, IntegralSpec, ZetaForm};
use crate::quadrature::Substitution;
use crate::scalar::{parse_expr, Prefactor, Scalar};
use crate::zetavals::{even_zeta_rational, ZetaPolynomial};

/// Number of derivatives `f^{(k)}(1)` stored for `sincos`.
pub const SINCOS_DERIVATIVES: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Entry {
    pub name: &'static str,
    pub description: &'static str,
    pub q: i64,
    pub w: i64,
}

pub const ENTRIES: [Entry; 6] = [
    Entry {
        name: "sincos",
        description: "f(u) = 2(1+u²)^(−3/2), q = −1, w = 1",
        q: -1,
        w: 1,
    },
    Entry {
        name: "sincos-moment-w",
        description: "f_w(u) = (4/π)(1+u²)^(−1−w/2), q = −1",
        q: -1,
        w: 2,
    },
    Entry {
        name: "zn-norm",
        description: "f(u) = 2/(1+u)³, q = 1, w = 1",
        q: 1,
        w: 1,
    },
    Entry {
        name: "zn-norm-w",
        description: "f_w(u) = 2/(1+u)^(w+2), q = 1",
        q: 1,
        w: 1,
    },
    Entry {
        name: "hermite-lognormal",
        description: "f(u) = √(2/π)·u^(−w/2−1)·exp(−ln²u/2), q = 1",
        q: 1,
        w: -2,
    },
    Entry {
        name: "yn-difference",
        description: "f(u) = 2/(1+u)³, q = −1, w = 1",
        q: -1,
        w: 1,
    },
];

pub fn names() -> impl Iterator<Item = &'static str> {
    ENTRIES.iter().map(|e| e.name)
}

pub fn lookup(name: &str) -> Result<&'static Entry> {
    ENTRIES.iter().find(|e| e.name == name).ok_or_else(|| {
        Error::Domain(format!(
            "unknown registry entry \"{name}\" (known: {})",
            names().collect::<Vec<_>>().join(", ")
        ))
    })
}

fn float_prefactor(label: &str, expr: &str, prec: u32) -> Prefactor {
    Prefactor {
        label: label.into(),
        value: parse_expr(expr, prec).expect("registry prefactor"),
    }
}

/// `f(1+h)/f(1) = (1 + h + h²/2)^{−3/2}` differentiated at `h = 0`.
pub fn sincos_derivatives(n: usize) -> Vec<Rational> {
    let base = Series::new(
        vec![Rational::from(1), Rational::from(1), Rational::from((1, 2))],
        n + 1,
    );
    let taylor = base.pow(&Rational::from((-3, 2))).expect("unit constant term");
    derivatives_from_taylor(&taylor)
}

/// `2(1+u²)^{−3/2}` written as `2^{−1/2}·(2/(1+e^{2 ln u}))^{3/2}`.
pub fn sincos_appell_form(prec: u32) -> AppellForm {
    AppellForm::new(
        AppellFamily::euler(Rational::from((3, 2))),
        float_prefactor("2^(−1/2)", "2^(-1/2)", prec),
        Scalar::from_i64(2),
    )
}

fn sincos_f(prec: u32) -> FDescriptor {
    let mut d = DerivativeForm::new(
        sincos_derivatives(SINCOS_DERIVATIVES)
            .into_iter()
            .map(Scalar::Exact)
            .collect(),
    );
    d.prefactor = float_prefactor("2^(−1/2)", "2^(-1/2)", prec);
    d.pointwise = Some(Arc::new(|u: &Float| {
        let p = u.prec() + 16;
        let s = Float::with_val(p, u.square_ref()) + 1u32;
        let v = Float::with_val(p, s.pow(Float::with_val(p, -1.5)));
        Float::with_val(u.prec(), v * 2u32)
    }));
    FDescriptor::Derivatives(d)
}

fn zn_form(d: Rational, b: Prefactor) -> FDescriptor {
    FDescriptor::Appell(AppellForm::new(AppellFamily::euler(d), b, Scalar::one()))
}

/// `B_x(a, b) = x^a/a · ₂F₁(a, 1−b; a+1; x)` for `0 < x < 1`, `a > 0`.
pub fn incomplete_beta(x: &Rational, a: &Rational, b: &Rational, prec: u32) -> Result<BigFloat> {
    if *x <= 0 || *x >= 1 || *a <= 0 {
        return Err(Error::Domain("incomplete beta needs 0 < x < 1 and a > 0".into()));
    }
    let wp = prec + 32;
    let xf = Float::with_val(wp, x);
    let one_minus_b = Rational::from(1) - b;
    let mut term = Float::with_val(wp, 1);
    let mut sum = Float::with_val(wp, 1);
    let target = Float::with_val(wp, Float::i_exp(1, -(prec as i32) - 8));
    let ratio_bound = (x.to_f64() + 1.0) / 2.0;
    let mut k: u64 = 0;
    loop {
        let num = Rational::from(a + k) * Rational::from(&one_minus_b + k);
        let den = Rational::from(a + (k + 1)) * Rational::from(k + 1);
        let ratio = num / den;
        term = Float::with_val(wp, &term * &ratio) * &xf;
        sum += &term;
        k += 1;
        let r = ratio.to_f64().abs() * x.to_f64();
        if r <= ratio_bound && Float::with_val(64, term.abs_ref()) < target {
            break;
        }
        if k > 100 * u64::from(prec) {
            return Err(Error::Domain("incomplete beta series did not converge".into()));
        }
    }
    let tail = Float::with_val(64, term.abs_ref()).to_f64() * ratio_bound / (1.0 - ratio_bound);
    let prefactor = Float::with_val(wp, Float::with_val(wp, xf.ln_ref()) * Float::with_val(wp, a)).exp()
        / Float::with_val(wp, a);
    let value = BigFloat::with_error(Float::with_val(wp, &sum * &prefactor), 0.0)
        .with_added_error(tail * prefactor.to_f64() + 2f64.powi(-(wp as i32) + 8) * sum.to_f64().abs());
    Ok(value.to_prec(prec))
}

fn limit_for(name: &str, w: &Rational, prec: u32) -> Result<ClosedForm> {
    let wp = prec + 32;
    Ok(match name {
        "sincos" => ClosedForm {
            label: "√2".into(),
            value: BigFloat::from_i64(wp, 2).sqrt(),
        },
        "sincos-moment-w" => {
            let b = Rational::from(w + 1u32) / 2u32;
            let beta = incomplete_beta(&Rational::from((1, 2)), &Rational::from((1, 2)), &b, wp)?;
            let two_over_pi = &BigFloat::from_i64(wp, 2) / &BigFloat::pi(wp);
            ClosedForm {
                label: format!("(2/π)·B_(1/2)(1/2, {b})"),
                value: &two_over_pi * &beta,
            }
        }
        "zn-norm" | "yn-difference" => ClosedForm {
            label: "3/4".into(),
            value: BigFloat::from_rational(wp, &Rational::from((3, 4))),
        },
        "zn-norm-w" => {
            if *w == -1 {
                ClosedForm {
                    label: "2·ln 2".into(),
                    value: BigFloat::from_i64(wp, 2).ln().mul_rational(&Rational::from(2)),
                }
            } else {
                let two = BigFloat::from_i64(wp, 2);
                let pow = two.pow_rational(&Rational::from(-w));
                let num = &two - &pow;
                let inv = Rational::from(1) / Rational::from(w + 1u32);
                ClosedForm {
                    label: format!("(2 − 2^(−{w}))/({w} + 1)"),
                    value: num.mul_rational(&inv),
                }
            }
        }
        "hermite-lognormal" => {
            let e = BigFloat::from_rational(wp, &(Rational::from(w.square_ref()) / 8u32)).exp();
            let arg = Float::with_val(wp, &Rational::from(-w)) / Float::with_val(wp, 8u32).sqrt();
            let erfc = BigFloat::rounded(wp, &arg.erfc());
            ClosedForm {
                label: format!("e^({}/8)·erfc({}/(2√2))", Rational::from(w.square_ref()), Rational::from(-w)),
                value: &e * &erfc,
            }
        }
        other => return Err(lookup(other).unwrap_err()),
    })
}

fn f_for(name: &str, w: &Rational, prec: u32) -> Result<(FDescriptor, Substitution)> {
    let half_w = Rational::from(w / 2u32);
    Ok(match name {
        "sincos" => (sincos_f(prec), Substitution::Identity),
        "sincos-moment-w" => {
            let d = Rational::from(1) + &half_w;
            let b = Rational::from(1) - &half_w;
            let label = format!("2^({b})/π");
            let expr = format!("2^({})/pi", b);
            let form = AppellForm::new(
                AppellFamily::euler(d),
                float_prefactor(&label, &expr, prec),
                Scalar::from_i64(2),
            );
            (FDescriptor::Appell(form), Substitution::Identity)
        }
        "zn-norm" | "yn-difference" => (
            zn_form(Rational::from(3), Prefactor::exact(Rational::from((1, 4)))),
            Substitution::Identity,
        ),
        "zn-norm-w" => {
            let d = Rational::from(w + 2u32);
            let e = -(w + Rational::from(1));
            let b = if *e.denom() == 1 {
                let k = e.numer().to_i32().ok_or_else(|| Error::Domain("w too large".into()))?;
                Prefactor::exact(Rational::from(2).pow(k))
            } else {
                float_prefactor(&format!("2^({e})"), &format!("2^({e})"), prec)
            };
            (zn_form(d, b), Substitution::Identity)
        }
        "hermite-lognormal" => {
            let s = -(Rational::from(1) + &half_w);
            let form = AppellForm::new(
                AppellFamily::hermite(),
                float_prefactor("√(2/π)", "sqrt(2/pi)", prec),
                Scalar::one(),
            )
            .with_shift(s);
            (FDescriptor::Appell(form), Substitution::NegLog)
        }
        other => return Err(lookup(other).unwrap_err()),
    })
}

/// The integral spec for a registry entry, with optional `q`/`w` overrides.
pub fn build(
    name: &str,
    q: Option<Rational>,
    w: Option<Rational>,
    orders: usize,
    precision: u32,
) -> Result<IntegralSpec> {
    let entry = lookup(name)?;
    let q = q.unwrap_or_else(|| Rational::from(entry.q));
    let w = w.unwrap_or_else(|| Rational::from(entry.w));
    let (f, subst) = f_for(name, &w, precision + 32)?;
    let limit = limit_for(name, &w, precision)?;
    Ok(IntegralSpec::new(q, w, f, orders, precision)
        .with_limit(limit)
        .with_substitution(subst))
}

/// `c·π^{2k}` as a ζ-polynomial.
fn pi_pow(c: Rational, two_k: u32) -> ZetaPolynomial {
    ZetaPolynomial::term(c / even_zeta_rational(two_k), vec![two_k])
}

fn z(c: (i64, i64), args: Vec<u32>) -> ZetaPolynomial {
    ZetaPolynomial::term(Rational::from(c), args)
}

fn r(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// A coefficient value as tabulated in the literature for the default parameters.
#[derive(Clone, Debug)]
pub struct ReferenceValue {
    pub p: usize,
    pub form: ZetaForm,
}

/// Tabulated `a_p` for an entry at its default `(q, w)`; empty when none exist.
pub fn reference_table(name: &str, prec: u32) -> Vec<ReferenceValue> {
    let one = Prefactor::one;
    let sqrt2 = || float_prefactor("√2", "sqrt(2)", prec);
    let herm = || float_prefactor("√(2/π)", "sqrt(2/pi)", prec);
    let rows: Vec<(usize, Prefactor, ZetaPolynomial)> = match name {
        "zn-norm" => vec![
            (2, one(), pi_pow(r(1, 48), 2)),
            (3, one(), z((1, 8), vec![3])),
            (4, one(), pi_pow(r(-1, 960), 4)),
            (5, one(), pi_pow(r(-1, 48), 2).mul(&ZetaPolynomial::zeta(3))),
            (6, one(), pi_pow(r(83, 241920), 6).add(&z((-1, 16), vec![3, 3]))),
            (
                7,
                one(),
                pi_pow(r(3, 640), 4)
                    .mul(&ZetaPolynomial::zeta(3))
                    .add(&pi_pow(r(1, 32), 2).mul(&ZetaPolynomial::zeta(5)))
                    .add(&z((3, 16), vec![7])),
            ),
            (
                8,
                one(),
                pi_pow(r(-253, 14515200), 8)
                    .add(&pi_pow(r(5, 192), 2).mul(&z((1, 1), vec![3, 3])))
                    .add(&z((3, 16), vec![3, 5])),
            ),
        ],
        "hermite-lognormal" => vec![
            (2, herm(), z((-1, 1), vec![2])),
            (3, herm(), z((2, 1), vec![3])),
            (4, herm(), z((-1, 2), vec![4])),
            (
                5,
                herm(),
                pi_pow(r(-2, 3), 2).mul(&ZetaPolynomial::zeta(3)).add(&z((4, 1), vec![5])),
            ),
            (6, herm(), z((-13, 8), vec![6]).add(&z((4, 1), vec![3, 3]))),
        ],
        "sincos" => vec![
            (2, sqrt2(), pi_pow(r(1, 24), 2)),
            (3, sqrt2(), z((1, 4), vec![3])),
            (4, sqrt2(), pi_pow(r(-1, 1152), 4)),
            (
                5,
                sqrt2(),
                pi_pow(r(-1, 32), 2).mul(&ZetaPolynomial::zeta(3)).add(&z((1, 16), vec![5])),
            ),
            (6, sqrt2(), pi_pow(r(131, 193536), 6).add(&z((-3, 32), vec![3, 3]))),
        ],
        _ => Vec::new(),
    };
    rows.into_iter()
        .map(|(p, prefactor, poly)| ReferenceValue {
            p,
            form: ZetaForm { prefactor, poly },
        })
        .collect()
}

/// `true` when `(q, w)` are the entry's defaults, so its reference table applies.
pub fn is_default(name: &str, q: &Rational, w: &Rational) -> bool {
    lookup(name).is_ok_and(|e| *q == e.q && *w == e.w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::appell::beta_from_appell;
    use crate::expansion::{expansion_coefficients, limit_constant};

    #[test]
    fn sincos_derivative_data() {
        let d = sincos_derivatives(3);
        assert_eq!(d, vec![r(1, 1), r(-3, 2), r(9, 4), r(-15, 8)]);
    }

    #[test]
    fn sincos_routes_agree() {
        let exact = sincos_derivatives(8);
        let beta_d = crate::appell::beta_from_derivatives(
            &exact.into_iter().map(Scalar::Exact).collect::<Vec<_>>(),
            8,
        )
        .unwrap();
        let beta_a = beta_from_appell(&sincos_appell_form(160), 8).unwrap();
        for nu in 0..=8 {
            assert!(beta_d.values[nu].approx_eq(&beta_a.values[nu], 1e-35, 160), "ν = {nu}");
        }
    }

    #[test]
    fn closed_form_limits_match_quadrature() {
        for name in names() {
            for w in [None, Some(r(3, 1))] {
                let mut spec = build(name, None, w.clone(), 2, 128).unwrap();
                let closed = spec.limit.take().unwrap();
                let quad = limit_constant(&spec).unwrap();
                assert!(
                    closed.value.approx_eq(&quad.value, 1e-30),
                    "{name} {w:?}: {} vs {}",
                    closed.value.to_decimal(),
                    quad.value.to_decimal()
                );
            }
        }
    }

    #[test]
    fn hermite_limit_value() {
        let spec = build("hermite-lognormal", None, None, 2, 128).unwrap();
        let v = spec.limit.unwrap().value.to_f64();
        assert!((v - 0.523_156_583_730_246_8).abs() < 1e-15, "{v}");
    }

    #[test]
    fn zn_norm_w_log_limit() {
        let spec = build("zn-norm-w", None, Some(r(-1, 1)), 2, 128).unwrap();
        let v = spec.limit.unwrap().value.to_f64();
        assert!((v - 2.0 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn zn_reference_matches_assembly_through_seven() {
        let spec = build("zn-norm", None, None, 7, 192).unwrap();
        let res = expansion_coefficients(&spec).unwrap();
        for rv in reference_table("zn-norm", 192).iter().filter(|rv| rv.p <= 7) {
            let v = rv.form.evaluate(192).unwrap();
            assert!(v.approx_eq(&res.a(rv.p).unwrap(), 1e-40), "p = {}", rv.p);
        }
    }

    #[test]
    fn unknown_name() {
        assert!(build("nope", None, None, 2, 64).is_err());
    }
}
