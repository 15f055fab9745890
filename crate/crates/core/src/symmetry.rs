//! Reduction of `q = 1` coefficients from alternating to ordinary values.
//!
//! `a_p = Σ_ν w^{p−ν}β_{ν−1}σ_{ν,p−ν}` can be rewritten as `Σ_ν ρ_{p,ν}s_{ν,p−ν}`
//! whenever the pair-sums `η_{p,ν}` are symmetric under `ν ↦ p − ν`.

use rug::Rational;

use crate::appell::{reflection_omega, AppellFamily, AppellForm, BetaSequence};
use crate::error::{Error, Result};
use crate::exactnum::{binomial, Field, Polynomial};
use crate::scalar::{Prefactor, Scalar};

fn binom_scalar<T: Field>(n: i64, k: i64) -> T {
    T::from_rational(Rational::from(binomial(n, k)))
}

/// `ψ_ν = Σ_ℓ (−1)^ℓ C(ν,ℓ) a_ℓ`; an involution.
pub fn binomial_transform<T: Field>(a: &[T]) -> Vec<T> {
    (0..a.len())
        .map(|nu| {
            (0..=nu).fold(T::zero(), |acc, l| {
                let t = a[l].mul(&binom_scalar(nu as i64, l as i64));
                if l % 2 == 0 {
                    acc.add(&t)
                } else {
                    acc.sub(&t)
                }
            })
        })
        .collect()
}

/// `A_p(x) = Σ_k C(p,k)(−1)^k a_k x^k`.
pub fn generating_polynomial_a<T: Field>(a: &[T], p: usize) -> Result<Polynomial<T>> {
    if a.len() < p + 1 {
        return Err(Error::LengthMismatch {
            expected: p + 1,
            got: a.len(),
        });
    }
    Ok(Polynomial::new(
        (0..=p)
            .map(|k| {
                let t = a[k].mul(&binom_scalar(p as i64, k as i64));
                if k % 2 == 0 {
                    t
                } else {
                    t.neg()
                }
            })
            .collect(),
    ))
}

/// `A(x) = (−1)^p A(1 − x)`, compared coefficient by coefficient.
pub fn check_a_symmetry(a: &Polynomial<Rational>, p: usize) -> bool {
    let mut reflected = a.compose_affine(&Rational::from(-1), &Rational::from(1));
    if p % 2 == 1 {
        reflected = reflected.scale(&Rational::from(-1));
    }
    *a == reflected
}

/// η_{p,ν} = Σ_{j≤ν} (−1)^{ν−j} C(ν−1, j−1) w^j v_{p−j−1} for ν = 1 … p−1.
fn eta_raw(p: usize, w: &Scalar, values: &[Scalar]) -> Result<Vec<Scalar>> {
    if p < 2 {
        return Err(Error::Domain("pair-sums need p ≥ 2".into()));
    }
    if values.len() < p - 1 {
        return Err(Error::InsufficientDerivatives {
            needed: p - 2,
            available: values.len(),
        });
    }
    let mut w_pow = vec![Scalar::one()];
    for j in 1..p {
        w_pow.push(w_pow[j - 1].mul(w));
    }
    Ok((1..p)
        .map(|nu| {
            (1..=nu).fold(Scalar::zero(), |acc, j| {
                let t = w_pow[j]
                    .mul(&values[p - j - 1])
                    .mul_rational(&Rational::from(binomial(nu as i64 - 1, j as i64 - 1)));
                if (nu - j) % 2 == 0 {
                    acc.add(&t)
                } else {
                    acc.sub(&t)
                }
            })
        })
        .collect())
}

/// η_{p,1} … η_{p,p−1} including the prefactor of β.
pub fn eta_pair_sums(p: usize, w: &Scalar, beta: &BetaSequence) -> Result<Vec<Scalar>> {
    let eta = eta_raw(p, w, &beta.values)?;
    Ok(eta.iter().map(|e| e.mul(&beta.prefactor.value)).collect())
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub nu: usize,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

/// Outcome of the solvability test at one order `p`.
///
/// `eta` and `rho` are expressed in units of `prefactor`, so an exact check
/// is possible even when the prefactor is irrational.
#[derive(Clone, Debug)]
pub struct SymmetryReport {
    pub p: usize,
    pub prefactor: Prefactor,
    pub eta: Vec<Scalar>,
    pub holds: bool,
    pub exact: bool,
    pub violations: Vec<Violation>,
    pub rho: Option<Vec<Scalar>>,
}

impl SymmetryReport {
    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

/// Tests `η_{p,ν} = η_{p,p−ν}` for `1 ≤ ν ≤ ⌊p/2⌋` and, when it holds,
/// attaches `ρ_{p,ν} = η_{p,ν}/2`.
///
/// Exact β decide exactly; float β use tolerance `2^{−prec/2}`.
pub fn solvability_check(p: usize, w: &Scalar, beta: &BetaSequence) -> Result<SymmetryReport> {
    let eta = eta_raw(p, w, &beta.values)?;
    let exact = w.is_exact() && eta.iter().all(Scalar::is_exact);
    let prec = eta
        .iter()
        .filter_map(|e| match e {
            Scalar::Float(f) => Some(f.prec()),
            Scalar::Exact(_) => None,
        })
        .max()
        .unwrap_or(64);
    let tol = if exact { 0.0 } else { 2f64.powi(-(prec as i32) / 2) };
    let violations: Vec<Violation> = (1..=p / 2)
        .filter_map(|nu| {
            let lhs = &eta[nu - 1];
            let rhs = &eta[p - nu - 1];
            (!lhs.approx_eq(rhs, tol, prec)).then(|| Violation {
                nu,
                lhs: lhs.clone(),
                rhs: rhs.clone(),
            })
        })
        .collect();
    let holds = violations.is_empty();
    let rho = holds.then(|| {
        let half = Rational::from((1, 2));
        eta.iter().map(|e| e.mul_rational(&half)).collect()
    });
    Ok(SymmetryReport {
        p,
        prefactor: beta.prefactor.clone(),
        eta,
        holds,
        exact,
        violations,
        rho,
    })
}

#[derive(Clone, Debug)]
pub struct RhoEntry {
    pub nu: usize,
    /// ρ_{p,ν} in units of the β prefactor.
    pub rho: Scalar,
    /// Index pair `(ν, p − ν)` of the multiplying `s` value.
    pub s_ref: (usize, usize),
}

/// The symmetric ρ coefficients, or `SolvabilityViolated` at the first bad ν.
pub fn rho_reduction(p: usize, w: &Scalar, beta: &BetaSequence) -> Result<Vec<RhoEntry>> {
    let report = solvability_check(p, w, beta)?;
    match report.rho {
        Some(rho) => Ok(rho
            .into_iter()
            .enumerate()
            .map(|(i, r)| RhoEntry {
                nu: i + 1,
                rho: r,
                s_ref: (i + 1, p - i - 1),
            })
            .collect()),
        None => Err(Error::SolvabilityViolated {
            p,
            nu: report.violations[0].nu,
        }),
    }
}

/// `c·ω = w + 2` for a family with reflection constant ω.
pub fn appell_criterion(family: &AppellFamily, c: &Scalar, w: &Scalar) -> bool {
    criterion_with_shift(family, c, &Rational::new(), w)
}

/// Criterion for `f(u) = b·u^s·𝒜(c ln u)`: `c·ω − 2s = w + 2`.
pub fn appell_criterion_form(form: &AppellForm, w: &Scalar) -> bool {
    criterion_with_shift(&form.family, &form.c, &form.s, w)
}

fn criterion_with_shift(family: &AppellFamily, c: &Scalar, s: &Rational, w: &Scalar) -> bool {
    let Some(omega) = reflection_omega(family) else {
        return false;
    };
    let lhs = c
        .mul(&omega)
        .sub(&Scalar::Exact(Rational::from(2) * s));
    let rhs = w.add(&Scalar::from_i64(2));
    match (&lhs, &rhs) {
        (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
        _ => {
            let prec = match (&lhs, &rhs) {
                (Scalar::Float(f), _) | (_, Scalar::Float(f)) => f.prec(),
                _ => 64,
            };
            lhs.approx_eq(&rhs, 2f64.powi(-(prec as i32) / 2), prec)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::appell::{beta_from_appell, FamilyKind};

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn transform_examples() {
        let ones = vec![q(1, 1); 4];
        assert_eq!(binomial_transform(&ones), vec![q(1, 1), q(0, 1), q(0, 1), q(0, 1)]);
        let alt: Vec<Rational> = (0..4).map(|k| q(if k % 2 == 0 { 1 } else { -1 }, 1)).collect();
        assert_eq!(binomial_transform(&alt), vec![q(1, 1), q(2, 1), q(4, 1), q(8, 1)]);
        assert_eq!(
            binomial_transform(&[q(1, 1), q(0, 1), q(0, 1)]),
            vec![q(1, 1), q(1, 1), q(1, 1)]
        );
    }

    #[test]
    fn generating_polynomial_examples() {
        let a = generating_polynomial_a(&[q(1, 1), q(1, 1)], 1).unwrap();
        assert_eq!(a, Polynomial::new(vec![q(1, 1), q(-1, 1)]));
        let a = generating_polynomial_a(&[q(1, 1), q(0, 1), q(0, 1)], 2).unwrap();
        assert_eq!(a, Polynomial::new(vec![q(1, 1)]));
        let a = generating_polynomial_a(&[q(0, 1), q(1, 1), q(0, 1)], 2).unwrap();
        assert_eq!(a, Polynomial::new(vec![q(0, 1), q(-2, 1)]));
        assert!(generating_polynomial_a(&[q(1, 1)], 2).is_err());
    }

    #[test]
    fn symmetry_examples() {
        assert!(check_a_symmetry(&Polynomial::new(vec![q(-1, 2), q(1, 1)]), 1));
        assert!(check_a_symmetry(&Polynomial::new(vec![q(1, 1)]), 2));
        assert!(!check_a_symmetry(&Polynomial::new(vec![q(0, 1), q(1, 1)]), 2));
    }

    fn zn_beta(n: usize) -> BetaSequence {
        let form = AppellForm::new(
            AppellFamily::euler(q(3, 1)),
            Prefactor::exact(q(1, 4)),
            Scalar::one(),
        );
        beta_from_appell(&form, n).unwrap()
    }

    #[test]
    fn eta_examples() {
        let beta = zn_beta(4);
        let one = Scalar::one();
        let e2 = eta_pair_sums(2, &one, &beta).unwrap();
        assert_eq!(e2[0].as_rational().unwrap(), &q(1, 4));
        let e3 = eta_pair_sums(3, &one, &beta).unwrap();
        assert_eq!(e3[1].as_rational().unwrap(), &q(1, 8));
    }

    #[test]
    fn zn_rho_two() {
        let beta = zn_beta(1);
        let rho = rho_reduction(2, &Scalar::one(), &beta).unwrap();
        assert_eq!(rho[0].rho.mul(&beta.prefactor.value).as_rational().unwrap(), &q(1, 8));
    }

    #[test]
    fn criterion_examples() {
        let one = Scalar::one();
        assert!(appell_criterion(&AppellFamily::euler(q(3, 1)), &one, &one));
        assert!(appell_criterion(&AppellFamily::hermite(), &Scalar::ratio(7, 3), &Scalar::from_i64(-2)));
        assert!(!appell_criterion(&AppellFamily::genocchi(q(3, 1)), &one, &one));
        assert!(!appell_criterion(
            &AppellFamily::new(FamilyKind::Euler, Scalar::from_i64(3)),
            &one,
            &Scalar::from_i64(2)
        ));
    }
}
