use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Integer, Rational};

use nielsen_core::appell::{
    appell_polynomials, beta_from_appell, beta_from_derivatives, derivatives_from_taylor, reflection_omega,
    AppellFamily, AppellForm, BetaSequence, Provenance,
};
use nielsen_core::exactnum::{
    binomial, factorial, stirling_first_unsigned, stirling_second, truncated_mzv_ones, Polynomial, Series,
};
use nielsen_core::symmetry::{
    binomial_transform, check_a_symmetry, eta_pair_sums, generating_polynomial_a, rho_reduction, solvability_check,
};
use nielsen_core::zetavals::{s_value, sigma};
use nielsen_core::{Error, Prefactor, Scalar};

fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=12).prop_map(|(n, d)| Rational::from((n, d)))
}

fn exact(p: &Polynomial<Scalar>) -> Polynomial<Rational> {
    p.try_map(|s| s.as_rational().cloned().ok_or(Error::Inexact)).unwrap()
}

fn exact_families() -> Vec<AppellFamily> {
    let mut v = vec![AppellFamily::monomial(), AppellFamily::hermite()];
    for d in 1..=4 {
        v.push(AppellFamily::euler(Rational::from(d)));
        v.push(AppellFamily::bernoulli(Rational::from(d)));
        v.push(AppellFamily::genocchi(Rational::from(d)));
    }
    v.push(AppellFamily::euler(Rational::from((3, 2))));
    v.push(AppellFamily::bernoulli(Rational::from((-1, 2))));
    v
}

fn sequence(values: Vec<Rational>) -> BetaSequence {
    BetaSequence {
        prefactor: Prefactor::one(),
        values: values.into_iter().map(Scalar::Exact).collect(),
        provenance: Provenance::Derivatives,
    }
}

#[test]
fn stirling_truncated_mzv_cross_identity() {
    for j in 1..=12usize {
        for p in 1..=j {
            let lhs = Rational::from(stirling_first_unsigned(j, p));
            let rhs = Rational::from(factorial(j as u32 - 1)) * truncated_mzv_ones(j - 1, p);
            assert_eq!(lhs, rhs, "j = {j}, p = {p}");
        }
    }
}

#[test]
fn stirling_row_sums() {
    let mut bell = vec![Integer::from(1)];
    for n in 0..12i64 {
        let next: Integer = (0..=n).map(|k| binomial(n, k) * &bell[k as usize]).sum();
        bell.push(next);
    }
    for n in 1..=12usize {
        let first: Integer = (0..=n).map(|k| stirling_first_unsigned(n, k)).sum();
        let second: Integer = (0..=n).map(|k| stirling_second(n, k)).sum();
        assert_eq!(first, factorial(n as u32));
        assert_eq!(second, bell[n]);
    }
}

#[test]
fn appell_derivative_identity() {
    for fam in exact_families() {
        let polys = appell_polynomials(&fam, 12).unwrap();
        for n in 1..=12 {
            let lhs = exact(&polys[n]).derivative();
            let rhs = exact(&polys[n - 1]).scale(&Rational::from(n));
            assert_eq!(lhs, rhs, "{:?} n = {n}", fam.kind);
        }
    }
}

#[test]
fn appell_reflection() {
    for fam in exact_families() {
        let Some(omega) = reflection_omega(&fam) else { continue };
        let omega = omega.as_rational().unwrap().clone();
        let polys = appell_polynomials(&fam, 10).unwrap();
        for (n, p) in polys.iter().enumerate() {
            let p = exact(p);
            let mut reflected = p.compose_affine(&Rational::from(-1), &omega);
            if n % 2 == 1 {
                reflected = reflected.scale(&Rational::from(-1));
            }
            assert_eq!(reflected, p, "{:?} d = {:?} n = {n}", fam.kind, fam.d);
        }
    }
}

#[test]
fn reflection_exists_where_expected() {
    assert!(reflection_omega(&AppellFamily::genocchi(Rational::from(2))).is_some());
    assert!(reflection_omega(&AppellFamily::genocchi(Rational::from(3))).is_none());
    assert_eq!(
        reflection_omega(&AppellFamily::bernoulli(Rational::from(4))).unwrap().as_rational().unwrap(),
        &Rational::from(4)
    );
}

/// f(1+h) = b·𝒜(c·ln(1+h)) by series composition, independent of the polynomial route.
fn derivatives_by_composition(form: &AppellForm, n: usize) -> Vec<Scalar> {
    let len = n + 1;
    let log = Series::new(vec![Scalar::one(), Scalar::one()], len).log().unwrap();
    let arg = log.scale(&form.c);
    let seed = form.family.seed_series(len).unwrap();
    let mut total = Series::new(vec![Scalar::zero()], len);
    let mut power = Series::one(len);
    for k in 0..len {
        total = total.add(&power.scale(seed.coeff(k)));
        power = power.mul(&arg);
    }
    derivatives_from_taylor(&total)
}

#[test]
fn beta_routes_agree() {
    let forms = [
        AppellForm::new(AppellFamily::euler(Rational::from(3)), Prefactor::one(), Scalar::one()),
        AppellForm::new(AppellFamily::euler(Rational::from((3, 2))), Prefactor::one(), Scalar::from_i64(2)),
        AppellForm::new(AppellFamily::bernoulli(Rational::from(2)), Prefactor::one(), Scalar::ratio(1, 2)),
        AppellForm::new(AppellFamily::genocchi(Rational::from(2)), Prefactor::one(), Scalar::one()),
        AppellForm::new(AppellFamily::hermite(), Prefactor::one(), Scalar::from_i64(3)),
        AppellForm::new(AppellFamily::monomial(), Prefactor::one(), Scalar::ratio(-1, 3)),
    ];
    for form in &forms {
        let a = beta_from_appell(form, 10).unwrap();
        let d = beta_from_derivatives(&derivatives_by_composition(form, 10), 10).unwrap();
        for nu in 0..=10 {
            let (x, y) = (&a.values[nu], &d.values[nu]);
            match (x.as_rational(), y.as_rational()) {
                (Some(x), Some(y)) => assert_eq!(x, y, "{:?} ν = {nu}", form.family.kind),
                _ => assert!(x.approx_eq(y, 1e-40, 256), "{:?} ν = {nu}", form.family.kind),
            }
        }
    }
}

#[test]
fn hermite_reduction_matches_sigma_assembly() {
    let form = AppellForm::new(AppellFamily::hermite(), Prefactor::one(), Scalar::one());
    let beta = beta_from_appell(&form, 9).unwrap();
    let w = Scalar::from_i64(-2);
    for p in 2..=10usize {
        let rho = rho_reduction(p, &w, &beta).unwrap();
        let prec = 192;
        let lhs: Vec<_> = rho
            .iter()
            .map(|r| &r.rho.to_bigfloat(prec) * &s_value(r.s_ref.0, r.s_ref.1, prec).unwrap())
            .collect();
        let rhs: Vec<_> = (1..p)
            .map(|nu| {
                let coeff = w.powi((p - nu) as i32).unwrap().mul(&beta.values[nu - 1]);
                &coeff.to_bigfloat(prec) * &sigma(nu, p - nu, prec).unwrap()
            })
            .collect();
        let l = nielsen_core::bigfloat::sum(prec, &lhs);
        let r = nielsen_core::bigfloat::sum(prec, &rhs);
        let tol = 10.0 * (l.error_f64() + r.error_f64());
        assert!(l.approx_eq(&r, tol), "p = {p}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn binomial_transform_is_an_involution(v in prop::collection::vec(rational(), 0..=16)) {
        prop_assert_eq!(binomial_transform(&binomial_transform(&v)), v);
    }

    #[test]
    fn addition_theorem(x in rational(), y in rational(), idx in 0usize..14) {
        let fam = exact_families()[idx].clone();
        let polys: Vec<_> = appell_polynomials(&fam, 10).unwrap().iter().map(exact).collect();
        for n in 0..=10usize {
            let lhs = polys[n].eval(&Rational::from(&x + &y));
            let rhs: Rational = (0..=n)
                .map(|k| {
                    let yk = y.clone().pow(((n - k) as u32) as i32);
                    Rational::from(binomial(n as i64, k as i64)) * polys[k].eval(&x) * yk
                })
                .sum();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn pascal_system(values in prop::collection::vec(rational(), 9), w in rational(), p in 2usize..=10) {
        prop_assume!(w != 0);
        let beta = sequence(values);
        let ws = Scalar::Exact(w.clone());
        let eta = eta_pair_sums(p, &ws, &beta).unwrap();
        for nu in 1..p {
            let lhs: Rational = (1..=p - nu)
                .map(|l| Rational::from(binomial((p - nu - 1) as i64, l as i64 - 1)) * eta[l - 1].as_rational().unwrap())
                .sum();
            let rhs = w.clone().pow((p - nu) as i32) * beta.values[nu - 1].as_rational().unwrap();
            prop_assert_eq!(lhs, rhs, "p = {}, ν = {}", p, nu);
        }
    }

    #[test]
    fn transform_bridge(values in prop::collection::vec(rational(), 9), w in rational(), p in 2usize..=10, d in 1i64..=5, symmetric in any::<bool>()) {
        prop_assume!(w != 0);
        let (beta, w) = if symmetric {
            let form = AppellForm::new(AppellFamily::euler(Rational::from(d)), Prefactor::one(), Scalar::one());
            (beta_from_appell(&form, 8).unwrap(), Rational::from(d - 2))
        } else {
            (sequence(values), w)
        };
        prop_assume!(w != 0);
        let ws = Scalar::Exact(w.clone());
        let holds = solvability_check(p, &ws, &beta).unwrap().holds;
        let a: Vec<Rational> = (0..=p - 2)
            .map(|k| w.clone().pow(k as i32 + 1) * beta.values[p - k - 2].as_rational().unwrap())
            .collect();
        let poly = generating_polynomial_a(&a, p - 2).unwrap();
        prop_assert_eq!(holds, check_a_symmetry(&poly, p - 2));
        if symmetric {
            prop_assert!(holds);
        }
    }
}
