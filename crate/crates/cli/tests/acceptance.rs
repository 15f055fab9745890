//! Acceptance criteria, one PASS/FAIL line each.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rug::ops::Pow;
use rug::{Float, Rational};

use nielsen_cli::literature_warnings;
use nielsen_cli::specfile::{parse_spec, Overrides};
use nielsen_core::appell::{appell_polynomials, beta_from_appell, reflection_omega, AppellFamily, AppellForm};
use nielsen_core::exactnum::{binomial, factorial, stirling_first_unsigned, truncated_mzv_ones, Polynomial};
use nielsen_core::expansion::{expansion_coefficients, reduce_to_zeta_q_minus1, IntegralSpec};
use nielsen_core::registry::build;
use nielsen_core::symmetry::{binomial_transform, rho_reduction, solvability_check};
use nielsen_core::verify::{decay_check, decay_check_with, integrate_in};
use nielsen_core::zetavals::{kolbig_identity_residual, mzv_height_one, nielsen_s, s_value, sigma, zeta};
use nielsen_core::{BigFloat, Error, Prefactor, Scalar};

const PREC: u32 = 256;

/// Criteria that cannot pass as stated; each line is still printed as FAIL.
const EXPECTED_FAILURES: &[usize] = &[1];

/// s_{m,p} = S_{m,p}(1) from an independent integral-representation evaluator.
const S_TABLE: &[(usize, usize, &str)] = &[
    (1, 1, "1.64493406684822643647241516664602518921894990120679843773556"),
    (1, 2, "1.20205690315959428539973816151144999076498629234049888179227"),
    (2, 1, "1.20205690315959428539973816151144999076498629234049888179227"),
    (1, 3, "1.08232323371113819151600369654116790277475095191872690768298"),
    (2, 2, "0.270580808427784547879000924135291975693687737979681726920744"),
    (3, 1, "1.08232323371113819151600369654116790277475095191872690768298"),
    (1, 4, "1.03692775514336992633136548645703416805708091950191281197419"),
    (2, 3, "0.0965511599894437344656455314289427640320103723436914152525631"),
    (3, 2, "0.0965511599894437344656455314289427640320103723436914152525631"),
    (4, 1, "1.03692775514336992633136548645703416805708091950191281197419"),
    (1, 5, "1.01734306198444913971451792979092052790181749003285356184241"),
    (2, 4, "0.0405368972715197378290459079396964823344954146426958343160894"),
    (3, 3, "0.0174898531690114044259344452674604316751272361583383210170283"),
    (4, 2, "0.0405368972715197378290459079396964823344954146426958343160894"),
    (5, 1, "1.01734306198444913971451792979092052790181749003285356184241"),
    (1, 6, "1.00834927738192282683979754984979675959986356056523870641728"),
    (2, 5, "0.018355928317494465878006242475136951076524830890775833085274"),
    (3, 4, "0.00412316515243253553202331576310382080245991274335462273119312"),
    (4, 3, "0.00412316515243253553202331576310382080245991274335462273119312"),
    (5, 2, "0.018355928317494465878006242475136951076524830890775833085274"),
    (6, 1, "1.00834927738192282683979754984979675959986356056523870641728"),
    (1, 7, "1.00407735619794433937868523850865246525896079064985002032911"),
    (2, 6, "0.00865052909956110550087640937962202258259718732804515149628806"),
    (3, 5, "0.00110762052068126104541839155992951445349548884029928950400198"),
    (4, 4, "0.000602891532833191391875921212312678511467865378412182583070193"),
    (5, 3, "0.00110762052068126104541839155992951445349548884029928950400198"),
    (6, 2, "0.00865052909956110550087640937962202258259718732804515149628806"),
    (7, 1, "1.00407735619794433937868523850865246525896079064985002032911"),
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn bf(x: &Float) -> BigFloat {
    BigFloat::rounded(PREC, x)
}

fn pi() -> Float {
    BigFloat::pi(PREC + 32).into_value()
}

fn z(k: u32) -> Float {
    zeta(k, PREC + 32).unwrap().into_value()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn pi_pow(k: i32) -> Float {
    Float::with_val(PREC + 32, pi().pow(k))
}

fn mul(a: &Float, b: &Float) -> Float {
    Float::with_val(PREC + 32, a * b)
}

fn scale(a: &Float, r: Rational) -> Float {
    Float::with_val(PREC + 32, a * &r)
}

fn sum(terms: &[Float]) -> Float {
    let mut s = Float::new(PREC + 32);
    for t in terms {
        s += t;
    }
    s
}

fn zn_table() -> Vec<(usize, Float)> {
    let (z3, z5, z7) = (z(3), z(5), z(7));
    vec![
        (2, scale(&pi_pow(2), q(1, 48))),
        (3, scale(&z3, q(1, 8))),
        (4, scale(&pi_pow(4), q(-1, 960))),
        (5, scale(&mul(&pi_pow(2), &z3), q(-1, 48))),
        (6, sum(&[scale(&pi_pow(6), q(83, 241920)), scale(&mul(&z3, &z3), q(-1, 16))])),
        (
            7,
            sum(&[
                scale(&mul(&pi_pow(4), &z3), q(3, 640)),
                scale(&mul(&pi_pow(2), &z5), q(1, 32)),
                scale(&z7, q(3, 16)),
            ]),
        ),
        (
            8,
            sum(&[
                scale(&pi_pow(8), q(-253, 14515200)),
                scale(&mul(&pi_pow(2), &mul(&z3, &z3)), q(5, 192)),
                scale(&mul(&z3, &z5), q(3, 16)),
            ]),
        ),
    ]
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let spec = build("zn-norm", None, None, 8, PREC).unwrap();
    let r = expansion_coefficients(&spec).unwrap();
    let elapsed = t.elapsed().as_secs_f64();
    let mut bad = Vec::new();
    let mut worst_good = 0f64;
    for (p, want) in zn_table() {
        let d = r.a(p).unwrap().abs_diff(&bf(&want));
        if d <= 1e-20 {
            worst_good = worst_good.max(d);
        } else {
            bad.push(format!("a_{p} off by {d:.3e} (assembled {:.12e}, table {:.12e})", r.a(p).unwrap().to_f64(), want.to_f64()));
        }
    }
    Outcome {
        pass: bad.is_empty() && elapsed <= 10.0,
        detail: format!(
            "zn-norm a_2..a_8 at {PREC} bits; matching entries within {worst_good:.1e}; {}; {elapsed:.2}s (limit 10s)",
            if bad.is_empty() { "no mismatches".to_string() } else { bad.join("; ") }
        ),
    }
}

fn criterion_2() -> Outcome {
    let spec = build("hermite-lognormal", None, None, 6, PREC).unwrap();
    let r = expansion_coefficients(&spec).unwrap();
    let k = Float::with_val(PREC + 32, Float::with_val(PREC + 32, 2) / pi()).sqrt();
    let (z2, z3, z4, z5, z6) = (z(2), z(3), z(4), z(5), z(6));
    let table = [
        (2, -z2.clone()),
        (3, scale(&z3, q(2, 1))),
        (4, scale(&z4, q(-1, 2))),
        (5, sum(&[scale(&mul(&pi_pow(2), &z3), q(-2, 3)), scale(&z5, q(4, 1))])),
        (6, sum(&[scale(&z6, q(-13, 8)), scale(&mul(&z3, &z3), q(4, 1))])),
    ];
    let mut worst = 0f64;
    for (p, v) in &table {
        worst = worst.max(r.a(*p).unwrap().abs_diff(&bf(&mul(&k, v))));
    }
    let mut slopes = Vec::new();
    let mut slopes_ok = true;
    for order in [4usize, 6] {
        let rep = decay_check(&spec, order, &[16, 32, 64]).unwrap();
        slopes_ok &= rep.slope_within(0.4);
        slopes.push(format!("P={order}: {:.3} (want {})", rep.fitted_slope.unwrap_or(f64::NAN), rep.expected_slope));
    }
    Outcome {
        pass: worst <= 1e-18 && slopes_ok,
        detail: format!("hermite a_2..a_6 max error {worst:.1e} (limit 1e-18); decay slopes {}", slopes.join(", ")),
    }
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let spec = build("zn-norm", None, None, 9, PREC).unwrap();
    let r = expansion_coefficients(&spec).unwrap();
    let a9 = r.a(9).unwrap().to_f64().abs();
    let coeffs: Vec<_> = (2..=8).map(|p| r.a(p).unwrap()).collect();
    let grid = [16u64, 32, 64];
    let rep = decay_check_with(&spec, &r.a0.value, &coeffs, &grid, None).unwrap();
    let mut bounds_ok = true;
    let mut parts = Vec::new();
    for (n, res) in grid.iter().zip(&rep.residuals) {
        let bound = 5.0 * (*n as f64).powi(-9) * a9;
        let got = res.to_f64().abs();
        bounds_ok &= got <= bound;
        parts.push(format!("n={n}: {got:.2e} <= {bound:.2e}"));
    }
    let slope = rep.fitted_slope.unwrap_or(f64::NAN);
    let elapsed = t.elapsed().as_secs_f64();
    Outcome {
        pass: bounds_ok && (-9.5..=-8.5).contains(&slope) && elapsed <= 60.0,
        detail: format!("{}; slope {slope:.3}; {elapsed:.2}s (limit 60s)", parts.join(", ")),
    }
}

fn gamma_ratio(n: u64) -> Float {
    let p = PREC + 64;
    let x = Float::with_val(p, 1) / n;
    let g1 = Float::with_val(p, Float::with_val(p, 1) + &x).gamma();
    let g2 = Float::with_val(p, Float::with_val(p, 1) + Float::with_val(p, &x * 2u32)).gamma();
    Float::with_val(p, &g1 * &g1) / g2
}

fn criterion_4() -> Outcome {
    let spec = build("zn-norm", Some(q(-1, 1)), None, 3, PREC).unwrap();
    let unit = {
        let mut d = nielsen_core::appell::DerivativeForm::new(vec![Scalar::one(), Scalar::zero()]);
        d.pointwise = Some(std::sync::Arc::new(|u: &Float| Float::with_val(u.prec(), 1)));
        IntegralSpec::new(q(-1, 1), q(1, 1), nielsen_core::appell::FDescriptor::Derivatives(d), 3, PREC)
            .with_execution(spec.exec)
    };
    let mut worst = 0f64;
    for n in [4u64, 8, 16, 32] {
        let got = integrate_in(&unit, n).unwrap();
        worst = worst.max(got.value.abs_diff(&bf(&gamma_ratio(n))));
    }
    let r = reduce_to_zeta_q_minus1(expansion_coefficients(&unit).unwrap()).unwrap();
    let b = &r.beta;
    let a3_from_beta = {
        let s12 = s_value(1, 2, PREC).unwrap();
        let s21 = s_value(2, 1, PREC).unwrap();
        &(&b.beta(0).to_bigfloat(PREC) * &s12) - &(&b.beta(1).to_bigfloat(PREC) * &s21)
    };
    // ln Γ(1+x)²/Γ(1+2x) = −ζ(2)x² + 2ζ(3)x³ + …
    let a2_err = r.a(2).unwrap().abs_diff(&bf(&-z(2)));
    let a3_lg = scale(&z(3), q(2, 1));
    let a3_err = r.a(3).unwrap().abs_diff(&bf(&a3_lg)).max(a3_from_beta.abs_diff(&bf(&a3_lg)));
    let forms = [2usize, 3].map(|p| r.coefficient(p).unwrap().zeta_form.as_ref().unwrap().to_string());
    Outcome {
        pass: worst <= 1e-30 && a2_err <= 1e-20 && a3_err <= 1e-20,
        detail: format!(
            "quadrature vs Gamma ratio max {worst:.1e} (limit 1e-30); a_2 = {} err {a2_err:.1e}; a_3 = {} err {a3_err:.1e}",
            forms[0], forms[1]
        ),
    }
}

fn criterion_5() -> Outcome {
    let mut kolbig = 0f64;
    for j in 1..8usize {
        for k in 1..=8 - j {
            kolbig = kolbig.max(kolbig_identity_residual(j, k, PREC).unwrap().to_f64().abs());
        }
    }
    let mut special_ok = true;
    let mut special = 0f64;
    for &(m, p, want) in S_TABLE {
        let direct = nielsen_s(m, p, &q(1, 1), PREC).unwrap();
        let poly = mzv_height_one(m, p).evaluate(PREC).unwrap();
        let table = BigFloat::parse(PREC, want).unwrap();
        special_ok &= direct.approx_eq(&poly, 0.0) && direct.approx_eq(&table, 1e-57);
        special = special.max(direct.abs_diff(&table));
    }
    let mut alt = 0f64;
    for m in 1..=7usize {
        let lhs = sigma(m, 1, PREC).unwrap();
        let rhs = zeta(m as u32 + 1, PREC).unwrap().mul_rational(&(Rational::from(1) - Rational::from((1, 1u64 << m))));
        alt = alt.max(lhs.abs_diff(&rhs));
    }
    Outcome {
        pass: kolbig <= 1e-20 && special_ok && alt <= 1e-20,
        detail: format!(
            "Kolbig residual max {kolbig:.1e}; S(m,p,1) vs zeta-polynomial and reference table max {special:.1e}; sigma(m,1) max {alt:.1e}"
        ),
    }
}

fn criterion_6() -> Outcome {
    let mut ok = true;
    let mut worst = 0f64;
    let mut violations = Vec::new();
    for d in 3..=5i64 {
        let form = AppellForm::new(AppellFamily::euler(Rational::from(d)), Prefactor::one(), Scalar::one());
        let beta = beta_from_appell(&form, 10).unwrap();
        let w = Scalar::from_i64(d - 2);
        for p in 2..=10usize {
            let report = solvability_check(p, &w, &beta).unwrap();
            ok &= report.holds && report.exact;
            let Ok(rho) = rho_reduction(p, &w, &beta) else {
                ok = false;
                continue;
            };
            let lhs: Vec<BigFloat> = rho
                .iter()
                .map(|r| &r.rho.to_bigfloat(PREC) * &s_value(r.s_ref.0, r.s_ref.1, PREC).unwrap())
                .collect();
            let rhs: Vec<BigFloat> = (1..p)
                .map(|nu| {
                    let c = w.powi((p - nu) as i32).unwrap().mul(&beta.values[nu - 1]);
                    &c.to_bigfloat(PREC) * &sigma(nu, p - nu, PREC).unwrap()
                })
                .collect();
            let diff = nielsen_core::bigfloat::sum(PREC, &lhs).abs_diff(&nielsen_core::bigfloat::sum(PREC, &rhs));
            worst = worst.max(diff);
        }
        let w1 = Scalar::from_i64(d - 1);
        let first = (2..=6usize).find_map(|p| {
            let rep = solvability_check(p, &w1, &beta).unwrap();
            rep.first_violation().map(|v| (p, v.nu))
        });
        match first {
            Some((p, nu)) => violations.push(format!("d={d}: (p={p}, nu={nu})")),
            None => {
                ok = false;
                violations.push(format!("d={d}: none"));
            }
        }
    }
    Outcome {
        pass: ok && worst <= 1e-18,
        detail: format!(
            "exact symmetry for d=3,4,5 and p<=10: {ok}; rho/sigma reduction max {worst:.1e}; w+1 violations {}",
            violations.join(", ")
        ),
    }
}

fn criterion_7() -> Outcome {
    let spec = build("sincos", None, None, 4, PREC).unwrap();
    let r = expansion_coefficients(&spec).unwrap();
    let sqrt2 = Float::with_val(PREC + 32, 2).sqrt();
    let a3_want = scale(&mul(&sqrt2, &z(3)), q(1, 4));
    let a3_err = r.a(3).unwrap().abs_diff(&bf(&a3_want));
    let grid = [16u64, 32, 64];
    let assembled = decay_check(&spec, 4, &grid).unwrap();
    let mut coeffs: Vec<_> = (2..=4).map(|p| r.a(p).unwrap()).collect();
    coeffs[0] = bf(&scale(&mul(&sqrt2, &pi_pow(2)), q(1, 24)));
    let tabulated = decay_check_with(&spec, &r.a0.value, &coeffs, &grid, None).unwrap();
    let ps = parse_spec(r#"{"orders": 4, "f": {"kind": "registry", "name": "sincos"}}"#, Overrides::default()).unwrap();
    let warnings = literature_warnings(&ps, &r);
    let warned = warnings.iter().any(|w| w.contains("a_2") && w.contains("tabulated literature value"));
    Outcome {
        pass: a3_err <= 1e-20 && assembled.slope_within(0.4) && !tabulated.slope_within(0.4) && warned,
        detail: format!(
            "a_3 err {a3_err:.1e}; slope with assembled a_2..a_4 {:.3}, with tabulated a_2 {:.3} (want {}); {} warning(s) emitted",
            assembled.fitted_slope.unwrap_or(f64::NAN),
            tabulated.fitted_slope.unwrap_or(f64::NAN),
            assembled.expected_slope,
            warnings.len()
        ),
    }
}

fn exact_poly(p: &Polynomial<Scalar>) -> Polynomial<Rational> {
    p.try_map(|s| s.as_rational().cloned().ok_or(Error::Inexact)).unwrap()
}

fn criterion_8() -> Outcome {
    let mut stirling = true;
    for j in 1..=12usize {
        for p in 1..=j {
            stirling &= stirling_first_unsigned(j, p)
                == Rational::from(factorial(j as u32 - 1)) * truncated_mzv_ones(j - 1, p);
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut involution = true;
    for _ in 0..100 {
        let len = rng.gen_range(0..=16);
        let v: Vec<Rational> = (0..len)
            .map(|_| Rational::from((rng.gen_range(-1000i64..=1000), rng.gen_range(1i64..=97))))
            .collect();
        involution &= binomial_transform(&binomial_transform(&v)) == v;
    }
    let mut families = vec![AppellFamily::monomial(), AppellFamily::hermite()];
    for d in 1..=4 {
        families.push(AppellFamily::euler(Rational::from(d)));
        families.push(AppellFamily::bernoulli(Rational::from(d)));
        families.push(AppellFamily::genocchi(Rational::from(d)));
    }
    let mut appell = true;
    for fam in &families {
        let polys: Vec<_> = appell_polynomials(fam, 10).unwrap().iter().map(exact_poly).collect();
        for _ in 0..5 {
            let x = Rational::from((rng.gen_range(-20i64..=20), rng.gen_range(1i64..=9)));
            let y = Rational::from((rng.gen_range(-20i64..=20), rng.gen_range(1i64..=9)));
            for n in 0..=10usize {
                let lhs = polys[n].eval(&Rational::from(&x + &y));
                let rhs: Rational = (0..=n)
                    .map(|k| {
                        Rational::from(binomial(n as i64, k as i64))
                            * polys[k].eval(&x)
                            * y.clone().pow((n - k) as i32)
                    })
                    .sum();
                appell &= lhs == rhs;
            }
        }
        if let Some(omega) = reflection_omega(fam) {
            let omega = omega.as_rational().unwrap().clone();
            for (n, p) in polys.iter().enumerate() {
                let mut refl = p.compose_affine(&Rational::from(-1), &omega);
                if n % 2 == 1 {
                    refl = refl.scale(&Rational::from(-1));
                }
                appell &= refl == *p;
            }
        }
    }
    Outcome {
        pass: stirling && involution && appell,
        detail: format!(
            "Stirling/truncated-MZV identity j<=12: {stirling}; involution on 100 random vectors: {involution}; Appell addition and reflection: {appell}"
        ),
    }
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let mut unexpected = Vec::new();
    for (id, run) in criteria {
        let t = Instant::now();
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {id}: {verdict} [{:.2}s] {}", t.elapsed().as_secs_f64(), o.detail);
        if o.pass == EXPECTED_FAILURES.contains(&id) {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
