//! Quadrature oracle for `I_n` and `φ_r`, and remainder decay-rate fits.

use rug::{Float, Rational};

use crate::appell::FDescriptor;
use crate::bigfloat::BigFloat;
use crate::error::{Error, Result};
use crate::expansion::{expansion_coefficients, moment_phi_with, IntegralSpec};
use crate::par;
use crate::quadrature::{integrate_with_kernel, QuadratureResult, Substitution, TanhSinh};

/// Smallest `n` admitted by [`decay_check`].
pub const DEFAULT_MIN_N: u64 = 8;

/// Quadrature tolerance used when none is given: `2^{−precision/2}`.
pub fn default_tolerance(precision: u32) -> f64 {
    2f64.powi(-(precision as i32) / 2)
}

fn integrator(spec: &IntegralSpec, tol: Option<f64>) -> TanhSinh {
    TanhSinh::new(spec.precision + 32)
        .with_tol(tol.unwrap_or_else(|| default_tolerance(spec.precision)))
        .with_execution(spec.exec)
}

/// `I_n = ∫₀¹ f(u)(1 + q·uⁿ)^{w/n} du` by tanh-sinh quadrature.
pub fn integrate_in(spec: &IntegralSpec, n: u64) -> Result<QuadratureResult> {
    integrate_in_with(spec, n, None)
}

pub fn integrate_in_with(spec: &IntegralSpec, n: u64, tol: Option<f64>) -> Result<QuadratureResult> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    spec.validate()?;
    let ts = integrator(spec, tol);
    let prec = ts.prec;
    let f = spec.f.pointwise(prec).ok_or(Error::NonEvaluableF)?;
    let expo = Float::with_val(prec, &(spec.w.clone() / Rational::from(n)));
    let q = Float::with_val(prec, &spec.q);
    let q_zero = spec.q == 0;
    let q_minus_one = spec.q == -1;
    let kernel = move |ln_u: &Float| -> Float {
        if q_zero {
            return Float::with_val(prec, 1);
        }
        let nl = Float::with_val(prec, ln_u * n);
        let log_base = if q_minus_one {
            let one_minus = -Float::with_val(prec, nl.exp_m1_ref());
            one_minus.ln()
        } else {
            let qu = Float::with_val(prec, &q * &Float::with_val(prec, nl.exp_ref()));
            qu.ln_1p()
        };
        Float::with_val(prec, &expo * &log_base).exp()
    };
    let r = integrate_with_kernel(&f, kernel, spec.substitution, &ts)?;
    Ok(QuadratureResult {
        value: r.value.to_prec(spec.precision),
        ..r
    })
}

/// Residuals of an asymptotic truncation on a grid, with a log-log slope fit.
#[derive(Clone, Debug)]
pub struct DecayReport {
    pub n_grid: Vec<u64>,
    pub residuals: Vec<BigFloat>,
    pub quadrature_errors: Vec<f64>,
    /// Points whose residual is below ten times the quadrature error.
    pub at_floor: Vec<bool>,
    /// Least-squares slope over the points not at the floor.
    pub fitted_slope: Option<f64>,
    pub expected_slope: f64,
}

impl DecayReport {
    fn build(n_grid: Vec<u64>, residuals: Vec<BigFloat>, quadrature_errors: Vec<f64>, expected_slope: f64) -> Self {
        let at_floor: Vec<bool> = residuals
            .iter()
            .zip(&quadrature_errors)
            .map(|(r, e)| {
                let mag = Float::with_val(64, r.value().abs_ref());
                mag.is_zero() || mag.to_f64() < 10.0 * e
            })
            .collect();
        let points: Vec<(f64, f64)> = n_grid
            .iter()
            .zip(&residuals)
            .zip(&at_floor)
            .filter(|(_, floor)| !**floor)
            .map(|((n, r), _)| {
                let mag = Float::with_val(64, r.value().abs_ref());
                ((*n as f64).ln(), mag.ln().to_f64())
            })
            .collect();
        DecayReport {
            n_grid,
            residuals,
            quadrature_errors,
            at_floor,
            fitted_slope: least_squares_slope(&points),
            expected_slope,
        }
    }

    /// The fitted slope, or `DegenerateFit` when fewer than two points survive.
    pub fn slope(&self) -> Result<f64> {
        self.fitted_slope.ok_or_else(|| {
            Error::DegenerateFit(format!(
                "{} of {} residuals are at the quadrature precision floor",
                self.at_floor.iter().filter(|b| **b).count(),
                self.n_grid.len()
            ))
        })
    }

    pub fn any_at_floor(&self) -> bool {
        self.at_floor.iter().any(|b| *b)
    }

    /// `|fitted − expected| ≤ tol`; false when the fit is degenerate.
    pub fn slope_within(&self, tol: f64) -> bool {
        self.fitted_slope
            .is_some_and(|s| (s - self.expected_slope).abs() <= tol)
    }
}

fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn check_grid(grid: &[u64], min: u64) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::Domain("the grid needs at least two points".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("the grid must be strictly increasing".into()));
    }
    if grid[0] < min {
        return Err(Error::Domain(format!("grid points must be at least {min}")));
    }
    Ok(())
}

/// Residuals `I_n − (a0 + Σ_{p=2}^{P} a_p/n^p)` using the assembled coefficients.
pub fn decay_check(spec: &IntegralSpec, order: usize, n_grid: &[u64]) -> Result<DecayReport> {
    let mut s = spec.clone();
    s.orders = order;
    let result = expansion_coefficients(&s)?;
    let coeffs: Vec<BigFloat> = (2..=order).map(|p| result.a(p).expect("assembled")).collect();
    decay_check_with(spec, &result.a0.value, &coeffs, n_grid, None)
}

/// As [`decay_check`] with caller-supplied `a0` and `a_2 … a_P`.
pub fn decay_check_with(
    spec: &IntegralSpec,
    a0: &BigFloat,
    coeffs: &[BigFloat],
    n_grid: &[u64],
    tol: Option<f64>,
) -> Result<DecayReport> {
    check_grid(n_grid, DEFAULT_MIN_N)?;
    let order = coeffs.len() + 1;
    let quads = par::try_map(spec.exec, n_grid, |&n| integrate_in_with(spec, n, tol))?;
    let prec = spec.precision + 32;
    let mut residuals = Vec::with_capacity(n_grid.len());
    let mut errors = Vec::with_capacity(n_grid.len());
    for (&n, quad) in n_grid.iter().zip(&quads) {
        let inv_n = BigFloat::from_rational(prec, &Rational::from((1, n)));
        let mut partial = a0.to_prec(prec);
        for (i, a) in coeffs.iter().enumerate() {
            partial = &partial + &(a * &inv_n.powi(i as i32 + 2));
        }
        let r = &quad.value.to_prec(prec) - &partial;
        errors.push(quad.error_estimate + partial.error_f64());
        residuals.push(r);
    }
    Ok(DecayReport::build(
        n_grid.to_vec(),
        residuals,
        errors,
        -(order as f64 + 1.0),
    ))
}

/// Residuals `φ_r − Σ_{ν≤ν̄} β_ν/r^{ν+1}` of the large-`r` moment expansion.
pub fn watson_check(f: &FDescriptor, nu_max: usize, r_grid: &[u64], precision: u32) -> Result<DecayReport> {
    let ts = TanhSinh::new(precision + 32).with_tol(default_tolerance(precision));
    watson_check_with(f, nu_max, r_grid, Substitution::Identity, &ts)
}

pub fn watson_check_with(
    f: &FDescriptor,
    nu_max: usize,
    r_grid: &[u64],
    subst: Substitution,
    ts: &TanhSinh,
) -> Result<DecayReport> {
    check_grid(r_grid, 1)?;
    let beta = f.beta(nu_max)?;
    beta.require(nu_max + 1)?;
    let prec = ts.prec;
    let quads = par::try_map(ts.exec, r_grid, |&r| {
        let r = u32::try_from(r).map_err(|_| Error::Domain("moment order too large".into()))?;
        moment_phi_with(f, r, subst, ts)
    })?;
    let mut residuals = Vec::with_capacity(r_grid.len());
    let mut errors = Vec::with_capacity(r_grid.len());
    for (&r, quad) in r_grid.iter().zip(&quads) {
        let inv_r = BigFloat::from_rational(prec, &Rational::from((1, r)));
        let mut partial = BigFloat::zero(prec);
        for nu in 0..=nu_max {
            let b = beta.beta(nu).to_bigfloat(prec);
            partial = &partial + &(&b * &inv_r.powi(nu as i32 + 1));
        }
        residuals.push(&quad.value - &partial);
        errors.push(quad.error_estimate + partial.error_f64());
    }
    Ok(DecayReport::build(
        r_grid.to_vec(),
        residuals,
        errors,
        -(nu_max as f64 + 2.0),
    ))
}
