//! Tanh-sinh (double-exponential) quadrature at arbitrary precision.
//!
//! On (0, 1) the map is `x = 1/(1 + e^{−2s})`, `s = (π/2)·sinh t`, so
//! `dx/dt = π·cosh t·x(1 − x)`. Both `x` and `1 − x` are produced directly,
//! which keeps integrands with structure at `x = 1` accurate.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::float::{Constant, Round};
use rug::Float;

use crate::appell::Pointwise;
use crate::bigfloat::BigFloat;
use crate::error::{Error, Result};
use crate::par::{self, Execution};

/// Deepest refinement level (step `2^{−12}`).
pub const MAX_LEVEL: u32 = 12;

#[derive(Clone, Debug)]
pub struct QuadratureResult {
    pub value: BigFloat,
    pub error_estimate: f64,
    pub levels_used: u32,
}

#[derive(Clone, Debug)]
struct Node {
    x: Float,
    xc: Float,
    weight: Float,
}

type NodeTable = Arc<Vec<Node>>;

fn node_cache() -> &'static Mutex<HashMap<(u32, u32), NodeTable>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), NodeTable>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Abscissae and weights introduced at `level` (both signs of `t`).
fn level_nodes(prec: u32, level: u32) -> NodeTable {
    if let Some(t) = node_cache().lock().expect("node cache poisoned").get(&(prec, level)) {
        return t.clone();
    }
    let table = Arc::new(build_level(prec, level));
    node_cache()
        .lock()
        .expect("node cache poisoned")
        .insert((prec, level), table.clone());
    table
}

fn build_level(prec: u32, level: u32) -> Vec<Node> {
    let wp = prec + 16;
    let pi = Float::with_val(wp, Constant::Pi);
    let half_pi = Float::with_val(wp, &pi / 2u32);
    let h = Float::with_val(wp, Float::with_val(wp, 1u32) >> level);
    // stop once 1 − x < 2^{−(2·prec + 40)}
    let cutoff = Float::with_val(53, 1u32) >> (2 * prec + 40);
    let mut nodes = Vec::new();
    let mut j: u64 = if level == 0 { 0 } else { 1 };
    loop {
        let t = Float::with_val(wp, &h * j);
        let s = Float::with_val(wp, &half_pi * Float::with_val(wp, t.sinh_ref()));
        let e = Float::with_val(wp, Float::with_val(wp, -2 * s).exp());
        let denom = Float::with_val(wp, &e + 1u32);
        let x = Float::with_val(prec, 1u32 / &denom);
        let xc = Float::with_val(prec, &e / &denom);
        let cosh = Float::with_val(wp, t.cosh_ref());
        let weight = Float::with_val(prec, &pi * &cosh) * &x * &xc;
        if xc < cutoff {
            break;
        }
        if j == 0 {
            nodes.push(Node {
                x: x.clone(),
                xc: xc.clone(),
                weight,
            });
        } else {
            nodes.push(Node {
                x: x.clone(),
                xc: xc.clone(),
                weight: weight.clone(),
            });
            nodes.push(Node {
                x: xc,
                xc: x,
                weight,
            });
        }
        j += if level == 0 { 1 } else { 2 };
    }
    nodes
}

/// Tanh-sinh integrator settings.
#[derive(Clone, Copy, Debug)]
pub struct TanhSinh {
    pub prec: u32,
    /// Absolute tolerance on the reported error estimate.
    pub tol: f64,
    pub max_level: u32,
    pub exec: Execution,
}

impl TanhSinh {
    pub fn new(prec: u32) -> Self {
        TanhSinh {
            prec,
            tol: 2f64.powi(-(prec as i32) + 8),
            max_level: MAX_LEVEL,
            exec: Execution::default(),
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    /// `∫₀¹ g(x) dx` where `g` receives `(x, 1 − x)`.
    ///
    /// The error estimate is the change between the last two levels plus a
    /// rounding term; the returned value comes from the finest level.
    pub fn integrate_unit<G>(&self, g: G) -> Result<QuadratureResult>
    where
        G: Fn(&Float, &Float) -> Float + Sync + Send,
    {
        let prec = self.prec;
        let mut total = Float::new(prec + 16);
        let mut abs_total = Float::new(64);
        let mut prev: Option<Float> = None;
        let mut last_diff = f64::INFINITY;
        for level in 0..=self.max_level {
            let nodes = level_nodes(prec, level);
            let values = par::map(self.exec, &nodes, |n| {
                let v = g(&n.x, &n.xc);
                Float::with_val(prec + 16, &v * &n.weight)
            });
            let mut new_sum = Float::new(prec + 16);
            for v in &values {
                if !v.is_finite() {
                    return Err(Error::QuadratureFailure {
                        levels: level,
                        estimate: "non-finite integrand".into(),
                        error: f64::INFINITY,
                    });
                }
                new_sum += v;
                abs_total += Float::with_val(64, &*v.as_abs());
            }
            let h = Float::with_val(prec + 16, Float::with_val(prec + 16, 1u32) >> level);
            if level == 0 {
                total = new_sum;
            } else {
                total = Float::with_val(prec + 16, &total / 2u32);
                total += Float::with_val(prec + 16, &new_sum * &h);
            }
            let rounding = Float::with_val(64, &abs_total * &h).to_f64() * 2f64.powi(-(prec as i32) + 4);
            if let Some(p) = &prev {
                last_diff = Float::with_val(64, &total - p).abs().to_f64_round(Round::Up);
                let err = last_diff + rounding;
                if level >= 3 && err <= self.tol {
                    return Ok(QuadratureResult {
                        value: BigFloat::with_error(Float::with_val(prec, &total), err),
                        error_estimate: err,
                        levels_used: level,
                    });
                }
            }
            prev = Some(total.clone());
        }
        Err(Error::QuadratureFailure {
            levels: self.max_level,
            estimate: Float::with_val(prec, &total).to_string_radix(10, Some(20)),
            error: last_diff,
        })
    }
}

/// How `u ∈ (0, 1)` is parametrized for quadrature.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Substitution {
    /// Integrate directly in `u`.
    #[default]
    Identity,
    /// `u = e^{−y}` over `y ∈ (0, ∞)`, truncated where the integrand is negligible.
    NegLog,
}

/// `∫₀¹ f(u)·k(ln u) du` for a kernel `k` of `ln u` (computed accurately near `u = 1`).
pub fn integrate_with_kernel<K>(
    f: &Pointwise,
    kernel: K,
    subst: Substitution,
    ts: &TanhSinh,
) -> Result<QuadratureResult>
where
    K: Fn(&Float) -> Float + Sync + Send,
{
    let prec = ts.prec;
    match subst {
        Substitution::Identity => ts.integrate_unit(|x, xc| {
            let ln_u = if *x < 0.5 {
                Float::with_val(prec, x.ln_ref())
            } else {
                Float::with_val(prec, Float::with_val(prec, -xc).ln_1p_ref())
            };
            let fu = f(x);
            Float::with_val(prec, &fu * &kernel(&ln_u))
        }),
        Substitution::NegLog => {
            let integrand = |y: &Float| -> Float {
                let neg = Float::with_val(prec, -y);
                let u = Float::with_val(prec, neg.exp_ref());
                let fu = f(&u);
                Float::with_val(prec, &fu * &u) * kernel(&neg)
            };
            let ymax = half_line_cutoff(&integrand, prec)?;
            let r = ts.integrate_unit(|x, _| {
                let y = Float::with_val(prec, x * &ymax);
                integrand(&y) * &ymax
            })?;
            let tail = integrand(&ymax).abs().to_f64() * 4.0;
            let err = r.error_estimate + tail;
            Ok(QuadratureResult {
                value: r.value.with_added_error(tail),
                error_estimate: err,
                levels_used: r.levels_used,
            })
        }
    }
}

/// Smallest `Y` (on a geometric grid) past which the integrand stays below
/// `2^{−(prec+20)}` relative to its size near the origin.
fn half_line_cutoff(g: &impl Fn(&Float) -> Float, prec: u32) -> Result<Float> {
    let probe = |y: f64| g(&Float::with_val(prec, y)).abs().to_f64();
    let scale = [0.25, 0.5, 1.0, 2.0].iter().map(|&y| probe(y)).fold(0.0, f64::max);
    let floor = scale.max(f64::MIN_POSITIVE) * 2f64.powi(-(prec as i32) - 20);
    let mut y = 4.0;
    while y < 1e5 {
        if probe(y) < floor && probe(1.5 * y) < floor {
            return Ok(Float::with_val(prec, y));
        }
        y *= 1.5;
    }
    Err(Error::QuadratureFailure {
        levels: 0,
        estimate: "integrand does not decay on the half line".into(),
        error: f64::INFINITY,
    })
}
