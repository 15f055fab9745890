//! Serializable report documents.

use serde::Serialize;

use nielsen_core::expansion::{Coefficient, ExpansionResult, Term};
use nielsen_core::symmetry::SymmetryReport;
use nielsen_core::verify::DecayReport;
use nielsen_core::BigFloat;

#[derive(Clone, Debug, Serialize)]
pub struct SpecSummary {
    pub f: String,
    pub q: String,
    pub w: String,
    pub orders: usize,
    pub precision_bits: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitEntry {
    pub value: String,
    pub error_bound: String,
    pub closed_form: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TermEntry {
    pub ell: usize,
    pub k: usize,
    pub weight: String,
    pub beta: String,
    pub nielsen: String,
    pub contribution: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientEntry {
    pub p: usize,
    pub value: String,
    pub error_bound: String,
    pub terms: Vec<TermEntry>,
    pub zeta_form: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ViolationEntry {
    pub nu: usize,
    pub eta_nu: String,
    pub eta_p_minus_nu: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetryEntry {
    pub p: usize,
    pub holds: bool,
    pub exact: bool,
    /// `eta` and `rho` are multiples of this factor.
    pub unit: String,
    pub eta: Vec<String>,
    pub rho: Option<Vec<String>>,
    pub violations: Vec<ViolationEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionEntry {
    pub family: String,
    pub omega: Option<String>,
    pub c: String,
    pub s: String,
    pub w: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FirstViolation {
    pub p: usize,
    pub nu: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetrySection {
    pub criterion: Option<CriterionEntry>,
    pub all_hold: bool,
    pub first_violation: Option<FirstViolation>,
    pub orders: Vec<SymmetryEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationEntry {
    pub order: usize,
    pub n_grid: Vec<u64>,
    pub residuals: Vec<String>,
    pub quadrature_errors: Vec<String>,
    pub at_floor: Vec<bool>,
    pub fitted_slope: Option<f64>,
    pub expected_slope: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub spec: SpecSummary,
    pub a0: LimitEntry,
    pub coefficients: Vec<CoefficientEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<SymmetrySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationEntry>,
    pub warnings: Vec<String>,
}

fn term_entry(t: &Term) -> TermEntry {
    TermEntry {
        ell: t.ell,
        k: t.k,
        weight: t.weight.to_string(),
        beta: t.beta.render(),
        nielsen: t.nielsen.to_decimal(),
        contribution: t.contribution.to_decimal(),
    }
}

pub fn coefficient_entry(c: &Coefficient) -> CoefficientEntry {
    CoefficientEntry {
        p: c.p,
        value: c.value.to_decimal(),
        error_bound: c.value.error_decimal(),
        terms: c.terms.iter().map(term_entry).collect(),
        zeta_form: c.zeta_form.as_ref().map(|z| z.to_string()),
    }
}

pub fn limit_entry(r: &ExpansionResult) -> LimitEntry {
    LimitEntry {
        value: r.a0.value.to_decimal(),
        error_bound: r.a0.value.error_decimal(),
        closed_form: r.a0.closed_form.clone(),
    }
}

pub fn symmetry_entry(r: &SymmetryReport) -> SymmetryEntry {
    SymmetryEntry {
        p: r.p,
        holds: r.holds,
        exact: r.exact,
        unit: r.prefactor.label.clone(),
        eta: r.eta.iter().map(|e| e.render()).collect(),
        rho: r.rho.as_ref().map(|v| v.iter().map(|e| e.render()).collect()),
        violations: r
            .violations
            .iter()
            .map(|v| ViolationEntry {
                nu: v.nu,
                eta_nu: v.lhs.render(),
                eta_p_minus_nu: v.rhs.render(),
            })
            .collect(),
    }
}

fn decimal(v: &BigFloat) -> String {
    v.to_decimal()
}

pub fn verification_entry(order: usize, d: &DecayReport, passed: bool) -> VerificationEntry {
    VerificationEntry {
        order,
        n_grid: d.n_grid.clone(),
        residuals: d.residuals.iter().map(decimal).collect(),
        quadrature_errors: d.quadrature_errors.iter().map(|e| format!("{e:e}")).collect(),
        at_floor: d.at_floor.clone(),
        fitted_slope: d.fitted_slope,
        expected_slope: d.expected_slope,
        passed,
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// One row per coefficient: `p, value, error_bound, zeta_form`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["p", "value", "error_bound", "zeta_form"])
            .expect("in-memory write");
        for c in &self.coefficients {
            w.write_record([
                c.p.to_string().as_str(),
                &c.value,
                &c.error_bound,
                c.zeta_form.as_deref().unwrap_or(""),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}
