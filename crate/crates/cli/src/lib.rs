//! Batch front end: spec ingestion, coefficient tables, verification and symmetry reports.

pub mod report;
pub mod specfile;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use nielsen_core::appell::{reflection_omega, FDescriptor};
use nielsen_core::expansion::{expansion_coefficients, ExpansionResult};
use nielsen_core::registry;
use nielsen_core::scalar::{parse_rational, Scalar};
use nielsen_core::symmetry::{appell_criterion_form, solvability_check};
use nielsen_core::verify::decay_check_with;
use nielsen_core::zetavals::{mzv_height_one, nielsen_s};
use nielsen_core::Error as CoreError;

use report::{
    coefficient_entry, limit_entry, symmetry_entry, verification_entry, CriterionEntry, FirstViolation, Report,
    SpecSummary, SymmetrySection,
};
use specfile::{parse_spec, Overrides, ProblemSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SPEC: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

/// Largest admissible distance between fitted and expected decay slopes.
pub const SLOPE_TOLERANCE: f64 = 0.5;

pub const DEFAULT_N_GRID: [u64; 3] = [16, 32, 64];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid spec: {0}")]
    Spec(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) => EXIT_SPEC,
            CliError::Numeric(_) | CliError::Io(_) => EXIT_NUMERIC,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::QuadratureFailure { .. } | CoreError::DegenerateFit(_) | CoreError::Inexact => {
                CliError::Numeric(e.to_string())
            }
            _ => CliError::Spec(e.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "nielsen", version, about = "Asymptotic coefficients of ∫₀¹ f(u)(1+q·uⁿ)^{w/n} du")]
pub struct Cli {
    /// Working precision in bits (overrides precision_bits in the spec).
    #[arg(long, global = true)]
    pub precision_bits: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coefficient table a_2..a_P.
    Coeffs {
        spec: PathBuf,
        #[arg(long)]
        orders: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Coefficients plus a quadrature decay check of the truncation error.
    Verify {
        spec: PathBuf,
        #[arg(long)]
        orders: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        n_grid: Option<Vec<u64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pair-sum symmetry and the Appell criterion (q = 1 only).
    Symmetry {
        spec: PathBuf,
        #[arg(long)]
        orders: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A single Nielsen polylogarithm value S_{m,p}(z).
    Mzv {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        p: usize,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
}

fn load(path: &PathBuf, overrides: Overrides) -> Result<ProblemSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Spec(format!("{}: {e}", path.display())))?;
    parse_spec(&text, overrides)
}

fn summary(ps: &ProblemSpec) -> SpecSummary {
    SpecSummary {
        f: ps.description.clone(),
        q: ps.spec.q.to_string(),
        w: ps.spec.w.to_string(),
        orders: ps.spec.orders,
        precision_bits: ps.spec.precision,
    }
}

/// Mismatches between assembled coefficients and tabulated literature values.
pub fn literature_warnings(ps: &ProblemSpec, result: &ExpansionResult) -> Vec<String> {
    let Some(name) = &ps.registry else {
        return Vec::new();
    };
    if !registry::is_default(name, &ps.spec.q, &ps.spec.w) {
        return Vec::new();
    }
    let prec = ps.spec.precision;
    let tol_bits = -(prec as i32) / 2;
    registry::reference_table(name, prec)
        .into_iter()
        .filter_map(|rv| {
            let assembled = result.a(rv.p).filter(|_| rv.p <= result.max_order())?;
            let tabulated = rv.form.evaluate(prec).ok()?;
            let tol = 2f64.powi(tol_bits) * tabulated.to_f64().abs().max(1.0);
            (!assembled.approx_eq(&tabulated, tol)).then(|| {
                format!(
                    "{name}: a_{} assembled = {:.15e} differs from the tabulated literature value {} = {:.15e}; the assembled value is reported",
                    rv.p,
                    assembled.to_f64(),
                    rv.form,
                    tabulated.to_f64()
                )
            })
        })
        .collect()
}

fn coefficients_report(ps: &ProblemSpec) -> Result<(Report, ExpansionResult), CliError> {
    let result = expansion_coefficients(&ps.spec)?;
    let warnings = literature_warnings(ps, &result);
    let report = Report {
        spec: summary(ps),
        a0: limit_entry(&result),
        coefficients: result.coefficients.iter().map(coefficient_entry).collect(),
        symmetry: None,
        verification: None,
        warnings,
    };
    Ok((report, result))
}

fn emit(text: &str, out: &Option<PathBuf>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_coeffs(ps: &ProblemSpec, format: Format) -> Result<(Report, String), CliError> {
    let (report, _) = coefficients_report(ps)?;
    let text = match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    Ok((report, text))
}

fn cmd_verify(ps: &ProblemSpec, grid: Option<Vec<u64>>) -> Result<(Report, bool), CliError> {
    let (mut report, result) = coefficients_report(ps)?;
    let grid = grid
        .or_else(|| ps.verify.n_grid.clone())
        .unwrap_or_else(|| DEFAULT_N_GRID.to_vec());
    let coeffs: Vec<_> = (2..=ps.spec.orders)
        .map(|p| result.a(p).expect("assembled order"))
        .collect();
    let decay = decay_check_with(&ps.spec, &result.a0.value, &coeffs, &grid, ps.verify.quadrature_tol)?;
    let all_floor = decay.at_floor.iter().all(|b| *b);
    let passed = if all_floor {
        report.warnings.push(
            "every residual is at the quadrature precision floor; the truncated series is exact to working precision"
                .into(),
        );
        true
    } else {
        decay.slope_within(SLOPE_TOLERANCE)
    };
    if decay.any_at_floor() && !all_floor {
        report
            .warnings
            .push("some residuals are at the quadrature precision floor and were left out of the fit".into());
    }
    report.verification = Some(verification_entry(ps.spec.orders, &decay, passed));
    Ok((report, passed))
}

fn cmd_symmetry(ps: &ProblemSpec) -> Result<Report, CliError> {
    if ps.spec.q != 1 {
        return Err(CliError::Spec(format!(
            "$.q: the symmetry reduction is defined for q = 1 only (got q = {})",
            ps.spec.q
        )));
    }
    let (mut report, result) = coefficients_report(ps)?;
    let w = Scalar::Exact(ps.spec.w.clone());
    let entries = (2..=ps.spec.orders)
        .map(|p| solvability_check(p, &w, &result.beta))
        .collect::<Result<Vec<_>, _>>()?;
    let first_violation = entries.iter().find_map(|r| {
        r.first_violation().map(|v| FirstViolation { p: r.p, nu: v.nu })
    });
    let criterion = match &ps.spec.f {
        FDescriptor::Appell(form) => Some(CriterionEntry {
            family: form.family.kind.to_string(),
            omega: reflection_omega(&form.family).map(|o| o.render()),
            c: form.c.render(),
            s: form.s.to_string(),
            w: ps.spec.w.to_string(),
            holds: appell_criterion_form(form, &w),
        }),
        FDescriptor::Derivatives(_) => None,
    };
    report.symmetry = Some(SymmetrySection {
        criterion,
        all_hold: first_violation.is_none(),
        first_violation,
        orders: entries.iter().map(symmetry_entry).collect(),
    });
    Ok(report)
}

fn zeta_args(m: usize, p: usize) -> String {
    let mut args = vec![(m + 1).to_string()];
    args.extend(std::iter::repeat_n("1".to_string(), p - 1));
    args.join(",")
}

fn cmd_mzv(m: usize, p: usize, z: &str, prec: u32) -> Result<String, CliError> {
    if m == 0 || p == 0 {
        return Err(CliError::Spec("--m and --p must be at least 1".into()));
    }
    let z = parse_rational(z).map_err(|e| CliError::Spec(format!("--z: {e}")))?;
    if z.clone().abs() > 1 {
        return Err(CliError::Spec(format!("--z: |z| ≤ 1 is required (got {z})")));
    }
    let value = nielsen_s(m, p, &z, prec)?;
    let mut out = format!(
        "S_{{{m},{p}}}({z}) = {} ± {}\n",
        value.to_decimal(),
        value.error_decimal()
    );
    if z == 1 {
        let form = mzv_height_one(m, p);
        out.push_str(&format!(
            "s_{{{m},{p}}} = ζ({}) = {} = {}\n",
            zeta_args(m, p),
            form,
            value.to_decimal()
        ));
    } else if z == -1 {
        let sigma = if p.is_multiple_of(2) { value.clone() } else { -&value };
        out.push_str(&format!(
            "σ_{{{m},{p}}} = (−1)^{p}·S_{{{m},{p}}}(−1) = {}\n",
            sigma.to_decimal()
        ));
        if p == 1 {
            out.push_str(&format!("S_{{{m},1}}(−1) = (2^(−{m}) − 1)·ζ({})\n", m + 1));
        }
    }
    Ok(out)
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match execute(cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn warn_all(report: &Report, stderr: &mut dyn Write) {
    for w in &report.warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let precision_bits = cli.precision_bits;
    match &cli.command {
        Command::Coeffs { spec, orders, out, format } => {
            let ps = load(spec, Overrides { orders: *orders, precision_bits })?;
            let (report, text) = cmd_coeffs(&ps, *format)?;
            warn_all(&report, stderr);
            emit(&text, out, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Verify { spec, orders, n_grid, out } => {
            let ps = load(spec, Overrides { orders: *orders, precision_bits })?;
            let (report, passed) = cmd_verify(&ps, n_grid.clone())?;
            warn_all(&report, stderr);
            emit(&report.to_json(), out, stdout)?;
            if passed {
                Ok(EXIT_OK)
            } else {
                let v = report.verification.as_ref().expect("verification section");
                let _ = writeln!(
                    stderr,
                    "error: fitted slope {:?} misses the expected {} by more than {SLOPE_TOLERANCE}",
                    v.fitted_slope, v.expected_slope
                );
                Ok(EXIT_VERIFY)
            }
        }
        Command::Symmetry { spec, orders, out } => {
            let ps = load(spec, Overrides { orders: *orders, precision_bits })?;
            let report = cmd_symmetry(&ps)?;
            warn_all(&report, stderr);
            emit(&report.to_json(), out, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Mzv { m, p, z } => {
            let prec = precision_bits.unwrap_or(nielsen_core::bigfloat::DEFAULT_PRECISION);
            let text = cmd_mzv(*m, *p, z, prec)?;
            stdout.write_all(text.as_bytes())?;
            Ok(EXIT_OK)
        }
    }
}
