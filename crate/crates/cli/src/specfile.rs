//! Problem-spec JSON ingestion with path-precise diagnostics.

use rug::Rational;
use serde_json::{Map, Value};

use nielsen_core::appell::{AppellFamily, AppellForm, DerivativeForm, FDescriptor, FamilyKind};
use nielsen_core::bigfloat::DEFAULT_PRECISION;
use nielsen_core::expansion::IntegralSpec;
use nielsen_core::registry;
use nielsen_core::scalar::{parse_expr, parse_rational, Prefactor, Scalar};

use crate::CliError;

/// Optional verification settings from the spec file.
#[derive(Clone, Debug, Default)]
pub struct VerifySettings {
    pub n_grid: Option<Vec<u64>>,
    pub quadrature_tol: Option<f64>,
}

/// A validated problem spec.
#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub spec: IntegralSpec,
    pub registry: Option<String>,
    pub description: String,
    pub verify: VerifySettings,
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub orders: Option<usize>,
    pub precision_bits: Option<u32>,
}

fn err(path: &str, msg: impl Into<String>) -> CliError {
    CliError::Spec(format!("{path}: {}", msg.into()))
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, CliError> {
    v.as_object().ok_or_else(|| err(path, "expected an object"))
}

fn reject_unknown(map: &Map<String, Value>, path: &str, allowed: &[&str]) -> Result<(), CliError> {
    match map.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(err(
            &format!("{path}.{k}"),
            format!("unknown field (allowed: {})", allowed.join(", ")),
        )),
        None => Ok(()),
    }
}

fn rational(v: &Value, path: &str) -> Result<Rational, CliError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from(i))
            } else {
                n.as_f64()
                    .and_then(Rational::from_f64)
                    .ok_or_else(|| err(path, "number is not finite"))
            }
        }
        Value::String(s) => parse_rational(s).map_err(|e| err(path, e.to_string())),
        _ => Err(err(path, "expected a number or a rational string such as \"3/4\"")),
    }
}

fn scalar(v: &Value, path: &str, prec: u32) -> Result<Scalar, CliError> {
    match v {
        Value::String(s) => parse_expr(s, prec).map_err(|e| err(path, e.to_string())),
        _ => rational(v, path).map(Scalar::Exact),
    }
}

fn prefactor(v: &Value, path: &str, prec: u32) -> Result<Prefactor, CliError> {
    match v {
        Value::String(s) => Prefactor::parse(s, prec).map_err(|e| err(path, e.to_string())),
        _ => rational(v, path).map(Prefactor::exact),
    }
}

fn positive_int(v: &Value, path: &str) -> Result<u64, CliError> {
    v.as_u64()
        .filter(|n| *n > 0)
        .ok_or_else(|| err(path, "expected a positive integer"))
}

fn parse_f(v: &Value, prec: u32) -> Result<(FDescriptor, Option<String>, String), CliError> {
    let path = "$.f";
    let map = object(v, path)?;
    let kind = map
        .get("kind")
        .ok_or_else(|| err(path, "missing field \"kind\""))?
        .as_str()
        .ok_or_else(|| err("$.f.kind", "expected a string"))?;
    match kind {
        "appell" => {
            reject_unknown(map, path, &["kind", "family", "d", "b", "c", "s"])?;
            let family = map
                .get("family")
                .ok_or_else(|| err(path, "missing field \"family\""))?
                .as_str()
                .ok_or_else(|| err("$.f.family", "expected a string"))?;
            let kind: FamilyKind = family.parse().map_err(|e: nielsen_core::Error| err("$.f.family", e.to_string()))?;
            let d = match map.get("d") {
                Some(v) => scalar(v, "$.f.d", prec)?,
                None if matches!(kind, FamilyKind::Hermite | FamilyKind::Monomial) => Scalar::zero(),
                None => return Err(err(path, format!("missing field \"d\" (required for {kind})"))),
            };
            let b = match map.get("b") {
                Some(v) => prefactor(v, "$.f.b", prec)?,
                None => Prefactor::one(),
            };
            let c = match map.get("c") {
                Some(v) => scalar(v, "$.f.c", prec)?,
                None => Scalar::one(),
            };
            let s = match map.get("s") {
                Some(v) => rational(v, "$.f.s")?,
                None => Rational::new(),
            };
            let description = format!(
                "appell {kind}, d = {}, b = {}, c = {}, s = {s}",
                d.render(),
                b.label,
                c.render()
            );
            let form = AppellForm::new(AppellFamily::new(kind, d), b, c).with_shift(s);
            form.validate().map_err(|e| err(path, e.to_string()))?;
            Ok((FDescriptor::Appell(form), None, description))
        }
        "derivatives" => {
            reject_unknown(map, path, &["kind", "values_at_1", "prefactor"])?;
            let values = map
                .get("values_at_1")
                .ok_or_else(|| err(path, "missing field \"values_at_1\""))?
                .as_array()
                .ok_or_else(|| err("$.f.values_at_1", "expected an array"))?;
            if values.is_empty() {
                return Err(err("$.f.values_at_1", "needs at least one value"));
            }
            let values = values
                .iter()
                .enumerate()
                .map(|(i, v)| scalar(v, &format!("$.f.values_at_1[{i}]"), prec))
                .collect::<Result<Vec<_>, _>>()?;
            let mut form = DerivativeForm::new(values);
            if let Some(v) = map.get("prefactor") {
                form.prefactor = prefactor(v, "$.f.prefactor", prec)?;
            }
            let description = format!(
                "derivative data f^(0..{})(1), prefactor {}",
                form.values_at_1.len() - 1,
                form.prefactor.label
            );
            Ok((FDescriptor::Derivatives(form), None, description))
        }
        "registry" => {
            reject_unknown(map, path, &["kind", "name"])?;
            let name = map
                .get("name")
                .ok_or_else(|| err(path, "missing field \"name\""))?
                .as_str()
                .ok_or_else(|| err("$.f.name", "expected a string"))?;
            let entry = registry::lookup(name).map_err(|e| err("$.f.name", e.to_string()))?;
            let placeholder = FDescriptor::Derivatives(DerivativeForm::new(vec![Scalar::one()]));
            Ok((placeholder, Some(entry.name.to_string()), format!("registry {}: {}", entry.name, entry.description)))
        }
        other => Err(err(
            "$.f.kind",
            format!("unknown kind \"{other}\" (expected appell, derivatives or registry)"),
        )),
    }
}

/// Parses and validates a spec document.
pub fn parse_spec(text: &str, overrides: Overrides) -> Result<ProblemSpec, CliError> {
    let root: Value = serde_json::from_str(text).map_err(|e| err("$", format!("invalid JSON: {e}")))?;
    let map = object(&root, "$")?;
    reject_unknown(map, "$", &["q", "w", "orders", "precision_bits", "f", "verify"])?;

    let precision = match overrides.precision_bits {
        Some(p) => p,
        None => match map.get("precision_bits") {
            Some(v) => u32::try_from(positive_int(v, "$.precision_bits")?)
                .map_err(|_| err("$.precision_bits", "too large"))?,
            None => DEFAULT_PRECISION,
        },
    };
    if !(nielsen_core::bigfloat::MIN_PRECISION..=nielsen_core::bigfloat::MAX_PRECISION).contains(&precision) {
        return Err(err(
            "$.precision_bits",
            format!(
                "{precision} outside [{}, {}]",
                nielsen_core::bigfloat::MIN_PRECISION,
                nielsen_core::bigfloat::MAX_PRECISION
            ),
        ));
    }
    let orders = match overrides.orders {
        Some(o) => o,
        None => match map.get("orders") {
            Some(v) => positive_int(v, "$.orders")? as usize,
            None => return Err(err("$", "missing field \"orders\" (or pass --orders)")),
        },
    };
    if orders < 2 {
        return Err(err("$.orders", "must be at least 2"));
    }

    let f_value = map.get("f").ok_or_else(|| err("$", "missing field \"f\""))?;
    let (f, registry_name, description) = parse_f(f_value, precision + 32)?;
    let q = map.get("q").map(|v| rational(v, "$.q")).transpose()?;
    let w = map.get("w").map(|v| rational(v, "$.w")).transpose()?;

    let spec = match &registry_name {
        Some(name) => registry::build(name, q, w, orders, precision).map_err(|e| err("$", e.to_string()))?,
        None => {
            let q = q.ok_or_else(|| err("$", "missing field \"q\""))?;
            let w = w.ok_or_else(|| err("$", "missing field \"w\""))?;
            IntegralSpec::new(q, w, f, orders, precision)
        }
    };
    spec.validate().map_err(|e| {
        let path = match &e {
            nielsen_core::Error::InsufficientDerivatives { .. } => "$.orders",
            _ if spec.w == 0 || (spec.q == -1 && spec.w <= 0) => "$.w",
            _ if spec.q > 1 || spec.q < -1 => "$.q",
            _ => "$",
        };
        err(path, e.to_string())
    })?;

    let mut verify = VerifySettings::default();
    if let Some(v) = map.get("verify") {
        let vm = object(v, "$.verify")?;
        reject_unknown(vm, "$.verify", &["n_grid", "quadrature_tol"])?;
        if let Some(g) = vm.get("n_grid") {
            let arr = g.as_array().ok_or_else(|| err("$.verify.n_grid", "expected an array"))?;
            verify.n_grid = Some(
                arr.iter()
                    .enumerate()
                    .map(|(i, v)| positive_int(v, &format!("$.verify.n_grid[{i}]")))
                    .collect::<Result<_, _>>()?,
            );
        }
        if let Some(t) = vm.get("quadrature_tol") {
            let tol = t
                .as_f64()
                .filter(|t| *t > 0.0)
                .ok_or_else(|| err("$.verify.quadrature_tol", "expected a positive number"))?;
            verify.quadrature_tol = Some(tol);
        }
    }

    Ok(ProblemSpec {
        spec,
        registry: registry_name,
        description,
        verify,
    })
}
