//! JSON encodings of core values and the report envelope.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};
use wallcross_core::eqk::{Cyclo, LaurentPoly};
use wallcross_core::gitchambers::CheckResult;
use wallcross_core::{subset, CycloScalar, FMMatrix, FgAbelianGroup, StabilityVector, Subset};

pub fn q(x: &BigRational) -> Value {
    Value::String(x.to_string())
}

pub fn qs(v: &[BigRational]) -> Value {
    Value::Array(v.iter().map(q).collect())
}

pub fn int(x: &BigInt) -> Value {
    // integers beyond i64 stay exact as strings
    match i64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => Value::String(x.to_string()),
    }
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn int_rows(rows: &[Vec<BigInt>]) -> Value {
    Value::Array(rows.iter().map(|r| ints(r)).collect())
}

/// 1-based labels.
pub fn set(s: Subset) -> Value {
    json!(subset::labels(s))
}

pub fn sets(v: &[Subset]) -> Value {
    Value::Array(v.iter().map(|&s| set(s)).collect())
}

pub fn group(g: &FgAbelianGroup) -> Value {
    json!({
        "free_rank": g.free_rank,
        "torsion": ints(&g.torsion),
        "text": g.to_string(),
    })
}

pub fn stability(t: &StabilityVector) -> Value {
    json!({ "value": qs(&t.value), "infinitesimal": qs(&t.infinitesimal) })
}

/// Coefficients over the power basis of `ℚ(ζ_M)`.
pub fn cyclo(c: &Cyclo) -> Value {
    qs(c.coeffs())
}

/// Terms `Λ^{exps/M}` with cyclotomic coefficients, in the polynomial's
/// own (sorted) order.
pub fn poly(p: &LaurentPoly) -> Value {
    let m = BigInt::from(p.order());
    Value::Array(
        p.terms()
            .map(|(e, c)| {
                let exps: Vec<BigRational> = e
                    .iter()
                    .map(|&k| BigRational::new(BigInt::from(k), m.clone()))
                    .collect();
                json!({ "exponents": qs(&exps), "coefficient": cyclo(c) })
            })
            .collect(),
    )
}

pub fn scalar(s: &CycloScalar, labels: &[String]) -> Value {
    let den: Vec<Value> = s
        .denominators()
        .iter()
        .map(|(f, k)| json!({ "factor": poly(f), "power": k }))
        .collect();
    json!({
        "order": s.order(),
        "numerator": poly(s.numerator()),
        "denominator": den,
        "text": s.format_with(labels),
    })
}

pub fn matrix(m: &FMMatrix, labels: &[String]) -> Value {
    let entries: Vec<Value> = m
        .entries
        .iter()
        .map(|row| Value::Array(row.iter().map(|x| scalar(x, labels)).collect()))
        .collect();
    json!({
        "rows": m.row_labels,
        "columns": m.col_labels,
        "entries": entries,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// Failures of validation checks exit with status 2, others with 3.
    pub validation: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
            validation: false,
        }
    }

    pub fn from_validation(prefix: &str, c: &CheckResult) -> Self {
        Check {
            name: format!("{prefix}.{}", c.name),
            passed: c.passed,
            detail: c.detail.clone(),
            validation: true,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "name": self.name, "passed": self.passed, "detail": self.detail })
    }
}

pub fn envelope(command: &str, digest: &str, results: Value, checks: &[Check]) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("input_digest".into(), json!(digest));
    m.insert("results".into(), results);
    m.insert("checks".into(), Value::Array(checks.iter().map(Check::to_json).collect()));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    Value::Object(m)
}

/// Plain-text rendering: one `path: value` line per leaf.
pub fn text(v: &Value) -> String {
    let mut out = String::new();
    flatten("", v, &mut out);
    out
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(m) => {
            // scalars print as their text form
            if let Some(Value::String(t)) = m.get("text").filter(|_| m.contains_key("numerator")) {
                out.push_str(&format!("{prefix}: {t}\n"));
                return;
            }
            for (k, x) in m {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = a.iter().map(leaf).collect();
            out.push_str(&format!("{prefix}: [{}]\n", items.join(", ")));
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => out.push_str(&format!("{prefix}: {}\n", leaf(v))),
    }
}

fn leaf(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
