//! Input files: GIT data, stability parameters and options as JSON.
//!
//! ```json
//! {
//!   "rank": 1,
//!   "n": 2,
//!   "characters": [[1], [2], [-1], [-2]],
//!   "extended": [],
//!   "theta_plus": ["1"],
//!   "theta_minus": ["-1"],
//!   "options": { "bound": "2", "sector_sign": "minus" }
//! }
//! ```
//!
//! Numbers are JSON integers or strings `"p/q"`; decimals are rejected.
//! Indices in `extended` are 1-based and must be the trailing characters.

use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;
use wallcross_core::{GitData, SectorSign, StabilityVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InputError {
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("line {line}, column {column}: {msg}")]
    Syntax { line: usize, column: usize, msg: String },
    #[error("field `{field}`: {msg}")]
    Schema { field: String, msg: String },
    #[error("field `{field}`: `{text}` is not an exact rational (write fractions as \"p/q\")")]
    NonRationalNumber { field: String, text: String },
    #[error("characters {i} and {j} violate D_(n+i) = -D_i")]
    LawrencePairing { i: usize, j: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub bound: Option<BigRational>,
    pub sector_sign: Option<SectorSign>,
    pub side_plus: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputSpec {
    pub rank: usize,
    pub n: usize,
    pub characters: Vec<Vec<BigInt>>,
    pub theta_plus: Vec<BigRational>,
    pub theta_minus: Option<Vec<BigRational>>,
    pub options: Options,
    /// Input re-serialized with sorted keys.
    pub canonical: String,
}

impl InputSpec {
    pub fn git(&self) -> Result<GitData, InputError> {
        GitData::new(self.rank, self.n, self.characters.clone()).map_err(|e| InputError::Schema {
            field: "characters".into(),
            msg: e.to_string(),
        })
    }

    pub fn theta_plus(&self) -> StabilityVector {
        StabilityVector::new(self.theta_plus.clone())
    }

    pub fn theta_minus(&self) -> Option<StabilityVector> {
        self.theta_minus.clone().map(StabilityVector::new)
    }

    /// SHA-256 of the canonical form, hex encoded.
    pub fn digest(&self) -> String {
        Sha256::digest(self.canonical.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn check_pairing(&self) -> Result<(), InputError> {
        for i in 0..self.n {
            let ok = self.characters[i]
                .iter()
                .zip(&self.characters[self.n + i])
                .all(|(a, b)| (a + b) == BigInt::from(0));
            if !ok {
                return Err(InputError::LawrencePairing {
                    i: i + 1,
                    j: self.n + i + 1,
                });
            }
        }
        Ok(())
    }
}

/// Reads and validates an input file, including the Lawrence pairing.
pub fn parse_input(path: &Path) -> Result<InputSpec, InputError> {
    let spec = parse_input_lenient(path)?;
    spec.check_pairing()?;
    Ok(spec)
}

/// As [`parse_input`] without the pairing check, for `validate`.
pub fn parse_input_lenient(path: &Path) -> Result<InputSpec, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    parse_str(&text)
}

pub fn parse_str(text: &str) -> Result<InputSpec, InputError> {
    let value: Value = serde_json::from_str(text).map_err(|e| InputError::Syntax {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    let obj = value.as_object().ok_or_else(|| schema("", "expected an object"))?;
    for key in obj.keys() {
        if !["rank", "n", "characters", "extended", "theta_plus", "theta_minus", "options"]
            .contains(&key.as_str())
        {
            return Err(schema(key, "unknown field"));
        }
    }
    let rank = usize_field(obj, "rank")?;
    let n = usize_field(obj, "n")?;
    let rows = obj
        .get("characters")
        .ok_or_else(|| schema("characters", "missing"))?
        .as_array()
        .ok_or_else(|| schema("characters", "expected an array of rows"))?;
    let mut characters = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let field = format!("characters[{i}]");
        let row = row.as_array().ok_or_else(|| schema(&field, "expected an array"))?;
        if row.len() != rank {
            return Err(schema(&field, &format!("expected {rank} entries, found {}", row.len())));
        }
        let ints = row
            .iter()
            .enumerate()
            .map(|(k, v)| integer(v, &format!("{field}[{k}]")))
            .collect::<Result<Vec<_>, _>>()?;
        characters.push(ints);
    }
    let big_n = characters.len();
    if big_n < 2 * n {
        return Err(schema("characters", &format!("{big_n} characters cannot hold {n} pairs")));
    }
    if let Some(ext) = obj.get("extended") {
        let ext = ext.as_array().ok_or_else(|| schema("extended", "expected an array"))?;
        let got = ext
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let x = integer(v, &format!("extended[{k}]"))?;
                usize::try_from(x).map_err(|_| schema("extended", "indices are positive"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let want: Vec<usize> = (2 * n + 1..=big_n).collect();
        if got != want {
            return Err(schema(
                "extended",
                &format!("extended characters must be the trailing indices {want:?}"),
            ));
        }
    } else if big_n != 2 * n {
        return Err(schema("extended", "required when there are unpaired characters"));
    }
    let theta_plus = rational_vec(obj.get("theta_plus"), "theta_plus", rank)?
        .ok_or_else(|| schema("theta_plus", "missing"))?;
    let theta_minus = rational_vec(obj.get("theta_minus"), "theta_minus", rank)?;
    let options = match obj.get("options") {
        None => Options::default(),
        Some(v) => parse_options(v)?,
    };
    Ok(InputSpec {
        rank,
        n,
        characters,
        theta_plus,
        theta_minus,
        options,
        canonical: value.to_string(),
    })
}

fn parse_options(v: &Value) -> Result<Options, InputError> {
    let obj = v.as_object().ok_or_else(|| schema("options", "expected an object"))?;
    let mut out = Options::default();
    for (k, v) in obj {
        let field = format!("options.{k}");
        match k.as_str() {
            "bound" => out.bound = Some(rational(v, &field)?),
            "sector_sign" => out.sector_sign = Some(parse_sign(str_of(v, &field)?, &field)?),
            "side" => out.side_plus = Some(parse_side(str_of(v, &field)?, &field)?),
            _ => return Err(schema(&field, "unknown option")),
        }
    }
    Ok(out)
}

pub fn parse_sign(s: &str, field: &str) -> Result<SectorSign, InputError> {
    match s {
        "minus" => Ok(SectorSign::Minus),
        "plus" => Ok(SectorSign::Plus),
        _ => Err(schema(field, "expected \"minus\" or \"plus\"")),
    }
}

pub fn parse_side(s: &str, field: &str) -> Result<bool, InputError> {
    match s {
        "plus" | "+" => Ok(true),
        "minus" | "-" => Ok(false),
        _ => Err(schema(field, "expected \"plus\" or \"minus\"")),
    }
}

/// Exact rational from `"p/q"` or an integer; decimals are rejected.
pub fn parse_rational(s: &str, field: &str) -> Result<BigRational, InputError> {
    let t = s.trim();
    let bad = || InputError::NonRationalNumber {
        field: field.into(),
        text: s.into(),
    };
    if t.contains(['.', 'e', 'E']) {
        return Err(bad());
    }
    let q = BigRational::from_str(t).map_err(|_| bad())?;
    Ok(q)
}

fn schema(field: &str, msg: &str) -> InputError {
    InputError::Schema {
        field: field.into(),
        msg: msg.into(),
    }
}

fn str_of<'a>(v: &'a Value, field: &str) -> Result<&'a str, InputError> {
    v.as_str().ok_or_else(|| schema(field, "expected a string"))
}

fn usize_field(obj: &Map<String, Value>, key: &str) -> Result<usize, InputError> {
    let v = obj.get(key).ok_or_else(|| schema(key, "missing"))?;
    let x = integer(v, key)?;
    usize::try_from(x).map_err(|_| schema(key, "expected a non-negative integer"))
}

fn integer(v: &Value, field: &str) -> Result<BigInt, InputError> {
    let q = rational(v, field)?;
    if !q.is_integer() {
        return Err(schema(field, "expected an integer"));
    }
    Ok(q.to_integer())
}

fn rational(v: &Value, field: &str) -> Result<BigRational, InputError> {
    match v {
        Value::Number(num) => {
            let text = num.to_string();
            if num.is_f64() {
                return Err(InputError::NonRationalNumber {
                    field: field.into(),
                    text,
                });
            }
            parse_rational(&text, field)
        }
        Value::String(s) => parse_rational(s, field),
        _ => Err(schema(field, "expected a number or a \"p/q\" string")),
    }
}

fn rational_vec(v: Option<&Value>, field: &str, len: usize) -> Result<Option<Vec<BigRational>>, InputError> {
    let Some(v) = v else { return Ok(None) };
    if v.is_null() {
        return Ok(None);
    }
    let arr = v.as_array().ok_or_else(|| schema(field, "expected an array"))?;
    if arr.len() != len {
        return Err(schema(field, &format!("expected {len} entries, found {}", arr.len())));
    }
    arr.iter()
        .enumerate()
        .map(|(k, x)| rational(x, &format!("{field}[{k}]")))
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}
