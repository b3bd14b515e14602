//! Input documents.
//!
//! JSON form:
//!
//! ```json
//! {"order": 2, "coeffs": [[0, -1], [], [1]], "options": {"floor": "-2"}}
//! ```
//!
//! `coeffs[i]` lists the coefficients of `f_i` by ascending power of x; each
//! entry is a JSON integer or a string `"p"` / `"p/q"` of arbitrary size.
//! Anything that does not start with `{` is read as an equation such as
//! `y'' - x*y = 0`.

use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use puiseux_riccati::{Exponent, LinearODE, Poly, PuiseuxPoly, Rational};
use serde::Deserialize;
use serde_json::Value;

use crate::sugar;

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> InputError {
    InputError::Invalid(msg.into())
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct DocOptions {
    pub floor: Option<Exponent>,
    pub max_terms: Option<usize>,
    pub ext_cap: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct OdeDocument {
    pub ode: LinearODE,
    pub options: DocOptions,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    order: Option<usize>,
    coeffs: Vec<Vec<Value>>,
    #[serde(default)]
    options: RawOptions,
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOptions {
    floor: Option<Value>,
    max_terms: Option<usize>,
    ext_cap: Option<usize>,
}

pub fn load(path: &Path) -> Result<OdeDocument, InputError> {
    let text = std::fs::read_to_string(path).map_err(|source| InputError::Read {
        path: path.display().to_string(),
        source,
    })?;
    parse_document(&text)
}

pub fn parse_document(text: &str) -> Result<OdeDocument, InputError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        Ok(OdeDocument {
            ode: sugar::parse_equation(text).map_err(invalid)?,
            options: DocOptions::default(),
        })
    }
}

fn parse_json(text: &str) -> Result<OdeDocument, InputError> {
    let raw: RawDocument = serde_json::from_str(text)?;
    if raw.coeffs.len() < 2 {
        return Err(invalid("coeffs must list f_0 through f_n with n >= 1"));
    }
    let n = raw.coeffs.len() - 1;
    if raw.order.is_some_and(|o| o != n) {
        return Err(invalid(format!(
            "order {} does not match {} coefficient arrays",
            raw.order.unwrap(),
            raw.coeffs.len()
        )));
    }
    let mut coeffs = Vec::with_capacity(n + 1);
    for (i, arr) in raw.coeffs.iter().enumerate() {
        let rs = arr
            .iter()
            .map(parse_rational)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| invalid(format!("f_{i}: {e}")))?;
        coeffs.push(PuiseuxPoly::from_poly(&Poly::from_rationals(&rs, "x")));
    }
    if coeffs[n].is_zero() {
        return Err(invalid(format!("leading coefficient f_{n} is zero")));
    }
    let ode = LinearODE::new(coeffs).map_err(|e| invalid(e.to_string()))?;
    let floor = raw.options.floor.as_ref().map(parse_exponent_value).transpose()?;
    Ok(OdeDocument {
        ode,
        options: DocOptions {
            floor,
            max_terms: raw.options.max_terms,
            ext_cap: raw.options.ext_cap,
        },
    })
}

/// A JSON integer or a string `p` / `p/q`.
pub fn parse_rational(v: &Value) -> Result<Rational, String> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from_integer(BigInt::from(i)))
            .ok_or_else(|| format!("{n} is not an integer; write fractions as \"p/q\" strings")),
        Value::String(s) => parse_rational_str(s),
        other => Err(format!("expected a number or string, got {other}")),
    }
}

pub fn parse_rational_str(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let bad = || format!("cannot read {s:?} as a rational number");
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rational::new(num, den))
}

pub fn parse_exponent(s: &str) -> Result<Exponent, String> {
    to_exponent(&parse_rational_str(s)?)
}

fn parse_exponent_value(v: &Value) -> Result<Exponent, InputError> {
    parse_rational(v)
        .and_then(|q| to_exponent(&q))
        .map_err(|e| invalid(format!("floor: {e}")))
}

fn to_exponent(q: &Rational) -> Result<Exponent, String> {
    match (q.numer().to_i64(), q.denom().to_i64()) {
        (Some(n), Some(d)) => Ok(Exponent::new(n, d)),
        _ => Err(format!("{q} is too large for an exponent")),
    }
}
