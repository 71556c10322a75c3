//! Input plumbing: inline, `@file`, or stdin JSON payloads, plus the small
//! scalar formats used by flags.
//!
//! Maps and right sides share one rational schema,
//! `{"num":[[re,im],...],"den":[[re,im],...]}` in ascending degree order;
//! right sides may instead be a raw coefficient list
//! `{"series":{"center":[re,im],"coeffs":[[re,im],...]}}`.

use std::fs;
use std::io::Read;

use num_complex::Complex64;
use schroder::{FunctionRep, RationalFunction, Symbol, Tolerances, TruncatedPowerSeries};
use serde::Deserialize;

use crate::report::Failure;

/// Resolve an argument to its JSON text: `@path` reads a file, `-` reads
/// stdin, anything else is taken literally.
pub fn read_payload(arg: &str) -> Result<String, Failure> {
    if arg == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::io(format!("reading stdin: {e}")))?;
        Ok(text)
    } else if let Some(path) = arg.strip_prefix('@') {
        fs::read_to_string(path).map_err(|e| Failure::io(format!("reading {path}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RationalSpec {
    num: Vec<[f64; 2]>,
    den: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesSpec {
    series: SeriesBody,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesBody {
    center: [f64; 2],
    coeffs: Vec<[f64; 2]>,
}

fn lift(pairs: &[[f64; 2]]) -> Vec<Complex64> {
    pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect()
}

/// Parse and validate a symbol argument (rational JSON only).
pub fn parse_symbol(arg: &str, tol: &Tolerances) -> Result<Symbol, Failure> {
    let text = read_payload(arg)?;
    let spec: RationalSpec = serde_json::from_str(&text).map_err(|e| {
        Failure::parse(format!(
            "symbol wants {{\"num\":[[re,im],...],\"den\":[[re,im],...]}}: {e}"
        ))
    })?;
    Symbol::new(lift(&spec.num), lift(&spec.den), tol).map_err(Failure::from)
}

/// Parse a function argument, rational or series form.
pub fn parse_function(arg: &str, tol: &Tolerances) -> Result<FunctionRep, Failure> {
    let text = read_payload(arg)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Failure::parse(format!("function JSON: {e}")))?;
    if value.get("series").is_some() {
        let spec: SeriesSpec = serde_json::from_value(value)
            .map_err(|e| Failure::parse(format!("function series JSON: {e}")))?;
        let center = Complex64::new(spec.series.center[0], spec.series.center[1]);
        let series =
            TruncatedPowerSeries::new(center, lift(&spec.series.coeffs)).map_err(Failure::from)?;
        Ok(FunctionRep::Series(series))
    } else {
        let spec: RationalSpec = serde_json::from_value(value).map_err(|e| {
            Failure::parse(format!(
                "function wants rational or series JSON (see --help): {e}"
            ))
        })?;
        let f = RationalFunction::new(
            lift(&spec.num),
            lift(&spec.den),
            tol.pole_margin,
            tol.common_root,
        )
        .map_err(Failure::from)?;
        Ok(FunctionRep::Rational(f))
    }
}

/// Parse `re,im` (or a bare real) into a complex scalar.
pub fn parse_complex_pair(text: &str, what: &str) -> Result<Complex64, Failure> {
    let number = |s: &str| s.trim().parse::<f64>().ok();
    let value = match text.split_once(',') {
        Some((re, im)) => match (number(re), number(im)) {
            (Some(re), Some(im)) => Some(Complex64::new(re, im)),
            _ => None,
        },
        None => number(text).map(|re| Complex64::new(re, 0.0)),
    };
    let value =
        value.ok_or_else(|| Failure::usage(format!("{what} wants RE,IM, got {text:?}")))?;
    if !value.is_finite() {
        return Err(Failure::usage(format!("{what} must be finite, got {text:?}")));
    }
    Ok(value)
}

/// Parse a `name=value` tolerance override.
pub fn parse_tol_override(spec: &str) -> Result<(&str, f64), Failure> {
    let (name, raw) = spec
        .split_once('=')
        .ok_or_else(|| Failure::usage(format!("--tol wants NAME=VALUE, got {spec:?}")))?;
    let value = raw
        .trim()
        .parse::<f64>()
        .map_err(|_| Failure::usage(format!("--tol {name}: {raw:?} is not a number")))?;
    Ok((name.trim(), value))
}
