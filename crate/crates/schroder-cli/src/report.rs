//! Report shapes, the JSON error envelope, and output rendering.
//!
//! Every command emits exactly one JSON document, to stdout or to the
//! `--output` path. Failures emit `{"error":{"kind","message"}}` on stderr
//! and select the process exit code: 1 for parse and usage problems, 2 for
//! domain rejections, 3 when a numerical procedure or audit gave up.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use schroder::{Diagnostics, Error, HardyReport, HurstReference, TruncatedPowerSeries};
use serde::Serialize;

pub struct Failure {
    pub kind: String,
    pub message: String,
    pub code: u8,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            kind: "UsageError".into(),
            message: message.into(),
            code: 1,
        }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Failure {
            kind: "ParseError".into(),
            message: message.into(),
            code: 1,
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Failure {
            kind: "Io".into(),
            message: message.into(),
            code: 1,
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        // Rejections of the request are exit 2; a computation that accepted
        // its input but could not meet its own bounds is exit 3.
        let code = match err {
            Error::ResidualTooLarge { .. }
            | Error::NonConvergence(_)
            | Error::Postcondition { .. }
            | Error::SmallDivisor { .. } => 3,
            _ => 2,
        };
        Failure {
            kind: err.kind().into(),
            message: err.to_string(),
            code,
        }
    }
}

#[derive(Serialize)]
struct ErrorEnvelope<'a> {
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: &'a str,
}

pub fn render_error(failure: &Failure, pretty: bool) -> String {
    render(
        &ErrorEnvelope {
            error: ErrorBody {
                kind: &failure.kind,
                message: &failure.message,
            },
        },
        pretty,
    )
}

pub fn render<T: Serialize>(value: &T, pretty: bool) -> String {
    let body = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .expect("report types serialize infallibly");
    body + "\n"
}

pub fn emit<T: Serialize>(value: &T, pretty: bool, output: Option<&Path>) -> Result<(), Failure> {
    let text = render(value, pretty);
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::io(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
pub struct SeriesOut {
    #[serde(serialize_with = "schroder::serde_complex::serialize")]
    pub center: Complex64,
    #[serde(serialize_with = "schroder::serde_complex::serialize_vec")]
    pub coeffs: Vec<Complex64>,
}

impl From<&TruncatedPowerSeries> for SeriesOut {
    fn from(s: &TruncatedPowerSeries) -> Self {
        SeriesOut {
            center: s.center(),
            coeffs: s.coeffs().to_vec(),
        }
    }
}

#[derive(Serialize)]
pub struct KoenigsReport {
    #[serde(serialize_with = "schroder::serde_complex::serialize")]
    pub alpha: Complex64,
    #[serde(serialize_with = "schroder::serde_complex::serialize")]
    pub lambda1: Complex64,
    pub order: usize,
    pub eval_radius: f64,
    #[serde(serialize_with = "schroder::serde_complex::serialize_vec")]
    pub coefficients: Vec<Complex64>,
}

#[derive(Serialize)]
pub struct ProjectReport {
    pub n: usize,
    #[serde(serialize_with = "schroder::serde_complex::serialize")]
    pub lambda_n: Complex64,
    #[serde(serialize_with = "schroder::serde_complex::serialize")]
    pub functional_value: Complex64,
    #[serde(serialize_with = "schroder::serde_complex::serialize_vec")]
    pub functional_row: Vec<Complex64>,
    pub projection: SeriesOut,
}

#[derive(Serialize)]
pub struct SampleOut {
    #[serde(serialize_with = "schroder::serde_complex::serialize")]
    pub z: Complex64,
    #[serde(serialize_with = "schroder::serde_complex::serialize")]
    pub value: Complex64,
}

#[derive(Serialize)]
pub struct SolveReport {
    #[serde(serialize_with = "schroder::serde_complex::serialize")]
    pub lambda: Complex64,
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigen_n: Option<usize>,
    pub diagnostics: Diagnostics,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesOut>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<SampleOut>,
}

#[derive(Serialize)]
pub struct CheckRow {
    pub name: &'static str,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl CheckRow {
    pub fn new(name: &'static str, residual: f64, threshold: f64) -> Self {
        CheckRow {
            name,
            residual,
            threshold,
            pass: residual <= threshold,
        }
    }
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub suite: &'static str,
    pub order: usize,
    pub max_n: usize,
    pub checks: Vec<CheckRow>,
    pub all_pass: bool,
}

#[derive(Serialize)]
pub struct HardyOut {
    #[serde(flatten)]
    pub membership: HardyReport,
    /// Reference essential radius, present when the multiplier is real.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub essential_radius_reference: Option<HurstReference>,
}
