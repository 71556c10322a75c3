//! Crate-wide error type.
//!
//! Every rejection a caller can observe is a named variant here; the CLI maps
//! `kind()` strings into its JSON error envelope and exit codes.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Series combine only when expanded about bit-identical centers.
    #[error("series centers differ: {left} vs {right}")]
    CenterMismatch { left: Complex64, right: Complex64 },

    /// Series combine only at a shared truncation order.
    #[error("series orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    /// A derivative or coefficient index beyond the truncation order.
    #[error("requested order {wanted} exceeds truncation order {order}")]
    OrderExceeded { wanted: usize, order: usize },

    /// Reciprocal of a series whose constant term is numerically zero.
    #[error("series constant term has modulus {modulus:.3e}, too small to invert")]
    ZeroConstantTerm { modulus: f64 },

    /// A coefficient, center, or parameter that is NaN or infinite.
    #[error("non-finite input in {0}")]
    NonFinite(&'static str),

    /// Rational function whose denominator is identically zero.
    #[error("denominator is identically zero")]
    DegenerateDenominator,

    /// Rational function with a pole in or too near the closed unit disc.
    #[error("denominator root {root} lies within {margin:.1e} of the closed unit disc")]
    PoleInDisc { root: Complex64, margin: f64 },

    /// Candidate symbol whose boundary modulus exceeds one.
    #[error("boundary supremum {sup:.12} exceeds 1; not a self-map of the disc")]
    NotSelfMap { sup: f64 },

    /// Orbit of the origin reached the boundary: no attracting interior fixed point.
    #[error("forward orbit escapes to the boundary; no interior fixed point")]
    NoInteriorFixedPoint,

    /// An iteration failed to meet its stopping rule within its cap.
    #[error("iteration failed to converge: {0}")]
    NonConvergence(&'static str),

    /// Conjugation was requested about a point the symbol does not fix.
    #[error("candidate fixed point has residual {residual:.3e}")]
    NotAFixedPoint { residual: f64 },

    /// Interior fixed point with |multiplier| numerically equal to 1.
    #[error("multiplier {multiplier} has modulus within tolerance of 1; classification is unstable")]
    NearUnitMultiplier { multiplier: Complex64 },

    /// Koenigs construction on a symbol outside the Schroeder class.
    #[error("symbol classified as {found}, not Schroeder")]
    NotSchroeder { found: &'static str },

    /// Coefficient recursion divisor below the safe threshold.
    #[error("recursion divisor has modulus {value:.3e}, below {cutoff:.1e}")]
    SmallDivisor { value: f64, cutoff: f64 },

    /// Partition enumeration above the supported derivative order.
    #[error("derivative order {n} exceeds supported maximum {max}")]
    TooLarge { n: usize, max: usize },

    /// Projection or contour index beyond the configured family size.
    #[error("index {n} exceeds configured maximum {max_n}")]
    IndexExceeded { n: usize, max_n: usize },

    /// Resolvent parameter equal (within tolerance) to an eigenvalue.
    #[error("lambda collides with eigenvalue of index {n}")]
    EigenvalueCollision { n: usize },

    /// Resolvent parameter exactly zero.
    #[error("lambda = 0 lies in the spectrum for every admissible symbol")]
    ZeroLambda,

    /// Resolvent parameter inside the residual disc where no splitting converges.
    #[error("lambda modulus {modulus:.3e} is at or below the cutoff {cutoff:.3e}")]
    LambdaTooSmall { modulus: f64, cutoff: f64 },

    /// Eigenvalue-case right side with a nonzero component along the eigenvector.
    #[error("right side has component {magnitude:.3e} along the eigenvector; no solution exists")]
    IncompatibleRhs { magnitude: f64 },

    /// Hard postcondition: the returned solution failed its residual audit.
    #[error("solution residual {residual:.3e} exceeds tolerance {tol:.1e}")]
    ResidualTooLarge { residual: f64, tol: f64 },

    /// Superattracting resolvent requested at a spectrum point.
    #[error("lambda {lambda} is a spectrum point of the superattracting operator")]
    SpectrumPoint { lambda: Complex64 },

    /// Spectral analysis of a disc automorphism (outside the compact framework).
    #[error("symbol is a disc automorphism; its composition operator is not covered")]
    AutomorphismSymbol,

    /// Weighted-Hardy diagnostics need the eigenfunction to at least the truncation order.
    #[error("series order {have} is below the required truncation {need}")]
    InsufficientOrder { have: usize, need: usize },

    /// Essential-radius reference needs a real multiplier in (0, 1).
    #[error("multiplier {multiplier} is not real in (0, 1)")]
    NotRealMultiplier { multiplier: Complex64 },

    /// Evaluation requested outside the open unit disc.
    #[error("point {z} lies outside the open unit disc")]
    PointOutsideDisc { z: Complex64 },

    /// A structurally invalid argument (bad range, unknown name, bad shape).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An internal consistency audit failed on otherwise accepted inputs.
    #[error("postcondition {check} failed: value {value:.3e} exceeds {tol:.1e}")]
    Postcondition {
        check: &'static str,
        value: f64,
        tol: f64,
    },

    /// An operation that requires a specific classification got another.
    #[error("operation requires a {expected} symbol, found {found}")]
    WrongClassification {
        expected: &'static str,
        found: &'static str,
    },
}

impl Error {
    /// Stable machine-readable name of the variant, used in JSON envelopes.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::CenterMismatch { .. } => "CenterMismatch",
            Error::OrderMismatch { .. } => "OrderMismatch",
            Error::OrderExceeded { .. } => "OrderExceeded",
            Error::ZeroConstantTerm { .. } => "ZeroConstantTerm",
            Error::NonFinite(_) => "NonFinite",
            Error::DegenerateDenominator => "DegenerateDenominator",
            Error::PoleInDisc { .. } => "PoleInDisc",
            Error::NotSelfMap { .. } => "NotSelfMap",
            Error::NoInteriorFixedPoint => "NoInteriorFixedPoint",
            Error::NonConvergence(_) => "NonConvergence",
            Error::NotAFixedPoint { .. } => "NotAFixedPoint",
            Error::NearUnitMultiplier { .. } => "NearUnitMultiplier",
            Error::NotSchroeder { .. } => "NotSchroeder",
            Error::SmallDivisor { .. } => "SmallDivisor",
            Error::TooLarge { .. } => "TooLarge",
            Error::IndexExceeded { .. } => "IndexExceeded",
            Error::EigenvalueCollision { .. } => "EigenvalueCollision",
            Error::ZeroLambda => "ZeroLambda",
            Error::LambdaTooSmall { .. } => "LambdaTooSmall",
            Error::IncompatibleRhs { .. } => "IncompatibleRHS",
            Error::ResidualTooLarge { .. } => "ResidualTooLarge",
            Error::SpectrumPoint { .. } => "SpectrumPoint",
            Error::AutomorphismSymbol => "AutomorphismSymbol",
            Error::InsufficientOrder { .. } => "InsufficientOrder",
            Error::NotRealMultiplier { .. } => "NotRealMultiplier",
            Error::PointOutsideDisc { .. } => "PointOutsideDisc",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::Postcondition { .. } => "Postcondition",
            Error::WrongClassification { .. } => "WrongClassification",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
