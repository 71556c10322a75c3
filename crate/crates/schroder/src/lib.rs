//! Constructive spectral toolkit for composition operators C_phi f = f o phi
//! on holomorphic functions of the unit disc.
//!
//! The pipeline: validate a rational self-map of the disc ([`Symbol`]),
//! classify it by its interior fixed point and multiplier
//! ([`Symbol::classify`]), build the Koenigs eigenfunction kappa solving
//! kappa o phi = lambda_1 kappa ([`build_koenigs`]), derive the rank-one
//! spectral projections P_n f = Psi_n(f) kappa^n
//! ([`build_projection_family`]), and solve the non-homogeneous Schroeder
//! equation lambda f - f o phi = g both off the spectrum ([`resolve`]) and
//! at an eigenvalue ([`resolve_at_eigenvalue`]). On top of that sit the
//! spectrum report, a contour-integral verification of the projections
//! ([`contour_verify`]), and growth diagnostics for weighted Hardy spaces
//! ([`hardy_membership`], [`hurst_reference`]).
//!
//! All numerical cutoffs live in [`Tolerances`] so callers can tighten or
//! loosen individual checks without touching code.
//!
//! ```
//! use num_complex::Complex64;
//! use schroder::{
//!     resolve, FunctionRep, RationalFunction, SchroederData, SolveMode, SolveRequest,
//!     Symbol, Tolerances,
//! };
//!
//! # fn main() -> schroder::Result<()> {
//! let c = |re: f64, im: f64| Complex64::new(re, im);
//! let tol = Tolerances::default();
//!
//! // phi(z) = z / (2 - z): fixed point 0, multiplier 1/2.
//! let phi = Symbol::new(
//!     vec![c(0.0, 0.0), c(1.0, 0.0)],
//!     vec![c(2.0, 0.0), c(-1.0, 0.0)],
//!     &tol,
//! )?;
//! let data = SchroederData::build(&phi, 64, 12, &tol)?;
//!
//! // Solve lambda f - f o phi = 1 / (1 - 0.4 z) off the spectrum.
//! let g = FunctionRep::Rational(RationalFunction::new(
//!     vec![c(1.0, 0.0)],
//!     vec![c(1.0, 0.0), c(-0.4, 0.0)],
//!     tol.pole_margin,
//!     tol.common_root,
//! )?);
//! let req = SolveRequest { lambda: c(1.25, 0.25), g, mode: SolveMode::SeriesOutput };
//! let result = resolve(&data, &req)?;
//! assert!(result.diagnostics.residual < 1e-8);
//! # Ok(())
//! # }
//! ```

pub mod error;
pub mod func;
pub mod koenigs;
pub mod projections;
pub mod rational;
pub mod serde_complex;
pub mod series;
pub mod solver;
pub mod spectral;
pub mod symbol;
pub mod tol;

pub use error::{Error, Result};
pub use func::FunctionRep;
pub use koenigs::{build_koenigs, sample_grid, KoenigsData};
pub use projections::{
    build_projection_family, closed_form_functional, enumerate_partitions,
    faa_di_bruno_derivative, partition_terms, PartitionTerm, ProjectionFamily,
    MAX_PARTITION_ORDER,
};
pub use rational::RationalFunction;
pub use series::TruncatedPowerSeries;
pub use solver::{
    resolve, resolve_at_eigenvalue, resolve_superattracting, Diagnostics, SchroederData,
    SolutionEvaluator, SolveMode, SolveRequest, SolveResult,
};
pub use spectral::{
    automorphism_eigen_fixture, contour_verify, default_contour_radius, hardy_membership,
    hurst_reference, spectrum_report, ContourCheck, ContourPointCheck, HardyReport,
    HurstReference, SpectrumPointInfo, SpectrumPointKind, SpectrumReport, WeightedHardyParams,
};
pub use symbol::{
    ClassKind, Classification, CompactnessReport, MoebiusTransform, Symbol, COMPACTNESS_RADII,
    COMPACTNESS_SAMPLES,
};
pub use tol::Tolerances;
