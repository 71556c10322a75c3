//! Named numerical tolerances.
//!
//! Every cutoff that decides acceptance, rejection, classification, or
//! convergence lives here under a stable name, so tests can pin values and
//! the CLI can override any one of them with `--tol name=value`.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Tolerances {
    /// Allowed drift between an outer series center and the inner constant
    /// term when composing series.
    pub compose_center: f64,
    /// Smallest constant-term modulus a series reciprocal will accept.
    pub reciprocal: f64,
    /// Denominator roots with |root| <= 1 + pole_margin are treated as poles
    /// in the closed disc.
    pub pole_margin: f64,
    /// Slack above 1 allowed for the boundary supremum of a self-map
    /// (inner functions sit at exactly 1 up to roundoff).
    pub selfmap_margin: f64,
    /// Numerator and denominator roots closer than this are cancelled as a
    /// common factor before validation.
    pub common_root: f64,
    /// Accepted |phi(alpha) - alpha| for a polished fixed point.
    pub fixed_point_residual: f64,
    /// Residual below which an externally supplied fixed point is trusted.
    pub fixed_point_check: f64,
    /// Orbit points with modulus >= 1 - boundary_margin count as escaped.
    pub boundary_margin: f64,
    /// Multiplier moduli at or below this classify as superattracting.
    pub zero_multiplier: f64,
    /// Multiplier moduli within this of 1 are rejected as unstable.
    pub near_unit: f64,
    /// Coefficient agreement required to recognize a Moebius normal form.
    pub automorphism_match: f64,
    /// Compactness verdict: compact iff sup estimate < 1 - compactness_margin.
    pub compactness_margin: f64,
    /// Smallest safe divisor modulus in coefficient recursions.
    pub small_divisor: f64,
    /// Koenigs evaluation radius as a fraction of the distance from the
    /// fixed point to the boundary.
    pub eval_radius_factor: f64,
    /// Resolvent parameters within this of an eigenvalue collide with it.
    pub eigen_sep: f64,
    /// Hard bound on the equation residual of any returned solution.
    pub solver_residual: f64,
    /// Safety factor in the tail contraction test q^(n+1) < (1 - q_margin)|lambda|.
    /// The margin also caps the tail's convergence ratio, so it controls how
    /// many orbit terms a solve near the eigenvalue ladder may need.
    pub q_margin: f64,
    /// Orbit-sum terms below term_stop * max(1, |partial sum|) twice in a row
    /// end the summation.
    pub term_stop: f64,
    /// Coefficientwise increment below which the series-mode tail sum stops.
    pub series_increment: f64,
    /// Largest allowed |functional value| for an eigenvalue-case right side,
    /// and for the kernel audit of the returned solution.
    pub projection_compat: f64,
    /// Exclusion half-width around the membership boundary where the slope
    /// heuristic is not trusted.
    pub growth_margin: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            compose_center: 1e-10,
            reciprocal: 1e-12,
            pole_margin: 1e-8,
            selfmap_margin: 1e-9,
            common_root: 1e-9,
            fixed_point_residual: 1e-12,
            fixed_point_check: 1e-10,
            boundary_margin: 1e-6,
            zero_multiplier: 1e-10,
            near_unit: 1e-10,
            automorphism_match: 1e-10,
            compactness_margin: 1e-6,
            small_divisor: 1e-12,
            eval_radius_factor: 0.5,
            eigen_sep: 1e-9,
            solver_residual: 1e-8,
            q_margin: 0.25,
            term_stop: 1e-15,
            series_increment: 1e-14,
            projection_compat: 1e-9,
            growth_margin: 0.1,
        }
    }
}

macro_rules! tol_fields {
    ($($name:ident),* $(,)?) => {
        pub const NAMES: &'static [&'static str] = &[$(stringify!($name)),*];

        /// Set a tolerance by its published name; unknown names fail loudly.
        pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "tolerance {name} must be a finite non-negative number, got {value}"
                )));
            }
            match name {
                $(stringify!($name) => {
                    self.$name = value;
                    Ok(())
                })*
                _ => Err(Error::InvalidParameter(format!(
                    "unknown tolerance name: {name}"
                ))),
            }
        }
    };
}

impl Tolerances {
    tol_fields!(
        compose_center,
        reciprocal,
        pole_margin,
        selfmap_margin,
        common_root,
        fixed_point_residual,
        fixed_point_check,
        boundary_margin,
        zero_multiplier,
        near_unit,
        automorphism_match,
        compactness_margin,
        small_divisor,
        eval_radius_factor,
        eigen_sep,
        solver_residual,
        q_margin,
        term_stop,
        series_increment,
        projection_compat,
        growth_margin,
    );
}
