//! Spectrum reports, contour verification of the spectral projections, and
//! weighted-Hardy diagnostics.
//!
//! For a Schroeder symbol the operator spectrum on the disc algebra side is
//! the eigenvalue ladder lambda_1^n together with the essential point 0;
//! for a superattracting symbol it is {0, 1}; automorphisms fall outside
//! this framework and are rejected. The contour check integrates the
//! resolvent around one eigenvalue and compares the quadrature with the
//! rank-one projection applied directly, which ties the solver, the
//! projection family, and the Koenigs data together through an identity
//! none of them enforces individually.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::func::FunctionRep;
use crate::koenigs::{power, KoenigsData};
use crate::solver::{resolve, SchroederData, SolveMode, SolveRequest};
use crate::symbol::{
    ClassKind, Classification, CompactnessReport, MoebiusTransform, Symbol, COMPACTNESS_RADII,
    COMPACTNESS_SAMPLES,
};
use crate::tol::Tolerances;

const TAU: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumPointKind {
    Eigenvalue,
    EssentialPoint,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumPointInfo {
    #[serde(serialize_with = "crate::serde_complex::serialize")]
    pub value: Complex64,
    pub kind: SpectrumPointKind,
    /// Eigenvalue index when applicable.
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContourPointCheck {
    #[serde(serialize_with = "crate::serde_complex::serialize")]
    pub z: Complex64,
    #[serde(serialize_with = "crate::serde_complex::serialize")]
    pub quadrature: Complex64,
    #[serde(serialize_with = "crate::serde_complex::serialize")]
    pub direct: Complex64,
    pub error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContourCheck {
    pub n: usize,
    pub nodes: usize,
    pub radius: f64,
    pub points: Vec<ContourPointCheck>,
    pub max_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub classification: Classification,
    #[serde(rename = "spectrum")]
    pub points: Vec<SpectrumPointInfo>,
    pub compact: bool,
    pub contour_checks: Vec<ContourCheck>,
    #[serde(skip)]
    pub max_n: usize,
    #[serde(skip)]
    pub compactness: CompactnessReport,
}

/// Classify the symbol and list its spectrum: the eigenvalue ladder
/// lambda_1^n (n = 0..max_n) plus the essential point 0 for Schroeder
/// symbols, {1, 0} for superattracting ones. Automorphisms and escaping
/// symbols are rejected.
pub fn spectrum_report(symbol: &Symbol, max_n: usize, tol: &Tolerances) -> Result<SpectrumReport> {
    let classification = symbol.classify(tol)?;
    let points = match classification.kind {
        ClassKind::Automorphism => return Err(Error::AutomorphismSymbol),
        ClassKind::NoInteriorFixedPoint => return Err(Error::NoInteriorFixedPoint),
        ClassKind::Superattracting => vec![
            SpectrumPointInfo {
                value: Complex64::new(1.0, 0.0),
                kind: SpectrumPointKind::Eigenvalue,
                n: Some(0),
            },
            SpectrumPointInfo {
                value: Complex64::new(0.0, 0.0),
                kind: SpectrumPointKind::EssentialPoint,
                n: None,
            },
        ],
        ClassKind::Schroeder => {
            let lambda1 = classification
                .multiplier
                .expect("Schroeder classification carries the multiplier");
            let mut pts: Vec<SpectrumPointInfo> = (0..=max_n)
                .map(|n| SpectrumPointInfo {
                    value: power(lambda1, n),
                    kind: SpectrumPointKind::Eigenvalue,
                    n: Some(n),
                })
                .collect();
            pts.push(SpectrumPointInfo {
                value: Complex64::new(0.0, 0.0),
                kind: SpectrumPointKind::EssentialPoint,
                n: None,
            });
            pts
        }
    };
    let compactness = symbol.compactness_probe(&COMPACTNESS_RADII, COMPACTNESS_SAMPLES, tol)?;
    Ok(SpectrumReport {
        classification,
        points,
        compact: compactness.compact,
        contour_checks: Vec::new(),
        max_n,
        compactness,
    })
}

/// Default contour radius around lambda_n: half the distance to the rest of
/// the spectrum ladder, where the ladder is scanned two indices past max_n
/// so the circle also clears the eigenvalues just outside the configured
/// family.
pub fn default_contour_radius(data: &SchroederData, n: usize) -> f64 {
    let lambda_n = data.koenigs().eigenvalue(n);
    let mut sep = lambda_n.norm(); // distance to the essential point 0
    for k in 0..=data.max_n() + 2 {
        if k == n {
            continue;
        }
        sep = sep.min((lambda_n - data.koenigs().eigenvalue(k)).norm());
    }
    0.5 * sep
}

/// Trapezoid quadrature of (1/2 pi i) closed-integral R(lambda) f d lambda
/// around lambda_n, evaluated at each z, against the direct projection
/// Psi_n(f) kappa(z)^n. The trapezoid rule on a circle is spectrally
/// accurate, so `nodes` at its default leaves quadrature error far below
/// the comparison tolerance; resolver failures at any node propagate.
pub fn contour_verify(
    data: &SchroederData,
    n: usize,
    f: &FunctionRep,
    zs: &[Complex64],
    nodes: usize,
    radius: Option<f64>,
) -> Result<ContourCheck> {
    if n > data.max_n() {
        return Err(Error::IndexExceeded {
            n,
            max_n: data.max_n(),
        });
    }
    if nodes < 64 {
        return Err(Error::InvalidParameter(
            "contour quadrature needs at least 64 nodes".into(),
        ));
    }
    if zs.is_empty() {
        return Err(Error::InvalidParameter(
            "contour check needs at least one evaluation point".into(),
        ));
    }
    for &z in zs {
        if !z.is_finite() || z.norm() >= 1.0 {
            return Err(Error::PointOutsideDisc { z });
        }
    }
    let max_radius = 2.0 * default_contour_radius(data, n);
    let radius = match radius {
        None => 0.5 * max_radius,
        Some(r) => {
            if !(r > 0.0 && r < max_radius) {
                return Err(Error::InvalidParameter(format!(
                    "contour radius {r} must lie in (0, {max_radius}) to separate lambda_{n}"
                )));
            }
            r
        }
    };
    let lambda_n = data.koenigs().eigenvalue(n);
    // Per node: solve (lambda_j - C_phi) f_j = f, evaluate at every z, and
    // weight by the node factor of the parametrized circle. The resolvent
    // is taken in series form, which stays accurate at nodes with modulus
    // below the multiplier where the pointwise orbit sum loses precision.
    // Nodes are independent; the final sum runs sequentially in node order
    // so the result does not depend on scheduling.
    let node_values: Vec<Vec<Complex64>> = (0..nodes)
        .into_par_iter()
        .map(|j| -> Result<Vec<Complex64>> {
            let theta = TAU * j as f64 / nodes as f64;
            let rot = Complex64::from_polar(1.0, theta);
            let lambda = lambda_n + rot * radius;
            let solved = resolve(
                data,
                &SolveRequest {
                    lambda,
                    g: f.clone(),
                    mode: SolveMode::SeriesOutput,
                },
            )?;
            let series = solved
                .series
                .expect("series mode always carries the expansion");
            Ok(zs.iter().map(|&z| series.evaluate(z) * rot).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let gs = f.taylor_at(data.koenigs().alpha(), data.order(), data.tolerances())?;
    let psi_n = data.projections().functional_value(n, &gs)?;
    let mut points = Vec::with_capacity(zs.len());
    let mut max_error: f64 = 0.0;
    for (i, &z) in zs.iter().enumerate() {
        let mut sum = Complex64::new(0.0, 0.0);
        for value in &node_values {
            sum += value[i];
        }
        let quadrature = sum * radius / nodes as f64;
        let direct = psi_n * data.koenigs().kappa_power_at(data.symbol(), n, z)?;
        let error = (quadrature - direct).norm();
        max_error = max_error.max(error);
        points.push(ContourPointCheck {
            z,
            quadrature,
            direct,
            error,
        });
    }
    Ok(ContourCheck {
        n,
        nodes,
        radius,
        points,
        max_error,
    })
}

/// Known eigenfunction family of the hyperbolic automorphism
/// psi(z) = (z + r)/(1 + r z): for g_lambda(z) = ((1 + z)/(1 - z))^lambda
/// (principal branch), g_lambda o psi = mu^lambda g_lambda with
/// mu = (1 + r)/(1 - r). Returns the max residual of that relation over the
/// grid. Grid points must stay away from the boundary fixed points +-1,
/// where the power blows up.
pub fn automorphism_eigen_fixture(r: f64, lambda: Complex64, grid: &[Complex64]) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "automorphism parameter r = {r} must lie in (0, 1)"
        )));
    }
    if !lambda.is_finite() {
        return Err(Error::NonFinite("lambda"));
    }
    let psi = MoebiusTransform {
        a: Complex64::new(-r, 0.0),
        phase: Complex64::new(1.0, 0.0),
    };
    let one = Complex64::new(1.0, 0.0);
    let g = |z: Complex64| (((one + z) / (one - z)).ln() * lambda).exp();
    let mu_lambda = (((1.0 + r) / (1.0 - r)).ln() * lambda).exp();
    let mut worst: f64 = 0.0;
    for &z in grid {
        if !z.is_finite() || z.norm() >= 1.0 {
            return Err(Error::PointOutsideDisc { z });
        }
        let w = psi.eval(z);
        if (one - z).norm() < 1e-3 || (one - w).norm() < 1e-3 {
            return Err(Error::InvalidParameter(format!(
                "grid point {z} is too close to the boundary fixed point 1"
            )));
        }
        worst = worst.max((g(w) - mu_lambda * g(z)).norm());
    }
    Ok(worst)
}

/// Weight parameters of the target space: coefficient weights (k+1)^(2a)
/// and a truncation order for the coefficient sums.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WeightedHardyParams {
    /// Weight exponent; a = 0 is the classical Hardy space, a < 0 weights
    /// high coefficients down. Positive a is not supported.
    pub a: f64,
    /// Number of eigenfunction coefficients entering the sums.
    pub truncation_k: usize,
}

impl WeightedHardyParams {
    pub fn validate(&self) -> Result<()> {
        if !self.a.is_finite() || self.a > 0.0 {
            return Err(Error::InvalidParameter(format!(
                "weight exponent a = {} must be a finite number <= 0",
                self.a
            )));
        }
        if self.truncation_k < 1000 {
            return Err(Error::InvalidParameter(format!(
                "truncation {} is too short for a trustworthy growth estimate (need >= 1000)",
                self.truncation_k
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HardyReport {
    pub p: usize,
    pub a: f64,
    pub truncation_k: usize,
    /// (K', sum of weighted coefficient moduli squared through K') at
    /// K' = K/8, K/4, K/2, K.
    pub partial_norms: Vec<(usize, f64)>,
    /// Least-squares slope of ln t_k against ln k over the window
    /// [K/8, K]; absent when the tail coefficients vanish identically
    /// (polynomial eigenfunctions), in which case membership is immediate.
    pub growth_exponent: Option<f64>,
    pub member: bool,
}

/// Membership heuristic for kappa^p in the weighted Hardy space: the terms
/// t_k = |coeff_k(kappa^p)|^2 (k+1)^(2a) are summed and their log-log slope
/// estimated on the tail window. Sum convergence needs slope < -1; the
/// verdict requires slope < -(1 + growth_margin), so decisions inside the
/// margin band report non-membership rather than guessing.
pub fn hardy_membership(
    kd: &KoenigsData,
    p: usize,
    params: &WeightedHardyParams,
    tol: &Tolerances,
) -> Result<HardyReport> {
    params.validate()?;
    if p < 1 {
        return Err(Error::InvalidParameter("power p must be at least 1".into()));
    }
    let k_max = params.truncation_k;
    if kd.order() < k_max {
        return Err(Error::InsufficientOrder {
            have: kd.order(),
            need: k_max,
        });
    }
    let mut kappa_p = kd.kappa_power(0)?.clone();
    for _ in 0..p {
        kappa_p = kappa_p.mul(kd.kappa())?;
    }
    let t: Vec<f64> = (0..=k_max)
        .map(|k| kappa_p.coeff(k).norm_sqr() * ((k + 1) as f64).powf(2.0 * params.a))
        .collect();
    let partial_norms: Vec<(usize, f64)> = [k_max / 8, k_max / 4, k_max / 2, k_max]
        .iter()
        .map(|&kp| (kp, t[..=kp].iter().sum()))
        .collect();
    let window: Vec<(f64, f64)> = (k_max / 8..=k_max)
        .filter(|&k| k >= 1 && t[k] > 0.0)
        .map(|k| ((k as f64).ln(), t[k].ln()))
        .collect();
    if window.len() < 8 {
        // The tail has no mass at all; the weighted sum is a finite sum.
        return Ok(HardyReport {
            p,
            a: params.a,
            truncation_k: k_max,
            partial_norms,
            growth_exponent: None,
            member: true,
        });
    }
    let n = window.len() as f64;
    let mean_x = window.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = window.iter().map(|(_, y)| y).sum::<f64>() / n;
    let sxx: f64 = window.iter().map(|(x, _)| (x - mean_x).powi(2)).sum();
    let sxy: f64 = window
        .iter()
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let slope = sxy / sxx;
    Ok(HardyReport {
        p,
        a: params.a,
        truncation_k: k_max,
        partial_norms,
        growth_exponent: Some(slope),
        member: slope < -(1.0 + tol.growth_margin),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HurstReference {
    /// lambda_1^((2|a| + 1)/2), the reference essential radius for the
    /// weighted space with exponent a.
    pub essential_radius: f64,
    pub multiplier: f64,
    /// (n, lambda_1^n) for the eigenvalues strictly outside that radius.
    pub eigenvalues_outside: Vec<(usize, f64)>,
}

/// Reference essential radius of the composition operator on the weighted
/// space, for Schroeder symbols with real multiplier in (0, 1).
pub fn hurst_reference(
    symbol: &Symbol,
    a: f64,
    max_n: usize,
    tol: &Tolerances,
) -> Result<HurstReference> {
    if !a.is_finite() || a > 0.0 {
        return Err(Error::InvalidParameter(format!(
            "weight exponent a = {a} must be a finite number <= 0"
        )));
    }
    let cls = symbol.classify(tol)?;
    if cls.kind != ClassKind::Schroeder {
        return Err(Error::NotSchroeder {
            found: cls.kind.name(),
        });
    }
    let multiplier = cls.multiplier.expect("Schroeder carries a multiplier");
    if multiplier.im.abs() > 1e-12 || multiplier.re <= 0.0 || multiplier.re >= 1.0 {
        return Err(Error::NotRealMultiplier { multiplier });
    }
    let lambda1 = multiplier.re;
    let essential_radius = lambda1.powf((2.0 * a.abs() + 1.0) / 2.0);
    let mut eigenvalues_outside = Vec::new();
    let mut lam_pow = 1.0;
    for n in 0..=max_n {
        if lam_pow > essential_radius {
            eigenvalues_outside.push((n, lam_pow));
        }
        lam_pow *= lambda1;
    }
    Ok(HurstReference {
        essential_radius,
        multiplier: lambda1,
        eigenvalues_outside,
    })
}
