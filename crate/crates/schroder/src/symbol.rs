//! Validated holomorphic self-maps of the unit disc and their
//! classification.
//!
//! A `Symbol` is a rational function that passed three gates: pole-free on
//! the closed disc, boundary supremum at most one, and finite coefficients.
//! Classification then sorts accepted symbols by their fixed-point
//! structure: disc automorphisms, maps with an attracting interior fixed
//! point and multiplier 0 < |lambda| < 1 (the Schroeder class), maps with a
//! superattracting interior fixed point, and maps whose orbits escape to
//! the boundary.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{poly, RationalFunction};
use crate::series::TruncatedPowerSeries;
use crate::tol::Tolerances;

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// z -> phase * (z - a)/(1 - conj(a) z) with |a| < 1 and |phase| = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusTransform {
    pub a: Complex64,
    pub phase: Complex64,
}

impl MoebiusTransform {
    /// The self-inverse disc involution psi_a(z) = (a - z)/(1 - conj(a) z)
    /// swapping a and 0.
    pub fn involution(a: Complex64) -> Self {
        MoebiusTransform {
            a,
            phase: Complex64::new(-1.0, 0.0),
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.phase * (z - self.a) / (Complex64::new(1.0, 0.0) - self.a.conj() * z)
    }

    /// Ascending numerator and denominator coefficients.
    pub fn as_rational(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        (
            vec![-self.phase * self.a, self.phase],
            vec![Complex64::new(1.0, 0.0), -self.a.conj()],
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassKind {
    Automorphism,
    Schroeder,
    Superattracting,
    NoInteriorFixedPoint,
}

impl ClassKind {
    pub fn name(&self) -> &'static str {
        match self {
            ClassKind::Automorphism => "automorphism",
            ClassKind::Schroeder => "schroeder",
            ClassKind::Superattracting => "superattracting",
            ClassKind::NoInteriorFixedPoint => "no_interior_fixed_point",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Classification {
    pub kind: ClassKind,
    /// Interior fixed point, absent for automorphisms and escaping maps.
    #[serde(serialize_with = "crate::serde_complex::serialize_opt")]
    pub alpha: Option<Complex64>,
    /// phi'(alpha), absent when alpha is.
    #[serde(serialize_with = "crate::serde_complex::serialize_opt")]
    pub multiplier: Option<Complex64>,
}

/// Per-circle supremum estimates and the resulting verdict.
#[derive(Debug, Clone, Serialize)]
pub struct CompactnessReport {
    /// (radius, sup of |phi| over that circle), ascending radii; the last
    /// entry is the boundary circle r = 1.
    pub circle_sups: Vec<(f64, f64)>,
    pub sup_estimate: f64,
    pub compact: bool,
}

/// Sup of |f| over the circle of the given radius: coarse scan plus three
/// rounds of local refinement around the best sample.
fn circle_sup(f: &RationalFunction, radius: f64, coarse: usize) -> f64 {
    let m = coarse.max(16);
    let value = |theta: f64| f.eval(Complex64::from_polar(radius, theta)).norm();
    let mut best_theta = 0.0;
    let mut best = f64::MIN;
    for j in 0..m {
        let theta = TAU * j as f64 / m as f64;
        let v = value(theta);
        if v > best {
            best = v;
            best_theta = theta;
        }
    }
    let mut window = TAU / m as f64;
    for _ in 0..3 {
        let lo = best_theta - window;
        for j in 0..=64 {
            let theta = lo + 2.0 * window * j as f64 / 64.0;
            let v = value(theta);
            if v > best {
                best = v;
                best_theta = theta;
            }
        }
        window /= 32.0;
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    f: RationalFunction,
}

impl Symbol {
    /// Validate a candidate self-map. Rejections: non-finite input, poles in
    /// the closed disc (after near-common-factor cancellation), and boundary
    /// supremum above 1 + selfmap_margin.
    pub fn new(num: Vec<Complex64>, den: Vec<Complex64>, tol: &Tolerances) -> Result<Self> {
        let f = RationalFunction::new(num, den, tol.pole_margin, tol.common_root)?;
        let sup = circle_sup(&f, 1.0, 2048);
        if sup > 1.0 + tol.selfmap_margin {
            return Err(Error::NotSelfMap { sup });
        }
        Ok(Symbol { f })
    }

    pub fn rational(&self) -> &RationalFunction {
        &self.f
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.f.eval(z)
    }

    pub fn eval_derivative(&self, z: Complex64) -> Complex64 {
        self.f.eval_derivative(z)
    }

    pub fn taylor_at(
        &self,
        center: Complex64,
        order: usize,
        tol: &Tolerances,
    ) -> Result<TruncatedPowerSeries> {
        self.f.taylor_at(center, order, tol.reciprocal)
    }

    /// k-fold composition applied to a point.
    pub fn iterate(&self, k: usize, z: Complex64) -> Complex64 {
        let mut w = z;
        for _ in 0..k {
            w = self.eval(w);
        }
        w
    }

    /// Attracting interior fixed point by forward iteration from 0, with a
    /// Newton polish once the orbit settles. Orbit points reaching modulus
    /// 1 - boundary_margin mean the Denjoy-Wolff point lies on the boundary.
    pub fn find_interior_fixed_point(&self, tol: &Tolerances) -> Result<Complex64> {
        let cap = 100_000usize;
        let mut z = Complex64::new(0.0, 0.0);
        let mut newton_threshold = 1e-4;
        for _ in 0..cap {
            let fz = self.eval(z);
            if !fz.is_finite() {
                return Err(Error::NonConvergence("orbit left the domain"));
            }
            if (fz - z).norm() <= newton_threshold {
                if let Some(alpha) = self.newton_fixed_point(fz, tol) {
                    return Ok(alpha);
                }
                // Not yet in the Newton basin; demand a tighter orbit first.
                newton_threshold *= 1e-2;
            }
            if fz.norm() >= 1.0 - tol.boundary_margin {
                return Err(Error::NoInteriorFixedPoint);
            }
            z = fz;
        }
        Err(Error::NonConvergence("fixed-point orbit cap exceeded"))
    }

    fn newton_fixed_point(&self, start: Complex64, tol: &Tolerances) -> Option<Complex64> {
        let mut z = start;
        for _ in 0..100 {
            let residual = self.eval(z) - z;
            if residual.norm() <= tol.fixed_point_residual {
                if z.norm() < 1.0 - tol.boundary_margin {
                    return Some(z);
                }
                return None;
            }
            let d = self.eval_derivative(z) - Complex64::new(1.0, 0.0);
            if d.norm() < 1e-14 {
                return None;
            }
            z -= residual / d;
            if !z.is_finite() || z.norm() >= 1.0 {
                return None;
            }
        }
        None
    }

    /// Recognize a disc automorphism by its normal form: degree one over
    /// degree one, unimodular coefficient ratio, and the reflected
    /// denominator root. Returns the normal form when matched.
    pub fn automorphism_normal_form(&self, tol: &Tolerances) -> Option<MoebiusTransform> {
        let num = self.f.num();
        let den = self.f.den();
        if num.len() > 2 || den.len() > 2 {
            return None;
        }
        let q0 = den[0];
        let p0 = num[0] / q0;
        let p1 = num.get(1).map(|&c| c / q0).unwrap_or_default();
        let q1 = den.get(1).map(|&c| c / q0).unwrap_or_default();
        if (p1.norm() - 1.0).abs() > tol.automorphism_match {
            return None;
        }
        let a = -p0 / p1;
        if a.norm() >= 1.0 {
            return None;
        }
        if (q1 + a.conj()).norm() > tol.automorphism_match {
            return None;
        }
        Some(MoebiusTransform { a, phase: p1 })
    }

    /// Sort the symbol into its operator class. Automorphism detection runs
    /// first; otherwise the interior fixed point and its multiplier decide.
    /// Multipliers within near_unit of the unit circle are rejected because
    /// no stable classification exists there; by the Schwarz lemma every
    /// accepted interior multiplier then satisfies |lambda| < 1.
    pub fn classify(&self, tol: &Tolerances) -> Result<Classification> {
        if self.automorphism_normal_form(tol).is_some() {
            return Ok(Classification {
                kind: ClassKind::Automorphism,
                alpha: None,
                multiplier: None,
            });
        }
        let alpha = match self.find_interior_fixed_point(tol) {
            Ok(alpha) => alpha,
            Err(Error::NoInteriorFixedPoint) => {
                return Ok(Classification {
                    kind: ClassKind::NoInteriorFixedPoint,
                    alpha: None,
                    multiplier: None,
                })
            }
            Err(e) => return Err(e),
        };
        let multiplier = self.eval_derivative(alpha);
        if multiplier.norm() <= tol.zero_multiplier {
            return Ok(Classification {
                kind: ClassKind::Superattracting,
                alpha: Some(alpha),
                multiplier: Some(multiplier),
            });
        }
        if (multiplier.norm() - 1.0).abs() <= tol.near_unit {
            return Err(Error::NearUnitMultiplier { multiplier });
        }
        assert!(
            multiplier.norm() < 1.0,
            "interior fixed point of a validated non-automorphism must be attracting"
        );
        Ok(Classification {
            kind: ClassKind::Schroeder,
            alpha: Some(alpha),
            multiplier: Some(multiplier),
        })
    }

    /// Exact conjugation psi_a . phi . psi_a as a rational function: with
    /// phi = A/B in the shifted coordinates, the result is
    /// (a B - A)/(B - conj(a) A). No series approximation is involved; the
    /// result passes full symbol validation again.
    pub fn conjugate_by_involution(&self, a: Complex64, tol: &Tolerances) -> Result<Symbol> {
        if a.norm() >= 1.0 {
            return Err(Error::PointOutsideDisc { z: a });
        }
        let d = self.f.degree();
        let mut num = self.f.num().to_vec();
        let mut den = self.f.den().to_vec();
        num.resize(d + 1, Complex64::new(0.0, 0.0));
        den.resize(d + 1, Complex64::new(0.0, 0.0));

        // psi_a = P/Q with P = a - z, Q = 1 - conj(a) z.
        let p = vec![a, Complex64::new(-1.0, 0.0)];
        let q = vec![Complex64::new(1.0, 0.0), -a.conj()];
        let mut p_pows: Vec<Vec<Complex64>> = vec![vec![Complex64::new(1.0, 0.0)]];
        let mut q_pows: Vec<Vec<Complex64>> = vec![vec![Complex64::new(1.0, 0.0)]];
        for j in 1..=d {
            p_pows.push(poly::mul(&p_pows[j - 1], &p));
            q_pows.push(poly::mul(&q_pows[j - 1], &q));
        }
        let mut a_poly = vec![Complex64::new(0.0, 0.0); d + 1];
        let mut b_poly = vec![Complex64::new(0.0, 0.0); d + 1];
        for j in 0..=d {
            let term = poly::mul(&p_pows[j], &q_pows[d - j]);
            for (k, &t) in term.iter().enumerate() {
                if k <= d {
                    a_poly[k] += num[j] * t;
                    b_poly[k] += den[j] * t;
                }
            }
        }
        let new_num: Vec<Complex64> = a_poly
            .iter()
            .zip(&b_poly)
            .map(|(&x, &y)| a * y - x)
            .collect();
        let new_den: Vec<Complex64> = a_poly
            .iter()
            .zip(&b_poly)
            .map(|(&x, &y)| y - a.conj() * x)
            .collect();
        Symbol::new(new_num, new_den, tol)
    }

    /// Move a verified interior fixed point to the origin. The candidate
    /// must satisfy |phi(alpha) - alpha| <= fixed_point_check; alpha within
    /// 1e-15 of 0 returns the symbol unchanged.
    pub fn conjugate_to_origin(&self, alpha: Complex64, tol: &Tolerances) -> Result<Symbol> {
        let residual = (self.eval(alpha) - alpha).norm();
        if residual > tol.fixed_point_check {
            return Err(Error::NotAFixedPoint { residual });
        }
        if alpha.norm() <= 1e-15 {
            return Ok(self.clone());
        }
        self.conjugate_by_involution(alpha, tol)
    }

    /// Sample |phi| on a ladder of interior circles plus the boundary
    /// circle. Validated symbols are continuous on the closed disc and the
    /// maximum principle puts the sup on the boundary, so the boundary
    /// circle decides the verdict while the interior circles show how the
    /// modulus approaches it.
    pub fn compactness_probe(
        &self,
        radii: &[f64],
        samples: usize,
        tol: &Tolerances,
    ) -> Result<CompactnessReport> {
        if radii.is_empty() {
            return Err(Error::InvalidParameter("need at least one radius".into()));
        }
        if samples < 16 {
            return Err(Error::InvalidParameter(
                "need at least 16 samples per circle".into(),
            ));
        }
        let mut prev = 0.0;
        for &r in radii {
            if !(r > 0.0 && r < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "interior radius {r} must lie in (0, 1)"
                )));
            }
            if r <= prev {
                return Err(Error::InvalidParameter(
                    "radii must be strictly increasing".into(),
                ));
            }
            prev = r;
        }
        let mut circle_sups: Vec<(f64, f64)> = radii
            .iter()
            .map(|&r| (r, circle_sup(&self.f, r, samples)))
            .collect();
        circle_sups.push((1.0, circle_sup(&self.f, 1.0, samples)));
        let sup_estimate = circle_sups
            .iter()
            .map(|&(_, s)| s)
            .fold(0.0, f64::max);
        Ok(CompactnessReport {
            circle_sups,
            sup_estimate,
            compact: sup_estimate < 1.0 - tol.compactness_margin,
        })
    }
}

/// Default interior radii for the compactness probe.
pub const COMPACTNESS_RADII: [f64; 4] = [0.9, 0.99, 0.999, 0.9999];

/// Default number of samples per probe circle.
pub const COMPACTNESS_SAMPLES: usize = 720;
