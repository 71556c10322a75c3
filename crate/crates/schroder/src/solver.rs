//! Resolvent of the composition operator: the non-homogeneous equation
//! lambda f - f(phi(z)) = g(z).
//!
//! The solution splits along the spectral projections: the components of g
//! on kappa^0..kappa^n are inverted diagonally (a_m/(lambda - lambda_m)
//! kappa^m), and the remainder g_2, which vanishes to order n at the fixed
//! point, is summed along forward orbits as sum_k g_2(phi_k(z))/lambda^{k+1}.
//! The split order n and a witness radius epsilon are chosen so the orbit
//! sum contracts with ratio q^{n+1}/|lambda| <= 1 - q_margin, where q is the
//! sampled modulus ratio of the conjugated symbol on the circle of radius
//! epsilon. Every returned solution is audited against the equation on a
//! fixed 50-point grid; residuals above solver_residual are a hard error.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::func::FunctionRep;
use crate::koenigs::{build_koenigs, power, sample_grid, KoenigsData};
use crate::projections::{build_projection_family, ProjectionFamily};
use crate::series::TruncatedPowerSeries;
use crate::symbol::{ClassKind, Symbol};
use crate::tol::Tolerances;

const ORBIT_CAP: usize = 100_000;
const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Everything the spectral operations need about one Schroeder symbol:
/// classification, Koenigs data, projection family, the conjugated symbol
/// fixing the origin, and the shared series order.
#[derive(Debug)]
pub struct SchroederData {
    symbol: Symbol,
    koenigs: KoenigsData,
    projections: ProjectionFamily,
    conjugated: Symbol,
    phi_series: TruncatedPowerSeries,
    order: usize,
    max_n: usize,
    tol: Tolerances,
    /// (epsilon, sampled q) pairs on the halving ladder, built on first use.
    q_ladder: OnceLock<Vec<(f64, f64)>>,
}

impl SchroederData {
    pub fn build(symbol: &Symbol, order: usize, max_n: usize, tol: &Tolerances) -> Result<Self> {
        if max_n < 1 {
            return Err(Error::InvalidParameter("max_n must be at least 1".into()));
        }
        let koenigs = build_koenigs(symbol, order, max_n, tol)?;
        let projections = build_projection_family(&koenigs, max_n)?;
        let conjugated = symbol.conjugate_to_origin(koenigs.alpha(), tol)?;
        let phi_series = symbol.taylor_at(koenigs.alpha(), order, tol)?;
        Ok(SchroederData {
            symbol: symbol.clone(),
            koenigs,
            projections,
            conjugated,
            phi_series,
            order,
            max_n,
            tol: tol.clone(),
            q_ladder: OnceLock::new(),
        })
    }

    pub fn symbol(&self) -> &Symbol {
        &self.symbol
    }

    pub fn koenigs(&self) -> &KoenigsData {
        &self.koenigs
    }

    pub fn projections(&self) -> &ProjectionFamily {
        &self.projections
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn phi_series(&self) -> &TruncatedPowerSeries {
        &self.phi_series
    }

    /// Sampled contraction ratio sup |phi_tilde(eps e^{i theta})| / eps of
    /// the conjugated symbol, 720 points.
    fn q_of(&self, eps: f64) -> f64 {
        (0..720)
            .map(|j| {
                let z = Complex64::from_polar(eps, TAU * j as f64 / 720.0);
                self.conjugated.eval(z).norm() / eps
            })
            .fold(0.0, f64::max)
    }

    fn q_ladder(&self) -> &[(f64, f64)] {
        self.q_ladder.get_or_init(|| {
            let mut out = Vec::new();
            let mut eps = 0.5;
            while eps >= 1e-6 {
                out.push((eps, self.q_of(eps)));
                eps /= 2.0;
            }
            out
        })
    }

    /// Smallest split order n >= n_start (escalating up to max_n) and
    /// largest ladder epsilon with q(eps)^{n+1} < (1 - q_margin) |lambda|.
    pub(crate) fn tail_parameters(
        &self,
        abs_lambda: f64,
        n_start: usize,
    ) -> Result<(usize, f64, f64)> {
        for n in n_start..=self.max_n {
            for &(eps, q) in self.q_ladder() {
                if q < 1.0 && q.powi(n as i32 + 1) < (1.0 - self.tol.q_margin) * abs_lambda {
                    return Ok((n, eps, q));
                }
            }
        }
        Err(Error::NonConvergence(
            "no split order with a contracting orbit remainder",
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    SeriesOutput,
    PointwiseOutput,
}

#[derive(Debug, Clone)]
pub struct SolveRequest {
    pub lambda: Complex64,
    pub g: FunctionRep,
    pub mode: SolveMode,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Diagnostics {
    /// Split order actually used for the orbit remainder.
    pub n_used: usize,
    /// Witness radius for the contraction estimate (absent for the
    /// superattracting solver, which needs no split search).
    pub epsilon: Option<f64>,
    /// Sampled contraction ratio at that radius.
    pub q: Option<f64>,
    /// Series mode: orbit terms accumulated into the series. Pointwise
    /// mode: the largest orbit length needed during the residual audit.
    pub terms_summed: usize,
    /// Audited max of |lambda f(z) - f(phi(z)) - g(z)| over the fixed grid.
    pub residual: f64,
}

/// Closed-form pointwise solution: a finite kappa-power part plus an orbit
/// sum of the projected remainder. Valid at any point of the open disc.
#[derive(Debug, Clone)]
pub struct SolutionEvaluator {
    symbol: Symbol,
    lambda: Complex64,
    /// (m, a_m/(lambda - lambda_m)) diagonal coefficients.
    diag: Vec<(usize, Complex64)>,
    /// (m, a_m) spectral components subtracted from g to form the remainder.
    sub: Vec<(usize, Complex64)>,
    g: FunctionRep,
    /// Present for Schroeder symbols; the superattracting solver only uses
    /// the m = 0 component, where kappa^0 = 1 needs no eigenfunction.
    koenigs: Option<KoenigsData>,
    term_stop: f64,
}

impl SolutionEvaluator {
    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.eval_counted(z).map(|(v, _)| v)
    }

    /// Evaluate and report how many orbit terms the tail needed.
    ///
    /// Powers of lambda are tracked in log/phase form: the quotient
    /// g_2(phi_k(z))/lambda^{k+1} stays accurate even when numerator and
    /// denominator leave the representable range individually, as happens
    /// for small |lambda| with slowly contracting remainders.
    pub fn eval_counted(&self, z: Complex64) -> Result<(Complex64, usize)> {
        if !z.is_finite() || z.norm() >= 1.0 {
            return Err(Error::PointOutsideDisc { z });
        }
        let (kappa_z, lambda1) = match &self.koenigs {
            Some(kd) => (kd.kappa_at(&self.symbol, z)?, kd.lambda1()),
            None => (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
        };
        let mut value = Complex64::new(0.0, 0.0);
        for &(m, c) in &self.diag {
            debug_assert!(m == 0 || self.koenigs.is_some());
            value += c * power(kappa_z, m);
        }
        let abs_lambda = self.lambda.norm();
        let unit = self.lambda / abs_lambda;
        let log_abs = abs_lambda.ln();
        let mut unit_pow = unit; // (lambda/|lambda|)^{k+1}
        let mut log_pow = log_abs; // (k+1) ln |lambda|
        let mut w = z;
        // kappa(phi_k(z)) = lambda_1^k kappa(z): the eigen relation replaces
        // per-point pull-backs along the tail orbit.
        let mut kappa_w = kappa_z;
        let mut below = 0usize;
        let mut terms = 0usize;
        let mut min_term = f64::INFINITY;
        let mut prev_mag = f64::INFINITY;
        let mut growing = 0usize;
        loop {
            let mut g2 = self.g.eval(w);
            for &(m, a) in &self.sub {
                g2 -= a * power(kappa_w, m);
            }
            let term = if g2.norm() == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                let log_term = g2.norm().ln() - log_pow;
                if log_term < -745.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    (g2 / g2.norm()) * unit_pow.conj() * log_term.exp()
                }
            };
            value += term;
            terms += 1;
            // Two consecutive negligible terms end the sum; a single small
            // term may be an isolated near-zero of the remainder.
            if term.norm() < self.term_stop * value.norm().max(1.0) {
                below += 1;
                if below >= 2 {
                    break;
                }
            } else {
                below = 0;
            }
            // The exact terms decrease geometrically, but the computed
            // remainder carries evaluation roundoff that 1/lambda^k
            // amplifies when |lambda| < 1. A run of strictly growing terms
            // past the running minimum is that noise taking over; the
            // partial sum is then as accurate as the data allows, and the
            // residual audit grades it.
            let mag = term.norm();
            if mag < min_term {
                min_term = mag;
                growing = 0;
            } else if terms >= 8 && mag > prev_mag && mag > 1.25 * min_term {
                growing += 1;
                if growing >= 3 {
                    break;
                }
            } else {
                growing = 0;
            }
            prev_mag = mag;
            if terms >= ORBIT_CAP {
                return Err(Error::NonConvergence("orbit sum did not settle"));
            }
            w = self.symbol.eval(w);
            kappa_w *= lambda1;
            unit_pow *= unit;
            log_pow += log_abs;
        }
        Ok((value, terms))
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    /// Truncated expansion of the solution about the fixed point. Present
    /// in series mode, and always for eigenvalue-case solves (the kernel
    /// audit needs it).
    pub series: Option<TruncatedPowerSeries>,
    pub evaluator: SolutionEvaluator,
    pub diagnostics: Diagnostics,
}

/// Series tail sum_k (g_2 o phi_k)/lambda^{k+1} by repeated composition
/// with the symbol expansion, stopping once an increment has no coefficient
/// above series_increment.
fn series_tail(
    g2: &TruncatedPowerSeries,
    phi_series: &TruncatedPowerSeries,
    lambda: Complex64,
    tol: &Tolerances,
) -> Result<(TruncatedPowerSeries, usize)> {
    let inv_lambda = Complex64::new(1.0, 0.0) / lambda;
    let mut acc = TruncatedPowerSeries::zero(g2.center(), g2.order());
    // The increment itself is iterated, composing and rescaling in one
    // step: a slow tail runs for hundreds of terms, and the orbit term and
    // the power of lambda would each leave the representable range
    // separately long before the increment, which stays at summand scale,
    // falls under the stopping threshold.
    let mut increment = g2.scale(inv_lambda);
    let mut terms = 0usize;
    loop {
        acc = acc.add(&increment)?;
        terms += 1;
        if increment.max_coeff_norm() < tol.series_increment {
            break;
        }
        if terms >= ORBIT_CAP {
            return Err(Error::NonConvergence("series tail did not settle"));
        }
        increment = increment
            .compose(phi_series, tol.compose_center)?
            .scale(inv_lambda);
    }
    Ok((acc, terms))
}

/// Max equation residual over the audit grid; `f` evaluates the candidate
/// solution.
fn residual_over_grid(
    mut f: impl FnMut(Complex64) -> Result<Complex64>,
    symbol: &Symbol,
    g: &FunctionRep,
    lambda: Complex64,
    grid: &[Complex64],
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &z in grid {
        let fz = f(z)?;
        let f_phi_z = f(symbol.eval(z))?;
        worst = worst.max((lambda * fz - f_phi_z - g.eval(z)).norm());
    }
    Ok(worst)
}

fn audit_grid(alpha: Complex64, radius: f64) -> Vec<Complex64> {
    sample_grid(alpha, 0.9 * radius, 50)
}

struct AssembledSolve {
    series: Option<TruncatedPowerSeries>,
    evaluator: SolutionEvaluator,
    n_used: usize,
    epsilon: f64,
    q: f64,
    series_terms: usize,
}

/// Common assembly for both regular and eigenvalue-case solves: build the
/// diagonal part, the remainder subtraction list, the evaluator, and (when
/// requested) the series.
fn assemble(
    data: &SchroederData,
    lambda: Complex64,
    g: &FunctionRep,
    gs: &TruncatedPowerSeries,
    skip: Option<usize>,
    nsplit: usize,
    epsilon: f64,
    q: f64,
    want_series: bool,
) -> Result<AssembledSolve> {
    let mut diag = Vec::with_capacity(nsplit + 1);
    let mut sub = Vec::with_capacity(nsplit + 1);
    for m in 0..=nsplit {
        let am = data.projections.functional_value(m, gs)?;
        sub.push((m, am));
        if Some(m) == skip {
            continue;
        }
        let divisor = lambda - data.koenigs.eigenvalue(m);
        if divisor.norm() < data.tol.small_divisor {
            return Err(Error::SmallDivisor {
                value: divisor.norm(),
                cutoff: data.tol.small_divisor,
            });
        }
        diag.push((m, am / divisor));
    }
    let evaluator = SolutionEvaluator {
        symbol: data.symbol.clone(),
        lambda,
        diag: diag.clone(),
        sub: sub.clone(),
        g: g.clone(),
        koenigs: Some(data.koenigs.clone()),
        term_stop: data.tol.term_stop,
    };
    let mut series = None;
    let mut series_terms = 0usize;
    if want_series {
        let mut g2 = gs.clone();
        for &(m, a) in &sub {
            g2 = g2.sub(&data.koenigs.kappa_power(m)?.scale(a))?;
        }
        // Coefficients up to the split order vanish identically; the
        // subtraction leaves roundoff there, and composing with the symbol
        // decays those modes slower than 1/lambda^k grows, so they must be
        // exactly zero before the tail is summed.
        for m in 0..=nsplit {
            g2 = g2.with_coeff(m, Complex64::new(0.0, 0.0));
        }
        let mut f = TruncatedPowerSeries::zero(gs.center(), gs.order());
        for &(m, c) in &diag {
            f = f.add(&data.koenigs.kappa_power(m)?.scale(c))?;
        }
        let (tail, terms) = series_tail(&g2, &data.phi_series, lambda, &data.tol)?;
        f = f.add(&tail)?;
        series = Some(f);
        series_terms = terms;
    }
    Ok(AssembledSolve {
        series,
        evaluator,
        n_used: nsplit,
        epsilon,
        q,
        series_terms,
    })
}

/// Audit an assembled solve and package the result. Series-mode results are
/// audited through the series itself; pointwise results through the orbit
/// evaluator.
fn finish(
    data: &SchroederData,
    g: &FunctionRep,
    lambda: Complex64,
    assembled: AssembledSolve,
    mode: SolveMode,
) -> Result<SolveResult> {
    let grid = audit_grid(data.koenigs.alpha(), data.koenigs.eval_radius());
    let mut max_terms = assembled.series_terms;
    let residual = match (&assembled.series, mode) {
        (Some(series), SolveMode::SeriesOutput) => {
            residual_over_grid(|z| Ok(series.evaluate(z)), &data.symbol, g, lambda, &grid)?
        }
        _ => residual_over_grid(
            |z| {
                let (v, terms) = assembled.evaluator.eval_counted(z)?;
                max_terms = max_terms.max(terms);
                Ok(v)
            },
            &data.symbol,
            g,
            lambda,
            &grid,
        )?,
    };
    if residual > data.tol.solver_residual {
        return Err(Error::ResidualTooLarge {
            residual,
            tol: data.tol.solver_residual,
        });
    }
    Ok(SolveResult {
        series: assembled.series,
        evaluator: assembled.evaluator,
        diagnostics: Diagnostics {
            n_used: assembled.n_used,
            epsilon: Some(assembled.epsilon),
            q: Some(assembled.q),
            terms_summed: max_terms,
            residual,
        },
    })
}

/// Solve lambda f - f o phi = g for lambda off the spectrum ladder.
pub fn resolve(data: &SchroederData, req: &SolveRequest) -> Result<SolveResult> {
    let lambda = req.lambda;
    if !lambda.is_finite() {
        return Err(Error::NonFinite("lambda"));
    }
    if lambda.norm() == 0.0 {
        return Err(Error::ZeroLambda);
    }
    for k in 0..=data.max_n {
        if (lambda - data.koenigs.eigenvalue(k)).norm() < data.tol.eigen_sep {
            return Err(Error::EigenvalueCollision { n: k });
        }
    }
    let abs_l1 = data.koenigs.lambda1().norm();
    let cutoff = abs_l1.powi(data.max_n as i32 + 1);
    if lambda.norm() <= cutoff {
        return Err(Error::LambdaTooSmall {
            modulus: lambda.norm(),
            cutoff,
        });
    }
    let n_start = (0..=data.max_n)
        .find(|&n| abs_l1.powi(n as i32 + 1) < lambda.norm())
        .expect("cutoff check guarantees a starting split order");
    let (nsplit, eps, q) = data.tail_parameters(lambda.norm(), n_start)?;
    let gs = req.g.taylor_at(data.koenigs.alpha(), data.order, &data.tol)?;
    let assembled = assemble(
        data,
        lambda,
        &req.g,
        &gs,
        None,
        nsplit,
        eps,
        q,
        req.mode == SolveMode::SeriesOutput,
    )?;
    finish(data, &req.g, lambda, assembled, req.mode)
}

/// Solve at the eigenvalue lambda_n itself. The right side must satisfy the
/// solvability condition Psi_n(g) = 0; the returned solution is the unique
/// one in the kernel of P_n, which is audited on the series.
pub fn resolve_at_eigenvalue(
    data: &SchroederData,
    n: usize,
    g: &FunctionRep,
    mode: SolveMode,
) -> Result<SolveResult> {
    if n > data.max_n {
        return Err(Error::IndexExceeded {
            n,
            max_n: data.max_n,
        });
    }
    let lambda = data.koenigs.eigenvalue(n);
    let gs = g.taylor_at(data.koenigs.alpha(), data.order, &data.tol)?;
    let along_eigenvector = data.projections.functional_value(n, &gs)?.norm();
    if along_eigenvector > data.tol.projection_compat {
        return Err(Error::IncompatibleRhs {
            magnitude: along_eigenvector,
        });
    }
    let (nsplit, eps, q) = data.tail_parameters(lambda.norm(), n)?;
    // The series is always produced here: the kernel audit reads it.
    let assembled = assemble(data, lambda, g, &gs, Some(n), nsplit, eps, q, true)?;
    let series = assembled.series.as_ref().expect("series was requested");
    let in_image = data.projections.functional_value(n, series)?.norm();
    if in_image > data.tol.projection_compat {
        return Err(Error::Postcondition {
            check: "solution lies in ker P_n",
            value: in_image,
            tol: data.tol.projection_compat,
        });
    }
    finish(data, g, lambda, assembled, mode)
}

/// Solve lambda f - f o phi = g for a superattracting symbol, whose
/// operator spectrum is {0, 1}: f = g(alpha)/(lambda - 1) plus the orbit
/// sum of g - g(alpha).
pub fn resolve_superattracting(
    symbol: &Symbol,
    order: usize,
    tol: &Tolerances,
    req: &SolveRequest,
) -> Result<SolveResult> {
    let cls = symbol.classify(tol)?;
    if cls.kind != ClassKind::Superattracting {
        return Err(Error::WrongClassification {
            expected: "superattracting",
            found: cls.kind.name(),
        });
    }
    let alpha = cls.alpha.expect("superattracting classification carries alpha");
    let lambda = req.lambda;
    if !lambda.is_finite() {
        return Err(Error::NonFinite("lambda"));
    }
    if lambda.norm() <= tol.eigen_sep || (lambda - Complex64::new(1.0, 0.0)).norm() <= tol.eigen_sep
    {
        return Err(Error::SpectrumPoint { lambda });
    }
    let g_alpha = req.g.eval(alpha);
    let constant = g_alpha / (lambda - Complex64::new(1.0, 0.0));
    let evaluator = SolutionEvaluator {
        symbol: symbol.clone(),
        lambda,
        diag: vec![(0, constant)],
        sub: vec![(0, g_alpha)],
        g: req.g.clone(),
        koenigs: None,
        term_stop: tol.term_stop,
    };
    let mut series = None;
    let mut series_terms = 0usize;
    if req.mode == SolveMode::SeriesOutput {
        let gs = req.g.taylor_at(alpha, order, tol)?;
        let g1 = gs.sub(&TruncatedPowerSeries::constant(alpha, g_alpha, order)?)?;
        let phi_series = symbol.taylor_at(alpha, order, tol)?;
        let (tail, terms) = series_tail(&g1, &phi_series, lambda, tol)?;
        series = Some(tail.add(&TruncatedPowerSeries::constant(alpha, constant, order)?)?);
        series_terms = terms;
    }
    let radius = tol.eval_radius_factor * (1.0 - alpha.norm());
    let grid = audit_grid(alpha, radius);
    let mut max_terms = series_terms;
    let residual = match (&series, req.mode) {
        (Some(s), SolveMode::SeriesOutput) => {
            residual_over_grid(|z| Ok(s.evaluate(z)), symbol, &req.g, lambda, &grid)?
        }
        _ => residual_over_grid(
            |z| {
                let (v, terms) = evaluator.eval_counted(z)?;
                max_terms = max_terms.max(terms);
                Ok(v)
            },
            symbol,
            &req.g,
            lambda,
            &grid,
        )?,
    };
    if residual > tol.solver_residual {
        return Err(Error::ResidualTooLarge {
            residual,
            tol: tol.solver_residual,
        });
    }
    Ok(SolveResult {
        series,
        evaluator,
        diagnostics: Diagnostics {
            n_used: 0,
            epsilon: None,
            q: None,
            terms_summed: max_terms,
            residual,
        },
    })
}
