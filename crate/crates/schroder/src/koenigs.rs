//! Koenigs eigenfunction of a Schroeder symbol.
//!
//! For a symbol with interior fixed point alpha and multiplier lambda_1
//! (0 < |lambda_1| < 1), the Koenigs function kappa is the unique
//! holomorphic solution of kappa(phi(z)) = lambda_1 kappa(z) with
//! kappa(alpha) = 0 and kappa'(alpha) = 1. Its truncated expansion is built
//! by a coefficient recursion; values anywhere in the disc follow from the
//! functional equation by pulling back along the forward orbit until it
//! enters the radius where the series is trusted.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::TruncatedPowerSeries;
use crate::symbol::{ClassKind, Symbol};
use crate::tol::Tolerances;

/// lambda^n by repeated multiplication, exact for n = 0 and n = 1.
pub(crate) fn power(lambda: Complex64, n: usize) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        acc *= lambda;
    }
    acc
}

#[derive(Debug, Clone)]
pub struct KoenigsData {
    alpha: Complex64,
    lambda1: Complex64,
    kappa: TruncatedPowerSeries,
    /// kappa^0 = 1, kappa^1, ..., kappa^max_power, all at the shared order.
    kappa_powers: Vec<TruncatedPowerSeries>,
    eval_radius: f64,
}

/// Coefficient recursion for the normalized eigenfunction of the shifted
/// symbol series b (b has zero constant term and b_1 = lambda_1):
/// with kappa = sum c_m u^m, the equation kappa(b(u)) = lambda_1 kappa(u)
/// determines c_1 = 1 and, for m >= 2,
/// c_m = [u^m](sum_{j<m} c_j b^j) / (lambda_1 - lambda_1^m).
/// Divisors below `small_divisor` abort; for multipliers accepted by
/// classification the divisor chain is bounded away from zero.
pub(crate) fn koenigs_recursion(
    b: &TruncatedPowerSeries,
    small_divisor: f64,
) -> Result<TruncatedPowerSeries> {
    let order = b.order();
    let center = b.center();
    let lambda1 = b.coeff(1);
    let mut kappa = TruncatedPowerSeries::zero(center, order);
    if order >= 1 {
        kappa = kappa.with_coeff(1, Complex64::new(1.0, 0.0));
    }
    // acc = sum_{j <= m-1} c_j b^j, extended incrementally; bpow = b^{m-1}.
    let mut bpow = b.clone();
    let mut acc = b.clone(); // c_1 b^1 with c_1 = 1
    for m in 2..=order {
        let divisor = lambda1 - power(lambda1, m);
        if divisor.norm() < small_divisor {
            return Err(Error::SmallDivisor {
                value: divisor.norm(),
                cutoff: small_divisor,
            });
        }
        let cm = acc.coeff(m) / divisor;
        kappa = kappa.with_coeff(m, cm);
        if m < order {
            bpow = bpow.mul(b)?;
            acc = acc.add(&bpow.scale(cm))?;
        }
    }
    Ok(kappa)
}

/// Build the Koenigs data of a Schroeder symbol: classify, expand about the
/// fixed point, run the coefficient recursion, and precompute the powers
/// kappa^0..kappa^max_power needed by the projection family.
pub fn build_koenigs(
    symbol: &Symbol,
    order: usize,
    max_power: usize,
    tol: &Tolerances,
) -> Result<KoenigsData> {
    if order < 1 {
        return Err(Error::InvalidParameter("order must be at least 1".into()));
    }
    if max_power > order {
        return Err(Error::InvalidParameter(format!(
            "max_power {max_power} exceeds series order {order}"
        )));
    }
    let cls = symbol.classify(tol)?;
    if cls.kind != ClassKind::Schroeder {
        return Err(Error::NotSchroeder {
            found: cls.kind.name(),
        });
    }
    let alpha = cls.alpha.expect("Schroeder classification carries alpha");
    let phi_series = symbol.taylor_at(alpha, order, tol)?;
    // Shift to b = phi - alpha. The constant coefficient equals alpha up to
    // the fixed-point residual (<= 1e-12); it is clamped to zero so the
    // recursion sees an exactly centered series.
    let b = phi_series
        .clone()
        .with_coeff(0, Complex64::new(0.0, 0.0))
        .sub(&TruncatedPowerSeries::constant(alpha, Complex64::new(0.0, 0.0), order)?)?;
    let lambda1 = b.coeff(1);
    let kappa = koenigs_recursion(&b, tol.small_divisor)?;
    let one = TruncatedPowerSeries::constant(alpha, Complex64::new(1.0, 0.0), order)?;
    let mut kappa_powers = vec![one];
    for p in 1..=max_power {
        let next = kappa_powers[p - 1].mul(&kappa)?;
        kappa_powers.push(next);
    }
    Ok(KoenigsData {
        alpha,
        lambda1,
        kappa,
        kappa_powers,
        eval_radius: tol.eval_radius_factor * (1.0 - alpha.norm()),
    })
}

impl KoenigsData {
    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn lambda1(&self) -> Complex64 {
        self.lambda1
    }

    pub fn kappa(&self) -> &TruncatedPowerSeries {
        &self.kappa
    }

    pub fn order(&self) -> usize {
        self.kappa.order()
    }

    pub fn max_power(&self) -> usize {
        self.kappa_powers.len() - 1
    }

    pub fn kappa_power(&self, p: usize) -> Result<&TruncatedPowerSeries> {
        self.kappa_powers.get(p).ok_or(Error::IndexExceeded {
            n: p,
            max_n: self.max_power(),
        })
    }

    /// Eigenvalue lambda_n = lambda_1^n of the composition operator.
    pub fn eigenvalue(&self, n: usize) -> Complex64 {
        power(self.lambda1, n)
    }

    /// Radius around alpha inside which the truncated series is evaluated
    /// directly.
    pub fn eval_radius(&self) -> f64 {
        self.eval_radius
    }

    /// kappa(z) anywhere in the open disc: pull z forward along the orbit
    /// until |w - alpha| <= eval_radius, evaluate the series there, then
    /// divide by lambda_1 once per step taken.
    pub fn kappa_at(&self, symbol: &Symbol, z: Complex64) -> Result<Complex64> {
        if !z.is_finite() || z.norm() >= 1.0 {
            return Err(Error::PointOutsideDisc { z });
        }
        let mut w = z;
        let mut steps = 0usize;
        while (w - self.alpha).norm() > self.eval_radius {
            w = symbol.eval(w);
            steps += 1;
            if steps > 10_000 {
                return Err(Error::NonConvergence(
                    "orbit did not reach the evaluation radius",
                ));
            }
        }
        let mut value = self.kappa.evaluate(w);
        for _ in 0..steps {
            value /= self.lambda1;
        }
        Ok(value)
    }

    /// kappa(z)^n via a single orbit pull-back.
    pub fn kappa_power_at(&self, symbol: &Symbol, n: usize, z: Complex64) -> Result<Complex64> {
        let base = self.kappa_at(symbol, z)?;
        Ok(power(base, n))
    }

    /// Maximum of |kappa^n(phi(z)) - lambda_n kappa^n(z)| over the grid,
    /// with both sides evaluated from the truncated series. Grid points must
    /// lie within the evaluation radius of alpha.
    pub fn eigen_relation_residual(
        &self,
        symbol: &Symbol,
        n: usize,
        grid: &[Complex64],
    ) -> Result<f64> {
        let lambda_n = self.eigenvalue(n);
        let mut worst: f64 = 0.0;
        for &z in grid {
            if (z - self.alpha).norm() > self.eval_radius {
                return Err(Error::InvalidParameter(format!(
                    "grid point {z} lies outside the evaluation radius"
                )));
            }
            let lhs = power(self.kappa.evaluate(symbol.eval(z)), n);
            let rhs = lambda_n * power(self.kappa.evaluate(z), n);
            worst = worst.max((lhs - rhs).norm());
        }
        Ok(worst)
    }

    /// |kappa(alpha)| and |kappa'(alpha) - 1|; both must vanish for a
    /// correctly normalized eigenfunction.
    pub fn kappa_zero_check(&self) -> (f64, f64) {
        (
            self.kappa.coeff(0).norm(),
            (self.kappa.coeff(1) - Complex64::new(1.0, 0.0)).norm(),
        )
    }
}

/// Deterministic sample grid: `count` points split over two circles about
/// `center`, at radius/2 and at radius.
pub fn sample_grid(center: Complex64, radius: f64, count: usize) -> Vec<Complex64> {
    let inner = count / 2;
    let outer = count - inner;
    let tau = 2.0 * std::f64::consts::PI;
    let mut grid = Vec::with_capacity(count);
    for j in 0..inner {
        let theta = tau * j as f64 / inner.max(1) as f64;
        grid.push(center + Complex64::from_polar(radius * 0.5, theta));
    }
    for j in 0..outer {
        let theta = tau * (j as f64 + 0.5) / outer.max(1) as f64;
        grid.push(center + Complex64::from_polar(radius, theta));
    }
    grid
}
