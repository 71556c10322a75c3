//! Rank-one spectral projections of the composition operator.
//!
//! Each eigenvalue lambda_n = lambda_1^n of a Schroeder symbol carries the
//! rank-one projection P_n f = Psi_n(f) kappa^n, where kappa is the Koenigs
//! eigenfunction and Psi_n is a linear functional in the derivatives
//! f(alpha), f'(alpha), ..., f^(n)(alpha). The functional coefficients are
//! produced by a triangular recursion against the coefficients of the
//! kappa powers; low orders also have closed forms in the symbol
//! derivatives, derived via Faa di Bruno's formula, used as a cross-check.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::koenigs::KoenigsData;
use crate::series::{factorial, TruncatedPowerSeries};

/// Largest derivative order supported by partition enumeration; p(20) is
/// 627 terms, far past anything the projection family needs.
pub const MAX_PARTITION_ORDER: usize = 20;

/// All multi-indices m = (m_1..m_n) with sum j*m_j = n, in lexicographic
/// order. These index the terms of the n-th derivative of a composition.
pub fn enumerate_partitions(n: usize) -> Result<Vec<Vec<u32>>> {
    if n > MAX_PARTITION_ORDER {
        return Err(Error::TooLarge {
            n,
            max: MAX_PARTITION_ORDER,
        });
    }
    if n == 0 {
        return Ok(vec![vec![]]);
    }
    let mut out = Vec::new();
    let mut m = vec![0u32; n];
    // Depth-first over m_1..m_n with the running weight sum j*m_j.
    fn rec(j: usize, remaining: usize, m: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let n = m.len();
        if j > n {
            if remaining == 0 {
                out.push(m.clone());
            }
            return;
        }
        let max_count = remaining / j;
        for count in 0..=max_count {
            m[j - 1] = count as u32;
            rec(j + 1, remaining - j * count, m, out);
        }
        m[j - 1] = 0;
    }
    rec(1, n, &mut m, &mut out);
    Ok(out)
}

/// One term of the composition derivative: the multi-index, its weight
/// |m| = sum m_j (the order of the outer derivative it multiplies), and the
/// coefficient n!/(prod m_j!) * prod (phi^(j)(alpha)/j!)^{m_j}.
#[derive(Debug, Clone)]
pub struct PartitionTerm {
    pub indices: Vec<u32>,
    pub weight: u32,
    pub coefficient: Complex64,
}

/// Attach coefficients from the symbol expansion (taylor coefficients b_j =
/// phi^(j)(alpha)/j!) to every partition of n.
pub fn partition_terms(
    phi_series: &TruncatedPowerSeries,
    n: usize,
) -> Result<Vec<PartitionTerm>> {
    if n > phi_series.order() {
        return Err(Error::OrderExceeded {
            wanted: n,
            order: phi_series.order(),
        });
    }
    let parts = enumerate_partitions(n)?;
    let mut out = Vec::with_capacity(parts.len());
    for indices in parts {
        let mut weight = 0u32;
        let mut coefficient = Complex64::new(factorial(n), 0.0);
        for (jm1, &mj) in indices.iter().enumerate() {
            if mj == 0 {
                continue;
            }
            weight += mj;
            coefficient /= factorial(mj as usize);
            let bj = phi_series.coeff(jm1 + 1);
            for _ in 0..mj {
                coefficient *= bj;
            }
        }
        out.push(PartitionTerm {
            indices,
            weight,
            coefficient,
        });
    }
    Ok(out)
}

/// n-th derivative of g(phi(z)) at the fixed point via Faa di Bruno:
/// sum over partitions of coefficient * g^(|m|)(alpha). `g_series` and
/// `phi_series` share center and order.
pub fn faa_di_bruno_derivative(
    g_series: &TruncatedPowerSeries,
    phi_series: &TruncatedPowerSeries,
    n: usize,
) -> Result<Complex64> {
    if g_series.center() != phi_series.center() {
        return Err(Error::CenterMismatch {
            left: g_series.center(),
            right: phi_series.center(),
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for term in partition_terms(phi_series, n)? {
        acc += term.coefficient * g_series.derivative_at_center(term.weight as usize)?;
    }
    Ok(acc)
}

/// The functionals Psi_0..Psi_max_n as coefficient rows: Psi_n(f) =
/// sum_m c[n][m] f^(m)(alpha) with c[n][n] = 1/n! and c[n][0] = delta_{n,0}.
#[derive(Debug, Clone)]
pub struct ProjectionFamily {
    alpha: Complex64,
    lambda1: Complex64,
    /// c[n] has length n + 1.
    functional_rows: Vec<Vec<Complex64>>,
    kappa_powers: Vec<TruncatedPowerSeries>,
    order: usize,
}

/// Build the family from Koenigs data holding kappa powers through max_n.
///
/// The rows satisfy the triangular recursion obtained from
/// P_n f = (1/n!) (f - sum_{k<n} P_k f)^{(n)}(alpha) kappa^n, namely
/// c[n][m] = delta_{n,m}/n! - sum_{k=m}^{n-1} c[k][m] * (kappa^k)_n * n!/...
/// expressed on coefficients: subtracting Psi_k(f) kappa^k removes the
/// (kappa^k)-component, whose n-th Taylor coefficient couples back into the
/// n-th derivative.
pub fn build_projection_family(kd: &KoenigsData, max_n: usize) -> Result<ProjectionFamily> {
    if max_n > kd.max_power() {
        return Err(Error::IndexExceeded {
            n: max_n,
            max_n: kd.max_power(),
        });
    }
    if max_n > kd.order() {
        return Err(Error::IndexExceeded {
            n: max_n,
            max_n: kd.order(),
        });
    }
    let mut rows: Vec<Vec<Complex64>> = Vec::with_capacity(max_n + 1);
    for n in 0..=max_n {
        let mut row = vec![Complex64::new(0.0, 0.0); n + 1];
        row[n] = Complex64::new(1.0 / factorial(n), 0.0);
        for m in 0..n {
            // Coefficient of f^(m)(alpha) in -(1/n!) d^n/dz^n of
            // sum_{k=m}^{n-1} Psi_k(f) kappa(z)^k at alpha:
            // the n-th Taylor coefficient of kappa^k times n!/n! bookkeeping
            // cancels to a plain sum over earlier rows.
            let mut acc = Complex64::new(0.0, 0.0);
            for k in m..n {
                let kappa_k_n = kd.kappa_power(k)?.coeff(n);
                acc += rows[k][m] * kappa_k_n;
            }
            row[m] = -acc;
        }
        rows.push(row);
    }
    Ok(ProjectionFamily {
        alpha: kd.alpha(),
        lambda1: kd.lambda1(),
        functional_rows: rows,
        kappa_powers: (0..=max_n)
            .map(|p| kd.kappa_power(p).cloned())
            .collect::<Result<Vec<_>>>()?,
        order: kd.order(),
    })
}

impl ProjectionFamily {
    pub fn max_n(&self) -> usize {
        self.functional_rows.len() - 1
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn lambda1(&self) -> Complex64 {
        self.lambda1
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Row of derivative coefficients of Psi_n.
    pub fn functional_row(&self, n: usize) -> Result<&[Complex64]> {
        self.functional_rows
            .get(n)
            .map(|r| r.as_slice())
            .ok_or(Error::IndexExceeded {
                n,
                max_n: self.max_n(),
            })
    }

    fn check_input(&self, n: usize, f: &TruncatedPowerSeries) -> Result<()> {
        if n > self.max_n() {
            return Err(Error::IndexExceeded {
                n,
                max_n: self.max_n(),
            });
        }
        if f.center() != self.alpha {
            return Err(Error::CenterMismatch {
                left: f.center(),
                right: self.alpha,
            });
        }
        if f.order() != self.order {
            return Err(Error::OrderMismatch {
                left: f.order(),
                right: self.order,
            });
        }
        Ok(())
    }

    /// Psi_n(f) = sum_m c[n][m] f^(m)(alpha) = sum_m c[n][m] m! f_m.
    pub fn functional_value(&self, n: usize, f: &TruncatedPowerSeries) -> Result<Complex64> {
        self.check_input(n, f)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, &cm) in self.functional_rows[n].iter().enumerate() {
            acc += cm * f.coeff(m) * factorial(m);
        }
        Ok(acc)
    }

    /// P_n f = Psi_n(f) kappa^n as a series.
    pub fn apply_projection(&self, n: usize, f: &TruncatedPowerSeries) -> Result<TruncatedPowerSeries> {
        let value = self.functional_value(n, f)?;
        Ok(self.kappa_powers[n].scale(value))
    }

    /// Q_n f = f - sum_{k<=n} P_k f, the component killed by the first
    /// n + 1 projections; it vanishes to order n at alpha.
    pub fn apply_q(&self, n: usize, f: &TruncatedPowerSeries) -> Result<TruncatedPowerSeries> {
        self.check_input(n, f)?;
        let mut out = f.clone();
        for k in 0..=n {
            out = out.sub(&self.apply_projection(k, f)?)?;
        }
        Ok(out)
    }
}

/// Closed form of the Psi_n coefficient row for n <= 3, in terms of the
/// symbol derivatives at alpha. Derived by resolving the composition
/// derivatives (Faa di Bruno) against the eigenvalue differences; serves as
/// an independent check of the recursive rows.
pub fn closed_form_functional(
    phi_series: &TruncatedPowerSeries,
    n: usize,
    small_divisor: f64,
) -> Result<Vec<Complex64>> {
    if n > 3 {
        return Err(Error::TooLarge { n, max: 3 });
    }
    if phi_series.order() < n.max(1) {
        return Err(Error::OrderExceeded {
            wanted: n,
            order: phi_series.order(),
        });
    }
    let one = Complex64::new(1.0, 0.0);
    let l1 = phi_series.coeff(1);
    let l2 = l1 * l1;
    let l3 = l2 * l1;
    for divisor in [l1 - l2, l1 - l3, l2 - l3] {
        if n >= 2 && divisor.norm() < small_divisor {
            return Err(Error::SmallDivisor {
                value: divisor.norm(),
                cutoff: small_divisor,
            });
        }
    }
    let b2 = if phi_series.order() >= 2 {
        phi_series.coeff(2)
    } else {
        Complex64::new(0.0, 0.0)
    };
    let b3 = if phi_series.order() >= 3 {
        phi_series.coeff(3)
    } else {
        Complex64::new(0.0, 0.0)
    };
    Ok(match n {
        0 => vec![one],
        1 => vec![Complex64::new(0.0, 0.0), one],
        2 => vec![
            Complex64::new(0.0, 0.0),
            b2 / (l2 - l1),
            one * 0.5,
        ],
        _ => vec![
            Complex64::new(0.0, 0.0),
            b3 / (l3 - l1) + (b2 * b2) * 2.0 / ((l1 - l2) * (l1 - l3)),
            b2 / (l2 - l1),
            one / 6.0,
        ],
    })
}
