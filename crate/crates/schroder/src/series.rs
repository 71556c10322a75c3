//! Truncated power series about a fixed center.
//!
//! A series stores coefficients c_0..c_N of sum c_k (z - center)^k with the
//! truncation order N fixed at construction. All binary operations require
//! bit-identical centers and equal orders; there is no implicit re-expansion
//! or padding. Arithmetic is exact convolution on the stored coefficients,
//! so the ring axioms hold to roundoff.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// k! as f64; exact for k <= 22, which covers every index used here.
pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedPowerSeries {
    center: Complex64,
    coeffs: Vec<Complex64>,
}

impl TruncatedPowerSeries {
    /// Series with the given coefficients c_0..c_N (order N = len - 1).
    pub fn new(center: Complex64, coeffs: Vec<Complex64>) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::NonFinite("series center"));
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter(
                "series needs at least the constant coefficient".into(),
            ));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("series coefficients"));
        }
        Ok(TruncatedPowerSeries { center, coeffs })
    }

    /// The zero series at the given order.
    pub fn zero(center: Complex64, order: usize) -> Self {
        TruncatedPowerSeries {
            center,
            coeffs: vec![Complex64::new(0.0, 0.0); order + 1],
        }
    }

    /// Constant series value + 0*(z-center) + ...
    pub fn constant(center: Complex64, value: Complex64, order: usize) -> Result<Self> {
        let mut s = Self::zero(center, order);
        if !value.is_finite() {
            return Err(Error::NonFinite("series coefficients"));
        }
        s.coeffs[0] = value;
        Ok(s)
    }

    /// The monomial (z - center)^k at the given order.
    pub fn monomial(center: Complex64, k: usize, order: usize) -> Result<Self> {
        if k > order {
            return Err(Error::OrderExceeded {
                wanted: k,
                order,
            });
        }
        let mut s = Self::zero(center, order);
        s.coeffs[k] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// The identity map z = center + (z - center) as a series.
    pub fn identity(center: Complex64, order: usize) -> Result<Self> {
        if order < 1 {
            return Err(Error::InvalidParameter(
                "identity series needs order >= 1".into(),
            ));
        }
        let mut s = Self::zero(center, order);
        s.coeffs[0] = center;
        s.coeffs[1] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of (z - center)^k.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs[k]
    }

    /// Replace one coefficient, keeping center and order.
    pub fn with_coeff(mut self, k: usize, value: Complex64) -> Self {
        self.coeffs[k] = value;
        self
    }

    /// Largest coefficient modulus; zero for the zero series.
    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn check_compatible(&self, rhs: &Self) -> Result<()> {
        // Bitwise equality: centers agree or the expansions live in
        // different coordinates and must not be mixed.
        if self.center != rhs.center {
            return Err(Error::CenterMismatch {
                left: self.center,
                right: rhs.center,
            });
        }
        if self.coeffs.len() != rhs.coeffs.len() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: rhs.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_compatible(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(TruncatedPowerSeries {
            center: self.center,
            coeffs,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_compatible(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(TruncatedPowerSeries {
            center: self.center,
            coeffs,
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        TruncatedPowerSeries {
            center: self.center,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Cauchy product truncated at the shared order.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_compatible(rhs)?;
        let n = self.order();
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        // Exact leading zeros are common here (powers of series that vanish
        // at the center); skipping them keeps repeated products cheap. The
        // test must compare the parts against zero directly: norm_sqr
        // underflows for moduli near 1e-162 and would flush live
        // coefficients in long orbit tails.
        let is_zero = |c: &Complex64| c.re == 0.0 && c.im == 0.0;
        let alo = self.coeffs.iter().position(|c| !is_zero(c));
        let blo = rhs.coeffs.iter().position(|c| !is_zero(c));
        if let (Some(alo), Some(blo)) = (alo, blo) {
            for k in (alo + blo).min(n + 1)..=n {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in alo..=(k - blo) {
                    acc += self.coeffs[i] * rhs.coeffs[k - i];
                }
                out[k] = acc;
            }
        }
        Ok(TruncatedPowerSeries {
            center: self.center,
            coeffs: out,
        })
    }

    /// Integer power by repeated multiplication; p = 0 gives the constant 1.
    pub fn pow(&self, p: usize) -> Self {
        let one = Self::constant(self.center, Complex64::new(1.0, 0.0), self.order())
            .expect("constant 1 is finite");
        let mut acc = one;
        for _ in 0..p {
            acc = acc.mul(self).expect("self-compatible product");
        }
        acc
    }

    /// Composition self(inner(z)) as a series about inner's center.
    ///
    /// Requires equal orders and |inner(center) - self.center| <= center_tol;
    /// the residual constant term is clamped to zero so the result is the
    /// exact Horner evaluation of self at (inner - self.center).
    pub fn compose(&self, inner: &Self, center_tol: f64) -> Result<Self> {
        if self.coeffs.len() != inner.coeffs.len() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: inner.order(),
            });
        }
        let drift = (inner.coeffs[0] - self.center).norm();
        if drift > center_tol {
            return Err(Error::CenterMismatch {
                left: self.center,
                right: inner.coeffs[0],
            });
        }
        let mut w = inner.clone();
        w.coeffs[0] = Complex64::new(0.0, 0.0);
        let n = self.order();
        let mut acc = TruncatedPowerSeries::zero(inner.center, n);
        acc.coeffs[0] = self.coeffs[n];
        for k in (0..n).rev() {
            acc = acc.mul(&w)?;
            acc.coeffs[0] += self.coeffs[k];
        }
        Ok(acc)
    }

    /// k-th derivative at the center, i.e. k! * c_k.
    pub fn derivative_at_center(&self, k: usize) -> Result<Complex64> {
        if k > self.order() {
            return Err(Error::OrderExceeded {
                wanted: k,
                order: self.order(),
            });
        }
        Ok(self.coeffs[k] * factorial(k))
    }

    /// Horner evaluation of the truncated polynomial at z.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let u = z - self.center;
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * u + c)
    }

    /// Multiplicative inverse: t_0 = 1/c_0, t_n = -(sum c_k t_{n-k})/c_0.
    pub fn reciprocal(&self, min_constant: f64) -> Result<Self> {
        let c0 = self.coeffs[0];
        if c0.norm() <= min_constant {
            return Err(Error::ZeroConstantTerm { modulus: c0.norm() });
        }
        let n = self.order();
        let mut t = vec![Complex64::new(0.0, 0.0); n + 1];
        t[0] = Complex64::new(1.0, 0.0) / c0;
        for m in 1..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 1..=m {
                acc += self.coeffs[k] * t[m - k];
            }
            t[m] = -acc / c0;
        }
        Ok(TruncatedPowerSeries {
            center: self.center,
            coeffs: t,
        })
    }

    /// True when every coefficient of index <= n has modulus <= tol, i.e.
    /// the function and its first n derivatives vanish at the center.
    pub fn vanishes_to_order(&self, n: usize, tol: f64) -> Result<bool> {
        if n > self.order() {
            return Err(Error::OrderExceeded {
                wanted: n,
                order: self.order(),
            });
        }
        Ok(self.coeffs[..=n].iter().all(|c| c.norm() <= tol))
    }

    /// Copy truncated to a lower order.
    pub fn truncated(&self, new_order: usize) -> Result<Self> {
        if new_order > self.order() {
            return Err(Error::OrderExceeded {
                wanted: new_order,
                order: self.order(),
            });
        }
        Ok(TruncatedPowerSeries {
            center: self.center,
            coeffs: self.coeffs[..=new_order].to_vec(),
        })
    }

    /// Copy zero-padded to a higher order. The padded series represents the
    /// same polynomial, so this is the one order change that loses nothing.
    pub fn padded(&self, new_order: usize) -> Result<Self> {
        if new_order < self.order() {
            return Err(Error::OrderExceeded {
                wanted: self.order(),
                order: new_order,
            });
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(new_order + 1, Complex64::new(0.0, 0.0));
        Ok(TruncatedPowerSeries {
            center: self.center,
            coeffs,
        })
    }
}
