//! Right-side function representations.
//!
//! Equation right sides and projection inputs are holomorphic functions on
//! the disc, supplied either as a validated rational function (pole-free on
//! the closed disc) or as a truncated series about the expansion center in
//! use. Both support pointwise evaluation and expansion to a requested
//! order.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rational::RationalFunction;
use crate::series::TruncatedPowerSeries;
use crate::tol::Tolerances;

#[derive(Debug, Clone)]
pub enum FunctionRep {
    Rational(RationalFunction),
    Series(TruncatedPowerSeries),
}

impl FunctionRep {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            FunctionRep::Rational(f) => f.eval(z),
            FunctionRep::Series(s) => s.evaluate(z),
        }
    }

    /// Expansion about `center` at exactly `order`.
    ///
    /// Rational inputs are expanded directly. Series inputs must already be
    /// centered within 1e-12 of the requested center; they are re-stamped
    /// onto the exact center (coefficients unchanged), truncated or
    /// zero-padded to the requested order.
    pub fn taylor_at(
        &self,
        center: Complex64,
        order: usize,
        tol: &Tolerances,
    ) -> Result<TruncatedPowerSeries> {
        match self {
            FunctionRep::Rational(f) => f.taylor_at(center, order, tol.reciprocal),
            FunctionRep::Series(s) => {
                if (s.center() - center).norm() > 1e-12 {
                    return Err(Error::CenterMismatch {
                        left: s.center(),
                        right: center,
                    });
                }
                let stamped = TruncatedPowerSeries::new(center, s.coeffs().to_vec())?;
                if stamped.order() >= order {
                    stamped.truncated(order)
                } else {
                    stamped.padded(order)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rational_rep_expands_like_the_underlying_map() {
        let tol = Tolerances::default();
        let f = RationalFunction::new(
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(2.0, 0.0), c(-1.0, 0.0)],
            tol.pole_margin,
            tol.common_root,
        )
        .unwrap();
        let rep = FunctionRep::Rational(f);
        let s = rep.taylor_at(c(0.0, 0.0), 3, &tol).unwrap();
        assert_abs_diff_eq!(s.coeff(1).re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(rep.eval(c(0.5, 0.0)).re, 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn series_rep_is_truncated_padded_and_center_checked() {
        let tol = Tolerances::default();
        let s = TruncatedPowerSeries::new(c(0.1, 0.0), vec![c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let rep = FunctionRep::Series(s);
        let lifted = rep.taylor_at(c(0.1, 0.0), 4, &tol).unwrap();
        assert_eq!(lifted.order(), 4);
        assert_abs_diff_eq!(lifted.coeff(1).re, 2.0, epsilon = 0.0);
        assert_abs_diff_eq!(lifted.coeff(4).norm(), 0.0, epsilon = 0.0);
        let cut = rep.taylor_at(c(0.1, 0.0), 0, &tol).unwrap();
        assert_eq!(cut.order(), 0);
        assert!(matches!(
            rep.taylor_at(c(0.2, 0.0), 4, &tol),
            Err(Error::CenterMismatch { .. })
        ));
    }
}
