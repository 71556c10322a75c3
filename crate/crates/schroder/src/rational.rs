//! Polynomials and validated rational functions.
//!
//! A `RationalFunction` stores numerator and denominator coefficients in
//! ascending degree and guarantees, after construction, that the denominator
//! has no root in or numerically near the closed unit disc. Near-common
//! factors of numerator and denominator are cancelled first so a benign
//! factorization such as (z - w)p / (z - w)q is not rejected for the
//! spurious pole at w.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::TruncatedPowerSeries;

pub(crate) mod poly {
    use super::*;

    /// Horner evaluation; `p` ascending.
    pub fn eval(p: &[Complex64], z: Complex64) -> Complex64 {
        p.iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Coefficients of p'(z).
    pub fn derivative(p: &[Complex64]) -> Vec<Complex64> {
        if p.len() <= 1 {
            return vec![Complex64::new(0.0, 0.0)];
        }
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect()
    }

    /// Coefficients of p(center + u) in powers of u (synthetic division).
    pub fn shift(p: &[Complex64], center: Complex64) -> Vec<Complex64> {
        let mut out = p.to_vec();
        let n = out.len();
        for k in 0..n {
            for j in (k..n - 1).rev() {
                let next = out[j + 1] * center;
                out[j] = out[j] + next;
            }
        }
        out
    }

    /// Drop trailing coefficients below a relative threshold of the largest.
    pub fn trim(p: &[Complex64], rel_tol: f64) -> Vec<Complex64> {
        let scale = p.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let cut = rel_tol * scale;
        let mut end = p.len();
        while end > 1 && p[end - 1].norm() <= cut {
            end -= 1;
        }
        let mut out = p[..end].to_vec();
        if out.iter().all(|c| c.norm() <= cut) {
            out = vec![Complex64::new(0.0, 0.0)];
        }
        out
    }

    pub fn mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    /// Monic polynomial with the given roots, rescaled by `lead`.
    pub fn from_roots(roots: &[Complex64], lead: Complex64) -> Vec<Complex64> {
        let mut out = vec![lead];
        for &r in roots {
            out = mul(&out, &[-r, Complex64::new(1.0, 0.0)]);
        }
        out
    }

    /// All roots of a trimmed polynomial by simultaneous (Durand-Kerner)
    /// iteration. Deterministic: fixed initial configuration on a circle of
    /// the Cauchy root bound, fixed iteration cap, relative step tolerance
    /// 1e-13.
    pub fn roots(p: &[Complex64]) -> Vec<Complex64> {
        let d = p.len() - 1;
        if d == 0 {
            return vec![];
        }
        let lead = p[d];
        let monic: Vec<Complex64> = p.iter().map(|&c| c / lead).collect();
        let bound = 1.0
            + monic[..d]
                .iter()
                .map(|c| c.norm())
                .fold(0.0, f64::max);
        let mut r: Vec<Complex64> = (0..d)
            .map(|k| {
                let radius = bound * (0.55 + 0.35 * (k + 1) as f64 / d as f64);
                let angle = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.41;
                Complex64::from_polar(radius, angle)
            })
            .collect();
        for _ in 0..1000 {
            let mut step_max: f64 = 0.0;
            for i in 0..d {
                let mut denom = Complex64::new(1.0, 0.0);
                for j in 0..d {
                    if j != i {
                        denom *= r[i] - r[j];
                    }
                }
                if denom.norm() == 0.0 {
                    // Two guesses collided; nudge and retry next sweep.
                    r[i] += Complex64::new(1e-6, 2e-6);
                    step_max = f64::MAX;
                    continue;
                }
                let step = eval(&monic, r[i]) / denom;
                r[i] -= step;
                if !r[i].is_finite() {
                    r[i] = Complex64::new(0.9, -0.4) * bound;
                    step_max = f64::MAX;
                    continue;
                }
                step_max = step_max.max(step.norm() / r[i].norm().max(1.0));
            }
            if step_max < 1e-13 {
                break;
            }
        }
        r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunction {
    num: Vec<Complex64>,
    den: Vec<Complex64>,
}

impl RationalFunction {
    /// Validate and normalize a numerator/denominator pair (ascending
    /// coefficients). Trailing near-zero coefficients are trimmed, factors
    /// shared to within `common_root_tol` are cancelled, and any remaining
    /// denominator root with |root| <= 1 + pole_margin is rejected.
    pub fn new(
        num: Vec<Complex64>,
        den: Vec<Complex64>,
        pole_margin: f64,
        common_root_tol: f64,
    ) -> Result<Self> {
        if num.iter().chain(den.iter()).any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("rational coefficients"));
        }
        if num.is_empty() || den.is_empty() {
            return Err(Error::InvalidParameter(
                "numerator and denominator need at least one coefficient".into(),
            ));
        }
        let mut num = poly::trim(&num, 1e-12);
        let mut den = poly::trim(&den, 1e-12);
        if den.len() == 1 && den[0].norm() == 0.0 {
            return Err(Error::DegenerateDenominator);
        }
        if num.len() > 1 && den.len() > 1 {
            let nroots = poly::roots(&num);
            let droots = poly::roots(&den);
            let mut keep_n = vec![true; nroots.len()];
            let mut keep_d = vec![true; droots.len()];
            let mut cancelled = false;
            for (di, &dr) in droots.iter().enumerate() {
                if let Some(ni) = (0..nroots.len())
                    .find(|&ni| keep_n[ni] && (nroots[ni] - dr).norm() <= common_root_tol)
                {
                    keep_n[ni] = false;
                    keep_d[di] = false;
                    cancelled = true;
                }
            }
            if cancelled {
                let nlead = num[num.len() - 1];
                let dlead = den[den.len() - 1];
                let nkeep: Vec<Complex64> = nroots
                    .iter()
                    .zip(&keep_n)
                    .filter(|(_, &k)| k)
                    .map(|(&r, _)| r)
                    .collect();
                let dkeep: Vec<Complex64> = droots
                    .iter()
                    .zip(&keep_d)
                    .filter(|(_, &k)| k)
                    .map(|(&r, _)| r)
                    .collect();
                num = poly::from_roots(&nkeep, nlead);
                den = poly::from_roots(&dkeep, dlead);
            }
        }
        if den.len() > 1 {
            for root in poly::roots(&den) {
                if root.norm() <= 1.0 + pole_margin {
                    return Err(Error::PoleInDisc {
                        root,
                        margin: pole_margin,
                    });
                }
            }
        }
        Ok(RationalFunction { num, den })
    }

    pub fn num(&self) -> &[Complex64] {
        &self.num
    }

    pub fn den(&self) -> &[Complex64] {
        &self.den
    }

    pub fn degree(&self) -> usize {
        (self.num.len() - 1).max(self.den.len() - 1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        poly::eval(&self.num, z) / poly::eval(&self.den, z)
    }

    /// Derivative by the quotient rule; pole-free on the closed disc.
    pub fn eval_derivative(&self, z: Complex64) -> Complex64 {
        let n = poly::eval(&self.num, z);
        let d = poly::eval(&self.den, z);
        let np = poly::eval(&poly::derivative(&self.num), z);
        let dp = poly::eval(&poly::derivative(&self.den), z);
        (np * d - n * dp) / (d * d)
    }

    /// Taylor expansion about a center in the disc: shift both polynomials
    /// to powers of (z - center), then multiply the numerator series by the
    /// reciprocal of the denominator series. The denominator constant term
    /// is bounded away from zero because its roots avoid the closed disc.
    pub fn taylor_at(
        &self,
        center: Complex64,
        order: usize,
        reciprocal_tol: f64,
    ) -> Result<TruncatedPowerSeries> {
        if !center.is_finite() {
            return Err(Error::NonFinite("expansion center"));
        }
        if center.norm() >= 1.0 {
            return Err(Error::PointOutsideDisc { z: center });
        }
        let pad = |p: &[Complex64]| -> Vec<Complex64> {
            let mut v = poly::shift(p, center);
            v.resize(order + 1, Complex64::new(0.0, 0.0));
            v.truncate(order + 1);
            v
        };
        let ns = TruncatedPowerSeries::new(center, pad(&self.num))?;
        let ds = TruncatedPowerSeries::new(center, pad(&self.den))?;
        ns.mul(&ds.reciprocal(reciprocal_tol)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reals(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| c(x, 0.0)).collect()
    }

    #[test]
    fn shift_matches_binomial_expansion() {
        // (1 + z)^2 about z = 1 is 4 + 4u + u^2.
        let p = reals(&[1.0, 2.0, 1.0]);
        let s = poly::shift(&p, c(1.0, 0.0));
        assert_abs_diff_eq!(s[0].re, 4.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s[1].re, 4.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s[2].re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn shift_preserves_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let p: Vec<Complex64> = (0..6)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let center = c(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
            let s = poly::shift(&p, center);
            let z = c(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
            let direct = poly::eval(&p, z);
            let shifted = poly::eval(&s, z - center);
            assert!((direct - shifted).norm() < 1e-13);
        }
    }

    #[test]
    fn roots_of_factored_polynomials() {
        // (z - 2)(z - 3) = 6 - 5z + z^2.
        let mut r = poly::roots(&reals(&[6.0, -5.0, 1.0]));
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert_abs_diff_eq!(r[0].re, 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(r[1].re, 3.0, epsilon = 1e-10);

        // Roots of z^4 - 1 are the fourth roots of unity.
        let r = poly::roots(&reals(&[-1.0, 0.0, 0.0, 0.0, 1.0]));
        for root in r {
            assert_abs_diff_eq!(root.norm(), 1.0, epsilon = 1e-10);
            assert!(poly::eval(&reals(&[-1.0, 0.0, 0.0, 0.0, 1.0]), root).norm() < 1e-9);
        }
    }

    #[test]
    fn roots_recover_random_configurations() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..20 {
            let expect: Vec<Complex64> = (0..4)
                .map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                .collect();
            let p = poly::from_roots(&expect, c(1.3, -0.2));
            let got = poly::roots(&p);
            for e in &expect {
                let best = got.iter().map(|g| (g - e).norm()).fold(f64::MAX, f64::min);
                assert!(best < 1e-7, "missed root {e}: nearest {best}");
            }
        }
    }

    #[test]
    fn construction_rejects_poles_in_disc() {
        // 1/(1 - 2z) has a pole at 0.5.
        let err = RationalFunction::new(reals(&[1.0]), reals(&[1.0, -2.0]), 1e-8, 1e-9);
        assert!(matches!(err, Err(Error::PoleInDisc { .. })));
        // Pole exactly on the circle is also rejected.
        let err = RationalFunction::new(reals(&[1.0]), reals(&[1.0, -1.0]), 1e-8, 1e-9);
        assert!(matches!(err, Err(Error::PoleInDisc { .. })));
        // Zero denominator.
        let err = RationalFunction::new(reals(&[1.0]), reals(&[0.0, 0.0]), 1e-8, 1e-9);
        assert!(matches!(err, Err(Error::DegenerateDenominator)));
    }

    #[test]
    fn common_factors_cancel_before_pole_check() {
        // (z - 0.5)(z) / (z - 0.5)(2 - z): the shared root at 0.5 would be a
        // pole in the disc if not cancelled; after cancellation this is the
        // valid map z/(2 - z).
        let num = poly::mul(&reals(&[-0.5, 1.0]), &reals(&[0.0, 1.0]));
        let den = poly::mul(&reals(&[-0.5, 1.0]), &reals(&[2.0, -1.0]));
        let f = RationalFunction::new(num, den, 1e-8, 1e-9).unwrap();
        let z = c(0.3, 0.2);
        let expect = z / (c(2.0, 0.0) - z);
        assert!((f.eval(z) - expect).norm() < 1e-10);
    }

    #[test]
    fn trailing_zero_coefficients_are_trimmed() {
        let f = RationalFunction::new(
            reals(&[0.0, 1.0, 0.0, 0.0]),
            reals(&[2.0, -1.0, 0.0]),
            1e-8,
            1e-9,
        )
        .unwrap();
        assert_eq!(f.num().len(), 2);
        assert_eq!(f.den().len(), 2);
        assert_eq!(f.degree(), 1);
    }

    #[test]
    fn eval_and_derivative_on_moebius_fixture() {
        // phi(z) = z/(2 - z): phi(1) = 1, phi'(z) = 2/(2 - z)^2.
        let f = RationalFunction::new(reals(&[0.0, 1.0]), reals(&[2.0, -1.0]), 1e-8, 1e-9).unwrap();
        assert_abs_diff_eq!(f.eval(c(1.0, 0.0)).re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f.eval_derivative(c(0.0, 0.0)).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(f.eval_derivative(c(1.0, 0.0)).re, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn taylor_fixture_moebius() {
        let f = RationalFunction::new(reals(&[0.0, 1.0]), reals(&[2.0, -1.0]), 1e-8, 1e-9).unwrap();
        let s = f.taylor_at(c(0.0, 0.0), 3, 1e-12).unwrap();
        let want = [0.0, 0.5, 0.25, 0.125];
        for (k, &w) in want.iter().enumerate() {
            assert_abs_diff_eq!(s.coeff(k).re, w, epsilon = 1e-14);
            assert_abs_diff_eq!(s.coeff(k).im, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn taylor_fixture_quadratic_blaschke_like() {
        // z(z + 1/2)/(1 + z/2) at 0 to order 1 is [0, 1/2].
        let f = RationalFunction::new(reals(&[0.0, 0.5, 1.0]), reals(&[1.0, 0.5]), 1e-8, 1e-9)
            .unwrap();
        let s = f.taylor_at(c(0.0, 0.0), 1, 1e-12).unwrap();
        assert_abs_diff_eq!(s.coeff(0).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.coeff(1).re, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn taylor_of_constant_map() {
        let f = RationalFunction::new(reals(&[0.3]), reals(&[1.0]), 1e-8, 1e-9).unwrap();
        let s = f.taylor_at(c(0.2, 0.1), 4, 1e-12).unwrap();
        assert_abs_diff_eq!(s.coeff(0).re, 0.3, epsilon = 1e-15);
        for k in 1..=4 {
            assert_abs_diff_eq!(s.coeff(k).norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn taylor_rejects_center_outside_disc() {
        let f = RationalFunction::new(reals(&[0.0, 1.0]), reals(&[2.0, -1.0]), 1e-8, 1e-9).unwrap();
        assert!(matches!(
            f.taylor_at(c(1.0, 0.5), 3, 1e-12),
            Err(Error::PointOutsideDisc { .. })
        ));
    }

    // Divided-difference derivative oracle: central stencils of fourth-order
    // accuracy with one Richardson step, independent of the shift/reciprocal
    // path used by taylor_at.
    fn numeric_derivative(f: &RationalFunction, center: Complex64, k: usize, h: f64) -> Complex64 {
        let g = |t: f64| f.eval(center + c(t, 0.0));
        match k {
            1 => (g(-2.0 * h) - g(2.0 * h) + (g(h) - g(-h)) * 8.0) / (12.0 * h),
            2 => {
                (-g(2.0 * h) + g(h) * 16.0 - g(0.0) * 30.0 + g(-h) * 16.0 - g(-2.0 * h))
                    / (12.0 * h * h)
            }
            3 => {
                (-g(3.0 * h) + g(2.0 * h) * 8.0 - g(h) * 13.0 + g(-h) * 13.0 - g(-2.0 * h) * 8.0
                    + g(-3.0 * h))
                    / (8.0 * h * h * h)
            }
            4 => {
                (-g(3.0 * h) + g(2.0 * h) * 12.0 - g(h) * 39.0 + g(0.0) * 56.0 - g(-h) * 39.0
                    + g(-2.0 * h) * 12.0
                    - g(-3.0 * h))
                    / (6.0 * h * h * h * h)
            }
            _ => unreachable!(),
        }
    }

    fn richardson(f: &RationalFunction, center: Complex64, k: usize) -> Complex64 {
        let h = 0.02;
        let d1 = numeric_derivative(f, center, k, h);
        let d2 = numeric_derivative(f, center, k, h / 2.0);
        (d2 * 16.0 - d1) / 15.0
    }

    #[test]
    fn taylor_agrees_with_divided_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let maps = [
            RationalFunction::new(reals(&[0.0, 1.0]), reals(&[2.0, -1.0]), 1e-8, 1e-9).unwrap(),
            RationalFunction::new(reals(&[0.0, 0.5, 1.0]), reals(&[1.0, 0.5]), 1e-8, 1e-9).unwrap(),
            RationalFunction::new(
                vec![c(0.1, 0.05), c(0.3, -0.1), c(0.0, 0.2)],
                vec![c(1.0, 0.0), c(0.1, 0.1)],
                1e-8,
                1e-9,
            )
            .unwrap(),
        ];
        for f in &maps {
            for _ in 0..3 {
                let center = c(rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3));
                let s = f.taylor_at(center, 8, 1e-12).unwrap();
                for k in 1..=4usize {
                    let via_series = s.derivative_at_center(k).unwrap();
                    let via_differences = richardson(f, center, k);
                    assert!(
                        (via_series - via_differences).norm() < 1e-6,
                        "k = {k}, center = {center}: {via_series} vs {via_differences}"
                    );
                }
            }
        }
    }
}
