#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use schroder::{FunctionRep, RationalFunction, Symbol, Tolerances, TruncatedPowerSeries};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn reals(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| c(x, 0.0)).collect()
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The standing example z/(2 - z): fixed point 0, multiplier 1/2, Koenigs
/// function z/(1 - z).
pub fn moebius_fixture(tol: &Tolerances) -> Symbol {
    Symbol::new(reals(&[0.0, 1.0]), reals(&[2.0, -1.0]), tol).unwrap()
}

pub fn identity_rep(tol: &Tolerances) -> FunctionRep {
    FunctionRep::Rational(
        RationalFunction::new(
            reals(&[0.0, 1.0]),
            reals(&[1.0]),
            tol.pole_margin,
            tol.common_root,
        )
        .unwrap(),
    )
}

pub fn rational_rep(num: &[Complex64], den: &[Complex64], tol: &Tolerances) -> FunctionRep {
    FunctionRep::Rational(
        RationalFunction::new(num.to_vec(), den.to_vec(), tol.pole_margin, tol.common_root)
            .unwrap(),
    )
}

pub struct RandomSchroeder {
    pub symbol: Symbol,
    pub alpha: Complex64,
    pub multiplier: Complex64,
}

/// Random rational self-map with a controlled interior fixed point: a
/// rotation-and-scale of z times up to two Blaschke factors, so the
/// boundary sup is the scale exactly, conjugated to move the fixed point
/// from 0 to a random alpha. The multiplier modulus is kept in a band where
/// every downstream stage is well conditioned.
pub fn random_schroeder(rng: &mut ChaCha8Rng, tol: &Tolerances) -> RandomSchroeder {
    loop {
        let s: f64 = rng.gen_range(0.45..0.9);
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let factors = rng.gen_range(0usize..=2);
        let lead = Complex64::from_polar(s, theta);
        let mut num = vec![c(0.0, 0.0), lead];
        let mut den = vec![c(1.0, 0.0)];
        let mut multiplier = lead;
        for _ in 0..factors {
            // Zeros too close to the origin drag critical points toward
            // the fixed point and blow up the eigenfunction coefficients,
            // which in turn conditions the high-index functional rows.
            let a = Complex64::from_polar(
                rng.gen_range(0.6..0.9),
                rng.gen_range(0.0..std::f64::consts::TAU),
            );
            // One Blaschke factor (a - z)/(1 - conj(a) z), unimodular on
            // the circle.
            num = poly_mul(&num, &[a, c(-1.0, 0.0)]);
            den = poly_mul(&den, &[c(1.0, 0.0), -a.conj()]);
            multiplier *= a;
        }
        if !(0.32..=0.72).contains(&multiplier.norm()) {
            continue;
        }
        let origin_map = Symbol::new(num, den, tol).unwrap();
        let alpha = Complex64::from_polar(
            rng.gen_range(0.0..0.22),
            rng.gen_range(0.0..std::f64::consts::TAU),
        );
        let symbol = origin_map.conjugate_by_involution(alpha, tol).unwrap();
        return RandomSchroeder {
            symbol,
            alpha,
            multiplier,
        };
    }
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![c(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Random analytic test function as a truncated series about `center`, with
/// geometrically decaying coefficients so high functionals stay tame.
pub fn random_function_series(
    rng: &mut ChaCha8Rng,
    center: Complex64,
    order: usize,
) -> TruncatedPowerSeries {
    let decay: f64 = rng.gen_range(0.55..0.85);
    let coeffs: Vec<Complex64> = (0..=order)
        .map(|k| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                * decay.powi(k as i32)
        })
        .collect();
    TruncatedPowerSeries::new(center, coeffs).unwrap()
}
