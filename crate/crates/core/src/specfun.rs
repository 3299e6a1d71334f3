//! Complex dilogarithm and the Bloch–Wigner function.
//!
//! `li2` is the principal branch of Li₂(z) = Σ_{n≥1} zⁿ/n², analytically
//! continued with the cut along [1, ∞).  `bloch_wigner` is the single-valued
//! combination
//!
//! ```text
//! D(z) = Im Li₂(z) + arg(1 - z) · log|z|
//! ```
//!
//! which vanishes on the real axis and satisfies D(1/z) = D(1-z) = -D(z).

use num_complex::Complex64;
use std::f64::consts::PI;

const PI2_OVER_6: f64 = PI * PI / 6.0;

/// B_{2k}/(2k+1)! for k = 1..=22, the coefficients of the expansion
/// Li₂(z) = u - u²/4 + Σ_k B_{2k} u^{2k+1}/(2k+1)! with u = -log(1-z).
const LOG_SERIES_COEFF: [f64; 22] = [
    0.027777777777777777778,
    -0.00027777777777777777778,
    4.7241118669690098262e-6,
    -9.1857730746619635509e-8,
    1.8978869988970999072e-9,
    -4.0647616451442255268e-11,
    8.9216910204564525552e-13,
    -1.9939295860721075687e-14,
    4.5189800296199181917e-16,
    -1.0356517612181247014e-17,
    2.3952186210261867457e-19,
    -5.5817858743250093363e-21,
    1.3091507554183212858e-22,
    -3.0874198024267402932e-24,
    7.3159756527022034204e-26,
    -1.7408456572340007410e-27,
    4.1576356446138997196e-29,
    -9.9621484882846221032e-31,
    2.3940344248961653005e-32,
    -5.7683473553673900843e-34,
    1.3931794796470079778e-35,
    -3.3721219654850894705e-37,
];

/// Principal dilogarithm Li₂(z).
///
/// Relative error stays below ~1e-14 for |z| up to 1e6.  Real arguments on
/// the cut z > 1 follow the continuation from below (Im Li₂(x) = -π log x),
/// matching mpmath's `polylog(2, x)`.
pub fn li2(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        if z.re == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if z.re == 1.0 {
            return Complex64::new(PI2_OVER_6, 0.0);
        }
        // pin exactly-real input below the cut so the branch is well defined
        return li2_reduced(Complex64::new(z.re, -0.0));
    }
    li2_reduced(z)
}

fn li2_reduced(z: Complex64) -> Complex64 {
    if z.norm() > 1.0 {
        // inversion: Li2(z) = -Li2(1/z) - pi^2/6 - log^2(-z)/2
        let l = (-z).ln();
        return -li2_reduced(1.0 / z) - PI2_OVER_6 - 0.5 * l * l;
    }
    if z.re > 0.5 {
        // reflection: Li2(z) = pi^2/6 - log(z) log(1-z) - Li2(1-z)
        let w = Complex64::new(1.0, 0.0) - z;
        return PI2_OVER_6 - z.ln() * w.ln() - li2_reduced(w);
    }
    if z.norm() <= 0.4 {
        return li2_series(z);
    }
    li2_log_series(z)
}

/// Direct power series, valid (and fast) for |z| <= 0.4.
fn li2_series(z: Complex64) -> Complex64 {
    let mut term = z;
    let mut sum = z;
    for n in 2..200u32 {
        term *= z;
        let add = term / ((n * n) as f64);
        sum += add;
        if add.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    sum
}

/// Expansion in u = -log(1-z); handles the region near |z| = 1, Re z <= 1/2
/// where the power series is too slow.
fn li2_log_series(z: Complex64) -> Complex64 {
    let u = -(Complex64::new(1.0, 0.0) - z).ln();
    let u2 = u * u;
    let mut sum = u - 0.25 * u2;
    let mut pow = u; // u^(2k+1) running power
    for c in LOG_SERIES_COEFF {
        pow *= u2;
        let add = c * pow;
        sum += add;
        if add.norm() < 1e-19 * sum.norm() {
            break;
        }
    }
    sum
}

/// Bloch–Wigner function D(z) = Im Li₂(z) + arg(1-z)·log|z|.
///
/// Identically zero on the real axis (in particular at z = 0 and z = 1).
pub fn bloch_wigner(z: Complex64) -> f64 {
    if z.im == 0.0 {
        return 0.0;
    }
    li2(z).im + (Complex64::new(1.0, 0.0) - z).arg() * z.norm().ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Brute-force partial sums of Σ z^n/n², the independent oracle inside
    /// the disk of convergence.
    fn li2_brute(z: Complex64, terms: u32) -> Complex64 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for n in 1..=terms {
            term *= z;
            if term.norm() == 0.0 {
                break;
            }
            sum += term / ((n as f64) * (n as f64));
        }
        sum
    }

    #[test]
    fn li2_special_points() {
        assert_eq!(li2(Complex64::new(0.0, 0.0)), Complex64::new(0.0, 0.0));
        let basel = li2(Complex64::new(1.0, 0.0));
        assert!((basel.re - PI2_OVER_6).abs() < 1e-15);
        assert_eq!(basel.im, 0.0);
        // Li2(-1) = -pi^2/12, Li2(1/2) = pi^2/12 - log^2(2)/2
        let m1 = li2(Complex64::new(-1.0, 0.0));
        assert!((m1.re + PI * PI / 12.0).abs() < 1e-15);
        let half = li2(Complex64::new(0.5, 0.0));
        let expect = PI * PI / 12.0 - 0.5 * 2f64.ln().powi(2);
        assert!((half.re - expect).abs() < 1e-15);
    }

    #[test]
    fn li2_matches_brute_series_at_half() {
        let z = Complex64::new(0.5, 0.0);
        let oracle = li2_brute(z, 1_000_000);
        assert!((li2(z) - oracle).norm() < 1e-12);
    }

    #[test]
    fn li2_matches_series_on_disk() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let r = 0.5 * rng.gen::<f64>().sqrt();
            let th = rng.gen::<f64>() * 2.0 * PI;
            let z = Complex64::from_polar(r, th);
            let oracle = li2_brute(z, 4000);
            assert!(
                (li2(z) - oracle).norm() < 1e-12,
                "z = {z}, got {}, oracle {oracle}",
                li2(z)
            );
        }
    }

    #[test]
    fn li2_inversion_consistency_large_arguments() {
        // Li2(z) + Li2(1/z) = -pi^2/6 - log^2(-z)/2 exercised far outside
        // the unit disk; checks the continuation does not lose accuracy.
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let r = 10f64.powf(rng.gen::<f64>() * 6.0);
            let th = rng.gen::<f64>() * 2.0 * PI;
            let z = Complex64::from_polar(r, th);
            if z.im.abs() < 1e-9 * z.norm() {
                continue;
            }
            let lhs = li2(z) + li2(1.0 / z);
            let l = (-z).ln();
            let rhs = -Complex64::new(PI2_OVER_6, 0.0) - 0.5 * l * l;
            assert!(
                (lhs - rhs).norm() < 1e-13 * (1.0 + rhs.norm()),
                "z = {z}"
            );
        }
    }

    #[test]
    fn bloch_wigner_vanishes_on_reals() {
        for x in [0.37, -2.5, 0.0, 1.0, 17.0, 1e-9] {
            assert_eq!(bloch_wigner(Complex64::new(x, 0.0)), 0.0);
        }
    }

    #[test]
    fn bloch_wigner_at_i_is_catalan() {
        // Catalan constant via its defining series, as an independent oracle.
        let mut catalan = 0.0f64;
        let mut sign = 1.0;
        for n in 0..200_000u64 {
            let d = (2 * n + 1) as f64;
            catalan += sign / (d * d);
            sign = -sign;
        }
        let d = bloch_wigner(Complex64::new(0.0, 1.0));
        assert!(
            (d - catalan).abs() < 1e-10,
            "D(i) = {d}, series oracle = {catalan}"
        );
        // tighter frozen digits: G = 0.915965594177219015...
        assert!((d - 0.915965594177219015).abs() < 1e-14);
    }

    #[test]
    fn bloch_wigner_symmetries() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..1000 {
            let r = 0.1 * (100f64).powf(rng.gen::<f64>()); // log-uniform in [0.1, 10]
            let th = rng.gen::<f64>() * 2.0 * PI;
            let z = Complex64::from_polar(r, th);
            let d = bloch_wigner(z);
            assert!((d + bloch_wigner(1.0 / z)).abs() < 1e-11, "inversion at {z}");
            assert!(
                (d + bloch_wigner(Complex64::new(1.0, 0.0) - z)).abs() < 1e-11,
                "reflection at {z}"
            );
            assert!((d + bloch_wigner(z.conj())).abs() < 1e-12, "conjugation at {z}");
        }
    }
}
