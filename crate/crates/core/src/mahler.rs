//! Numerical Mahler measure of P_k(x, y) = x + 1/x + y + 1/y + k.
//!
//! Writing x = e^{2πit} turns P_k = 0 into y² + c(t)y + 1 = 0 with
//! c(t) = k + 2cos(2πt).  The two y-roots multiply to 1, so Jensen's formula
//! collapses the torus integral to one dimension:
//!
//! ```text
//! m(k) = ∫₀¹ log max(|y₊(t)|, 1) dt
//! ```
//!
//! For real k the integrand has square-root kinks where |c(t)| = 2 and is
//! identically zero where |c(t)| < 2; kink panels are regularised by a
//! t = t₀ ± u² substitution.  A 2-D midpoint-rule evaluation of the defining
//! torus integral is kept alongside as an independent (slow, ~1e-4) oracle.

use crate::error::{Error, Result};
use crate::quad;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Parameter of one member of the family, optionally remembered through the
/// substitution k = 2(h + 1/h).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveParam {
    pub k: Complex64,
    pub h: Option<Complex64>,
}

impl CurveParam {
    pub fn from_k(k: Complex64) -> Self {
        CurveParam { k, h: None }
    }

    pub fn from_k_re(k: f64) -> Self {
        CurveParam { k: Complex64::new(k, 0.0), h: None }
    }

    /// k = 2(h + 1/h).
    pub fn from_h(h: Complex64) -> Self {
        let k = 2.0 * (h + 1.0 / h);
        CurveParam { k, h: Some(h) }
    }

    /// |k - 2(h + 1/h)| <= 1e-12 (1 + |k|) whenever h is recorded.
    pub fn consistent(&self) -> bool {
        match self.h {
            None => true,
            Some(h) => (self.k - 2.0 * (h + 1.0 / h)).norm() <= 1e-12 * (1.0 + self.k.norm()),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub grid_n: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { abs_tol: 1e-11, max_subdivisions: 200_000, grid_n: 1024 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MahlerResult {
    pub value: f64,
    pub err_est: f64,
    pub panels: usize,
}

/// Roots of y² + cy + 1 = 0, larger modulus first.
///
/// The larger root is computed from the numerically safe sign of the square
/// root and the smaller as its exact reciprocal (the product is 1 by Vieta),
/// so no cancellation occurs.
pub fn y_roots(c: Complex64) -> (Complex64, Complex64) {
    let s = (c * c - 4.0).sqrt();
    // pick the sign that avoids cancellation in c + s
    let big = if (c.re * s.re + c.im * s.im) >= 0.0 {
        -(c + s) / 2.0
    } else {
        -(c - s) / 2.0
    };
    if big.norm() == 0.0 {
        // c^2 = 4 and c = ±2: double root ∓1
        return (-c / 2.0, -c / 2.0);
    }
    let small = 1.0 / big;
    if big.norm() >= small.norm() {
        (big, small)
    } else {
        (small, big)
    }
}

/// log max(|y₊|, 1) for the fiber over x = e^{2πit}.
fn integrand(k: Complex64, t: f64) -> f64 {
    let c = k + 2.0 * (2.0 * PI * t).cos();
    let (big, _) = y_roots(c);
    let r = big.norm();
    if r <= 1.0 {
        0.0
    } else {
        r.ln()
    }
}

/// Panel boundaries on [0, 1/2] where |c(t)| = 2, for real k.
fn real_transitions(k: f64) -> Vec<f64> {
    let mut pts = vec![0.0, 0.5];
    for target in [2.0f64, -2.0] {
        let v = (target - k) / 2.0;
        if (-1.0..=1.0).contains(&v) {
            let t = v.acos() / (2.0 * PI);
            if t > 0.0 && t < 0.5 {
                pts.push(t);
            }
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    pts
}

/// m(k) by adaptive quadrature of the Jensen-reduced integrand.
pub fn mahler_measure(param: CurveParam, cfg: &QuadratureConfig) -> Result<MahlerResult> {
    let k = param.k;
    let mut value = 0.0;
    let mut err = 0.0;
    let mut panels = 0usize;
    // cos(2πt) is even about t = 1/2, so integrate [0, 1/2] and double
    if k.im == 0.0 {
        let kr = k.re;
        let pts = real_transitions(kr);
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let mid = 0.5 * (a + b);
            let cmid = (kr + 2.0 * (2.0 * PI * mid).cos()).abs();
            if cmid <= 2.0 {
                continue; // both roots on the unit circle: integrand vanishes
            }
            let a_is_kink = a > 0.0 && a < 0.5;
            let b_is_kink = b > 0.0 && b < 0.5;
            let budget = cfg.abs_tol * (b - a).max(0.05);
            let r = integrate_panel(k, a, b, a_is_kink, b_is_kink, budget, cfg.max_subdivisions)?;
            value += r.value;
            err += r.err_est;
            panels += r.panels;
        }
    } else {
        // complex k: smooth integrand, no transition points assumed
        let mut f = |t: f64| integrand(k, t);
        let r = quad::integrate(&mut f, 0.0, 0.5, cfg.abs_tol * 0.5, cfg.max_subdivisions)?;
        value = r.value;
        err = r.err_est;
        panels = r.panels;
    }
    Ok(MahlerResult { value: 2.0 * value, err_est: 2.0 * err, panels })
}

/// Integrate one smooth-interior panel, substituting t = edge ± u² at any
/// kink endpooint so the integrand becomes C^1 there.
fn integrate_panel(
    k: Complex64,
    a: f64,
    b: f64,
    kink_a: bool,
    kink_b: bool,
    tol: f64,
    max_panels: usize,
) -> Result<quad::QuadResult> {
    match (kink_a, kink_b) {
        (false, false) => {
            let mut f = |t: f64| integrand(k, t);
            quad::integrate(&mut f, a, b, tol, max_panels)
        }
        (true, false) => {
            let mut f = |u: f64| 2.0 * u * integrand(k, a + u * u);
            quad::integrate(&mut f, 0.0, (b - a).sqrt(), tol, max_panels)
        }
        (false, true) => {
            let mut f = |u: f64| 2.0 * u * integrand(k, b - u * u);
            quad::integrate(&mut f, 0.0, (b - a).sqrt(), tol, max_panels)
        }
        (true, true) => {
            let mid = 0.5 * (a + b);
            let mut fa = |u: f64| 2.0 * u * integrand(k, a + u * u);
            let ra = quad::integrate(&mut fa, 0.0, (mid - a).sqrt(), 0.5 * tol, max_panels)?;
            let mut fb = |u: f64| 2.0 * u * integrand(k, b - u * u);
            let rb = quad::integrate(&mut fb, 0.0, (b - mid).sqrt(), 0.5 * tol, max_panels)?;
            Ok(quad::QuadResult {
                value: ra.value + rb.value,
                err_est: ra.err_est + rb.err_est,
                panels: ra.panels + rb.panels,
            })
        }
    }
}

/// Midpoint-rule discretisation of the defining 2-D torus integral.
///
/// On the torus x + 1/x = 2cos θ₁, so log|P_k| = log|2cos θ₁ + 2cos θ₂ + k|.
/// Converges to m(k) as grid_n → ∞; used only as a cross-check near 1e-4.
pub fn mahler_measure_2d_oracle(param: CurveParam, grid_n: usize) -> f64 {
    let n = grid_n.max(8);
    let k = param.k;
    let cosines: Vec<f64> = (0..n)
        .map(|i| 2.0 * (2.0 * PI * (i as f64 + 0.5) / n as f64).cos())
        .collect();
    let mut total = 0.0f64;
    for c1 in &cosines {
        let mut row = 0.0f64;
        for c2 in &cosines {
            let re = c1 + c2 + k.re;
            let im = k.im;
            row += 0.5 * (re * re + im * im).ln();
        }
        total += row;
    }
    total / (n * n) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(k: f64) -> f64 {
        mahler_measure(CurveParam::from_k_re(k), &QuadratureConfig::default())
            .unwrap()
            .value
    }

    fn mc(k: Complex64) -> f64 {
        mahler_measure(CurveParam::from_k(k), &QuadratureConfig::default())
            .unwrap()
            .value
    }

    #[test]
    fn y_roots_examples() {
        let (a, b) = y_roots(Complex64::new(0.0, 0.0));
        assert!((a.norm() - 1.0).abs() < 1e-15 && (b.norm() - 1.0).abs() < 1e-15);
        assert!((a * b - 1.0).norm() < 1e-15);

        let (a, b) = y_roots(Complex64::new(2.5, 0.0));
        assert!((a - Complex64::new(-2.0, 0.0)).norm() < 1e-14);
        assert!((b - Complex64::new(-0.5, 0.0)).norm() < 1e-14);

        let (a, b) = y_roots(Complex64::new(3.0, 4.0));
        assert!((a * b - 1.0).norm() < 1e-13);
        assert!(a.norm() >= b.norm());
    }

    #[test]
    fn vieta_holds_on_samples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let c = Complex64::new(rng.gen::<f64>() * 8.0 - 4.0, rng.gen::<f64>() * 8.0 - 4.0);
            let (a, b) = y_roots(c);
            assert!((a * b - 1.0).norm() < 1e-13);
            assert!(a.norm() + 1e-15 >= b.norm());
            // they really are roots
            assert!((a * a + c * a + 1.0).norm() < 1e-12 * (1.0 + a.norm().powi(2)));
        }
    }

    #[test]
    fn measure_vanishes_at_zero() {
        assert!(m(0.0).abs() < 1e-10);
    }

    #[test]
    fn known_values_match_high_precision_references() {
        // 25-digit references computed with adaptive quadrature split at the
        // |c| = 2 transitions (mpmath, dps = 30)
        assert!((m(1.0) - 0.2513304337132522313748726).abs() < 1e-11);
        assert!((m(2.0) - 0.5114240670535037222832744).abs() < 1e-11);
        assert!((m(5.0) - 1.507982602279513388249235).abs() < 1e-11);
        assert!((m(8.0) - 2.045696268214014889133098).abs() < 1e-11);
        assert!((m(16.0) - 2.764634770845774545123598).abs() < 1e-11);
        let isqrt2 = Complex64::new(0.0, std::f64::consts::SQRT_2);
        assert!((mc(isqrt2) - 0.7671361005802555834249116).abs() < 1e-11);
        assert!((mc(Complex64::new(0.0, -3.0)) - 1.256652168566261156874363).abs() < 1e-11);
    }

    #[test]
    fn ratio_identities() {
        assert!((m(8.0) / m(2.0) - 4.0).abs() < 1e-9);
        assert!((m(5.0) - 6.0 * m(1.0)).abs() < 1e-9);
    }

    #[test]
    fn sign_symmetry() {
        for k in [
            Complex64::new(1.0, 0.0),
            Complex64::new(5.0, 0.0),
            Complex64::new(2.0, 1.0),
        ] {
            assert!((mc(k) - mc(-k)).abs() < 1e-10, "k = {k}");
        }
    }

    #[test]
    fn monotone_for_large_real_k() {
        assert!(m(5.0) < m(8.0) && m(8.0) < m(16.0));
    }

    #[test]
    fn large_k_asymptotics() {
        assert!((m(100.0) - 100f64.ln()).abs() < 1e-3);
        // frozen reference m(100) = 4.604970095921363387794084
        assert!((m(100.0) - 4.604970095921363387794084).abs() < 1e-11);
    }

    #[test]
    fn grid_oracle_agrees() {
        let p0 = CurveParam::from_k_re(0.0);
        assert!(mahler_measure_2d_oracle(p0, 512).abs() < 5e-3);
        let p3 = CurveParam::from_k_re(3.0);
        let g = mahler_measure_2d_oracle(p3, 4096);
        assert!((g - m(3.0)).abs() < 1e-4, "grid {g} vs jensen {}", m(3.0));
        let p5 = CurveParam::from_k_re(5.0);
        let g5 = mahler_measure_2d_oracle(p5, 4096);
        assert!((g5 - m(5.0)).abs() < 1e-4);
    }

    #[test]
    fn functional_equation_ko() {
        // m(4h²) + m(4/h²) = 2 m(2(h + 1/h)) for real h
        for h in [0.5f64, std::f64::consts::FRAC_1_SQRT_2, 0.8, 1.7] {
            let lhs = m(4.0 * h * h) + m(4.0 / (h * h));
            let rhs = 2.0 * m(2.0 * (h + 1.0 / h));
            assert!((lhs - rhs).abs() < 1e-9, "h = {h}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn functional_equation_lr() {
        // m(2(h+1/h)) + m(2(ih + 1/(ih))) = m(4/h²) for 0 < |h| < 1
        for h in [0.3f64, 0.5, std::f64::consts::FRAC_1_SQRT_2] {
            let ih = Complex64::new(0.0, h);
            let lhs = m(2.0 * (h + 1.0 / h)) + mc(2.0 * (ih + 1.0 / ih));
            let rhs = m(4.0 / (h * h));
            assert!((lhs - rhs).abs() < 1e-9, "h = {h}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn param_consistency() {
        let p = CurveParam::from_h(Complex64::new(0.5, 0.0));
        assert!(p.consistent());
        assert!((p.k - Complex64::new(5.0, 0.0)).norm() < 1e-14);
        let bad = CurveParam { k: Complex64::new(5.1, 0.0), h: Some(Complex64::new(0.5, 0.0)) };
        assert!(!bad.consistent());
    }
}
