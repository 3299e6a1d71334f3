//! Dense complex polynomials and a Durand–Kerner root finder.
//!
//! Degrees stay in the single digits here (norm polynomials of curve
//! functions), so simultaneous iteration is plenty.

use crate::error::{Error, Result};
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    /// Coefficients in ascending order; may carry negligible trailing terms
    /// until [`Poly::trimmed`] is applied.
    pub c: Vec<Complex64>,
}

impl Poly {
    pub fn new(c: Vec<Complex64>) -> Self {
        Poly { c }
    }

    pub fn from_re(c: &[f64]) -> Self {
        Poly { c: c.iter().map(|&x| Complex64::new(x, 0.0)).collect() }
    }

    pub fn zero() -> Self {
        Poly { c: vec![] }
    }

    pub fn degree(&self) -> Option<usize> {
        let scale = self.scale();
        self.c
            .iter()
            .rposition(|z| z.norm() > 1e-14 * scale)
    }

    fn scale(&self) -> f64 {
        self.c.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0)
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    pub fn trimmed(&self) -> Poly {
        match self.degree() {
            None => Poly::zero(),
            Some(d) => Poly { c: self.c[..=d].to_vec() },
        }
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        let mut r = Complex64::new(0.0, 0.0);
        for ci in self.c.iter().rev() {
            r = r * x + ci;
        }
        r
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let n = self.c.len().max(rhs.c.len());
        let mut c = vec![Complex64::new(0.0, 0.0); n];
        for (i, ci) in c.iter_mut().enumerate() {
            if i < self.c.len() {
                *ci += self.c[i];
            }
            if i < rhs.c.len() {
                *ci += rhs.c[i];
            }
        }
        Poly { c }
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.add(&rhs.scaled(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.c.is_empty() || rhs.c.is_empty() {
            return Poly::zero();
        }
        let mut c = vec![Complex64::new(0.0, 0.0); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in rhs.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly { c }
    }

    pub fn scaled(&self, s: Complex64) -> Poly {
        Poly { c: self.c.iter().map(|z| z * s).collect() }
    }

    /// p(X) -> p(-X).
    pub fn compose_neg(&self) -> Poly {
        Poly {
            c: self
                .c
                .iter()
                .enumerate()
                .map(|(i, z)| if i % 2 == 0 { *z } else { -z })
                .collect(),
        }
    }

    /// All complex roots (with multiplicity, unclustered) via Durand–Kerner.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let p = self.trimmed();
        let deg = match p.degree() {
            None | Some(0) => return Ok(vec![]),
            Some(d) => d,
        };
        let lead = p.c[deg];
        let monic: Vec<Complex64> = p.c.iter().map(|z| z / lead).collect();
        // Cauchy-style radius bound
        let radius = 1.0
            + monic[..deg]
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
        let mut z: Vec<Complex64> = (0..deg)
            .map(|j| {
                Complex64::from_polar(
                    radius * (0.6 + 0.4 * (j as f64 + 1.0) / deg as f64),
                    2.0 * std::f64::consts::PI * j as f64 / deg as f64 + 0.4,
                )
            })
            .collect();
        let eval = |x: Complex64| {
            let mut r = Complex64::new(0.0, 0.0);
            for ci in monic.iter().rev() {
                r = r * x + ci;
            }
            r
        };
        for _ in 0..600 {
            let mut max_step = 0.0f64;
            for j in 0..deg {
                let mut denom = Complex64::new(1.0, 0.0);
                for k in 0..deg {
                    if k != j {
                        denom *= z[j] - z[k];
                    }
                }
                if denom.norm() == 0.0 {
                    denom = Complex64::new(1e-30, 0.0);
                }
                let step = eval(z[j]) / denom;
                z[j] -= step;
                max_step = max_step.max(step.norm());
            }
            if max_step < 1e-15 * radius {
                break;
            }
        }
        // residual sanity: a genuine root set reproduces the polynomial
        for zj in &z {
            let r = eval(*zj).norm();
            let scale: f64 = (0..=deg).map(|i| zj.norm().powi(i as i32)).sum();
            if !(r.is_finite() && r < 1e-7 * scale) {
                return Err(Error::RootFinding { degree: deg });
            }
        }
        Ok(z)
    }
}

/// Cluster points that agree within `tol` (absolute), returning
/// (cluster mean, multiplicity).  The mean of a symmetric cluster around a
/// multiple root is far more accurate than any single member.
pub fn cluster(points: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let mut sorted: Vec<Complex64> = points.to_vec();
    sorted.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    for p in sorted {
        match out
            .iter_mut()
            .find(|(s, n)| (*s / *n as f64 - p).norm() < tol)
        {
            Some((s, n)) => {
                *s += p;
                *n += 1;
            }
            None => out.push((p, 1)),
        }
    }
    out.into_iter().map(|(s, n)| (s / n as f64, n)).collect()
}
