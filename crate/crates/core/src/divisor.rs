//! Divisors of curve functions, the diamond operation, and canonical classes
//! in ℤ[E(ℂ)]⁻ (the group ring modulo (-T) ~ -(T)).
//!
//! Zeros of F = aPoly + bPoly·Y are read off the norm polynomial
//! N(X) = aPoly² - bPoly²(X³ + aX² + X): each clustered root contributes a
//! point on the Y-branch that annihilates F, the pole order at O is the
//! degree bookkeeping max(2 deg a, 3 + 2 deg b), and the total degree is 0 by
//! construction.
//!
//! Canonical classes drop O and every 2-torsion point: the relation
//! (-T) ~ -(T) makes such terms 2-torsion in the group ring, and the odd
//! functions (elliptic dilogarithm, regulator) they feed into kill them, so
//! the identities this crate certifies all live in the torsion-free part.

use crate::curve::{fmt_c, CurveFunction, CurveRational, Point, WeierstrassCurve, PT_TOL};
use crate::error::{Error, Result};
use crate::poly;
use num_complex::Complex64;

/// Formal ℤ-combination of points, including O.
#[derive(Debug, Clone, Default)]
pub struct Divisor {
    pub terms: Vec<(Point, i64)>,
}

/// Canonicalised element of ℤ[E(ℂ)]⁻: no O, no 2-torsion, one representative
/// per {T, -T} pair, coefficients nonzero, deterministic order.
#[derive(Debug, Clone, Default)]
pub struct DiamondClass {
    terms: Vec<(Point, i64)>,
}

fn merge(terms: Vec<(Point, i64)>) -> Vec<(Point, i64)> {
    let mut out: Vec<(Point, i64)> = Vec::new();
    for (p, m) in terms {
        if m == 0 {
            continue;
        }
        match out.iter_mut().find(|(q, _)| q.approx_eq(&p)) {
            Some((_, c)) => *c += m,
            None => out.push((p, m)),
        }
    }
    out.retain(|(_, c)| *c != 0);
    out
}

fn sort_terms(terms: &mut [(Point, i64)]) {
    terms.sort_by(|(p, _), (q, _)| {
        let key = |pt: &Point| match pt {
            Point::Infinity => (f64::INFINITY, 0.0, 0.0, 0.0),
            Point::Affine(x, y) => (x.re, x.im, y.re, y.im),
        };
        key(p).partial_cmp(&key(q)).unwrap_or(std::cmp::Ordering::Equal)
    });
}

impl Divisor {
    pub fn new(terms: Vec<(Point, i64)>) -> Self {
        let mut t = merge(terms);
        sort_terms(&mut t);
        Divisor { terms: t }
    }

    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|(_, m)| m).sum()
    }

    pub fn neg(&self) -> Divisor {
        Divisor { terms: self.terms.iter().map(|(p, m)| (*p, -m)).collect() }
    }

    pub fn add(&self, rhs: &Divisor) -> Divisor {
        Divisor::new(self.terms.iter().chain(rhs.terms.iter()).cloned().collect())
    }

    pub fn sub(&self, rhs: &Divisor) -> Divisor {
        self.add(&rhs.neg())
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Structural equality up to point tolerance (exact on coefficients).
    pub fn approx_eq(&self, rhs: &Divisor) -> bool {
        self.sub(rhs).is_empty()
    }

    pub fn to_text(&self) -> String {
        format_terms(&self.terms)
    }
}

fn format_terms(terms: &[(Point, i64)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    terms
        .iter()
        .map(|(p, m)| match p {
            Point::Infinity => format!("{m}*O"),
            Point::Affine(x, y) => format!("{m}*({},{})", fmt_c(*x), fmt_c(*y)),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

impl DiamondClass {
    pub fn terms(&self) -> &[(Point, i64)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exact integer equality of canonical forms (points compared with the
    /// clustering tolerance).
    pub fn eq_class(&self, rhs: &DiamondClass) -> bool {
        let mut diff: Vec<(Point, i64)> = self.terms.clone();
        diff.extend(rhs.terms.iter().map(|(p, m)| (*p, -m)));
        merge(diff).is_empty()
    }

    pub fn to_text(&self) -> String {
        format_terms(&self.terms)
    }
}

/// Reduce a raw term list into ℤ[E(ℂ)]⁻ canonical form.
///
/// Representative rule: keep the point whose Y has Re Y > 0, ties broken by
/// Im Y >= 0; the coefficient flips sign when the mate is kept instead.
pub fn canonicalize(terms: Vec<(Point, i64)>) -> DiamondClass {
    let merged = merge(terms);
    let mut reps: Vec<(Point, i64)> = Vec::new();
    for (p, m) in merged {
        if p.is_two_torsion() {
            continue; // O and 2-torsion die in the odd part
        }
        let (x, y) = match p {
            Point::Affine(x, y) => (x, y),
            Point::Infinity => unreachable!(),
        };
        let tol = PT_TOL * (1.0 + y.norm());
        let keep = y.re > tol || (y.re.abs() <= tol && y.im >= 0.0);
        if keep {
            reps.push((p, m));
        } else {
            reps.push((Point::Affine(x, -y), -m));
        }
    }
    let mut out = merge(reps);
    sort_terms(&mut out);
    DiamondClass { terms: out }
}

/// Divisor of F = aPoly + bPoly·Y on E.
pub fn divisor_of(e: &WeierstrassCurve, f: &CurveFunction) -> Result<Divisor> {
    let a = f.a.trimmed();
    let b = f.b.trimmed();
    if b.is_zero() && a.is_zero() {
        return Err(Error::RootClustering {
            x: Complex64::new(0.0, 0.0),
            residual: f64::INFINITY,
        });
    }
    let mut terms: Vec<(Point, i64)> = Vec::new();
    if b.is_zero() {
        // pure polynomial in X: zeros come in ±Y pairs, 2-torsion doubled
        let deg = a.degree().unwrap_or(0);
        if deg == 0 {
            return Ok(Divisor::new(vec![])); // nonzero constant
        }
        let roots = a.roots()?;
        for (x0, mult) in poly::cluster(&roots, 1e-6) {
            let c = e.rhs(x0);
            if c.norm() <= 1e-10 * (1.0 + x0.norm()).powi(3) {
                terms.push((Point::Affine(x0, Complex64::new(0.0, 0.0)), 2 * mult as i64));
            } else {
                let y = c.sqrt();
                terms.push((Point::Affine(x0, y), mult as i64));
                terms.push((Point::Affine(x0, -y), mult as i64));
            }
        }
        terms.push((Point::Infinity, -2 * deg as i64));
        return finish_divisor(e, terms);
    }
    let norm = f.norm(e);
    let pole = f.pole_order_at_infinity();
    debug_assert_eq!(norm.degree().map(|d| d as i64), Some(pole));
    let roots = norm.roots()?;
    let fscale = |x0: Complex64, y0: Complex64| {
        a.eval(x0).norm() + (b.eval(x0) * y0).norm() + 1e-30
    };
    for (x0, mult) in poly::cluster(&roots, 1e-6) {
        let c = e.rhs(x0);
        if c.norm() <= 1e-12 * (1.0 + x0.norm()).powi(3) {
            // 2-torsion: Y uniformises, ord at (x0, 0) equals the norm
            // multiplicity (F and its conjugate vanish to the same order)
            terms.push((Point::Affine(x0, Complex64::new(0.0, 0.0)), mult as i64));
            continue;
        }
        let y = c.sqrt();
        let vp = (a.eval(x0) + b.eval(x0) * y).norm() / fscale(x0, y);
        let vm = (a.eval(x0) + b.eval(x0) * (-y)).norm() / fscale(x0, y);
        let near = vp.min(vm);
        if near > 1e-5 {
            return Err(Error::RootClustering { x: x0, residual: near });
        }
        if vp < 1e-5 && vm < 1e-5 {
            // F vanishes on both branches; split evenly when that is exact
            if mult % 2 != 0 {
                return Err(Error::RootClustering { x: x0, residual: near });
            }
            terms.push((Point::Affine(x0, y), mult as i64 / 2));
            terms.push((Point::Affine(x0, -y), mult as i64 / 2));
        } else if vp <= vm {
            terms.push((Point::Affine(x0, y), mult as i64));
        } else {
            terms.push((Point::Affine(x0, -y), mult as i64));
        }
    }
    terms.push((Point::Infinity, -pole));
    finish_divisor(e, terms)
}

fn finish_divisor(e: &WeierstrassCurve, terms: Vec<(Point, i64)>) -> Result<Divisor> {
    let d = Divisor::new(terms);
    for (p, _) in &d.terms {
        if !e.contains(p) {
            if let Point::Affine(x, y) = p {
                return Err(Error::OffCurve {
                    x: *x,
                    y: *y,
                    residual: (y * y - e.rhs(*x)).norm(),
                });
            }
        }
    }
    debug_assert_eq!(d.degree(), 0);
    Ok(d)
}

/// Divisor of a quotient num/den.
pub fn divisor_of_rational(e: &WeierstrassCurve, r: &CurveRational) -> Result<Divisor> {
    Ok(divisor_of(e, &r.num)?.sub(&divisor_of(e, &r.den)?))
}

/// (D₁ ⋄ D₂) = Σ aₛ b_t (S - T), canonicalised.
pub fn diamond(e: &WeierstrassCurve, d1: &Divisor, d2: &Divisor) -> Result<DiamondClass> {
    for (p, _) in d1.terms.iter().chain(d2.terms.iter()) {
        if !e.contains(p) {
            return Err(Error::MixedCurve);
        }
    }
    let mut raw: Vec<(Point, i64)> = Vec::new();
    for (s, ms) in &d1.terms {
        for (t, mt) in &d2.terms {
            raw.push((e.sub(*s, *t)?, ms * mt));
        }
    }
    Ok(canonicalize(raw))
}

/// s₁·c₁ + s₂·c₂ in ℤ[E(ℂ)]⁻.
pub fn class_combine(c1: &DiamondClass, c2: &DiamondClass, s1: i64, s2: i64) -> DiamondClass {
    let mut raw: Vec<(Point, i64)> = Vec::new();
    raw.extend(c1.terms.iter().map(|(p, m)| (*p, s1 * m)));
    raw.extend(c2.terms.iter().map(|(p, m)| (*p, s2 * m)));
    canonicalize(raw)
}

/// Convenience: the canonical class of a named ℤ-combination of points.
pub fn class_of(points: &[(Point, i64)]) -> DiamondClass {
    canonicalize(points.to_vec())
}
