//! The Weierstrass model E_k : Y² = X(X² + aX + 1), a = k²/4 - 2, together
//! with its group law over ℂ, the distinguished points that generate every
//! divisor in this family, the rational functions x, y realising
//! P_k(x, y) = 0 on the model, and the isomorphism φ : (X, Y) ↦ (-X, iY)
//! onto the curve with parameter 2(ih + 1/(ih)).
//!
//! Coordinates are floating complex numbers; point identity is by relative
//! tolerance (1e-8).  Every identity asserted downstream is integer-valued
//! after canonicalisation, so rounding never accumulates into an answer.

use crate::error::{Error, Result};
use crate::poly::Poly;
use num_complex::Complex64;

/// Relative tolerance for point identity.
pub const PT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Infinity,
    Affine(Complex64, Complex64),
}

impl Point {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    /// 2-torsion in the tolerance sense: Y ≈ 0 (or O).
    pub fn is_two_torsion(&self) -> bool {
        match self {
            Point::Infinity => true,
            Point::Affine(x, y) => y.norm() <= PT_TOL * (1.0 + x.norm()),
        }
    }

    pub fn neg(&self) -> Point {
        match self {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(*x, -y),
        }
    }

    pub fn approx_eq(&self, other: &Point) -> bool {
        match (self, other) {
            (Point::Infinity, Point::Infinity) => true,
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => {
                (x1 - x2).norm() <= PT_TOL * (1.0 + x1.norm().max(x2.norm()))
                    && (y1 - y2).norm() <= PT_TOL * (1.0 + y1.norm().max(y2.norm()))
            }
            _ => false,
        }
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Point::Infinity => write!(f, "O"),
            Point::Affine(x, y) => write!(f, "({},{})", fmt_c(*x), fmt_c(*y)),
        }
    }
}

/// Compact complex formatting: drop a negligible imaginary part.
pub(crate) fn fmt_c(z: Complex64) -> String {
    if z.im.abs() <= 1e-12 * (1.0 + z.re.abs()) {
        format!("{}", round_tidy(z.re))
    } else if z.im >= 0.0 {
        format!("{}+{}i", round_tidy(z.re), round_tidy(z.im))
    } else {
        format!("{}-{}i", round_tidy(z.re), round_tidy(-z.im))
    }
}

/// Snap values that are within 1e-11 of a short decimal so printed points
/// read like the exact algebraic quantities they approximate.
fn round_tidy(v: f64) -> f64 {
    let r = (v * 1e9).round() / 1e9;
    if (r - v).abs() <= 1e-11 * (1.0 + v.abs()) {
        r
    } else {
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeierstrassCurve {
    pub k: Complex64,
    /// Coefficient in Y² = X³ + aX² + X.
    pub a: Complex64,
}

/// The six distinguished points used by the divisor identities, all on
/// E_{2(h + 1/h)}.
#[derive(Debug, Clone, Copy)]
pub struct NamedPoints {
    /// P = (1, k/2), a generator of the ℤ/4 torsion.
    pub p: Point,
    /// Q = (-1/h², 0), 2-torsion.
    pub q: Point,
    /// P + Q = (-1, h - 1/h).
    pub p_plus_q: Point,
    /// 2P + Q = (-h², 0).
    pub two_p_plus_q: Point,
    /// A = ((-3 + s)/2, 7h/2 - 3/(2h) - (h - 1/h)s/2), s = √(9 - 16h²).
    pub a: Point,
    /// B = ((-3 - s)/2, 7h/2 - 3/(2h) + (h - 1/h)s/2).
    pub b: Point,
}

impl WeierstrassCurve {
    /// Curve for parameter k; singular exactly at k ∈ {0, ±4}.
    pub fn from_k(k: Complex64) -> Result<Self> {
        let ksq = k * k;
        if k.norm() < 1e-12 || (ksq - 16.0).norm() < 1e-12 {
            return Err(Error::SingularCurve { k });
        }
        Ok(WeierstrassCurve { k, a: ksq / 4.0 - 2.0 })
    }

    pub fn from_h(h: Complex64) -> Result<Self> {
        if h.norm() < 1e-12 {
            return Err(Error::SingularCurve { k: Complex64::new(0.0, 0.0) });
        }
        Self::from_k(2.0 * (h + 1.0 / h))
    }

    /// Right-hand side X³ + aX² + X.
    pub fn rhs(&self, x: Complex64) -> Complex64 {
        x * (x * (x + self.a) + 1.0)
    }

    /// The cubic's roots {0, r, 1/r}; r is the larger root of X² + aX + 1.
    pub fn cubic_roots(&self) -> [Complex64; 3] {
        let s = (self.a * self.a - 4.0).sqrt();
        let c1 = -(self.a + s) / 2.0;
        let c2 = -(self.a - s) / 2.0;
        let big = if c1.norm() >= c2.norm() { c1 } else { c2 };
        [Complex64::new(0.0, 0.0), big, 1.0 / big]
    }

    pub fn contains(&self, p: &Point) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine(x, y) => {
                (y * y - self.rhs(*x)).norm() <= 1e-10 * (1.0 + x.norm().powi(3))
            }
        }
    }

    fn require_on_curve(&self, p: &Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else if let Point::Affine(x, y) = p {
            Err(Error::OffCurve { x: *x, y: *y, residual: (y * y - self.rhs(*x)).norm() })
        } else {
            Ok(())
        }
    }

    /// Chord–tangent addition with tolerance-aware handling of S = ±T.
    pub fn add(&self, s: Point, t: Point) -> Result<Point> {
        self.require_on_curve(&s)?;
        self.require_on_curve(&t)?;
        let (x1, y1, x2, y2) = match (s, t) {
            (Point::Infinity, _) => return Ok(t),
            (_, Point::Infinity) => return Ok(s),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let same_x = (x1 - x2).norm() <= PT_TOL * (1.0 + x1.norm().max(x2.norm()));
        let lambda = if same_x {
            if (y1 + y2).norm() <= PT_TOL * (1.0 + y1.norm().max(y2.norm())) {
                return Ok(Point::Infinity); // S = -T (covers doubling 2-torsion)
            }
            (3.0 * x1 * x1 + 2.0 * self.a * x1 + 1.0) / (2.0 * y1)
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let x3 = lambda * lambda - self.a - x1 - x2;
        let y3 = lambda * (x1 - x3) - y1;
        Ok(Point::Affine(x3, y3))
    }

    pub fn sub(&self, s: Point, t: Point) -> Result<Point> {
        self.add(s, t.neg())
    }

    /// n·T by double-and-add (n may be negative).
    pub fn mul(&self, n: i64, t: Point) -> Result<Point> {
        let mut base = if n < 0 { t.neg() } else { t };
        let mut rem = n.unsigned_abs();
        let mut acc = Point::Infinity;
        while rem > 0 {
            if rem & 1 == 1 {
                acc = self.add(acc, base)?;
            }
            rem >>= 1;
            if rem > 0 {
                base = self.add(base, base)?;
            }
        }
        Ok(acc)
    }

    /// The curve 2(ih + 1/(ih)) that φ maps onto; its coefficient is -a.
    pub fn phi_target(&self) -> Result<WeierstrassCurve> {
        let kk = (16.0 - self.k * self.k).sqrt();
        WeierstrassCurve::from_k(kk)
    }

    /// φ(X, Y) = (-X, iY); a group isomorphism onto `phi_target`.
    pub fn iso_phi(&self, s: Point) -> Result<Point> {
        self.require_on_curve(&s)?;
        Ok(match s {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(-x, Complex64::new(0.0, 1.0) * y),
        })
    }
}

/// Named points on E_{2(h + 1/h)}; `s = √(9 - 16h²)` on its principal branch
/// (A carries the + sign in its X-coordinate).
pub fn named_points(h: Complex64) -> Result<(WeierstrassCurve, NamedPoints)> {
    let e = WeierstrassCurve::from_h(h)?;
    let k = e.k;
    let hinv = 1.0 / h;
    let p = Point::Affine(Complex64::new(1.0, 0.0), k / 2.0);
    let q = Point::Affine(-hinv * hinv, Complex64::new(0.0, 0.0));
    let p_plus_q = Point::Affine(Complex64::new(-1.0, 0.0), h - hinv);
    let two_p_plus_q = Point::Affine(-h * h, Complex64::new(0.0, 0.0));
    let s = (Complex64::new(9.0, 0.0) - 16.0 * h * h).sqrt();
    let ybase = 3.5 * h - 1.5 * hinv;
    let yswing = (h - hinv) * s / 2.0;
    let a = Point::Affine((s - 3.0) / 2.0, ybase - yswing);
    let b = Point::Affine((-s - 3.0) / 2.0, ybase + yswing);
    for pt in [&p, &q, &p_plus_q, &two_p_plus_q, &a, &b] {
        e.require_on_curve(pt)?;
    }
    Ok((e, NamedPoints { p, q, p_plus_q, two_p_plus_q, a, b }))
}

/// A function aPoly(X) + bPoly(X)·Y on a curve.
#[derive(Debug, Clone)]
pub struct CurveFunction {
    pub a: Poly,
    pub b: Poly,
}

impl CurveFunction {
    pub fn new(a: Poly, b: Poly) -> Self {
        CurveFunction { a, b }
    }

    pub fn constant(c: Complex64) -> Self {
        CurveFunction { a: Poly::new(vec![c]), b: Poly::zero() }
    }

    pub fn eval(&self, p: &Point) -> Option<Complex64> {
        match p {
            Point::Infinity => None,
            Point::Affine(x, y) => Some(self.a.eval(*x) + self.b.eval(*x) * y),
        }
    }

    /// 1 - f.
    pub fn one_minus(&self) -> CurveFunction {
        let one = Poly::new(vec![Complex64::new(1.0, 0.0)]);
        CurveFunction { a: one.sub(&self.a), b: self.b.scaled(Complex64::new(-1.0, 0.0)) }
    }

    /// Conjugate aPoly - bPoly·Y (composition with negation).
    pub fn conj(&self) -> CurveFunction {
        CurveFunction { a: self.a.clone(), b: self.b.scaled(Complex64::new(-1.0, 0.0)) }
    }

    /// Norm aPoly² - bPoly²·(X³ + aX² + X), a polynomial in X whose roots
    /// carry the affine zeros of the function and of its conjugate.
    pub fn norm(&self, e: &WeierstrassCurve) -> Poly {
        let cubic = Poly::new(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            e.a,
            Complex64::new(1.0, 0.0),
        ]);
        self.a.mul(&self.a).sub(&self.b.mul(&self.b).mul(&cubic)).trimmed()
    }

    /// Pole order at O: max(2 deg a, 3 + 2 deg b).
    pub fn pole_order_at_infinity(&self) -> i64 {
        let da = self.a.degree().map(|d| 2 * d as i64).unwrap_or(i64::MIN);
        let db = self.b.degree().map(|d| 3 + 2 * d as i64).unwrap_or(i64::MIN);
        da.max(db).max(0)
    }

    /// Pullback along φ: substitute (X, Y) -> (-X, iY).
    pub fn pullback_phi(&self) -> CurveFunction {
        CurveFunction {
            a: self.a.compose_neg(),
            b: self.b.compose_neg().scaled(Complex64::new(0.0, 1.0)),
        }
    }
}

/// Quotient of two curve functions.
#[derive(Debug, Clone)]
pub struct CurveRational {
    pub num: CurveFunction,
    pub den: CurveFunction,
}

impl CurveRational {
    pub fn eval(&self, p: &Point) -> Option<Complex64> {
        Some(self.num.eval(p)? / self.den.eval(p)?)
    }

    pub fn pullback_phi(&self) -> CurveRational {
        CurveRational { num: self.num.pullback_phi(), den: self.den.pullback_phi() }
    }
}

/// The coordinate functions of P_k on the model:
/// x = (kX - 2Y) / (2X(X-1)), y = (kX + 2Y) / (2X(X-1)).
pub fn functions_xy(e: &WeierstrassCurve) -> (CurveRational, CurveRational) {
    let zero = Complex64::new(0.0, 0.0);
    let den = CurveFunction::new(
        Poly::new(vec![zero, Complex64::new(-2.0, 0.0), Complex64::new(2.0, 0.0)]),
        Poly::zero(),
    );
    let x = CurveRational {
        num: CurveFunction::new(
            Poly::new(vec![zero, e.k]),
            Poly::new(vec![Complex64::new(-2.0, 0.0)]),
        ),
        den: den.clone(),
    };
    let y = CurveRational {
        num: CurveFunction::new(
            Poly::new(vec![zero, e.k]),
            Poly::new(vec![Complex64::new(2.0, 0.0)]),
        ),
        den,
    };
    (x, y)
}

/// f = Y/(2h) + (1/2 - 1/(2h²)) X, the Steinberg element generator.
pub fn function_f(h: Complex64) -> CurveFunction {
    let zero = Complex64::new(0.0, 0.0);
    let half = Complex64::new(0.5, 0.0);
    CurveFunction::new(
        Poly::new(vec![zero, half - 0.5 / (h * h)]),
        Poly::new(vec![0.5 / h]),
    )
}

/// g = ((√5-1)/10) Y + ((3+√5)/20)(X + 4), defined on the h = 1/2 curve.
pub fn function_g() -> CurveFunction {
    let s5 = 5f64.sqrt();
    CurveFunction::new(
        Poly::from_re(&[(3.0 + s5) / 5.0, (3.0 + s5) / 20.0]),
        Poly::from_re(&[(s5 - 1.0) / 10.0]),
    )
}

/// Galois conjugate of g (√5 ↦ -√5): ((-√5-1)/10) Y + ((3-√5)/20)(X + 4).
pub fn function_g_sigma() -> CurveFunction {
    let s5 = 5f64.sqrt();
    CurveFunction::new(
        Poly::from_re(&[(3.0 - s5) / 5.0, (3.0 - s5) / 20.0]),
        Poly::from_re(&[(-s5 - 1.0) / 10.0]),
    )
}
