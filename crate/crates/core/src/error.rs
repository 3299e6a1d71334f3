//! Error type shared across the crate.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The curve Y² = X(X² + aX + 1) degenerates for k ∈ {0, ±4}.
    #[error("singular curve: k = {k} (requires k != 0 and k^2 != 16)")]
    SingularCurve { k: Complex64 },

    /// A point handed to a curve operation does not satisfy the equation.
    #[error("point ({x}, {y}) is not on the curve (residual {residual:.3e})")]
    OffCurve {
        x: Complex64,
        y: Complex64,
        residual: f64,
    },

    /// Adaptive quadrature exhausted its panel budget before reaching tolerance.
    #[error("quadrature did not converge: error estimate {err_est:.3e} > tolerance {tol:.3e} after {panels} panels")]
    QuadratureDidNotConverge {
        err_est: f64,
        tol: f64,
        panels: usize,
    },

    #[error("polynomial root finding did not converge (degree {degree})")]
    RootFinding { degree: usize },

    /// Norm-polynomial roots could not be assigned to curve points cleanly.
    #[error("ill-conditioned root clustering near X = {x}: residual {residual:.3e}")]
    RootClustering { x: Complex64, residual: f64 },

    #[error("operands live on different curves")]
    MixedCurve,

    #[error("period basis construction failed: best lattice certificate residual {residual:.3e}")]
    LatticeConstruction { residual: f64 },

    #[error("elliptic logarithm failed round-trip validation at ({x}, {y})")]
    EllipticLog { x: Complex64, y: Complex64 },

    #[error("integral model requires integer k not in {{0, -4, 4}}, got {k}")]
    BadLSeriesParameter { k: i64 },

    #[error("conductor scan: {0}")]
    ConductorScan(String),

    #[error("cache i/o: {0}")]
    CacheIo(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
