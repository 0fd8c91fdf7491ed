//! Concrete *-algebra backends and exact spectral oracles.

mod matrix;
mod oracle;

pub use matrix::{eigh_unitary, random_unitary, MatrixAlgebra, MatrixElement, SpectrumReport, UnitaryDiag};
pub use oracle::{
    oracle_holo_calc, oracle_smooth_calc, Contour, ContourShape, HoloResult, ScalarFn,
};

use num_complex::Complex64;

/// Errors from the algebra backends.
#[derive(Debug, thiserror::Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix data is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("eigen solver failed: {0}")]
    EigenFailed(String),
    #[error("element is not normal: residual {residual:.3e} exceeds gate {gate:.3e}")]
    NotNormal { residual: f64, gate: f64 },
    #[error("function undefined or non-finite at {at}")]
    FunctionUndefined { at: Complex64 },
    #[error("function does not vanish at zero: |f(0)| = {value:.3e}")]
    NonVanishingAtZero { value: f64 },
    #[error("contour passes within {dist:.3e} of an eigenvalue (need ≥ {need:.3e})")]
    ContourTooClose { dist: f64, need: f64 },
    #[error("contour comes within {dist:.3e} of the origin (need ≥ {need:.3e})")]
    ContourThroughZero { dist: f64, need: f64 },
    #[error("contour does not enclose the spectrum (winding {winding:.3} around {at})")]
    ContourWinding { winding: f64, at: Complex64 },
}

/// A *-algebra backend: the context object that knows how to combine elements.
///
/// Elements carry their data; the algebra carries grid/dimension context.
/// All operations are pure, so backends are freely shared across threads.
pub trait StarAlgebra: Clone + Send + Sync + 'static {
    type Elem: Clone + Send + Sync + 'static;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, c: Complex64, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn adjoint(&self, a: &Self::Elem) -> Self::Elem;
    fn norm(&self, a: &Self::Elem) -> f64;
    fn zero(&self) -> Self::Elem;
    /// Whether the element belongs to this backend instance (dim/grid match).
    fn compatible(&self, a: &Self::Elem) -> bool;
    /// Stable identifier used in backend-mismatch errors and result records.
    fn backend_tag(&self) -> String;

    fn self_adjoint_defect(&self, a: &Self::Elem) -> f64 {
        self.norm(&self.sub(a, &self.adjoint(a)))
    }

    fn hermitize(&self, a: &Self::Elem) -> Self::Elem {
        self.scale(Complex64::new(0.5, 0.0), &self.add(a, &self.adjoint(a)))
    }

    /// Upper bound on the spectral radius; backends refine this when they can.
    fn spectral_radius_bound(&self, a: &Self::Elem) -> f64 {
        self.norm(a)
    }

    /// Enclosing interval for the spectrum of a self-adjoint element.
    fn self_adjoint_spectral_interval(&self, a: &Self::Elem) -> (f64, f64) {
        let r = self.norm(a);
        (-r, r)
    }

    /// Exact spectrum when the backend can compute it.
    fn spectrum_points(&self, _a: &Self::Elem) -> Option<Vec<Complex64>> {
        None
    }
}
