//! Numerical operator calculus on *-algebras.
//!
//! The crate provides four layers that build on each other:
//!
//! * [`algebra`] — concrete *-algebra backends (dense complex matrices as the
//!   reference algebra) with operator norms, spectra and exact spectral
//!   oracles used to validate every approximation elsewhere.
//! * [`leibniz`] — differential operators witnessed by recursive Leibniz
//!   certificates, closed under sums, compositions and matrix lifts, with
//!   residual verification on any backend.
//! * [`funcalc`] — the constructive functional-calculus engine: truncated
//!   exponentials, Fourier-inversion Riemann sums, the power recursion for
//!   derivation images, resolvents and contour calculus.
//! * [`heisenberg`] / [`groupoid`] — two non-matrix backends: the convolution
//!   algebra of the Heisenberg group on a grid, and a discretized model of the
//!   tangent groupoid of the circle with Schwartz seminorms, representation
//!   norms and the Sobolev-type norm comparison.
//!
//! [`harness`] drives batch experiment runs behind the `opcalc` CLI and emits
//! CSV/JSON/SVG reports with golden-file regression support.

pub mod algebra;
pub mod funcalc;
pub mod groupoid;
pub mod harness;
pub mod heisenberg;
pub mod leibniz;
pub mod tol;

pub use num_complex::Complex64;

/// Crate-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Top-level error, aggregating the per-layer error types.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] algebra::AlgebraError),
    #[error(transparent)]
    Funcalc(#[from] funcalc::FuncalcError),
    #[error(transparent)]
    Leibniz(#[from] leibniz::LeibnizError),
    #[error(transparent)]
    Heisenberg(#[from] heisenberg::HeisenbergError),
    #[error(transparent)]
    Groupoid(#[from] groupoid::GroupoidError),
    #[error(transparent)]
    Harness(#[from] harness::HarnessError),
}
