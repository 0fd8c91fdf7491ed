//! Differential operators witnessed by recursive Leibniz certificates.
//!
//! A certificate packages an operator `δ` on a backend algebra together with
//! the coefficient operators `δ₁₀, δ₂₀, (δ₁ᵢ, δ₂ᵢ)` realizing
//!
//! ```text
//! δ(ab) = δ(a)·δ₂₀(b) + δ₁₀(a)·δ(b) + Σᵢ δ₁ᵢ(a)·δ₂ᵢ(b)
//! ```
//!
//! with every coefficient carrying its own certificate of strictly smaller
//! order, and `δ₂₀` satisfying the star condition `δ₂₀(x*) = δ₂₀(x)*`.
//! Order 0 means `δ(ab) = δ(a)·b`. Certificates are closed under sums,
//! compositions, scalar multiples and entrywise matrix lifts; the closure
//! constructions mirror the inductive cases of the subalgebra proof, and
//! every construction is verifiable by residual sampling on any backend.

pub mod block;
mod certificate;
mod checks;

pub use block::{BlockAlgebra, BlockElement};
pub use certificate::{
    commutator_certificate, compose_certificates, identity_certificate,
    identity_certificate_order1, left_multiplier_certificate, matrix_lift,
    right_multiplier_certificate, scalar_certificate, sum_certificates, zero_certificate,
    CertNode, Coefficients, LeibnizCertificate, OpHandle,
};
pub use checks::{check_leibniz, check_star_condition, leibniz_residual, ResidualReport};

/// Errors from certificate construction and checking.
#[derive(Debug, thiserror::Error)]
pub enum LeibnizError {
    #[error("backend mismatch: certificate built on {expected}, got {found}")]
    BackendMismatch { expected: String, found: String },
    #[error("composition recursion exceeded depth {max}")]
    RecursionDepth { max: usize },
    #[error("certificate has no coefficient family (order 0) where one is required")]
    MissingCoefficients,
    #[error("empty sample")]
    EmptySample,
}
