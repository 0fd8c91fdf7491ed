//! Discretized convolution algebra of the Heisenberg group: kernels,
//! twisted convolution, coordinate and right-invariant derivations with
//! their Leibniz certificates, polynomial-coefficient operators, the finite
//! regular representation, and group-side Schwartz seminorms.

mod corpus;
mod kernel;
mod ops;
mod rep;

pub use corpus::{gaussian_kernel, group_corpus, GroupCorpusEntry};
pub use kernel::{convolve_full, ConvolutionMeta, GroupAlgebra, GroupKernel, HeisenbergGrid};
pub use ops::{
    certify_poly_op, delta_coordinate, delta_z_without_cross, right_invariant_derivative,
    schwartz_seminorm_group, Axis, PolyDiffOp, PolyTerm,
};
pub use rep::{delta_vector, kernel_from_rep_column, rep_operator};

/// Errors from the group-kernel backend.
#[derive(Debug, thiserror::Error)]
pub enum HeisenbergError {
    #[error("kernels live on different grids")]
    GridMismatch,
    #[error("kernel support touches the grid boundary (shell value {value:.3e})")]
    SupportTouchesBoundary { value: f64 },
    #[error("polynomial degree or word length {degree} exceeds cap {cap}")]
    DegreeCapExceeded { degree: u32, cap: u32 },
    #[error("representation dimension {dim} exceeds cap {cap}")]
    RepresentationTooLarge { dim: usize, cap: usize },
    #[error("certificate construction failed: {0}")]
    Certify(#[from] crate::leibniz::LeibnizError),
}
