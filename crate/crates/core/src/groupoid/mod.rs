//! Grid model of the tangent groupoid of the circle: kernels with exact
//! t-jets, convolution, lifted and derived operators, Schwartz seminorms,
//! representation norms, the Sobolev-type norm comparison, and the
//! dual-method functional-calculus check.

pub mod corpus;
pub mod jet;
mod kernel;
mod ops;
mod schwartz;
mod sobolev;
mod theorem_a;

pub use corpus::{groupoid_corpus, KernelRecipe};
pub use jet::CJet;
pub use kernel::{
    convolve, cstar_norm, l1_majorant, pi_t_norm, pi_x_norms, spectral_dv, spectral_dx,
    spectral_dy, trig_coeffs, trig_eval, CircleGrid, GroupoidAlgebra, TSlice, TangentKernel,
    VelocityGrid,
};
pub use ops::{
    delta_alpha, delta_d_certificate, delta_field_apply, delta_function_apply, dnc_lift,
    hat_delta, lift_apply, lift_apply_right, mult_t, pointwise_mul, CircleDiffOp, CircleFn,
    Frame, HatDeltaOutput,
};
pub use schwartz::{
    apply_word, default_generators, pointwise_schwartz_sups, remark_seminorms, schwartz_seminorm,
    words_up_to_depth, RemarkReport, SchwartzWord, WordOp,
};
pub use sobolev::{dirac_mode_sum, sobolev_bound_check, DiracModeReport, SobolevReport};
pub use theorem_a::{
    default_result_words, slice_spectral_oracle, theorem_a_check, TheoremAReport,
};

/// Errors from the groupoid backend.
#[derive(Debug, thiserror::Error)]
pub enum GroupoidError {
    #[error("kernels live on different grids")]
    GridMismatch,
    #[error("operator order {order} exceeds cap {cap} (compose through certificates instead)")]
    OperatorOrderTooHigh { order: usize, cap: usize },
    #[error("need at least {need} t-slices, have {have}")]
    TooFewSlices { have: usize, need: usize },
    #[error("word length {len} exceeds depth cap {cap}")]
    WordTooDeep { len: usize, cap: usize },
    #[error("slice spectrum value {value:.3} outside the function support ±{support:.3}")]
    SpectrumOutsideSupport { value: f64, support: f64 },
    #[error("fiber symbol has non-negligible imaginary part {imag:.3e}")]
    FiberSymbolNotReal { imag: f64 },
    #[error("slice oracle failed: {0}")]
    Oracle(#[from] crate::algebra::AlgebraError),
    #[error("engine failed: {0}")]
    Engine(#[from] crate::funcalc::FuncalcError),
}
