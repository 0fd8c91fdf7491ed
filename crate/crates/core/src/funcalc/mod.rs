//! Constructive functional calculus: the Riemann-sum engine and its
//! quantitative supporting machinery, on any [`StarAlgebra`] backend.
//!
//! [`StarAlgebra`]: crate::algebra::StarAlgebra

mod holo;
mod phi;
mod sampled;
mod series;
mod smooth;
mod trace;

pub use holo::{holo_calc, parametrized_calc, resolvent_element, ParametrizedReport};
pub use phi::{beta_identity_check, phi_property_holds, phi_threshold};
pub use sampled::{smooth_window, SampledFunction, SampledFunction2};
pub use series::{
    check_exponential_bound, delta_exponential, delta_exponential_with, delta_power,
    fit_power_bound, negligible_cap, truncated_exponential, truncation_tail_bound, BoundFit,
    ExpBoundReport, PowerTables,
};
pub use smooth::{smooth_calc_apply, smooth_calc_normal, smooth_calc_self_adjoint};
pub use trace::{DerivationTrace, TraceConvergence};

/// Errors from the functional-calculus engine.
#[derive(Debug, thiserror::Error)]
pub enum FuncalcError {
    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
    #[error(transparent)]
    Leibniz(#[from] crate::leibniz::LeibnizError),
    #[error("element is not self-adjoint (defect {defect:.3e})")]
    NotSelfAdjoint { defect: f64 },
    #[error("element is not normal: residual {residual:.3e} exceeds gate {gate:.3e}")]
    NotNormalGate { residual: f64, gate: f64 },
    #[error("spectrum [{lo:.3}, {hi:.3}] escapes the function support (±{support:.3})")]
    SpectrumEscapesSupport { lo: f64, hi: f64, support: f64 },
    #[error("function does not vanish at zero")]
    NotVanishingAtZero,
    #[error("grid count {n} is not a power of two (or too small)")]
    GridNotPowerOfTwo { n: usize },
    #[error("samples do not vanish at the support endpoints (edge value {value:.3e})")]
    EndpointNotVanishing { value: f64 },
    #[error("truncation-threshold argument ξ={xi} outside [0, {max}]")]
    PhiArgumentOutOfRange { xi: f64, max: f64 },
    #[error("truncation-threshold sweep failed at ξ={xi}, m={m}")]
    PhiSweepFailed { xi: f64, m: usize },
    #[error("trace has no recorded images for operator {tag}")]
    MissingImages { tag: String },
    #[error("trace index {n} out of range (len {len})")]
    TraceIndexOutOfRange { n: usize, len: usize },
    #[error("resolvent margin violated: distance {dist:.3e}, need ≥ {need:.3e}")]
    ResolventMargin { dist: f64, need: f64 },
    #[error("degenerate data for bound fit")]
    DegenerateData,
    #[error("{0}")]
    BadParameter(String),
}
