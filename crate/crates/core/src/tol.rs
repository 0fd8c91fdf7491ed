//! Central numeric tolerances and solver defaults.
//!
//! Every threshold used by the library and the check suites lives here, so
//! that no module carries ad-hoc magic numbers and the harness can override
//! them from a single config record.

use serde::{Deserialize, Serialize};

/// Tolerance and solver-default record shared by all modules.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Tol {
    /// Residual bound for identities that hold exactly in the matrix backend
    /// (certificate checks, algebra laws).
    pub exact_algebra: f64,
    /// Residual bound for matrix identities that accumulate a few more
    /// rounding steps (recursions, module identities).
    pub matrix_loose: f64,
    /// Relative normality gate `‖a*a − aa*‖ ≤ normality_rel·‖a‖²` for the
    /// smooth-calculus oracle.
    pub normality_rel: f64,
    /// Relative hermiticity gate `‖a − a*‖ ≤ hermitian_rel·max(1,‖a‖)`.
    pub hermitian_rel: f64,
    /// Eigenvalue imaginary-part bound for self-adjoint input, relative to the
    /// operator norm.
    pub eig_imag_rel: f64,
    /// Minimum allowed distance from the origin to any contour node.
    pub contour_zero_distance: f64,
    /// Minimum allowed distance from a contour node to the spectrum, relative
    /// to the contour radius scale.
    pub contour_spectrum_rel: f64,
    /// Default node count for contour quadrature.
    pub contour_nodes: usize,
    /// Relative margin `dist(w, spec(a)) ≥ resolvent_margin_rel·‖a‖` required
    /// by the resolvent construction.
    pub resolvent_margin_rel: f64,
    /// Default Riemann index for the inner smooth calculus inside the
    /// resolvent construction.
    pub resolvent_inner_n: usize,
    /// Series terms whose a-priori bound falls below this relative threshold
    /// are dropped from truncated exponentials; the dropped tail is bounded by
    /// twice the first dropped term.
    pub series_negligible: f64,
    /// Cap on the argument of the truncation threshold function.
    pub phi_max_xi: f64,
    /// Sweep bound used when validating the truncation threshold function.
    pub phi_sweep_max_m: usize,
    /// Recursion depth cap for certificate composition.
    pub compose_depth_max: usize,
    /// Grid-convolution mass-loss warning threshold, relative to `‖g‖₁`.
    pub conv_mass_loss_rel: f64,
    /// Schwartz seminorm finiteness budget: a word value above this is
    /// reported as failing the boundedness test.
    pub schwartz_budget: f64,
}

impl Default for Tol {
    fn default() -> Self {
        Tol {
            exact_algebra: 1e-12,
            matrix_loose: 1e-10,
            normality_rel: 1e-8,
            hermitian_rel: 1e-10,
            eig_imag_rel: 1e-10,
            contour_zero_distance: 0.1,
            contour_spectrum_rel: 0.05,
            contour_nodes: 512,
            resolvent_margin_rel: 0.05,
            resolvent_inner_n: 64,
            series_negligible: 1e-22,
            phi_max_xi: 100.0,
            phi_sweep_max_m: 400,
            compose_depth_max: 16,
            conv_mass_loss_rel: 1e-6,
            schwartz_budget: 1e4,
        }
    }
}

/// Natural log of `m!`, exact summation (deterministic, no Stirling).
pub fn ln_factorial(m: usize) -> f64 {
    let mut acc = 0.0;
    for k in 2..=m {
        acc += (k as f64).ln();
    }
    acc
}

/// Cumulative table of `ln m!` for `m = 0..=max`.
pub fn ln_factorial_table(max: usize) -> Vec<f64> {
    let mut t = Vec::with_capacity(max + 1);
    let mut acc = 0.0;
    t.push(0.0);
    for k in 1..=max {
        acc += (k as f64).ln();
        t.push(acc);
    }
    t
}
