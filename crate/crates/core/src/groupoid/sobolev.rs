//! The uniform-norm vs C*-norm comparison, and the Dirac mode-sum lemma.

use super::kernel::{cstar_norm, GroupoidAlgebra, TangentKernel};
use super::ops::{lift_apply, lift_apply_right, mult_t, CircleDiffOp};

/// `‖f‖_∞ ≤ C·‖(1+t)(1+𝔻)^k ⋆ f ⋆ (1+𝔻)^k‖` with 𝔻 the lifted flat
/// Laplacian; the report carries both sides and their ratio.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SobolevReport {
    pub lhs_sup: f64,
    pub rhs_norm: f64,
    pub ratio: f64,
}

pub fn sobolev_bound_check(alg: &GroupoidAlgebra, f: &TangentKernel, k: u32) -> SobolevReport {
    assert!(k >= 1);
    let lap = CircleDiffOp::laplacian();
    let mut g = f.clone();
    for _ in 0..k {
        g = g.add(&lift_apply(alg, &lap, &g));
    }
    for _ in 0..k {
        g = g.add(&lift_apply_right(alg, &lap, &g));
    }
    // (1 + t^{dim}) = (1 + t)
    let g = g.add(&mult_t(&g));
    let lhs_sup = f.sup_resolved();
    let rhs_norm = cstar_norm(&g);
    SobolevReport {
        lhs_sup,
        rhs_norm,
        ratio: if rhs_norm > 0.0 { lhs_sup / rhs_norm } else { 0.0 },
    }
}

/// Direct Fourier mode sum for the Dirac-distribution bound:
/// `‖(1+t²Δ)^{−k}u_x‖²_{L²} = (1/2π)·Σ_m (1+t²m²)^{−2k}`, compared against
/// `max(t^{−1/2}, 1)`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DiracModeReport {
    /// per t: (t, mode-sum norm, ratio to max(t^{−1/2},1))
    pub rows: Vec<(f64, f64, f64)>,
    pub fitted_c: f64,
}

pub fn dirac_mode_sum(k: u32, t_list: &[f64], mode_cap: usize) -> DiracModeReport {
    let mut rows = Vec::with_capacity(t_list.len());
    let mut fitted_c = 0.0_f64;
    for &t in t_list {
        let mut sum = 1.0_f64; // m = 0 term
        for m in 1..=mode_cap {
            let w = (1.0 + t * t * (m as f64) * (m as f64)).powi(-(2 * k as i32));
            sum += 2.0 * w;
            if w < 1e-18 {
                break;
            }
        }
        let norm = (sum / (2.0 * std::f64::consts::PI)).sqrt();
        let bound = t.powf(-0.5).max(1.0);
        let ratio = norm / bound;
        fitted_c = fitted_c.max(ratio);
        rows.push((t, norm, ratio));
    }
    DiracModeReport { rows, fitted_c }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dirac_mode_sum_matches_integral_asymptotics() {
        // for k=1 and small t: sum ≈ (1/2π)·(π/2)/t, so norm ≈ 0.5·t^{−1/2}
        let rep = dirac_mode_sum(1, &[1e-3], 2_000_000);
        let (_, norm, ratio) = rep.rows[0];
        let expect = 0.5 / (1e-3_f64).sqrt();
        assert!((norm - expect).abs() / expect < 0.02, "norm {norm}");
        assert!((ratio - 0.5).abs() < 0.02);
    }

    #[test]
    fn dirac_ratios_bounded_over_dyadic_ts() {
        let ts: Vec<f64> = (0..=10).map(|j| 0.5_f64.powi(j)).collect();
        let rep = dirac_mode_sum(1, &ts, 2_000_000);
        assert!(rep.fitted_c <= 1.0, "C = {}", rep.fitted_c);
        for (t, _, ratio) in rep.rows {
            assert!(ratio <= rep.fitted_c + 1e-15, "t={t}");
        }
    }
}
