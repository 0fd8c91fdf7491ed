//! Finite model of the regular representation: the matrix of left
//! convolution on the grid ℓ²-space, and the kernel pullback.

use ndarray::Array2;
use num_complex::Complex64;

use super::kernel::{GroupAlgebra, GroupKernel};
use super::HeisenbergError;
use crate::algebra::MatrixElement;

/// Matrix of `g ↦ f⋆g` on the grid, entries
/// `M[p,r] = Σ_q f(q)·h³·w(q⁻¹p → r)` with the same two-tap z-interpolation
/// as the convolution (so `rep(f*) = rep(f)*` exactly).
pub fn rep_operator(
    alg: &GroupAlgebra,
    f: &GroupKernel,
) -> Result<MatrixElement, HeisenbergError> {
    let n = alg.grid.n;
    let dim = alg.grid.len();
    if dim > 4096 {
        return Err(HeisenbergError::RepresentationTooLarge { dim, cap: 4096 });
    }
    let h = alg.grid.step();
    let h3 = alg.grid.cell_volume();
    let nn = n as i64;
    let mut m = Array2::<Complex64>::zeros((dim, dim));
    for qi in 0..nn {
        for qj in 0..nn {
            for qk in 0..nn {
                let fq = f.data[alg.grid.index(qi as usize, qj as usize, qk as usize)];
                if fq.norm_sqr() == 0.0 {
                    continue;
                }
                let val = fq * h3;
                let x1 = alg.grid.coord(qi as usize);
                let y1 = alg.grid.coord(qj as usize);
                for pi in 0..nn {
                    let ri = pi - qi + nn / 2;
                    if ri < 0 || ri >= nn {
                        continue;
                    }
                    let xp = alg.grid.coord(pi as usize);
                    for pj in 0..nn {
                        let rj = pj - qj + nn / 2;
                        if rj < 0 || rj >= nn {
                            continue;
                        }
                        let yp = alg.grid.coord(pj as usize);
                        // z-coordinate of q⁻¹p is z_p − z_q − (x₁y_p − y₁x_p)
                        let twist = (x1 * yp - y1 * xp) / h;
                        for pk in 0..nn {
                            let target = (pk - qk + nn / 2) as f64 - twist;
                            let t0 = target.floor();
                            let w = target - t0;
                            let t0 = t0 as i64;
                            let p_lin = alg
                                .grid
                                .index(pi as usize, pj as usize, pk as usize);
                            if t0 >= 0 && t0 < nn {
                                let r_lin =
                                    alg.grid.index(ri as usize, rj as usize, t0 as usize);
                                m[[p_lin, r_lin]] += val * (1.0 - w);
                            }
                            if t0 + 1 >= 0 && t0 + 1 < nn {
                                let r_lin =
                                    alg.grid.index(ri as usize, rj as usize, (t0 + 1) as usize);
                                m[[p_lin, r_lin]] += val * w;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(MatrixElement::new(m).expect("square by construction"))
}

/// Column of the matrix at the grid delta vector, divided by `h³`:
/// approximately recovers the kernel of the operator.
pub fn kernel_from_rep_column(alg: &GroupAlgebra, m: &MatrixElement) -> GroupKernel {
    let (oi, oj, ok) = alg.grid.origin();
    let col = alg.grid.index(oi, oj, ok);
    let h3 = alg.grid.cell_volume();
    let mut out = GroupKernel::zeros(alg.grid);
    for p in 0..alg.grid.len() {
        out.data[p] = m.data()[[p, col]] / h3;
    }
    out
}

/// The grid delta vector at the group identity (ℓ² basis vector).
pub fn delta_vector(alg: &GroupAlgebra) -> Vec<Complex64> {
    let (oi, oj, ok) = alg.grid.origin();
    let mut v = vec![Complex64::new(0.0, 0.0); alg.grid.len()];
    v[alg.grid.index(oi, oj, ok)] = Complex64::new(1.0, 0.0);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::kernel::{convolve_full, HeisenbergGrid};
    use crate::tol::Tol;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn small_algebra() -> GroupAlgebra {
        GroupAlgebra::new(HeisenbergGrid::new(8, 4.0))
    }

    #[test]
    fn rep_adjoint_exact() {
        let alg = small_algebra();
        let f = GroupKernel::from_fn(alg.grid, |x, y, z| {
            Complex64::new(
                (-2.5 * (x * x + y * y + z * z)).exp(),
                0.2 * x * (-2.5 * (x * x + y * y + z * z)).exp(),
            )
        })
        .unwrap();
        let mf = rep_operator(&alg, &f).unwrap();
        let mfs = rep_operator(&alg, &f.adjoint()).unwrap();
        let defect = mfs.sub(&mf.adjoint()).unwrap().norm_upper_bound();
        assert!(defect <= 1e-10, "defect {defect:.3e}");
    }

    #[test]
    fn rep_is_approximate_homomorphism() {
        let alg = small_algebra();
        let tol = Tol::default();
        let f = GroupKernel::from_fn(alg.grid, |x, y, z| c((-2.5 * (x * x + y * y + z * z)).exp()))
            .unwrap();
        let g = GroupKernel::from_fn(alg.grid, |x, y, z| {
            c((-3.0 * (x * x + y * y + z * z)).exp() * (1.0 + 0.3 * y))
        })
        .unwrap();
        let (fg, _) = convolve_full(&f, &g, &tol).unwrap();
        let lhs = rep_operator(&alg, &fg).unwrap();
        let rhs = rep_operator(&alg, &f)
            .unwrap()
            .mul(&rep_operator(&alg, &g).unwrap())
            .unwrap();
        let resid = lhs.sub(&rhs).unwrap().norm_upper_bound();
        let scale = rhs.norm_upper_bound().max(1e-300);
        // discretization-level agreement at this coarse grid
        assert!(resid / scale < 0.25, "rel {:.3e}", resid / scale);
    }

    #[test]
    fn rep_narrow_gaussian_close_to_identity_scale() {
        let alg = small_algebra();
        let beta = 4.0;
        let norm = (beta / std::f64::consts::PI).powf(1.5);
        let f = GroupKernel::from_fn(alg.grid, |x, y, z| {
            c(norm * (-beta * (x * x + y * y + z * z)).exp())
        })
        .unwrap();
        let m = rep_operator(&alg, &f).unwrap();
        // mass ≈ 1: operator close to a smoothing of the identity
        let bound = m.norm_upper_bound();
        assert!(bound > 0.5 && bound < 2.0, "bound {bound:.3}");
    }

    #[test]
    fn pullback_recovers_kernel() {
        let alg = small_algebra();
        let f = GroupKernel::from_fn(alg.grid, |x, y, z| c((-2.5 * (x * x + y * y + z * z)).exp()))
            .unwrap();
        let m = rep_operator(&alg, &f).unwrap();
        let back = kernel_from_rep_column(&alg, &m);
        // f⋆(δ/h³) evaluated on the grid: exact up to the interpolation taps
        let err = back.sub(&f).sup_norm();
        assert!(err <= 1e-10, "err {err:.3e}");
    }

    #[test]
    fn rep_size_cap() {
        let alg = GroupAlgebra::new(HeisenbergGrid::new(20, 4.0));
        let f = GroupKernel::zeros(alg.grid);
        assert!(matches!(
            rep_operator(&alg, &f),
            Err(HeisenbergError::RepresentationTooLarge { .. })
        ));
    }
}
