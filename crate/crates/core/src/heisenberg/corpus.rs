//! Gaussian test corpus for the group algebra.

use num_complex::Complex64;

use super::kernel::{GroupKernel, HeisenbergGrid};
use super::HeisenbergError;

/// `e^{−α(x²+y²+z²)}` times an optional even polynomial prefactor.
pub fn gaussian_kernel(
    grid: HeisenbergGrid,
    alpha: f64,
    prefactor: impl Fn(f64, f64, f64) -> f64,
) -> Result<GroupKernel, HeisenbergError> {
    GroupKernel::from_fn(grid, |x, y, z| {
        Complex64::new(prefactor(x, y, z) * (-alpha * (x * x + y * y + z * z)).exp(), 0.0)
    })
}

/// One corpus member with metadata.
pub struct GroupCorpusEntry {
    pub name: &'static str,
    pub kernel: GroupKernel,
    pub self_adjoint: bool,
}

/// Default corpus: Gaussians with α ∈ {1.5, 2} and polynomial prefactors.
/// Even prefactors give self-adjoint kernels (real and inversion-symmetric).
pub fn group_corpus(grid: HeisenbergGrid) -> Result<Vec<GroupCorpusEntry>, HeisenbergError> {
    Ok(vec![
        GroupCorpusEntry {
            name: "gauss10",
            kernel: gaussian_kernel(grid, 1.0, |_, _, _| 1.0)?,
            self_adjoint: true,
        },
        GroupCorpusEntry {
            name: "gauss20",
            kernel: gaussian_kernel(grid, 2.0, |_, _, _| 1.0)?,
            self_adjoint: true,
        },
        GroupCorpusEntry {
            name: "gauss15_x2",
            kernel: gaussian_kernel(grid, 1.5, |x, _, _| 1.0 + x * x)?,
            self_adjoint: true,
        },
        GroupCorpusEntry {
            name: "gauss20_z2",
            kernel: gaussian_kernel(grid, 2.0, |_, _, z| 1.0 + z * z)?,
            self_adjoint: true,
        },
        GroupCorpusEntry {
            name: "gauss15_xy",
            kernel: gaussian_kernel(grid, 1.5, |x, y, _| x * y)?,
            self_adjoint: true,
        },
        GroupCorpusEntry {
            name: "gauss20_x",
            kernel: gaussian_kernel(grid, 2.0, |x, _, _| x)?,
            self_adjoint: false,
        },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_flags_match_adjoints() {
        let grid = HeisenbergGrid::new(12, 4.0);
        for entry in group_corpus(grid).unwrap() {
            let defect = entry.kernel.sub(&entry.kernel.adjoint()).sup_norm();
            if entry.self_adjoint {
                // mirrored lattice coordinates differ by fp rounding
                assert!(defect <= 1e-12, "{}: defect {defect:.3e}", entry.name);
            } else {
                assert!(defect > 1e-3, "{}: defect {defect:.3e}", entry.name);
            }
        }
    }
}
