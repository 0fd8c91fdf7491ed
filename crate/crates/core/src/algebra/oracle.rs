//! Exact spectral oracles: eigendecomposition calculus and direct-solve
//! contour calculus. These validate the constructive engines in `funcalc`.

use ndarray_linalg::Inverse;
use num_complex::Complex64;

use super::{AlgebraError, MatrixElement};
use crate::tol::Tol;

/// A scalar function of a complex variable; `None` marks "undefined here".
pub trait ScalarFn: Send + Sync {
    fn eval(&self, z: Complex64) -> Option<Complex64>;
}

impl<F> ScalarFn for F
where
    F: Fn(Complex64) -> Complex64 + Send + Sync,
{
    fn eval(&self, z: Complex64) -> Option<Complex64> {
        let v = self(z);
        if v.re.is_finite() && v.im.is_finite() {
            Some(v)
        } else {
            None
        }
    }
}

/// Closed quadrature contour in the complex plane.
#[derive(Debug, Clone)]
pub struct Contour {
    pub nodes: Vec<Complex64>,
    /// Quadrature weights `w'(θ_k)·Δθ` of the parameterization.
    pub weights: Vec<Complex64>,
    pub shape: ContourShape,
    /// Required clearance between the contour image and the origin.
    pub min_zero_distance: f64,
}

#[derive(Debug, Clone, Copy)]
pub enum ContourShape {
    Circle { center: Complex64, radius: f64 },
    Free,
}

impl Contour {
    /// Trapezoid-node circle.
    pub fn circle(
        center: Complex64,
        radius: f64,
        n_nodes: usize,
        min_zero_distance: f64,
    ) -> Result<Self, AlgebraError> {
        let dist = (center.norm() - radius).abs();
        if dist < min_zero_distance {
            return Err(AlgebraError::ContourThroughZero {
                dist,
                need: min_zero_distance,
            });
        }
        let mut nodes = Vec::with_capacity(n_nodes);
        let mut weights = Vec::with_capacity(n_nodes);
        let dt = 2.0 * std::f64::consts::PI / n_nodes as f64;
        for k in 0..n_nodes {
            let th = dt * k as f64;
            let e = Complex64::new(th.cos(), th.sin());
            nodes.push(center + radius * e);
            weights.push(Complex64::new(0.0, 1.0) * radius * e * dt);
        }
        Ok(Contour {
            nodes,
            weights,
            shape: ContourShape::Circle { center, radius },
            min_zero_distance,
        })
    }

    /// Circle around the given spectrum: centered at the centroid, radius a
    /// multiple of the spectral radius about it, nudged outward until the
    /// curve clears the origin.
    pub fn around_spectrum(
        eigs: &[Complex64],
        radius_factor: f64,
        n_nodes: usize,
        tol: &Tol,
    ) -> Result<Self, AlgebraError> {
        let n = eigs.len().max(1) as f64;
        let center = eigs.iter().sum::<Complex64>() / n;
        let rho = eigs
            .iter()
            .map(|z| (z - center).norm())
            .fold(0.0_f64, f64::max);
        let mut radius = (radius_factor * rho).max(tol.contour_zero_distance * 4.0);
        for _ in 0..64 {
            if (center.norm() - radius).abs() >= tol.contour_zero_distance {
                break;
            }
            radius += 2.0 * tol.contour_zero_distance;
        }
        Contour::circle(center, radius, n_nodes, tol.contour_zero_distance)
    }

    /// Same contour with twice the node count (for error estimation).
    pub fn doubled(&self) -> Self {
        match self.shape {
            ContourShape::Circle { center, radius } => Contour::circle(
                center,
                radius,
                2 * self.nodes.len(),
                self.min_zero_distance,
            )
            .expect("doubling a valid circle"),
            ContourShape::Free => self.clone(),
        }
    }

    /// Winding number of the discrete path around `z`.
    pub fn winding_number(&self, z: Complex64) -> f64 {
        let n = self.nodes.len();
        let mut total = 0.0;
        for k in 0..n {
            let a = self.nodes[k] - z;
            let b = self.nodes[(k + 1) % n] - z;
            total += (b / a).arg();
        }
        total / (2.0 * std::f64::consts::PI)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Geometric scale used for spectrum-clearance gates.
    pub fn scale(&self) -> f64 {
        match self.shape {
            ContourShape::Circle { radius, .. } => radius,
            ContourShape::Free => self.nodes.iter().map(|z| z.norm()).fold(0.0, f64::max),
        }
    }
}

/// `f(a)` for a normal matrix, by applying `f` to the eigenvalues in a
/// unitary diagonalization. The independent reference for every constructive
/// calculus in this crate.
pub fn oracle_smooth_calc(
    a: &MatrixElement,
    f: &dyn ScalarFn,
    tol: &Tol,
) -> Result<MatrixElement, AlgebraError> {
    let zero = Complex64::new(0.0, 0.0);
    let f0 = f
        .eval(zero)
        .ok_or(AlgebraError::FunctionUndefined { at: zero })?;
    let diag = a.unitary_diagonalize(tol)?;
    let mut vals = Vec::with_capacity(diag.eigenvalues.len());
    let mut scale = 1.0_f64;
    for &lam in &diag.eigenvalues {
        let v = f
            .eval(lam)
            .ok_or(AlgebraError::FunctionUndefined { at: lam })?;
        scale = scale.max(v.norm());
        vals.push(v);
    }
    if f0.norm() > 1e-10 * scale.max(1.0) {
        return Err(AlgebraError::NonVanishingAtZero { value: f0.norm() });
    }
    Ok(MatrixElement::from_unitary_diag(&diag.basis, &vals))
}

/// Result of the direct-solve contour calculus.
#[derive(Debug, Clone)]
pub struct HoloResult {
    pub value: MatrixElement,
    /// `‖S_{2N} − S_N‖` from node doubling.
    pub node_doubling_error: f64,
}

/// `f(a)` by contour quadrature of the Cauchy formula with exact linear
/// solves for the resolvent. Works for arbitrary (non-normal) matrices.
pub fn oracle_holo_calc(
    a: &MatrixElement,
    f: &dyn ScalarFn,
    contour: &Contour,
    tol: &Tol,
) -> Result<HoloResult, AlgebraError> {
    let eigs = a.spectrum(tol)?.eigenvalues;
    let need = tol.contour_spectrum_rel * contour.scale();
    for w in &contour.nodes {
        if w.norm() < contour.min_zero_distance {
            return Err(AlgebraError::ContourThroughZero {
                dist: w.norm(),
                need: contour.min_zero_distance,
            });
        }
        for lam in &eigs {
            let d = (w - lam).norm();
            if d < need {
                return Err(AlgebraError::ContourTooClose { dist: d, need });
            }
        }
    }
    for lam in &eigs {
        let w = contour.winding_number(*lam);
        if (w - 1.0).abs() > 0.2 {
            return Err(AlgebraError::ContourWinding {
                winding: w,
                at: *lam,
            });
        }
    }
    let zero = Complex64::new(0.0, 0.0);
    let f0 = f
        .eval(zero)
        .ok_or(AlgebraError::FunctionUndefined { at: zero })?;
    if f0.norm() > 1e-10 {
        return Err(AlgebraError::NonVanishingAtZero { value: f0.norm() });
    }

    let coarse = contour_quadrature(a, f, contour)?;
    let fine = contour_quadrature(a, f, &contour.doubled())?;
    let node_doubling_error = fine.sub(&coarse)?.norm();
    Ok(HoloResult {
        value: fine,
        node_doubling_error,
    })
}

fn contour_quadrature(
    a: &MatrixElement,
    f: &dyn ScalarFn,
    contour: &Contour,
) -> Result<MatrixElement, AlgebraError> {
    let n = a.dim();
    let mut acc = MatrixElement::zeros(n);
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    for (w, dw) in contour.nodes.iter().zip(contour.weights.iter()) {
        let fw = f
            .eval(*w)
            .ok_or(AlgebraError::FunctionUndefined { at: *w })?;
        let g = fw / w;
        // (wI − a)^{-1} a, exact solve
        let mut m = a.data().mapv(|z| -z);
        for i in 0..n {
            m[[i, i]] += *w;
        }
        let inv = m
            .inv()
            .map_err(|e| AlgebraError::EigenFailed(format!("resolvent solve: {e}")))?;
        let x = inv.dot(a.data());
        let term = MatrixElement::new(x.mapv(|z| z * g * dw / two_pi_i))?;
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn oracle_polynomial_on_diag() {
        let a = MatrixElement::diag(&[c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]);
        let f = |z: Complex64| z * z;
        let fa = oracle_smooth_calc(&a, &f, &Tol::default()).unwrap();
        let expect = MatrixElement::diag(&[c(0.0, 0.0), c(1.0, 0.0), c(4.0, 0.0)]);
        assert!(fa.sub(&expect).unwrap().norm() < 1e-12);
    }

    #[test]
    fn oracle_zero_matrix() {
        let a = MatrixElement::zeros(3);
        let f = |z: Complex64| z * z * z;
        let fa = oracle_smooth_calc(&a, &f, &Tol::default()).unwrap();
        assert!(fa.norm() == 0.0);
    }

    #[test]
    fn oracle_rejects_non_normal() {
        let mut m = ndarray::Array2::zeros((2, 2));
        m[[0, 1]] = c(1.0, 0.0);
        let a = MatrixElement::new(m).unwrap();
        let f = |z: Complex64| z;
        assert!(matches!(
            oracle_smooth_calc(&a, &f, &Tol::default()),
            Err(AlgebraError::NotNormal { .. })
        ));
    }

    #[test]
    fn oracle_sin_matches_taylor() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let a = MatrixElement::random_hermitian(&mut rng, 8, -1.0, 1.0);
        let f = |z: Complex64| z.sin();
        let fa = oracle_smooth_calc(&a, &f, &Tol::default()).unwrap();
        // 12-term alternating Taylor sum of sin on the same matrix
        let mut taylor = MatrixElement::zeros(8);
        let mut pw = a.clone(); // a^1
        let aa = a.mul(&a).unwrap();
        let mut fact = 1.0;
        for k in 0..12 {
            let m = 2 * k + 1;
            if k > 0 {
                fact *= ((m - 1) * m) as f64;
                pw = pw.mul(&aa).unwrap();
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            taylor = taylor.add(&pw.scale(c(sign / fact, 0.0))).unwrap();
        }
        assert!(fa.sub(&taylor).unwrap().norm() < 1e-8);
    }

    #[test]
    fn holo_oracle_square_on_diag() {
        let a = MatrixElement::diag(&[c(1.0, 0.0), c(2.0, 0.0)]);
        let contour = Contour::circle(c(0.5, 0.0), 3.0, 256, 0.1).unwrap();
        let f = |z: Complex64| z * z;
        let r = oracle_holo_calc(&a, &f, &contour, &Tol::default()).unwrap();
        let expect = MatrixElement::diag(&[c(1.0, 0.0), c(4.0, 0.0)]);
        assert!(r.value.sub(&expect).unwrap().norm() < 1e-8);
        assert!(r.node_doubling_error < 1e-8);
    }

    #[test]
    fn holo_oracle_jordan_block_square() {
        let mut m = ndarray::Array2::zeros((2, 2));
        m[[0, 0]] = c(1.0, 0.0);
        m[[0, 1]] = c(1.0, 0.0);
        m[[1, 1]] = c(1.0, 0.0);
        let a = MatrixElement::new(m).unwrap();
        let contour = Contour::circle(c(1.0, 0.0), 0.5, 256, 0.1).unwrap();
        let f = |z: Complex64| z * z;
        let r = oracle_holo_calc(&a, &f, &contour, &Tol::default()).unwrap();
        let mut e = ndarray::Array2::zeros((2, 2));
        e[[0, 0]] = c(1.0, 0.0);
        e[[0, 1]] = c(2.0, 0.0);
        e[[1, 1]] = c(1.0, 0.0);
        let expect = MatrixElement::new(e).unwrap();
        assert!(r.value.sub(&expect).unwrap().norm() < 1e-8);
    }

    #[test]
    fn holo_oracle_rejects_contour_through_spectrum() {
        let a = MatrixElement::diag(&[c(1.0, 0.0), c(2.0, 0.0)]);
        // circle hugging λ=2 (clear of the origin, too close to the spectrum)
        let contour = Contour::circle(c(2.5, 0.0), 0.5001, 64, 0.1).unwrap();
        let f = |z: Complex64| z * z;
        assert!(matches!(
            oracle_holo_calc(&a, &f, &contour, &Tol::default()),
            Err(AlgebraError::ContourTooClose { .. })
        ));
    }

    #[test]
    fn contour_through_zero_rejected() {
        assert!(matches!(
            Contour::circle(c(0.05, 0.0), 0.1, 64, 0.1),
            Err(AlgebraError::ContourThroughZero { .. })
        ));
    }
}
