//! Dense complex matrices: the reference *-algebra.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eig, Eigh, SVD, UPLO};
use num_complex::Complex64;
use rand::Rng;

use super::{AlgebraError, StarAlgebra};
use crate::tol::Tol;

/// A dense complex square matrix viewed as an element of `M_n(ℂ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixElement {
    data: Array2<Complex64>,
}

/// Eigenvalue report with normality diagnostics.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<Complex64>,
    pub is_normal: bool,
    /// `‖a*a − aa*‖` in operator norm.
    pub normality_residual: f64,
}

/// A unitary diagonalization `a = V Λ V*` of a normal matrix.
#[derive(Debug, Clone)]
pub struct UnitaryDiag {
    pub basis: Array2<Complex64>,
    pub eigenvalues: Vec<Complex64>,
    /// Reconstruction residual `‖a − VΛV*‖`.
    pub residual: f64,
}

impl MatrixElement {
    pub fn new(data: Array2<Complex64>) -> Result<Self, AlgebraError> {
        if data.nrows() != data.ncols() {
            return Err(AlgebraError::NotSquare {
                rows: data.nrows(),
                cols: data.ncols(),
            });
        }
        Ok(MatrixElement { data })
    }

    pub fn zeros(dim: usize) -> Self {
        MatrixElement {
            data: Array2::zeros((dim, dim)),
        }
    }

    pub fn identity(dim: usize) -> Self {
        MatrixElement {
            data: Array2::eye(dim),
        }
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let mut m = Array2::zeros((entries.len(), entries.len()));
        for (i, &z) in entries.iter().enumerate() {
            m[[i, i]] = z;
        }
        MatrixElement { data: m }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn data(&self) -> &Array2<Complex64> {
        &self.data
    }

    pub fn into_data(self) -> Array2<Complex64> {
        self.data
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.dim() != other.dim() {
            return Err(AlgebraError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(MatrixElement {
            data: self.data.dot(&other.data),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.dim() != other.dim() {
            return Err(AlgebraError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(MatrixElement {
            data: &self.data + &other.data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.dim() != other.dim() {
            return Err(AlgebraError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(MatrixElement {
            data: &self.data - &other.data,
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        MatrixElement {
            data: self.data.mapv(|z| c * z),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim();
        let mut out = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                out[[i, j]] = self.data[[j, i]].conj();
            }
        }
        MatrixElement { data: out }
    }

    /// Operator norm: the largest singular value.
    pub fn norm(&self) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        let (_, s, _) = self
            .data
            .svd(false, false)
            .expect("svd of a finite dense matrix");
        s.iter().fold(0.0_f64, |acc, &x| acc.max(x))
    }

    /// Cheap upper bound `min(√(‖·‖₁‖·‖∞), ‖·‖_F)` on the operator norm.
    pub fn norm_upper_bound(&self) -> f64 {
        let n = self.dim();
        let mut row = vec![0.0_f64; n];
        let mut col = vec![0.0_f64; n];
        let mut frob = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let v = self.data[[i, j]].norm();
                row[i] += v;
                col[j] += v;
                frob += v * v;
            }
        }
        let r = row.iter().cloned().fold(0.0_f64, f64::max);
        let c = col.iter().cloned().fold(0.0_f64, f64::max);
        (r * c).sqrt().min(frob.sqrt())
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖a − a*‖`.
    pub fn hermitian_defect(&self) -> f64 {
        self.sub(&self.adjoint()).unwrap().norm()
    }

    pub fn is_hermitian(&self, tol: &Tol) -> bool {
        self.hermitian_defect() <= tol.hermitian_rel * self.norm().max(1.0)
    }

    /// Eigenvalues plus normality diagnostics.
    pub fn spectrum(&self, tol: &Tol) -> Result<SpectrumReport, AlgebraError> {
        let sa = self.adjoint();
        let left = sa.mul(self)?;
        let right = self.mul(&sa)?;
        let normality_residual = left.sub(&right)?.norm();
        let nrm = self.norm();
        let gate = tol.normality_rel * nrm * nrm;
        let (eigs, _) = self
            .data
            .eig()
            .map_err(|e| AlgebraError::EigenFailed(e.to_string()))?;
        let mut eigenvalues: Vec<Complex64> = eigs.to_vec();
        sort_complex(&mut eigenvalues);
        Ok(SpectrumReport {
            eigenvalues,
            is_normal: normality_residual <= gate.max(1e-14),
            normality_residual,
        })
    }

    /// Eigenvalues of a hermitian matrix, ascending.
    pub fn eigvalsh(&self) -> Result<Vec<f64>, AlgebraError> {
        let (w, _) = self
            .data
            .eigh(UPLO::Lower)
            .map_err(|e| AlgebraError::EigenFailed(e.to_string()))?;
        Ok(w.to_vec())
    }

    /// Unitary diagonalization of a normal matrix via joint diagonalization of
    /// the commuting hermitian parts `(a+a*)/2` and `(a−a*)/(2i)`.
    pub fn unitary_diagonalize(&self, tol: &Tol) -> Result<UnitaryDiag, AlgebraError> {
        let n = self.dim();
        let nrm = self.norm();
        if nrm == 0.0 {
            return Ok(UnitaryDiag {
                basis: Array2::eye(n),
                eigenvalues: vec![Complex64::new(0.0, 0.0); n],
                residual: 0.0,
            });
        }
        let rep = self.spectrum(tol)?;
        let gate = tol.normality_rel * nrm * nrm;
        if rep.normality_residual > gate.max(1e-14) {
            return Err(AlgebraError::NotNormal {
                residual: rep.normality_residual,
                gate: gate.max(1e-14),
            });
        }

        let adj = self.adjoint();
        let h = (&self.data + &adj.data).mapv(|z| 0.5 * z);
        let k = (&self.data - &adj.data).mapv(|z| z * Complex64::new(0.0, -0.5));

        let (mu, mut u) = eigh_unitary(&h)?;

        // Cluster nearly-equal eigenvalues of the real part; the imaginary
        // part is block-diagonal on each cluster and gets its own eigh.
        let cluster_tol = 1e-6 * nrm.max(1.0);
        let mut eigenvalues = vec![Complex64::new(0.0, 0.0); n];
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && (mu[end] - mu[end - 1]).abs() <= cluster_tol {
                end += 1;
            }
            let c = end - start;
            if c == 1 {
                let nu = rayleigh(&k, &u, start);
                eigenvalues[start] = Complex64::new(mu[start], nu);
            } else {
                let mut block = Array2::<Complex64>::zeros((c, c));
                for bi in 0..c {
                    for bj in 0..c {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for p in 0..n {
                            for q in 0..n {
                                acc += u[[p, start + bi]].conj() * k[[p, q]] * u[[q, start + bj]];
                            }
                        }
                        block[[bi, bj]] = acc;
                    }
                }
                let (nu, w) = eigh_unitary(&block)?;
                // rotate the cluster columns by w
                let cols: Vec<Array1<Complex64>> = (0..c)
                    .map(|bj| {
                        let mut v = Array1::<Complex64>::zeros(n);
                        for bi in 0..c {
                            let col = u.column(start + bi);
                            let w_ij = w[[bi, bj]];
                            for p in 0..n {
                                v[p] += col[p] * w_ij;
                            }
                        }
                        v
                    })
                    .collect();
                for (bj, v) in cols.into_iter().enumerate() {
                    u.column_mut(start + bj).assign(&v);
                    eigenvalues[start + bj] = Complex64::new(mu[start + bj], nu[bj]);
                }
            }
            start = end;
        }

        // defensive reconstruction check
        let mut rec = Array2::<Complex64>::zeros((n, n));
        for p in 0..n {
            for q in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    acc += u[[p, j]] * eigenvalues[j] * u[[q, j]].conj();
                }
                rec[[p, q]] = acc;
            }
        }
        let residual = MatrixElement::new(rec - &self.data)?.norm();
        if residual > (1e-7 * nrm.max(1.0)).max(10.0 * rep.normality_residual.sqrt() * nrm.sqrt()) {
            return Err(AlgebraError::EigenFailed(format!(
                "joint diagonalization residual {residual:.3e} too large"
            )));
        }
        Ok(UnitaryDiag {
            basis: u,
            eigenvalues,
            residual,
        })
    }

    /// Assemble `V diag(vals) V*`.
    pub fn from_unitary_diag(basis: &Array2<Complex64>, vals: &[Complex64]) -> Self {
        let n = basis.nrows();
        let mut out = Array2::<Complex64>::zeros((n, n));
        for p in 0..n {
            for q in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    acc += basis[[p, j]] * vals[j] * basis[[q, j]].conj();
                }
                out[[p, q]] = acc;
            }
        }
        MatrixElement { data: out }
    }

    /// Random hermitian matrix with spectrum drawn uniformly in the interval.
    pub fn random_hermitian<R: Rng>(rng: &mut R, dim: usize, lo: f64, hi: f64) -> Self {
        let vals: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen_range(lo..hi), 0.0))
            .collect();
        let u = random_unitary(rng, dim);
        MatrixElement::from_unitary_diag(&u, &vals)
    }

    /// Random normal matrix with eigenvalues in a box of the complex plane.
    pub fn random_normal<R: Rng>(rng: &mut R, dim: usize, re: (f64, f64), im: (f64, f64)) -> Self {
        let vals: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen_range(re.0..re.1), rng.gen_range(im.0..im.1)))
            .collect();
        let u = random_unitary(rng, dim);
        MatrixElement::from_unitary_diag(&u, &vals)
    }

    /// Random dense matrix with i.i.d. entries of the given scale.
    pub fn random_dense<R: Rng>(rng: &mut R, dim: usize, scale: f64) -> Self {
        let data = Array2::from_shape_fn((dim, dim), |_| {
            Complex64::new(
                scale * (rng.gen::<f64>() * 2.0 - 1.0),
                scale * (rng.gen::<f64>() * 2.0 - 1.0),
            )
        });
        MatrixElement { data }
    }
}

/// Hermitian eigendecomposition returning the true column-eigenvector
/// unitary: `a = V diag(w) V*` with `a·V[:,k] = w_k·V[:,k]`.
///
/// The backing LAPACK wrapper hands back the conjugated matrix for complex
/// input (verified against `A v = λ v` at build time); we undo that here so
/// callers never see the quirk.
pub fn eigh_unitary(a: &Array2<Complex64>) -> Result<(Vec<f64>, Array2<Complex64>), AlgebraError> {
    let (w, v) = a
        .eigh(UPLO::Lower)
        .map_err(|e| AlgebraError::EigenFailed(e.to_string()))?;
    Ok((w.to_vec(), v.mapv(|z| z.conj())))
}

fn rayleigh(k: &Array2<Complex64>, u: &Array2<Complex64>, col: usize) -> f64 {
    let n = k.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..n {
        for q in 0..n {
            acc += u[[p, col]].conj() * k[[p, q]] * u[[q, col]];
        }
    }
    acc.re
}

/// Haar-ish random unitary via QR of a Gaussian matrix (Gram-Schmidt).
pub fn random_unitary<R: Rng>(rng: &mut R, dim: usize) -> Array2<Complex64> {
    let mut cols: Vec<Array1<Complex64>> = Vec::with_capacity(dim);
    for _ in 0..dim {
        let mut v = Array1::from_shape_fn(dim, |_| {
            Complex64::new(gaussian(rng), gaussian(rng))
        });
        for c in &cols {
            let proj: Complex64 = c.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
            for i in 0..dim {
                let ci = c[i];
                v[i] -= proj * ci;
            }
        }
        let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.mapv(|z| z / nrm));
    }
    let mut u = Array2::zeros((dim, dim));
    for (j, c) in cols.iter().enumerate() {
        u.column_mut(j).assign(c);
    }
    u
}

fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller; deterministic given the rng stream
    let u1: f64 = rng.gen_range(1e-12..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn sort_complex(v: &mut [Complex64]) {
    v.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
}

/// The algebra context for `MatrixElement`s of a fixed dimension.
#[derive(Debug, Clone)]
pub struct MatrixAlgebra {
    pub dim: usize,
}

impl MatrixAlgebra {
    pub fn new(dim: usize) -> Self {
        MatrixAlgebra { dim }
    }
}

impl StarAlgebra for MatrixAlgebra {
    type Elem = MatrixElement;

    fn add(&self, a: &MatrixElement, b: &MatrixElement) -> MatrixElement {
        a.add(b).expect("matching dims")
    }
    fn sub(&self, a: &MatrixElement, b: &MatrixElement) -> MatrixElement {
        a.sub(b).expect("matching dims")
    }
    fn scale(&self, c: Complex64, a: &MatrixElement) -> MatrixElement {
        a.scale(c)
    }
    fn mul(&self, a: &MatrixElement, b: &MatrixElement) -> MatrixElement {
        a.mul(b).expect("matching dims")
    }
    fn adjoint(&self, a: &MatrixElement) -> MatrixElement {
        a.adjoint()
    }
    fn norm(&self, a: &MatrixElement) -> f64 {
        a.norm()
    }
    fn zero(&self) -> MatrixElement {
        MatrixElement::zeros(self.dim)
    }
    fn compatible(&self, a: &MatrixElement) -> bool {
        a.dim() == self.dim
    }
    fn backend_tag(&self) -> String {
        format!("matrix[{}]", self.dim)
    }
    fn self_adjoint_spectral_interval(&self, a: &MatrixElement) -> (f64, f64) {
        match a.eigvalsh() {
            Ok(w) if !w.is_empty() => (w[0], w[w.len() - 1]),
            _ => {
                let r = a.norm();
                (-r, r)
            }
        }
    }
    fn spectrum_points(&self, a: &MatrixElement) -> Option<Vec<Complex64>> {
        a.spectrum(&crate::tol::Tol::default())
            .ok()
            .map(|r| r.eigenvalues)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_multiplication() {
        let b = MatrixElement::diag(&[c(3.0, 1.0), c(-2.0, 0.5)]);
        let i = MatrixElement::identity(2);
        assert_eq!(i.mul(&b).unwrap(), b);
    }

    #[test]
    fn diagonal_product() {
        let a = MatrixElement::diag(&[c(1.0, 0.0), c(2.0, 0.0)]);
        let b = MatrixElement::diag(&[c(3.0, 0.0), c(4.0, 0.0)]);
        let ab = a.mul(&b).unwrap();
        let expect = MatrixElement::diag(&[c(3.0, 0.0), c(8.0, 0.0)]);
        assert!(ab.sub(&expect).unwrap().norm() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = MatrixElement::identity(2);
        let b = MatrixElement::identity(3);
        assert!(matches!(
            a.mul(&b),
            Err(AlgebraError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn associativity_residual_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = MatrixElement::random_dense(&mut rng, 8, 1.0);
        let b = MatrixElement::random_dense(&mut rng, 8, 1.0);
        let cm = MatrixElement::random_dense(&mut rng, 8, 1.0);
        let l = a.mul(&b).unwrap().mul(&cm).unwrap();
        let r = a.mul(&b.mul(&cm).unwrap()).unwrap();
        assert!(l.sub(&r).unwrap().norm() <= 1e-12 * l.norm().max(1.0));
    }

    #[test]
    fn nilpotent_jordan_block() {
        let mut m = Array2::zeros((2, 2));
        m[[0, 1]] = c(1.0, 0.0);
        let a = MatrixElement::new(m).unwrap();
        assert!((a.norm() - 1.0).abs() < 1e-12);
        let rep = a.spectrum(&Tol::default()).unwrap();
        assert!(!rep.is_normal);
        assert!((rep.normality_residual - 1.0).abs() < 1e-10);
    }

    #[test]
    fn diag_spectrum() {
        let a = MatrixElement::diag(&[c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]);
        let rep = a.spectrum(&Tol::default()).unwrap();
        assert!(rep.is_normal);
        let got: Vec<f64> = rep.eigenvalues.iter().map(|z| z.re).collect();
        assert!((got[0] - 0.0).abs() < 1e-12);
        assert!((got[1] - 1.0).abs() < 1e-12);
        assert!((got[2] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn hermitian_norm_equals_spectral_radius() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = MatrixElement::random_hermitian(&mut rng, 8, -1.0, 1.0);
        let eigs = a.eigvalsh().unwrap();
        let rho = eigs.iter().fold(0.0_f64, |m, &x| m.max(x.abs()));
        assert!((a.norm() - rho).abs() <= 1e-10 * rho.max(1.0));
    }

    #[test]
    fn spectrum_invariant_under_unitary_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = MatrixElement::random_dense(&mut rng, 6, 1.0);
        let u = random_unitary(&mut rng, 6);
        let ue = MatrixElement::new(u.clone()).unwrap();
        let conj = ue.mul(&a).unwrap().mul(&ue.adjoint()).unwrap();
        let mut s1 = a.spectrum(&Tol::default()).unwrap().eigenvalues;
        let mut s2 = conj.spectrum(&Tol::default()).unwrap().eigenvalues;
        sort_complex(&mut s1);
        sort_complex(&mut s2);
        for (x, y) in s1.iter().zip(s2.iter()) {
            assert!((x - y).norm() < 1e-9);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn adjoint_involution_and_cstar_identity(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = MatrixElement::random_dense(&mut rng, 5, 1.0);
            // involution is exact
            prop_assert_eq!(a.adjoint().adjoint(), a.clone());
            // C*-identity
            let n = a.norm();
            let nn = a.adjoint().mul(&a).unwrap().norm();
            prop_assert!((nn - n * n).abs() <= 1e-10 * (n * n).max(1e-30));
        }
    }
}
