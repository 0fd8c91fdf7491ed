//! Dual-method functional calculus on groupoid kernels: the slice-spectral
//! oracle against the generic Riemann-sum engine, plus Schwartz bookkeeping
//! of the result.

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::FftPlanner;

use super::kernel::{GroupoidAlgebra, TangentKernel};
use super::ops::Frame;
use super::schwartz::{schwartz_seminorm, words_up_to_depth, SchwartzWord, WordOp};
use super::GroupoidError;
use crate::algebra::{eigh_unitary, StarAlgebra};
use crate::funcalc::{smooth_calc_self_adjoint, SampledFunction};
use crate::tol::Tol;

/// Slice-wise spectral oracle: per t > 0 apply f to the matrix
/// `(2π/N)t⁻¹K_t` in a hermitian eigenbasis and map back; at t = 0 apply f
/// to the fiber convolution symbols and invert.
pub fn slice_spectral_oracle(
    alg: &GroupoidAlgebra,
    a: &TangentKernel,
    f: &SampledFunction,
) -> Result<TangentKernel, GroupoidError> {
    let n = alg.circle.n;
    let w = alg.circle.weight();
    let mut out = TangentKernel::zeros(alg.circle, &a.t_grid(), alg.vels, 0);
    for (s, slice) in a.slices.iter().enumerate() {
        let m = slice.jet[0].mapv(|z| z * (w / slice.t));
        let (eigs, basis) = eigh_unitary(&m).map_err(GroupoidError::Oracle)?;
        let mut vals = Vec::with_capacity(n);
        for &lam in &eigs {
            let l = alg.circle.n as f64;
            let _ = l;
            if lam.abs() >= f.half_width() {
                return Err(GroupoidError::SpectrumOutsideSupport {
                    value: lam,
                    support: f.half_width(),
                });
            }
            vals.push(f.value_at(lam));
        }
        let fm = crate::algebra::MatrixElement::from_unitary_diag(&basis, &vals);
        out.slices[s].jet[0] = fm.into_data().mapv(|z| z * (slice.t / w));
    }

    // t = 0: fiber symbols σ(ω) = dv·Σ F(v)e^{−iωv}, f pointwise, invert
    let nv = alg.vels.n_v;
    let pad = 2 * nv;
    let fft = FftPlanner::new().plan_fft_forward(pad);
    let ifft = FftPlanner::new().plan_fft_inverse(pad);
    let dv = alg.vels.dv();
    let vbase = alg.vels.v(0);
    let mut buf = vec![Complex64::new(0.0, 0.0); pad];
    let mut zero = Array2::zeros((nv, n));
    for j in 0..n {
        for v in buf.iter_mut() {
            *v = Complex64::new(0.0, 0.0);
        }
        for i in 0..nv {
            buf[i] = a.zero[[i, j]];
        }
        fft.process(&mut buf);
        for (m, v) in buf.iter_mut().enumerate() {
            // physical symbol includes the grid-offset phase
            let om = 2.0 * std::f64::consts::PI * m as f64 / (pad as f64 * dv);
            let phase = Complex64::new(0.0, -om * vbase).exp();
            let sym = *v * phase * dv;
            if sym.im.abs() > 1e-6 * (1.0 + sym.re.abs()) {
                return Err(GroupoidError::FiberSymbolNotReal { imag: sym.im });
            }
            if sym.re.abs() >= f.half_width() {
                return Err(GroupoidError::SpectrumOutsideSupport {
                    value: sym.re,
                    support: f.half_width(),
                });
            }
            let fv = f.value_at(sym.re);
            *v = fv * phase.conj() / dv;
        }
        ifft.process(&mut buf);
        for i in 0..nv {
            zero[[i, j]] = buf[i] / pad as f64;
        }
    }
    out.zero = zero;
    Ok(out)
}

/// Report of the dual-method check.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TheoremAReport {
    pub cross_method_residual: f64,
    pub result_sup: f64,
    pub seminorms: Vec<(String, f64)>,
    pub all_finite: bool,
}

/// Compute f(a) by both routes and report the residual plus the Schwartz
/// seminorm budget of the engine result at the given word depth.
pub fn theorem_a_check(
    alg: &GroupoidAlgebra,
    a: &TangentKernel,
    f: &SampledFunction,
    n: usize,
    frame: &Frame,
    word_depth: usize,
    tol: &Tol,
) -> Result<TheoremAReport, GroupoidError> {
    let engine = smooth_calc_self_adjoint(alg, a, f, n, tol).map_err(GroupoidError::Engine)?;
    let oracle = slice_spectral_oracle(alg, a, f)?;
    let diff = engine.sub(&oracle);
    let scale = oracle.sup_resolved().max(1e-30);
    let cross_method_residual = diff.sup_resolved() / scale;

    let gens = generators_for_result();
    let words = words_up_to_depth(&gens, word_depth);
    let mut seminorms = Vec::with_capacity(words.len());
    let mut all_finite = true;
    for wd in &words {
        let v = schwartz_seminorm(alg, frame, &engine, wd, word_depth.max(4))?;
        all_finite &= v <= tol.schwartz_budget;
        seminorms.push((wd.name(), v));
    }
    Ok(TheoremAReport {
        cross_method_residual,
        result_sup: engine.sup_resolved(),
        seminorms,
        all_finite,
    })
}

fn generators_for_result() -> Vec<WordOp> {
    use super::ops::{CircleDiffOp, CircleFn};
    vec![
        WordOp::MultT,
        WordOp::Lift(CircleDiffOp::field(CircleFn::constant(1.0))),
        WordOp::DeltaFn(CircleFn::cos()),
        WordOp::DeltaField(CircleFn::constant(1.0)),
        WordOp::HatDelta,
    ]
}

/// Words available for external callers wanting the same list.
pub fn default_result_words(depth: usize) -> Vec<SchwartzWord> {
    words_up_to_depth(&generators_for_result(), depth)
}
