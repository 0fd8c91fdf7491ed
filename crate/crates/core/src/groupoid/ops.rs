//! Lifted differential operators, the scaling derivation, the rescaled
//! t-derivation built from a frame, and their Leibniz certificates.

use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;

use super::kernel::{
    spectral_dv, spectral_dx, spectral_dy, trig_coeffs, trig_eval, GroupoidAlgebra, TangentKernel,
};
use super::GroupoidError;
use crate::leibniz::{identity_certificate, LeibnizCertificate};

/// A named smooth function on the circle with its exact derivative.
#[derive(Clone)]
pub struct CircleFn {
    pub name: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    df: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl CircleFn {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        df: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        CircleFn {
            name: name.into(),
            f: Arc::new(f),
            df: Arc::new(df),
        }
    }

    pub fn cos() -> Self {
        CircleFn::new("cos", |t| t.cos(), |t| -t.sin())
    }

    pub fn sin() -> Self {
        CircleFn::new("sin", |t| t.sin(), |t| t.cos())
    }

    pub fn constant(c: f64) -> Self {
        CircleFn::new(format!("const{c}"), move |_| c, |_| 0.0)
    }

    /// cos(kθ), sin(kθ) and scaled variants for alternative frames.
    pub fn cos_k(k: f64, scale: f64) -> Self {
        CircleFn::new(
            format!("{scale}cos{k}t"),
            move |t| scale * (k * t).cos(),
            move |t| -scale * k * (k * t).sin(),
        )
    }

    pub fn sin_k(k: f64, scale: f64) -> Self {
        CircleFn::new(
            format!("{scale}sin{k}t"),
            move |t| scale * (k * t).sin(),
            move |t| scale * k * (k * t).cos(),
        )
    }

    pub fn eval(&self, theta: f64) -> f64 {
        (self.f)(theta)
    }

    pub fn deriv(&self, theta: f64) -> f64 {
        (self.df)(theta)
    }
}

fn mult_rows(m: &Array2<Complex64>, vals: &[f64]) -> Array2<Complex64> {
    let mut out = m.clone();
    for (i, mut row) in out.rows_mut().into_iter().enumerate() {
        for v in row.iter_mut() {
            *v *= vals[i];
        }
    }
    out
}

fn mult_cols(m: &Array2<Complex64>, vals: &[f64]) -> Array2<Complex64> {
    let mut out = m.clone();
    for mut row in out.rows_mut() {
        for (j, v) in row.iter_mut().enumerate() {
            *v *= vals[j];
        }
    }
    out
}

/// Pointwise product with matching jets (Cauchy product in the t-jet).
pub fn pointwise_mul(a: &TangentKernel, b: &TangentKernel) -> TangentKernel {
    let depth = a.jet_depth().min(b.jet_depth());
    let n = a.circle.n;
    let slices = a
        .slices
        .iter()
        .zip(b.slices.iter())
        .map(|(x, y)| {
            let mut jet = Vec::with_capacity(depth + 1);
            for d in 0..=depth {
                let mut acc = Array2::<Complex64>::zeros((n, n));
                for i in 0..=d {
                    acc = acc + &x.jet[i] * &y.jet[d - i];
                }
                jet.push(acc);
            }
            super::kernel::TSlice { t: x.t, jet }
        })
        .collect();
    TangentKernel {
        circle: a.circle,
        vels: a.vels,
        slices,
        zero: &a.zero * &b.zero,
    }
}

/// The difference-quotient function of `g` as a kernel-shaped sample:
/// `(g(y) − g(x))/t` on every slice (exact t-jets), `g′(x)·v` at t = 0.
pub fn dnc_lift(alg: &GroupoidAlgebra, g: &CircleFn) -> TangentKernel {
    let n = alg.circle.n;
    let depth = alg.jet_depth;
    let mut out = TangentKernel::zeros(alg.circle, &alg.t_grid, alg.vels, depth);
    for s in out.slices.iter_mut() {
        let t = s.t;
        // Taylor of 1/t about t_s: (−1)^k / t^{k+1}
        for d in 0..=depth {
            let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
            let rc = sign / t.powi(d as i32 + 1);
            for i in 0..n {
                let gy = g.eval(alg.circle.theta(i));
                for j in 0..n {
                    let gx = g.eval(alg.circle.theta(j));
                    s.jet[d][[i, j]] = Complex64::new((gy - gx) * rc, 0.0);
                }
            }
        }
    }
    for j in 0..n {
        let gp = g.deriv(alg.circle.theta(j));
        for i in 0..alg.vels.n_v {
            out.zero[[i, j]] = Complex64::new(gp * alg.vels.v(i), 0.0);
        }
    }
    out
}

/// A differential operator `Σ_j a_j(θ)·∂θ^j` on the circle.
#[derive(Clone)]
pub struct CircleDiffOp {
    /// coefficient of ∂^j at index j
    pub coeffs: Vec<CircleFn>,
}

impl CircleDiffOp {
    pub fn function(g: CircleFn) -> Self {
        CircleDiffOp { coeffs: vec![g] }
    }

    pub fn field(a: CircleFn) -> Self {
        CircleDiffOp {
            coeffs: vec![CircleFn::constant(0.0), a],
        }
    }

    /// The flat Laplacian −∂θ².
    pub fn laplacian() -> Self {
        CircleDiffOp {
            coeffs: vec![
                CircleFn::constant(0.0),
                CircleFn::constant(0.0),
                CircleFn::constant(-1.0),
            ],
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn name(&self) -> String {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| format!("{}·d{}", c.name, j))
            .collect();
        parts.join("+")
    }
}

/// Left action of the lifted operator: `(𝔻⋆f)(y,x,t) = t^d·D_y f`,
/// `(𝔻⋆f)(v,x,0) = a_d(x)·∂_v^d f`.
pub fn lift_apply(alg: &GroupoidAlgebra, d: &CircleDiffOp, f: &TangentKernel) -> TangentKernel {
    let n = alg.circle.n;
    let ord = d.order() as u32;
    let depth = f.jet_depth();
    let yvals: Vec<Vec<f64>> = d
        .coeffs
        .iter()
        .map(|c| (0..n).map(|i| c.eval(alg.circle.theta(i))).collect())
        .collect();
    // D_y applied to one matrix
    let apply_dy = |m: &Array2<Complex64>| {
        let mut acc = Array2::<Complex64>::zeros((n, n));
        for (j, coeff) in yvals.iter().enumerate() {
            if coeff.iter().all(|&c| c == 0.0) {
                continue;
            }
            let der = spectral_dy(alg.circle, m, j as u32);
            acc = acc + mult_rows(&der, coeff);
        }
        acc
    };
    let slices = f
        .slices
        .iter()
        .map(|s| {
            // scalar jet of t^d about t_s: binom(d,k)·t^{d−k}
            let mut tc = vec![0.0_f64; depth + 1];
            let mut binom = 1.0_f64;
            for (k, slot) in tc.iter_mut().enumerate() {
                if k > ord as usize {
                    break;
                }
                *slot = binom * s.t.powi(ord as i32 - k as i32);
                binom *= (ord as f64 - k as f64) / (k as f64 + 1.0);
            }
            let dys: Vec<Array2<Complex64>> = s.jet.iter().map(|m| apply_dy(m)).collect();
            let jet = (0..=depth)
                .map(|dd| {
                    let mut acc = Array2::<Complex64>::zeros((n, n));
                    for k in 0..=dd {
                        if tc[k] != 0.0 {
                            acc = acc + dys[dd - k].mapv(|z| z * tc[k]);
                        }
                    }
                    acc
                })
                .collect();
            super::kernel::TSlice { t: s.t, jet }
        })
        .collect();
    // zero slice: principal part as a constant-coefficient operator in v
    let dv = spectral_dv(alg.vels, &f.zero, ord);
    let top: Vec<f64> = (0..n)
        .map(|j| d.coeffs[ord as usize].eval(alg.circle.theta(j)))
        .collect();
    let zero = mult_cols(&dv, &top);
    TangentKernel {
        circle: f.circle,
        vels: f.vels,
        slices,
        zero,
    }
}

/// Right action `f⋆𝔻 = t^d·D′_x f` with `D′` the formal transpose
/// `D′g = Σ_j (−∂)^j(a_j·g)`; at t = 0 both actions share the principal part.
pub fn lift_apply_right(
    alg: &GroupoidAlgebra,
    d: &CircleDiffOp,
    f: &TangentKernel,
) -> TangentKernel {
    let n = alg.circle.n;
    let ord = d.order() as u32;
    let depth = f.jet_depth();
    let xvals: Vec<Vec<f64>> = d
        .coeffs
        .iter()
        .map(|c| (0..n).map(|j| c.eval(alg.circle.theta(j))).collect())
        .collect();
    let apply_dx = |m: &Array2<Complex64>| {
        let mut acc = Array2::<Complex64>::zeros((n, n));
        for (j, coeff) in xvals.iter().enumerate() {
            if coeff.iter().all(|&c| c == 0.0) {
                continue;
            }
            let mut term = mult_cols(m, coeff);
            term = spectral_dx(alg.circle, &term, j as u32);
            if j % 2 == 1 {
                term = term.mapv(|z| -z);
            }
            acc = acc + term;
        }
        acc
    };
    let slices = f
        .slices
        .iter()
        .map(|s| {
            let mut tc = vec![0.0_f64; depth + 1];
            let mut binom = 1.0_f64;
            for (k, slot) in tc.iter_mut().enumerate() {
                if k > ord as usize {
                    break;
                }
                *slot = binom * s.t.powi(ord as i32 - k as i32);
                binom *= (ord as f64 - k as f64) / (k as f64 + 1.0);
            }
            let dxs: Vec<Array2<Complex64>> = s.jet.iter().map(|m| apply_dx(m)).collect();
            let jet = (0..=depth)
                .map(|dd| {
                    let mut acc = Array2::<Complex64>::zeros((n, n));
                    for k in 0..=dd {
                        if tc[k] != 0.0 {
                            acc = acc + dxs[dd - k].mapv(|z| z * tc[k]);
                        }
                    }
                    acc
                })
                .collect();
            super::kernel::TSlice { t: s.t, jet }
        })
        .collect();
    let dvm = spectral_dv(alg.vels, &f.zero, ord);
    let top: Vec<f64> = (0..n)
        .map(|j| d.coeffs[ord as usize].eval(alg.circle.theta(j)))
        .collect();
    let zero = mult_cols(&dvm, &top);
    TangentKernel {
        circle: f.circle,
        vels: f.vels,
        slices,
        zero,
    }
}

/// `δ_g` for a function g: multiplication by `dnc(g)` (exact on all slices).
pub fn delta_function_apply(
    alg: &GroupoidAlgebra,
    g: &CircleFn,
    f: &TangentKernel,
) -> TangentKernel {
    pointwise_mul(&dnc_lift(alg, g), f)
}

/// `δ_X` for a vector field `X = a(θ)∂θ`:
/// `(a(y)∂_y + a(x)∂_x + a′(x))f` at t > 0 and the chart limit
/// `a′(x)·v·∂_v F + a(x)·∂_x F + a′(x)·F` at t = 0.
pub fn delta_field_apply(
    alg: &GroupoidAlgebra,
    a: &CircleFn,
    f: &TangentKernel,
) -> TangentKernel {
    let n = alg.circle.n;
    let ay: Vec<f64> = (0..n).map(|i| a.eval(alg.circle.theta(i))).collect();
    let ax = ay.clone();
    let apx: Vec<f64> = (0..n).map(|j| a.deriv(alg.circle.theta(j))).collect();
    let per_matrix = |m: &Array2<Complex64>| {
        let dy = spectral_dy(alg.circle, m, 1);
        let dx = spectral_dx(alg.circle, m, 1);
        mult_rows(&dy, &ay) + mult_cols(&dx, &ax) + mult_cols(m, &apx)
    };
    let slices = f
        .slices
        .iter()
        .map(|s| super::kernel::TSlice {
            t: s.t,
            jet: s.jet.iter().map(&per_matrix).collect(),
        })
        .collect();
    let dvm = spectral_dv(alg.vels, &f.zero, 1);
    let vvals: Vec<f64> = (0..alg.vels.n_v).map(|i| alg.vels.v(i)).collect();
    let mut zero = mult_cols(&dvm, &apx);
    for (i, mut row) in zero.rows_mut().into_iter().enumerate() {
        for v in row.iter_mut() {
            *v *= vvals[i];
        }
    }
    let dxm = spectral_dx(alg.circle, &f.zero, 1);
    zero = zero + mult_cols(&dxm, &ax) + mult_cols(&f.zero, &apx);
    TangentKernel {
        circle: f.circle,
        vels: f.vels,
        slices,
        zero,
    }
}

/// Leibniz certificate for `δ_D`, `D` of order ≤ 1 (functions and vector
/// fields; higher orders compose through the certificate algebra).
pub fn delta_d_certificate(
    alg: &GroupoidAlgebra,
    d: &CircleDiffOp,
) -> Result<LeibnizCertificate<GroupoidAlgebra>, GroupoidError> {
    if d.order() > 1 {
        return Err(GroupoidError::OperatorOrderTooHigh {
            order: d.order(),
            cap: 1,
        });
    }
    let d10 = Arc::new(identity_certificate(alg));
    let d20 = Arc::new(identity_certificate(alg));
    let dd = d.clone();
    let tag = format!("deltaD({})", d.name());
    Ok(LeibnizCertificate::higher(
        alg,
        tag,
        false,
        move |alg: &GroupoidAlgebra, f: &TangentKernel| {
            let mut out: Option<TangentKernel> = None;
            // order-0 part: multiplication by dnc(a₀)
            let a0 = &dd.coeffs[0];
            let zero_fn = {
                // skip identically-zero coefficients cheaply
                let n = alg.circle.n;
                (0..n).all(|i| a0.eval(alg.circle.theta(i)) == 0.0)
            };
            if !zero_fn {
                out = Some(delta_function_apply(alg, a0, f));
            }
            if dd.coeffs.len() > 1 {
                let part = delta_field_apply(alg, &dd.coeffs[1], f);
                out = Some(match out {
                    None => part,
                    Some(acc) => acc.add(&part),
                });
            }
            out.unwrap_or_else(|| alg_zero_like(f))
        },
        d10,
        d20,
        Vec::new(),
    ))
}

fn alg_zero_like(f: &TangentKernel) -> TangentKernel {
    let t: Vec<f64> = f.slices.iter().map(|s| s.t).collect();
    TangentKernel::zeros(f.circle, &t, f.vels, f.jet_depth())
}

/// The scaling derivation `δ_α(f) = −f + t·∂_t f` (t > 0) and
/// `−F − v·∂_v F` (t = 0). Uses the stored t-jets when available and falls
/// back to 2nd-order central differences in log t otherwise.
pub fn delta_alpha(alg: &GroupoidAlgebra, f: &TangentKernel) -> Result<TangentKernel, GroupoidError> {
    if f.slices.len() < 3 {
        return Err(GroupoidError::TooFewSlices {
            have: f.slices.len(),
            need: 3,
        });
    }
    let depth = f.jet_depth();
    let slices: Vec<super::kernel::TSlice> = if depth >= 1 {
        f.slices
            .iter()
            .map(|s| {
                let out_depth = depth - 1;
                let jet = (0..=out_depth)
                    .map(|k| {
                        // (−f + t f′)_k = (k−1)·a_k + t_s·(k+1)·a_{k+1}
                        let mut m = s.jet[k].mapv(|z| z * (k as f64 - 1.0));
                        m = m + s.jet[k + 1].mapv(|z| z * (s.t * (k as f64 + 1.0)));
                        m
                    })
                    .collect();
                super::kernel::TSlice { t: s.t, jet }
            })
            .collect()
    } else {
        // finite-difference fallback on the geometric grid
        let lt: Vec<f64> = f.slices.iter().map(|s| s.t.ln()).collect();
        (0..f.slices.len())
            .map(|j| {
                let tdf = if j == 0 {
                    (&f.slices[0].jet[0] - &f.slices[1].jet[0]).mapv(|z| z / (lt[0] - lt[1]))
                } else if j == f.slices.len() - 1 {
                    (&f.slices[j - 1].jet[0] - &f.slices[j].jet[0])
                        .mapv(|z| z / (lt[j - 1] - lt[j]))
                } else {
                    (&f.slices[j - 1].jet[0] - &f.slices[j + 1].jet[0])
                        .mapv(|z| z / (lt[j - 1] - lt[j + 1]))
                };
                super::kernel::TSlice {
                    t: f.slices[j].t,
                    jet: vec![tdf - &f.slices[j].jet[0]],
                }
            })
            .collect()
    };
    let dvm = spectral_dv(alg.vels, &f.zero, 1);
    let mut zero = f.zero.mapv(|z| -z);
    for i in 0..alg.vels.n_v {
        let v = alg.vels.v(i);
        for j in 0..alg.circle.n {
            zero[[i, j]] -= dvm[[i, j]] * v;
        }
    }
    Ok(TangentKernel {
        circle: f.circle,
        vels: f.vels,
        slices,
        zero,
    })
}

/// A frame: functions fᵢ and fields Xᵢ = aᵢ(θ)∂θ with `X = Σ X(fᵢ)Xᵢ`.
#[derive(Clone)]
pub struct Frame {
    pub pairs: Vec<(CircleFn, CircleFn)>,
}

impl Frame {
    /// (cos, sin) with (−sin·∂θ, cos·∂θ).
    pub fn standard() -> Self {
        Frame {
            pairs: vec![
                (CircleFn::cos(), CircleFn::sin_k(1.0, -1.0)),
                (CircleFn::sin(), CircleFn::cos_k(1.0, 1.0)),
            ],
        }
    }

    /// Built from the (cos 2θ, sin 2θ) embedding data.
    pub fn doubled() -> Self {
        Frame {
            pairs: vec![
                (CircleFn::cos_k(2.0, 1.0), CircleFn::sin_k(2.0, -0.5)),
                (CircleFn::sin_k(2.0, 1.0), CircleFn::cos_k(2.0, 0.5)),
            ],
        }
    }

    /// Pointwise residual of the trace identity `Σ Xᵢ(fᵢ) = 1`.
    pub fn trace_identity_residual(&self, circle: super::kernel::CircleGrid) -> f64 {
        let mut worst = 0.0_f64;
        for k in 0..circle.n {
            let th = circle.theta(k);
            let mut acc = 0.0;
            for (f, a) in &self.pairs {
                acc += a.eval(th) * f.deriv(th);
            }
            worst = worst.max((acc - 1.0).abs());
        }
        worst
    }

    /// Residual of the reconstruction `X = Σ X(fᵢ)Xᵢ` for `X = a∂θ`.
    pub fn reconstruction_residual(
        &self,
        circle: super::kernel::CircleGrid,
        a: &CircleFn,
    ) -> f64 {
        let mut worst = 0.0_f64;
        for k in 0..circle.n {
            let th = circle.theta(k);
            let mut acc = 0.0;
            for (f, ai) in &self.pairs {
                acc += a.eval(th) * f.deriv(th) * ai.eval(th);
            }
            worst = worst.max((acc - a.eval(th)).abs());
        }
        worst
    }
}

/// Output of the rescaled t-derivation.
pub struct HatDeltaOutput {
    pub kernel: TangentKernel,
    /// max disagreement between linear and quadratic extrapolation at t = 0
    pub extrapolation_disagreement: f64,
    pub flagged: bool,
}

/// `hatδ(f) = (1/t)(δ_α(f) + Σᵢ 𝕏ᵢ⋆δ_{fᵢ}(f))` at t > 0; the t = 0 slice is
/// Richardson-extrapolated from the two smallest resolved slices (the exact
/// cancellation at t = 0 is invisible to the grid).
pub fn hat_delta(
    alg: &GroupoidAlgebra,
    f: &TangentKernel,
    frame: &Frame,
    flag_tol: f64,
) -> Result<HatDeltaOutput, GroupoidError> {
    let mut numer = delta_alpha(alg, f)?;
    for (fi, ai) in &frame.pairs {
        let dfi = delta_function_apply(alg, fi, f);
        let term = lift_apply(alg, &CircleDiffOp::field(ai.clone()), &dfi);
        numer = numer.add(&term);
    }
    // divide by t slice-wise (scalar jet of 1/t)
    let depth = numer.jet_depth();
    let slices: Vec<super::kernel::TSlice> = numer
        .slices
        .iter()
        .map(|s| {
            let mut rc = vec![0.0_f64; depth + 1];
            for (k, slot) in rc.iter_mut().enumerate() {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                *slot = sign / s.t.powi(k as i32 + 1);
            }
            let jet = (0..=depth)
                .map(|d| {
                    let mut acc = Array2::<Complex64>::zeros((alg.circle.n, alg.circle.n));
                    for k in 0..=d {
                        acc = acc + numer_slice_coeff(&s.jet, d - k).mapv(|z| z * rc[k]);
                    }
                    acc
                })
                .collect();
            super::kernel::TSlice { t: s.t, jet }
        })
        .collect();

    let mut out = TangentKernel {
        circle: f.circle,
        vels: f.vels,
        slices,
        zero: Array2::zeros((alg.vels.n_v, alg.circle.n)),
    };

    // t = 0 via extrapolation from the smallest resolved slices
    let resolved = out.resolved_slices();
    if resolved.len() < 2 {
        return Err(GroupoidError::TooFewSlices {
            have: resolved.len(),
            need: 2,
        });
    }
    let s2 = resolved[resolved.len() - 1];
    let s1 = resolved[resolved.len() - 2];
    let chart = |sidx: usize| -> Array2<Complex64> {
        let s = &out.slices[sidx];
        let mut m = Array2::<Complex64>::zeros((alg.vels.n_v, alg.circle.n));
        for j in 0..alg.circle.n {
            let col: Vec<Complex64> = (0..alg.circle.n).map(|i| s.jet[0][[i, j]]).collect();
            let coeffs = trig_coeffs(&col);
            for vi in 0..alg.vels.n_v {
                let y = alg.circle.theta(j) + s.t * alg.vels.v(vi);
                m[[vi, j]] = trig_eval(&coeffs, y);
            }
        }
        m
    };
    let c1 = chart(s1);
    let c2 = chart(s2);
    let (t1, t2) = (out.slices[s1].t, out.slices[s2].t);
    // linear extrapolation to t = 0
    let lin = &c2 + &(&c2 - &c1).mapv(|z| z * (-t2 / (t1 - t2)));
    // quadratic check using a third slice when available
    let mut disagreement = 0.0_f64;
    if resolved.len() >= 3 {
        let s0 = resolved[resolved.len() - 3];
        let c0 = chart(s0);
        let t0 = out.slices[s0].t;
        // Lagrange extrapolation through (t0,c0),(t1,c1),(t2,c2) at 0
        let l0 = (t1 * t2) / ((t0 - t1) * (t0 - t2));
        let l1 = (t0 * t2) / ((t1 - t0) * (t1 - t2));
        let l2 = (t0 * t1) / ((t2 - t0) * (t2 - t1));
        let quad = c0.mapv(|z| z * l0) + c1.mapv(|z| z * l1) + c2.mapv(|z| z * l2);
        disagreement = (&quad - &lin)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
    }
    out.zero = lin;
    let flagged = disagreement > flag_tol;
    Ok(HatDeltaOutput {
        kernel: out,
        extrapolation_disagreement: disagreement,
        flagged,
    })
}

fn numer_slice_coeff<'a>(jet: &'a [Array2<Complex64>], d: usize) -> &'a Array2<Complex64> {
    &jet[d]
}

/// Multiplication by t: `(t·f)_k = t_s·a_k + a_{k−1}`; zero slice vanishes.
pub fn mult_t(f: &TangentKernel) -> TangentKernel {
    let depth = f.jet_depth();
    let slices = f
        .slices
        .iter()
        .map(|s| {
            let jet = (0..=depth)
                .map(|k| {
                    let mut m = s.jet[k].mapv(|z| z * s.t);
                    if k >= 1 {
                        m = m + &s.jet[k - 1];
                    }
                    m
                })
                .collect();
            super::kernel::TSlice { t: s.t, jet }
        })
        .collect();
    TangentKernel {
        circle: f.circle,
        vels: f.vels,
        slices,
        zero: Array2::zeros((f.vels.n_v, f.circle.n)),
    }
}
