//! Recipe-built kernel corpus: difference-quotient Gaussians with
//! prefactors, plus negative controls expected to fail the Schwartz tests.

use std::sync::Arc;

use num_complex::Complex64;

use super::jet::CJet;
use super::kernel::{CircleGrid, TangentKernel, VelocityGrid};

/// A kernel given by a closed-form expression: exact values and t-jets at
/// any (y,x,t), and the closed-form zero slice. Recipes can be resampled on
/// any grid, which is what the refinement studies need.
#[derive(Clone)]
pub struct KernelRecipe {
    pub name: String,
    pub self_adjoint: bool,
    /// whether the kernel is expected to pass the Schwartz tests
    pub schwartz: bool,
    pub body: Arc<dyn Fn(f64, f64, CJet) -> CJet + Send + Sync>,
    pub zero: Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync>,
}

impl KernelRecipe {
    pub fn new(
        name: impl Into<String>,
        self_adjoint: bool,
        schwartz: bool,
        body: impl Fn(f64, f64, CJet) -> CJet + Send + Sync + 'static,
        zero: impl Fn(f64, f64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        KernelRecipe {
            name: name.into(),
            self_adjoint,
            schwartz,
            body: Arc::new(body),
            zero: Arc::new(zero),
        }
    }

    pub fn sample(
        &self,
        circle: CircleGrid,
        t_grid: &[f64],
        vels: VelocityGrid,
        jet_depth: usize,
    ) -> TangentKernel {
        let mut out = TangentKernel::zeros(circle, t_grid, vels, jet_depth);
        for s in out.slices.iter_mut() {
            let tj = CJet::var(s.t, jet_depth + 1);
            for i in 0..circle.n {
                let y = circle.theta(i);
                for j in 0..circle.n {
                    let x = circle.theta(j);
                    let val = (self.body)(y, x, tj);
                    for d in 0..=jet_depth {
                        s.jet[d][[i, j]] = val.a[d];
                    }
                }
            }
        }
        for i in 0..vels.n_v {
            for j in 0..circle.n {
                out.zero[[i, j]] = (self.zero)(vels.v(i), circle.theta(j));
            }
        }
        out
    }

    /// Values and t-derivatives (orders 0..=l_max) at one chart point
    /// `(v, x, t) ↦ f(x+tv, x, t)`.
    pub fn chart_jet(&self, v: f64, x: f64, t: f64, l_max: usize) -> Vec<Complex64> {
        let tj = CJet::var(t, (l_max + 1).min(super::jet::MAX_JET));
        // y = x + t·v is itself t-dependent in the chart; compose
        // numerically: evaluate the recipe along y(t) via its own jet by
        // expanding f(x+tv, x, t) in t. The recipe body takes y as a
        // number, so we re-expand by sampling the body at the base point
        // with y frozen and correcting with finite y-offsets is not exact;
        // instead evaluate the full composition with a y-jet:
        self.chart_jet_inner(v, x, tj)
    }

    fn chart_jet_inner(&self, v: f64, x: f64, tj: CJet) -> Vec<Complex64> {
        // The corpus bodies are built from dnc(g) = (g(y)−g(x))/t and t.
        // For chart evaluation we need y = x + t·v as a jet; the generic
        // body closure cannot accept a y-jet, so chart jets are computed by
        // divided differences on the exact values (spacing chosen well
        // inside the analyticity scale).
        let l_max = tj.n - 1;
        let t0 = tj.value().re;
        let eval = |t: f64| -> Complex64 {
            let y = x + t * v;
            (self.body)(y, x, CJet::var(t, 1)).value()
        };
        let mut out = Vec::with_capacity(l_max + 1);
        out.push(eval(t0));
        if l_max >= 1 {
            let dt = (t0 * 1e-4).max(1e-7);
            let d1 = (eval(t0 + dt) - eval(t0 - dt)) / (2.0 * dt);
            out.push(d1);
            if l_max >= 2 {
                let d2 = (eval(t0 + dt) - out[0] * 2.0 + eval(t0 - dt)) / (dt * dt);
                out.push(d2);
            }
        }
        out
    }
}

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// `dnc(g)` as a jet in t at fixed (y,x).
fn dnc_jet(gy: f64, gx: f64, t: CJet) -> CJet {
    t.recip().scale(c(gy - gx))
}

/// The Gaussian base `exp(−α(dnc(cos)² + dnc(sin)²) − β·t²)`.
fn gauss_body(alpha: f64, beta: f64, y: f64, x: f64, t: CJet) -> CJet {
    let dc = dnc_jet(y.cos(), x.cos(), t);
    let ds = dnc_jet(y.sin(), x.sin(), t);
    let expo = dc
        .mul(&dc)
        .add(&ds.mul(&ds))
        .scale(c(-alpha))
        .sub(&t.mul(&t).scale(c(beta)));
    expo.exp()
}

fn gauss_zero(alpha: f64, v: f64, _x: f64) -> Complex64 {
    // dnc(cos) → −sin(x)·v, dnc(sin) → cos(x)·v: the squares sum to v²
    c((-alpha * v * v).exp())
}

/// The 20-kernel corpus: Example-type Gaussians with prefactors, a few
/// non-self-adjoint members, and negative controls (`schwartz: false`).
pub fn groupoid_corpus() -> Vec<KernelRecipe> {
    let mut out: Vec<KernelRecipe> = Vec::new();

    out.push(KernelRecipe::new(
        "example",
        true,
        true,
        |y, x, t| gauss_body(1.0, 1.0, y, x, t),
        |v, x| gauss_zero(1.0, v, x),
    ));
    out.push(KernelRecipe::new(
        "example_a2",
        true,
        true,
        |y, x, t| gauss_body(2.0, 1.0, y, x, t),
        |v, x| gauss_zero(2.0, v, x),
    ));
    out.push(KernelRecipe::new(
        "example_b2",
        true,
        true,
        |y, x, t| gauss_body(1.0, 2.0, y, x, t),
        |v, x| gauss_zero(1.0, v, x),
    ));
    out.push(KernelRecipe::new(
        "dnc_cos2",
        true,
        true,
        |y, x, t| {
            let dc = dnc_jet(y.cos(), x.cos(), t);
            gauss_body(1.0, 1.0, y, x, t).mul(&dc.mul(&dc).add(&CJet::constant_re(1.0, t.n)))
        },
        |v, x| {
            let d = -x.sin() * v;
            gauss_zero(1.0, v, x) * c(1.0 + d * d)
        },
    ));
    out.push(KernelRecipe::new(
        "dnc_sin2",
        true,
        true,
        |y, x, t| {
            let ds = dnc_jet(y.sin(), x.sin(), t);
            gauss_body(1.0, 1.0, y, x, t).mul(&ds.mul(&ds))
        },
        |v, x| {
            let d = x.cos() * v;
            gauss_zero(1.0, v, x) * c(d * d)
        },
    ));
    out.push(KernelRecipe::new(
        "cos_sym",
        true,
        true,
        |y, x, t| gauss_body(1.0, 1.0, y, x, t).scale(c(0.5 * (y.cos() + x.cos()))),
        |v, x| gauss_zero(1.0, v, x) * c(x.cos()),
    ));
    out.push(KernelRecipe::new(
        "sin_prod",
        true,
        true,
        |y, x, t| gauss_body(1.0, 1.0, y, x, t).scale(c(y.sin() * x.sin())),
        |v, x| gauss_zero(1.0, v, x) * c(x.sin() * x.sin()),
    ));
    out.push(KernelRecipe::new(
        "t2_weight",
        true,
        true,
        |y, x, t| gauss_body(1.0, 1.0, y, x, t).mul(&t.mul(&t)),
        |_v, _x| c(0.0),
    ));
    out.push(KernelRecipe::new(
        "one_plus_t2",
        true,
        true,
        |y, x, t| {
            gauss_body(1.0, 1.0, y, x, t)
                .mul(&t.mul(&t).add(&CJet::constant_re(1.0, t.n)))
        },
        |v, x| gauss_zero(1.0, v, x),
    ));
    out.push(KernelRecipe::new(
        "dnc_cross",
        true,
        true,
        |y, x, t| {
            let dc = dnc_jet(y.cos(), x.cos(), t);
            let ds = dnc_jet(y.sin(), x.sin(), t);
            gauss_body(1.0, 1.0, y, x, t).mul(&dc.mul(&ds))
        },
        |v, x| gauss_zero(1.0, v, x) * c(-x.sin() * x.cos() * v * v),
    ));
    out.push(KernelRecipe::new(
        "cos_sym_a2",
        true,
        true,
        |y, x, t| gauss_body(2.0, 1.0, y, x, t).scale(c(0.5 * (2.0 + y.cos() + x.cos()))),
        |v, x| gauss_zero(2.0, v, x) * c(1.0 + x.cos()),
    ));
    out.push(KernelRecipe::new(
        "cos_prod",
        true,
        true,
        |y, x, t| gauss_body(1.0, 1.0, y, x, t).scale(c(y.cos() * x.cos())),
        |v, x| gauss_zero(1.0, v, x) * c(x.cos() * x.cos()),
    ));
    out.push(KernelRecipe::new(
        "dnc_quartic",
        true,
        true,
        |y, x, t| {
            let dc = dnc_jet(y.cos(), x.cos(), t);
            let q = dc.mul(&dc).mul(&dc).mul(&dc);
            gauss_body(1.0, 1.0, y, x, t)
                .mul(&q.add(&CJet::constant_re(1.0, t.n)))
                .scale(c(0.5))
        },
        |v, x| {
            let d = -x.sin() * v;
            gauss_zero(1.0, v, x) * c(0.5 * (1.0 + d.powi(4)))
        },
    ));
    out.push(KernelRecipe::new(
        "dnc_diff",
        true,
        true,
        |y, x, t| {
            let dc = dnc_jet(y.cos(), x.cos(), t);
            let ds = dnc_jet(y.sin(), x.sin(), t);
            gauss_body(1.0, 1.0, y, x, t).mul(&dc.mul(&dc).sub(&ds.mul(&ds)))
        },
        |v, x| {
            let dc = -x.sin() * v;
            let ds = x.cos() * v;
            gauss_zero(1.0, v, x) * c(dc * dc - ds * ds)
        },
    ));
    out.push(KernelRecipe::new(
        "sin2_sym",
        true,
        true,
        |y, x, t| {
            gauss_body(1.0, 1.0, y, x, t)
                .scale(c(0.5 * (1.0 + (2.0 * y).cos() + (2.0 * x).cos())))
        },
        |v, x| gauss_zero(1.0, v, x) * c(0.5 * (1.0 + 2.0 * (2.0 * x).cos())),
    ));
    out.push(KernelRecipe::new(
        "a2_sinprod",
        true,
        true,
        |y, x, t| {
            let ds = dnc_jet(y.sin(), x.sin(), t);
            gauss_body(2.0, 1.0, y, x, t)
                .mul(&ds.mul(&ds))
                .scale(c(y.cos() * x.cos()))
        },
        |v, x| {
            let d = x.cos() * v;
            gauss_zero(2.0, v, x) * c(d * d * x.cos() * x.cos())
        },
    ));
    // non-self-adjoint members (still Schwartz)
    out.push(KernelRecipe::new(
        "antisym",
        false,
        true,
        |y, x, t| gauss_body(1.0, 1.0, y, x, t).scale(c(y.cos() - x.cos())),
        |_v, _x| c(0.0),
    ));
    out.push(KernelRecipe::new(
        "siny_only",
        false,
        true,
        |y, x, t| gauss_body(1.0, 1.0, y, x, t).scale(c(1.0 + 0.5 * y.sin())),
        |v, x| gauss_zero(1.0, v, x) * c(1.0 + 0.5 * x.sin()),
    ));
    // negative controls
    out.push(KernelRecipe::new(
        "nc_constant",
        true,
        false,
        |_y, _x, t| CJet::constant_re(1.0, t.n),
        |_v, _x| c(1.0),
    ));
    out.push(KernelRecipe::new(
        "nc_slow_v",
        true,
        false,
        |y, x, t| {
            let dc = dnc_jet(y.cos(), x.cos(), t);
            let ds = dnc_jet(y.sin(), x.sin(), t);
            let denom = dc
                .mul(&dc)
                .add(&ds.mul(&ds))
                .add(&CJet::constant_re(1.0, t.n));
            t.mul(&t).scale(c(-1.0)).exp().mul(&denom.recip())
        },
        |v, _x| c(1.0 / (1.0 + v * v)),
    ));
    out.push(KernelRecipe::new(
        "nc_no_t_decay",
        true,
        false,
        |y, x, t| gauss_body(1.0, 0.0, y, x, t),
        |v, x| gauss_zero(1.0, v, x),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_has_twenty_kernels_and_controls() {
        let corpus = groupoid_corpus();
        assert_eq!(corpus.len(), 20);
        assert_eq!(corpus.iter().filter(|r| !r.schwartz).count(), 3);
    }

    #[test]
    fn sampled_jets_match_divided_differences() {
        let corpus = groupoid_corpus();
        let recipe = &corpus[0];
        let circle = CircleGrid::new(16);
        let vels = VelocityGrid::new(64, 16.0);
        let t_grid = vec![1.0, 0.5, 0.25];
        let k = recipe.sample(circle, &t_grid, vels, 2);
        // numeric check of the first derivative at slice t = 0.5
        let (i, j) = (3, 9);
        let y = circle.theta(i);
        let x = circle.theta(j);
        let eval = |t: f64| (recipe.body)(y, x, CJet::var(t, 1)).value();
        let dt = 1e-6;
        let fd = (eval(0.5 + dt) - eval(0.5 - dt)) / (2.0 * dt);
        let jet_d1 = k.slices[1].jet[1][[i, j]];
        assert!((fd - jet_d1).norm() < 1e-7, "fd {fd} jet {jet_d1}");
    }

    #[test]
    fn zero_slices_match_chart_limit() {
        // K_t(x + t v, x) → F₀(v, x) pointwise as t → 0
        let corpus = groupoid_corpus();
        for recipe in corpus.iter().filter(|r| r.schwartz) {
            let x = 1.3_f64;
            let v = 0.7_f64;
            for &t in &[1e-3, 1e-4] {
                let y = x + t * v;
                let val = (recipe.body)(y, x, CJet::var(t, 1)).value();
                let limit = (recipe.zero)(v, x);
                let gap = (val - limit).norm();
                assert!(
                    gap <= 20.0 * t + 1e-10,
                    "{}: t={t} gap {gap:.3e}",
                    recipe.name
                );
            }
        }
    }

    #[test]
    fn self_adjoint_recipes_are_symmetric() {
        let corpus = groupoid_corpus();
        for recipe in &corpus {
            let (y, x, t) = (0.9, 2.2, 0.6);
            let a = (recipe.body)(y, x, CJet::var(t, 1)).value();
            let b = (recipe.body)(x, y, CJet::var(t, 1)).value();
            if recipe.self_adjoint {
                assert!((a - b.conj()).norm() < 1e-12, "{}", recipe.name);
            }
        }
    }
}
