//! Schwartz seminorms: iterated generator words, and the coordinate
//! three-clause characterization used as an independent cross-check.

use num_complex::Complex64;

use super::corpus::KernelRecipe;
use super::kernel::{
    spectral_dv, spectral_dx, spectral_dy, CircleGrid, GroupoidAlgebra, TangentKernel,
    VelocityGrid,
};
use super::ops::{
    delta_field_apply, delta_function_apply, hat_delta, lift_apply, mult_t, CircleDiffOp,
    CircleFn, Frame,
};
use super::GroupoidError;

/// One generator application.
#[derive(Clone)]
pub enum WordOp {
    MultT,
    Lift(CircleDiffOp),
    DeltaFn(CircleFn),
    DeltaField(CircleFn),
    HatDelta,
}

impl WordOp {
    pub fn name(&self) -> String {
        match self {
            WordOp::MultT => "t".into(),
            WordOp::Lift(d) => format!("L[{}]", d.name()),
            WordOp::DeltaFn(g) => format!("d[{}]", g.name),
            WordOp::DeltaField(a) => format!("dX[{}]", a.name),
            WordOp::HatDelta => "hd".into(),
        }
    }
}

/// A word of generators; `ops[0]` is applied first.
#[derive(Clone)]
pub struct SchwartzWord {
    pub ops: Vec<WordOp>,
}

impl SchwartzWord {
    pub fn name(&self) -> String {
        let parts: Vec<String> = self.ops.iter().map(|o| o.name()).collect();
        parts.join("∘")
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

/// Apply a word (depth-capped) to a kernel.
pub fn apply_word(
    alg: &GroupoidAlgebra,
    frame: &Frame,
    word: &SchwartzWord,
    f: &TangentKernel,
    depth_cap: usize,
) -> Result<TangentKernel, GroupoidError> {
    if word.len() > depth_cap {
        return Err(GroupoidError::WordTooDeep {
            len: word.len(),
            cap: depth_cap,
        });
    }
    let mut cur = f.clone();
    for op in &word.ops {
        cur = match op {
            WordOp::MultT => mult_t(&cur),
            WordOp::Lift(d) => lift_apply(alg, d, &cur),
            WordOp::DeltaFn(g) => delta_function_apply(alg, g, &cur),
            WordOp::DeltaField(a) => delta_field_apply(alg, a, &cur),
            WordOp::HatDelta => hat_delta(alg, &cur, frame, f64::INFINITY)?.kernel,
        };
    }
    Ok(cur)
}

/// Sup of |word(f)| over the resolved slices and the zero slice.
pub fn schwartz_seminorm(
    alg: &GroupoidAlgebra,
    frame: &Frame,
    f: &TangentKernel,
    word: &SchwartzWord,
    depth_cap: usize,
) -> Result<f64, GroupoidError> {
    Ok(apply_word(alg, frame, word, f, depth_cap)?.sup_resolved())
}

/// The default generator set used by the suites.
pub fn default_generators() -> Vec<WordOp> {
    vec![
        WordOp::MultT,
        WordOp::Lift(CircleDiffOp::field(CircleFn::constant(1.0))),
        WordOp::DeltaFn(CircleFn::cos()),
        WordOp::DeltaField(CircleFn::constant(1.0)),
        WordOp::HatDelta,
    ]
}

/// All nonempty words up to the given depth over the generator set.
pub fn words_up_to_depth(gens: &[WordOp], depth: usize) -> Vec<SchwartzWord> {
    let mut out: Vec<SchwartzWord> = Vec::new();
    let mut frontier: Vec<Vec<WordOp>> = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &frontier {
            for g in gens {
                let mut ops = w.clone();
                ops.push(g.clone());
                out.push(SchwartzWord { ops: ops.clone() });
                next.push(ops);
            }
        }
        frontier = next;
    }
    out
}

/// Pointwise-Schwartz check of the zero slice: `sup |v^k ∂_v^l F₀|` for
/// `k, l ≤ 3`.
pub fn pointwise_schwartz_sups(
    vels: VelocityGrid,
    circle: CircleGrid,
    zero: &ndarray::Array2<Complex64>,
    k_max: u32,
    l_max: u32,
) -> Vec<((u32, u32), f64)> {
    let mut out = Vec::new();
    for l in 0..=l_max {
        let der = spectral_dv(vels, zero, l);
        for k in 0..=k_max {
            let mut sup = 0.0_f64;
            for i in 0..vels.n_v {
                let vk = vels.v(i).abs().powi(k as i32);
                for j in 0..circle.n {
                    sup = sup.max(vk * der[[i, j]].norm());
                }
            }
            out.push(((k, l), sup));
        }
    }
    out
}

/// Report of the coordinate three-clause characterization.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RemarkReport {
    pub clause1_sup: f64,
    pub clause2_sup: f64,
    pub clause3_sup: f64,
    pub pass: bool,
}

/// Evaluate the three clause families at desk depth (k, l ≤ 2; coordinate
/// operators D ∈ {1, ∂_y, ∂_x, ∂_y∂_x}; the off-diagonal compact is the
/// band of θ-distance ≥ π/2).
pub fn remark_seminorms(
    recipe: &KernelRecipe,
    circle: CircleGrid,
    vels: VelocityGrid,
    budget: f64,
) -> RemarkReport {
    let coord_ops = |m: &ndarray::Array2<Complex64>| -> Vec<ndarray::Array2<Complex64>> {
        vec![
            m.clone(),
            spectral_dy(circle, m, 1),
            spectral_dx(circle, m, 1),
            spectral_dx(circle, &spectral_dy(circle, m, 1), 1),
        ]
    };

    // clause 1: t ∈ [1, 32], sup |t^k ∂t^l D f|
    let big_t = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0];
    let k1 = recipe.sample(circle, &big_t, vels, 2);
    let mut clause1 = 0.0_f64;
    for s in &k1.slices {
        for l in 0..=2usize {
            for d in coord_ops(&s.jet[l]) {
                // jet[l] is the Taylor coefficient: derivative = l!·coeff
                let fact = if l == 2 { 2.0 } else { 1.0 };
                for k in 0..=2 {
                    let w = s.t.powi(k as i32) * fact;
                    let sup = d.iter().map(|z| z.norm() * w).fold(0.0, f64::max);
                    clause1 = clause1.max(sup);
                }
            }
        }
    }

    // clause 2: t ∈ (0, 1], off-diagonal band, sup |t^{−k} ∂t^l D f|
    let small_t: Vec<f64> = (0..=10).map(|j| 0.5_f64.powi(j)).collect();
    let k2 = recipe.sample(circle, &small_t, vels, 2);
    let mut clause2 = 0.0_f64;
    let band = |i: usize, j: usize| -> bool {
        let d = (circle.theta(i) - circle.theta(j)).abs();
        let d = d.min(2.0 * std::f64::consts::PI - d);
        d >= std::f64::consts::FRAC_PI_2
    };
    for s in &k2.slices {
        for l in 0..=2usize {
            for d in coord_ops(&s.jet[l]) {
                let fact = if l == 2 { 2.0 } else { 1.0 };
                for k in 0..=2 {
                    let w = s.t.powi(-(k as i32)) * fact;
                    let mut sup = 0.0_f64;
                    for i in 0..circle.n {
                        for j in 0..circle.n {
                            if band(i, j) {
                                sup = sup.max(d[[i, j]].norm() * w);
                            }
                        }
                    }
                    clause2 = clause2.max(sup);
                }
            }
        }
    }

    // clause 3: chart field f(x+tv, x, t): sup |v^k ∂t^l ∂_v^α ∂_x^β (·)|
    let h = circle.weight();
    let chart_t: Vec<f64> = small_t.iter().cloned().filter(|&t| t >= 2.0 * h).collect();
    let mut clause3 = 0.0_f64;
    for &t in &chart_t {
        // sample the chart field with t-derivatives
        let mut fields = vec![ndarray::Array2::<Complex64>::zeros((vels.n_v, circle.n)); 3];
        for i in 0..vels.n_v {
            for j in 0..circle.n {
                let jets = recipe.chart_jet(vels.v(i), circle.theta(j), t, 2);
                for (l, val) in jets.iter().enumerate() {
                    fields[l][[i, j]] = *val;
                }
            }
        }
        for (l, field) in fields.iter().enumerate() {
            let _ = l;
            for alpha in 0..=2u32 {
                let dv = spectral_dv(vels, field, alpha);
                for beta in 0..=2u32 {
                    let m = spectral_dx_cols(circle, &dv, beta);
                    for k in 0..=2u32 {
                        let mut sup = 0.0_f64;
                        for i in 0..vels.n_v {
                            let vk = vels.v(i).abs().powi(k as i32);
                            for j in 0..circle.n {
                                sup = sup.max(vk * m[[i, j]].norm());
                            }
                        }
                        clause3 = clause3.max(sup);
                    }
                }
            }
        }
    }
    // t = 0 slice of clause 3 (values only)
    {
        let k0 = recipe.sample(circle, &[1.0], vels, 0);
        for alpha in 0..=2u32 {
            let dv = spectral_dv(vels, &k0.zero, alpha);
            for beta in 0..=2u32 {
                let m = spectral_dx_cols(circle, &dv, beta);
                for k in 0..=2u32 {
                    let mut sup = 0.0_f64;
                    for i in 0..vels.n_v {
                        let vk = vels.v(i).abs().powi(k as i32);
                        for j in 0..circle.n {
                            sup = sup.max(vk * m[[i, j]].norm());
                        }
                    }
                    clause3 = clause3.max(sup);
                }
            }
        }
    }

    RemarkReport {
        clause1_sup: clause1,
        clause2_sup: clause2,
        clause3_sup: clause3,
        pass: clause1 <= budget && clause2 <= budget && clause3 <= budget,
    }
}

/// ∂_x^order along columns for (v,x)-shaped fields (x is periodic).
fn spectral_dx_cols(
    circle: CircleGrid,
    m: &ndarray::Array2<Complex64>,
    order: u32,
) -> ndarray::Array2<Complex64> {
    if order == 0 {
        return m.clone();
    }
    let n = circle.n;
    let rows = m.nrows();
    let fft = rustfft::FftPlanner::new().plan_fft_forward(n);
    let ifft = rustfft::FftPlanner::new().plan_fft_inverse(n);
    let mut out = ndarray::Array2::zeros((rows, n));
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..rows {
        for j in 0..n {
            buf[j] = m[[i, j]];
        }
        fft.process(&mut buf);
        for (bin, v) in buf.iter_mut().enumerate() {
            let f = circle.freq(bin);
            let ik = Complex64::new(0.0, f);
            let mut factor = Complex64::new(1.0, 0.0);
            for _ in 0..order {
                factor *= ik;
            }
            *v *= factor / n as f64;
        }
        ifft.process(&mut buf);
        for j in 0..n {
            out[[i, j]] = buf[j];
        }
    }
    out
}
