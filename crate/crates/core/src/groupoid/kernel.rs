//! Discretized kernels on the tangent groupoid of the circle.
//!
//! A kernel holds matrices `K_t(y,x)` on a descending geometric t-grid
//! (each stored as a t-jet: Taylor coefficients about the slice, so the
//! scaling derivations act exactly), plus the t = 0 slice `F₀(v,x)` on a
//! velocity grid. The convolution is `(2π/N)·t⁻¹·K_t·G_t` per slice and
//! fiberwise linear convolution over v at t = 0.
//!
//! Discretization scope: a circle grid of spacing `h = 2π/N` resolves the
//! concentration of groupoid kernels only down to `t ≈ h`. Slice-wise
//! algebraic identities hold on every slice, but norms, seminorm suprema and
//! spectral oracles quantify over the resolved slices (`t ≥ 2h`) together
//! with the zero slice, where the grid is faithful to the geometry.

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::FftPlanner;

use super::GroupoidError;
use crate::algebra::StarAlgebra;

/// θ-grid: N points `θ_k = 2πk/N`, measure weight `2π/N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleGrid {
    pub n: usize,
}

impl CircleGrid {
    pub fn new(n: usize) -> Self {
        assert!(n.is_power_of_two() && n >= 16, "need a power-of-two θ-grid");
        CircleGrid { n }
    }

    pub fn theta(&self, k: usize) -> f64 {
        2.0 * std::f64::consts::PI * k as f64 / self.n as f64
    }

    pub fn weight(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.n as f64
    }

    /// FFT frequency of bin m (Nyquist zeroed for odd-order derivatives).
    pub fn freq(&self, m: usize) -> f64 {
        let n = self.n;
        if m < n / 2 {
            m as f64
        } else if m == n / 2 {
            0.0
        } else {
            m as f64 - n as f64
        }
    }
}

/// Velocity grid: `v_i = −V + i·dv`, `dv = 2V/N_v` (0 on the grid).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityGrid {
    pub n_v: usize,
    pub half_width: f64,
}

impl VelocityGrid {
    pub fn new(n_v: usize, half_width: f64) -> Self {
        assert!(n_v.is_power_of_two() && n_v >= 32);
        VelocityGrid { n_v, half_width }
    }

    pub fn dv(&self) -> f64 {
        2.0 * self.half_width / self.n_v as f64
    }

    pub fn v(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.dv()
    }
}

/// One t-slice: `jet[k]` is the k-th Taylor coefficient (about this t) of
/// the kernel matrix, `jet[0]` the values.
#[derive(Debug, Clone)]
pub struct TSlice {
    pub t: f64,
    pub jet: Vec<Array2<Complex64>>,
}

/// A discretized element of the groupoid convolution algebra.
#[derive(Debug, Clone)]
pub struct TangentKernel {
    pub circle: CircleGrid,
    pub vels: VelocityGrid,
    pub slices: Vec<TSlice>,
    /// `F₀(v,x)`: rows index v, columns index x.
    pub zero: Array2<Complex64>,
}

impl TangentKernel {
    pub fn zeros(
        circle: CircleGrid,
        t_grid: &[f64],
        vels: VelocityGrid,
        jet_depth: usize,
    ) -> Self {
        let slices = t_grid
            .iter()
            .map(|&t| TSlice {
                t,
                jet: (0..=jet_depth)
                    .map(|_| Array2::zeros((circle.n, circle.n)))
                    .collect(),
            })
            .collect();
        TangentKernel {
            circle,
            vels,
            slices,
            zero: Array2::zeros((vels.n_v, circle.n)),
        }
    }

    pub fn jet_depth(&self) -> usize {
        self.slices.first().map(|s| s.jet.len() - 1).unwrap_or(0)
    }

    pub fn t_grid(&self) -> Vec<f64> {
        self.slices.iter().map(|s| s.t).collect()
    }

    /// Indices of slices the circle grid resolves (`t ≥ 2h`).
    pub fn resolved_slices(&self) -> Vec<usize> {
        let h = self.circle.weight();
        self.slices
            .iter()
            .enumerate()
            .filter(|(_, s)| s.t >= 2.0 * h)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn grids_match(&self, other: &Self) -> bool {
        self.circle == other.circle
            && self.vels == other.vels
            && self.slices.len() == other.slices.len()
            && self
                .slices
                .iter()
                .zip(other.slices.iter())
                .all(|(a, b)| a.t == b.t)
    }

    /// Sup of |values| over all slices and the zero slice.
    pub fn sup_all(&self) -> f64 {
        let mut m = self
            .zero
            .iter()
            .map(|z| z.norm())
            .fold(0.0_f64, f64::max);
        for s in &self.slices {
            m = s.jet[0].iter().map(|z| z.norm()).fold(m, f64::max);
        }
        m
    }

    /// Sup of |values| over the resolved slices and the zero slice.
    pub fn sup_resolved(&self) -> f64 {
        let mut m = self
            .zero
            .iter()
            .map(|z| z.norm())
            .fold(0.0_f64, f64::max);
        for idx in self.resolved_slices() {
            m = self.slices[idx].jet[0]
                .iter()
                .map(|z| z.norm())
                .fold(m, f64::max);
        }
        m
    }

    pub fn map_linear(&self, f: impl Fn(&Array2<Complex64>) -> Array2<Complex64>) -> Self {
        TangentKernel {
            circle: self.circle,
            vels: self.vels,
            slices: self
                .slices
                .iter()
                .map(|s| TSlice {
                    t: s.t,
                    jet: s.jet.iter().map(&f).collect(),
                })
                .collect(),
            zero: f(&self.zero),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let depth = self.jet_depth().min(o.jet_depth());
        TangentKernel {
            circle: self.circle,
            vels: self.vels,
            slices: self
                .slices
                .iter()
                .zip(o.slices.iter())
                .map(|(a, b)| TSlice {
                    t: a.t,
                    jet: (0..=depth).map(|d| &a.jet[d] + &b.jet[d]).collect(),
                })
                .collect(),
            zero: &self.zero + &o.zero,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let depth = self.jet_depth().min(o.jet_depth());
        TangentKernel {
            circle: self.circle,
            vels: self.vels,
            slices: self
                .slices
                .iter()
                .zip(o.slices.iter())
                .map(|(a, b)| TSlice {
                    t: a.t,
                    jet: (0..=depth).map(|d| &a.jet[d] - &b.jet[d]).collect(),
                })
                .collect(),
            zero: &self.zero - &o.zero,
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map_linear(|m| m.mapv(|z| c * z))
    }

    /// `f*(y,x,t) = conj f(x,y,t)`, `f*(v,x,0) = conj f(−v,x,0)`.
    pub fn adjoint(&self) -> Self {
        let n = self.circle.n;
        let nv = self.vels.n_v;
        let conj_t = |m: &Array2<Complex64>| {
            let mut out = Array2::zeros((n, n));
            for i in 0..n {
                for j in 0..n {
                    out[[i, j]] = m[[j, i]].conj();
                }
            }
            out
        };
        let mut zero = Array2::zeros((nv, n));
        for i in 1..nv {
            for j in 0..n {
                zero[[i, j]] = self.zero[[nv - i, j]].conj();
            }
        }
        TangentKernel {
            circle: self.circle,
            vels: self.vels,
            slices: self
                .slices
                .iter()
                .map(|s| TSlice {
                    t: s.t,
                    jet: s.jet.iter().map(conj_t).collect(),
                })
                .collect(),
            zero,
        }
    }

    /// Chart consistency: max over (v,x) of
    /// `|K_t(x + t·v, x) − F₀(v,x)|` at the smallest resolved slice.
    pub fn chart_consistency_residual(&self) -> Option<f64> {
        let idx = *self.resolved_slices().last()?;
        let s = &self.slices[idx];
        let mut worst = 0.0_f64;
        for j in 0..self.circle.n {
            let col: Vec<Complex64> = (0..self.circle.n)
                .map(|i| s.jet[0][[i, j]])
                .collect();
            let coeffs = trig_coeffs(&col);
            for vi in 0..self.vels.n_v {
                let y = self.circle.theta(j) + s.t * self.vels.v(vi);
                let val = trig_eval(&coeffs, y);
                worst = worst.max((val - self.zero[[vi, j]]).norm());
            }
        }
        Some(worst)
    }
}

/// Fourier coefficients of a periodic column (index = FFT bin).
pub fn trig_coeffs(col: &[Complex64]) -> Vec<Complex64> {
    let n = col.len();
    let mut buf = col.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    for v in buf.iter_mut() {
        *v /= n as f64;
    }
    buf
}

/// Evaluate a trigonometric polynomial from FFT-bin coefficients.
pub fn trig_eval(coeffs: &[Complex64], theta: f64) -> Complex64 {
    let n = coeffs.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for (m, &c) in coeffs.iter().enumerate() {
        let f = if m < n / 2 {
            m as f64
        } else if m == n / 2 {
            // split the Nyquist bin symmetrically
            let ph = Complex64::new(0.0, (n / 2) as f64 * theta).exp();
            let phm = Complex64::new(0.0, -((n / 2) as f64) * theta).exp();
            acc += c * (ph + phm) * 0.5;
            continue;
        } else {
            m as f64 - n as f64
        };
        acc += c * Complex64::new(0.0, f * theta).exp();
    }
    acc
}

/// Spectral ∂θ^order along the y-axis (rows) of a slice matrix.
pub fn spectral_dy(circle: CircleGrid, m: &Array2<Complex64>, order: u32) -> Array2<Complex64> {
    let n = circle.n;
    let fft = FftPlanner::new().plan_fft_forward(n);
    let ifft = FftPlanner::new().plan_fft_inverse(n);
    let mut out = Array2::zeros((n, n));
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        for i in 0..n {
            buf[i] = m[[i, j]];
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
        for i in 0..n {
            out[[i, j]] = buf[i];
        }
    }
    out
}

/// Spectral ∂θ^order along the x-axis (columns) of a slice matrix.
pub fn spectral_dx(circle: CircleGrid, m: &Array2<Complex64>, order: u32) -> Array2<Complex64> {
    let n = circle.n;
    let fft = FftPlanner::new().plan_fft_forward(n);
    let ifft = FftPlanner::new().plan_fft_inverse(n);
    let mut out = Array2::zeros((n, n));
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
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

/// Spectral ∂v^order along the v-axis (rows) of the zero slice (the grid is
/// treated as one period; Schwartz tails at ±V make that faithful).
pub fn spectral_dv(vels: VelocityGrid, m: &Array2<Complex64>, order: u32) -> Array2<Complex64> {
    let nv = vels.n_v;
    let ncols = m.ncols();
    let period = 2.0 * vels.half_width;
    let fft = FftPlanner::new().plan_fft_forward(nv);
    let ifft = FftPlanner::new().plan_fft_inverse(nv);
    let mut out = Array2::zeros((nv, ncols));
    let mut buf = vec![Complex64::new(0.0, 0.0); nv];
    for j in 0..ncols {
        for i in 0..nv {
            buf[i] = m[[i, j]];
        }
        fft.process(&mut buf);
        for (bin, v) in buf.iter_mut().enumerate() {
            let k = if bin < nv / 2 {
                bin as f64
            } else if bin == nv / 2 {
                0.0
            } else {
                bin as f64 - nv as f64
            };
            let ik = Complex64::new(0.0, 2.0 * std::f64::consts::PI * k / period);
            let mut factor = Complex64::new(1.0, 0.0);
            for _ in 0..order {
                factor *= ik;
            }
            *v *= factor / nv as f64;
        }
        ifft.process(&mut buf);
        for i in 0..nv {
            out[[i, j]] = buf[i];
        }
    }
    out
}

/// Groupoid convolution.
pub fn convolve(f: &TangentKernel, g: &TangentKernel) -> Result<TangentKernel, GroupoidError> {
    if !f.grids_match(g) {
        return Err(GroupoidError::GridMismatch);
    }
    let n = f.circle.n;
    let depth = f.jet_depth().min(g.jet_depth());
    let w = f.circle.weight();

    // t > 0 slices: (2π/N)·t⁻¹·K·G with jets (Cauchy products)
    let slices: Vec<TSlice> = f
        .slices
        .iter()
        .zip(g.slices.iter())
        .map(|(a, b)| {
            // matrix jet product
            let mut prod: Vec<Array2<Complex64>> = Vec::with_capacity(depth + 1);
            for d in 0..=depth {
                let mut acc = Array2::<Complex64>::zeros((n, n));
                for i in 0..=d {
                    acc = acc + a.jet[i].dot(&b.jet[d - i]);
                }
                prod.push(acc);
            }
            // scalar jet of (2π/N)/t about t_s: coefficients w·(−1)^k/t^{k+1}
            let mut out: Vec<Array2<Complex64>> = Vec::with_capacity(depth + 1);
            let mut rcoef = vec![0.0_f64; depth + 1];
            for (k, rc) in rcoef.iter_mut().enumerate() {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                *rc = w * sign / a.t.powi(k as i32 + 1);
            }
            for d in 0..=depth {
                let mut acc = Array2::<Complex64>::zeros((n, n));
                for k in 0..=d {
                    acc = acc + prod[d - k].mapv(|z| z * rcoef[k]);
                }
                out.push(acc);
            }
            TSlice { t: a.t, jet: out }
        })
        .collect();

    // t = 0: per-x linear convolution over v (zero-padded FFT)
    let nv = f.vels.n_v;
    let dv = f.vels.dv();
    let pad = 2 * nv;
    let fft = FftPlanner::new().plan_fft_forward(pad);
    let ifft = FftPlanner::new().plan_fft_inverse(pad);
    let mut zero = Array2::zeros((nv, n));
    let mut fa = vec![Complex64::new(0.0, 0.0); pad];
    let mut fb = vec![Complex64::new(0.0, 0.0); pad];
    for j in 0..n {
        for i in 0..pad {
            fa[i] = Complex64::new(0.0, 0.0);
            fb[i] = Complex64::new(0.0, 0.0);
        }
        for i in 0..nv {
            fa[i] = f.zero[[i, j]];
            fb[i] = g.zero[[i, j]];
        }
        fft.process(&mut fa);
        fft.process(&mut fb);
        for i in 0..pad {
            fa[i] = fa[i] * fb[i] / pad as f64;
        }
        ifft.process(&mut fa);
        // lag ℓ = i + j corresponds to v = −2V + ℓ·dv; output node m has
        // v = −V + m·dv, so ℓ = m + n_v/2
        for m in 0..nv {
            zero[[m, j]] = fa[m + nv / 2] * dv;
        }
    }

    Ok(TangentKernel {
        circle: f.circle,
        vels: f.vels,
        slices,
        zero,
    })
}

/// Operator norm of `π_t(f)` at slice index s: largest singular value of
/// `(2π/N)·t⁻¹·K_t`.
pub fn pi_t_norm(f: &TangentKernel, s: usize) -> f64 {
    use ndarray_linalg::SVD;
    let sl = &f.slices[s];
    let m = sl.jet[0].mapv(|z| z * (f.circle.weight() / sl.t));
    let (_, sv, _) = m.svd(false, false).expect("svd");
    sv.iter().fold(0.0_f64, |a, &b| a.max(b))
}

/// Fiberwise convolution-operator norms: per x,
/// `sup_ω |dv·Σ_v F₀(v,x)e^{−iωv}|` on a 4× refined frequency grid.
pub fn pi_x_norms(f: &TangentKernel) -> Vec<f64> {
    let nv = f.vels.n_v;
    let pad = 4 * nv;
    let fft = FftPlanner::new().plan_fft_forward(pad);
    let dv = f.vels.dv();
    let mut out = Vec::with_capacity(f.circle.n);
    let mut buf = vec![Complex64::new(0.0, 0.0); pad];
    for j in 0..f.circle.n {
        for v in buf.iter_mut() {
            *v = Complex64::new(0.0, 0.0);
        }
        for i in 0..nv {
            buf[i] = f.zero[[i, j]];
        }
        fft.process(&mut buf);
        out.push(buf.iter().map(|z| z.norm() * dv).fold(0.0, f64::max));
    }
    out
}

/// The L¹-type majorant of the C*-norm: per resolved slice the max of row
/// and column integrals of `t⁻¹|f|`, and per fiber the v-integral.
pub fn l1_majorant(f: &TangentKernel) -> f64 {
    let n = f.circle.n;
    let w = f.circle.weight();
    let mut worst = 0.0_f64;
    for s in f.resolved_slices() {
        let sl = &f.slices[s];
        for i in 0..n {
            let mut row = 0.0;
            let mut col = 0.0;
            for j in 0..n {
                row += sl.jet[0][[i, j]].norm();
                col += sl.jet[0][[j, i]].norm();
            }
            worst = worst.max(row * w / sl.t).max(col * w / sl.t);
        }
    }
    let dv = f.vels.dv();
    for j in 0..n {
        let mut vint = 0.0;
        for i in 0..f.vels.n_v {
            vint += f.zero[[i, j]].norm();
        }
        worst = worst.max(vint * dv);
    }
    worst
}

/// C*-norm estimator: max of the resolved `π_t` norms and the fiber norms.
pub fn cstar_norm(f: &TangentKernel) -> f64 {
    let mut worst = pi_x_norms(f).into_iter().fold(0.0_f64, f64::max);
    for s in f.resolved_slices() {
        worst = worst.max(pi_t_norm(f, s));
    }
    worst
}

/// Algebra context for tangent kernels (fixed grids and jet depth).
#[derive(Debug, Clone)]
pub struct GroupoidAlgebra {
    pub circle: CircleGrid,
    pub t_grid: Vec<f64>,
    pub vels: VelocityGrid,
    pub jet_depth: usize,
}

impl GroupoidAlgebra {
    pub fn new(circle: CircleGrid, t_grid: Vec<f64>, vels: VelocityGrid, jet_depth: usize) -> Self {
        GroupoidAlgebra {
            circle,
            t_grid,
            vels,
            jet_depth,
        }
    }

    /// Default geometric grid `t_j = 2^{−j}`, j = 0..count-1.
    pub fn geometric_t_grid(count: usize) -> Vec<f64> {
        (0..count).map(|j| 0.5_f64.powi(j as i32)).collect()
    }

    /// Discrete unit at one slice: `t·N/(2π)·I` (convolution identity there).
    pub fn slice_unit(&self, s: usize) -> TangentKernel {
        let mut k = TangentKernel::zeros(self.circle, &self.t_grid, self.vels, self.jet_depth);
        let t = self.t_grid[s];
        let c = t / self.circle.weight();
        for i in 0..self.circle.n {
            k.slices[s].jet[0][[i, i]] = Complex64::new(c, 0.0);
        }
        // jet of t·N/(2π) in τ: coefficient 1 at order 1
        if self.jet_depth >= 1 {
            for i in 0..self.circle.n {
                k.slices[s].jet[1][[i, i]] = Complex64::new(1.0 / self.circle.weight(), 0.0);
            }
        }
        k
    }
}

impl StarAlgebra for GroupoidAlgebra {
    type Elem = TangentKernel;

    fn add(&self, a: &TangentKernel, b: &TangentKernel) -> TangentKernel {
        a.add(b)
    }
    fn sub(&self, a: &TangentKernel, b: &TangentKernel) -> TangentKernel {
        a.sub(b)
    }
    fn scale(&self, c: Complex64, a: &TangentKernel) -> TangentKernel {
        a.scale(c)
    }
    fn mul(&self, a: &TangentKernel, b: &TangentKernel) -> TangentKernel {
        convolve(a, b).expect("matching grids")
    }
    fn adjoint(&self, a: &TangentKernel) -> TangentKernel {
        a.adjoint()
    }
    fn norm(&self, a: &TangentKernel) -> f64 {
        cstar_norm(a)
    }
    fn zero(&self) -> TangentKernel {
        TangentKernel::zeros(self.circle, &self.t_grid, self.vels, self.jet_depth)
    }
    fn compatible(&self, a: &TangentKernel) -> bool {
        a.circle == self.circle && a.vels == self.vels && a.slices.len() == self.t_grid.len()
    }
    fn backend_tag(&self) -> String {
        format!(
            "tg[N{},T{},Nv{}]",
            self.circle.n,
            self.t_grid.len(),
            self.vels.n_v
        )
    }
}
