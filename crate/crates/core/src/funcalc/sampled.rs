//! Compactly supported scalar functions sampled on uniform grids.

use num_complex::Complex64;

use super::FuncalcError;
use crate::algebra::ScalarFn;

/// C∞ window: 1 on `[plat_lo, plat_hi]`, 0 outside the rolloff margins,
/// glued with the standard exp(−1/u) partition function.
pub fn smooth_window(x: f64, plat_lo: f64, plat_hi: f64, roll_lo: f64, roll_hi: f64) -> f64 {
    fn b(u: f64) -> f64 {
        if u <= 0.0 {
            0.0
        } else {
            (-1.0 / u).exp()
        }
    }
    fn ramp(u: f64) -> f64 {
        // 0 at u≤0, 1 at u≥1, C∞ monotone in between
        let bu = b(u);
        let bv = b(1.0 - u);
        bu / (bu + bv)
    }
    if x >= plat_lo && x <= plat_hi {
        1.0
    } else if x < plat_lo {
        ramp((x - (plat_lo - roll_lo)) / roll_lo)
    } else {
        ramp(((plat_hi + roll_hi) - x) / roll_hi)
    }
}

/// A compactly supported function sampled at `x_k = −L + k·h`, `h = 2L/N`,
/// with `N` a power of two. `x = 0` falls on the grid at `k = N/2`.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    half_width: f64,
    samples: Vec<Complex64>,
    vanishes_at_zero: bool,
}

impl SampledFunction {
    pub fn from_fn(
        half_width: f64,
        grid_count: usize,
        f: impl Fn(f64) -> Complex64,
    ) -> Result<Self, FuncalcError> {
        if !grid_count.is_power_of_two() || grid_count < 16 {
            return Err(FuncalcError::GridNotPowerOfTwo { n: grid_count });
        }
        if !(half_width > 0.0) {
            return Err(FuncalcError::BadParameter("half_width must be positive".into()));
        }
        let h = 2.0 * half_width / grid_count as f64;
        let samples: Vec<Complex64> = (0..grid_count)
            .map(|k| f(-half_width + k as f64 * h))
            .collect();
        let max_abs = samples.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
        // support truncation below 1e−6 of the peak is accepted as compact
        let edge = samples[0].norm().max(samples[grid_count - 1].norm());
        if edge > 1e-6 * max_abs.max(1e-300) {
            return Err(FuncalcError::EndpointNotVanishing { value: edge });
        }
        let vanishes_at_zero = samples[grid_count / 2].norm() <= 1e-14 * max_abs.max(1e-300);
        Ok(SampledFunction {
            half_width,
            samples,
            vanishes_at_zero,
        })
    }

    pub fn grid_count(&self) -> usize {
        self.samples.len()
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / self.samples.len() as f64
    }

    pub fn vanishes_at_zero(&self) -> bool {
        self.vanishes_at_zero
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn x_at(&self, k: usize) -> f64 {
        -self.half_width + k as f64 * self.step()
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Cubic (4-point Lagrange) interpolation; zero outside the support.
    pub fn value_at(&self, x: f64) -> Complex64 {
        let n = self.samples.len();
        let h = self.step();
        let u = (x + self.half_width) / h;
        if u < 0.0 || u > (n - 1) as f64 {
            return Complex64::new(0.0, 0.0);
        }
        let i1 = (u.floor() as usize).clamp(1, n - 3);
        let t = u - i1 as f64;
        let (m1, p0, p1, p2) = (
            self.samples[i1 - 1],
            self.samples[i1],
            self.samples[i1 + 1],
            self.samples[i1 + 2],
        );
        let w_m1 = -t * (t - 1.0) * (t - 2.0) / 6.0;
        let w_0 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
        let w_1 = -(t + 1.0) * t * (t - 2.0) / 2.0;
        let w_2 = (t + 1.0) * t * (t - 1.0) / 6.0;
        m1 * w_m1 + p0 * w_0 + p1 * w_1 + p2 * w_2
    }

    /// Quadrature transform `ĝ(ξ) = h·Σ_k g_k e^{−iξx_k}`.
    ///
    /// For compactly supported smooth samples this equals the continuous
    /// transform up to the Poisson-aliasing term `Σ_{k≠0} ĝ(ξ + 2πk/h)`,
    /// which decays faster than any power of the grid density.
    pub fn fourier_at(&self, xi: f64) -> Complex64 {
        let h = self.step();
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &g) in self.samples.iter().enumerate() {
            let x = self.x_at(k);
            let ph = Complex64::new(0.0, -xi * x).exp();
            acc += g * ph;
        }
        acc * h
    }

    /// `ĝ(j/n)` for `j = −jmax..=jmax`, via per-sample phase rotation.
    pub fn fourier_row(&self, n: usize, jmax: i64) -> Vec<Complex64> {
        let h = self.step();
        let count = (2 * jmax + 1) as usize;
        let mut out = vec![Complex64::new(0.0, 0.0); count];
        for (k, &g) in self.samples.iter().enumerate() {
            if g.norm_sqr() == 0.0 {
                continue;
            }
            let x = self.x_at(k);
            let step = Complex64::new(0.0, -x / n as f64).exp();
            let mut ph = Complex64::new(0.0, jmax as f64 * x / n as f64).exp();
            let gh = g * h;
            for slot in out.iter_mut() {
                *slot += gh * ph;
                ph *= step;
            }
        }
        out
    }

    /// Factor `f(x) = x·g(x)`: pointwise division off the origin, one-sided
    /// 4th-order estimate of `f′(0)` at the removable singularity.
    pub fn factor_g(&self) -> Result<SampledFunction, FuncalcError> {
        if !self.vanishes_at_zero {
            return Err(FuncalcError::NotVanishingAtZero);
        }
        let n = self.samples.len();
        let h = self.step();
        let mid = n / 2;
        let mut g = Vec::with_capacity(n);
        for k in 0..n {
            if k == mid {
                let fp0 = (-25.0 * self.samples[mid] + 48.0 * self.samples[mid + 1]
                    - 36.0 * self.samples[mid + 2]
                    + 16.0 * self.samples[mid + 3]
                    - 3.0 * self.samples[mid + 4])
                    / (12.0 * h);
                g.push(fp0);
            } else {
                g.push(self.samples[k] / self.x_at(k));
            }
        }
        Ok(SampledFunction {
            half_width: self.half_width,
            samples: g,
            vanishes_at_zero: false,
        })
    }
}

impl ScalarFn for SampledFunction {
    fn eval(&self, z: Complex64) -> Option<Complex64> {
        if z.im.abs() > 1e-6 * (1.0 + z.re.abs()) {
            return None;
        }
        Some(self.value_at(z.re))
    }
}

/// A compactly supported function of a complex variable sampled on a
/// cell-centered n×n grid over `[−L,L]²` (`z_pq = x_p + i·y_q` with
/// `x_p = −L + (p+½)h`); cell-centering keeps both axes off the grid so the
/// double factoring `f = x·y·g` never divides by zero. Exact samples along
/// both axes are captured at construction for the reduction stages.
#[derive(Debug, Clone)]
pub struct SampledFunction2 {
    half_width: f64,
    n: usize,
    samples: Vec<Complex64>,
    vanishes_at_zero: bool,
    axis_re: Vec<Complex64>,
    axis_im: Vec<Complex64>,
}

impl SampledFunction2 {
    pub fn from_fn(
        half_width: f64,
        n: usize,
        f: impl Fn(Complex64) -> Complex64,
    ) -> Result<Self, FuncalcError> {
        if !n.is_power_of_two() || n < 16 {
            return Err(FuncalcError::GridNotPowerOfTwo { n });
        }
        let h = 2.0 * half_width / n as f64;
        let coord = |p: usize| -half_width + (p as f64 + 0.5) * h;
        let mut samples = Vec::with_capacity(n * n);
        for p in 0..n {
            for q in 0..n {
                samples.push(f(Complex64::new(coord(p), coord(q))));
            }
        }
        let max_abs = samples.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
        let mut edge = 0.0_f64;
        for p in 0..n {
            edge = edge
                .max(samples[p * n].norm())
                .max(samples[p * n + n - 1].norm())
                .max(samples[p].norm())
                .max(samples[(n - 1) * n + p].norm());
        }
        if edge > 1e-6 * max_abs.max(1e-300) {
            return Err(FuncalcError::EndpointNotVanishing { value: edge });
        }
        let f0 = f(Complex64::new(0.0, 0.0));
        let vanishes_at_zero = f0.norm() <= 1e-12 * max_abs.max(1e-300);
        let axis_re: Vec<Complex64> = (0..n).map(|p| f(Complex64::new(coord(p), 0.0))).collect();
        let axis_im: Vec<Complex64> = (0..n).map(|q| f(Complex64::new(0.0, coord(q)))).collect();
        Ok(SampledFunction2 {
            half_width,
            n,
            samples,
            vanishes_at_zero,
            axis_re,
            axis_im,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn coord(&self, p: usize) -> f64 {
        -self.half_width + (p as f64 + 0.5) * self.step()
    }

    pub fn sample(&self, p: usize, q: usize) -> Complex64 {
        self.samples[p * self.n + q]
    }

    pub fn vanishes_at_zero(&self) -> bool {
        self.vanishes_at_zero
    }

    pub fn axis_re(&self) -> &[Complex64] {
        &self.axis_re
    }

    pub fn axis_im(&self) -> &[Complex64] {
        &self.axis_im
    }

    /// 1D restriction to the real axis as a node-centered sampled function
    /// (cubic interpolation of the exact axis samples).
    pub fn restrict_re(&self, grid_count: usize) -> Result<SampledFunction, FuncalcError> {
        let vals = self.axis_re.clone();
        let l = self.half_width;
        let n = self.n;
        let h = self.step();
        SampledFunction::from_fn(l, grid_count, move |x| {
            interp_cell_centered(&vals, l, n, h, x)
        })
    }

    /// 1D restriction to the imaginary axis, as a function of y.
    pub fn restrict_im(&self, grid_count: usize) -> Result<SampledFunction, FuncalcError> {
        let vals = self.axis_im.clone();
        let l = self.half_width;
        let n = self.n;
        let h = self.step();
        SampledFunction::from_fn(l, grid_count, move |y| {
            interp_cell_centered(&vals, l, n, h, y)
        })
    }
}

fn interp_cell_centered(vals: &[Complex64], l: f64, n: usize, h: f64, x: f64) -> Complex64 {
    let u = (x + l) / h - 0.5;
    if u < -0.5 || u > (n - 1) as f64 + 0.5 {
        return Complex64::new(0.0, 0.0);
    }
    let i1 = (u.floor().max(1.0) as usize).clamp(1, n - 3);
    let t = u - i1 as f64;
    let (m1, p0, p1, p2) = (vals[i1 - 1], vals[i1], vals[i1 + 1], vals[i1 + 2]);
    let w_m1 = -t * (t - 1.0) * (t - 2.0) / 6.0;
    let w_0 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    let w_1 = -(t + 1.0) * t * (t - 2.0) / 2.0;
    let w_2 = (t + 1.0) * t * (t - 1.0) / 6.0;
    m1 * w_m1 + p0 * w_0 + p1 * w_1 + p2 * w_2
}
