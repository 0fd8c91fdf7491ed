//! Scalar t-jets: truncated Taylor expansions used to carry exact
//! t-derivatives through kernel recipes and slice operations.

use num_complex::Complex64;

pub const MAX_JET: usize = 5;

/// Taylor coefficients `a_k = f^{(k)}(t₀)/k!` about a base point, truncated
/// to `n` coefficients.
#[derive(Debug, Clone, Copy)]
pub struct CJet {
    pub n: usize,
    pub a: [Complex64; MAX_JET],
}

impl CJet {
    pub fn constant(v: Complex64, n: usize) -> Self {
        let mut a = [Complex64::new(0.0, 0.0); MAX_JET];
        a[0] = v;
        CJet { n, a }
    }

    pub fn constant_re(v: f64, n: usize) -> Self {
        Self::constant(Complex64::new(v, 0.0), n)
    }

    /// The variable t itself, expanded about `t0`.
    pub fn var(t0: f64, n: usize) -> Self {
        let mut a = [Complex64::new(0.0, 0.0); MAX_JET];
        a[0] = Complex64::new(t0, 0.0);
        if n > 1 {
            a[1] = Complex64::new(1.0, 0.0);
        }
        CJet { n, a }
    }

    pub fn value(&self) -> Complex64 {
        self.a[0]
    }

    /// d-th derivative: `d!·a_d`.
    pub fn derivative(&self, d: usize) -> Complex64 {
        if d >= self.n {
            return Complex64::new(0.0, 0.0);
        }
        let mut fact = 1.0;
        for k in 2..=d {
            fact *= k as f64;
        }
        self.a[d] * fact
    }

    pub fn add(&self, o: &CJet) -> CJet {
        let n = self.n.min(o.n);
        let mut a = [Complex64::new(0.0, 0.0); MAX_JET];
        for k in 0..n {
            a[k] = self.a[k] + o.a[k];
        }
        CJet { n, a }
    }

    pub fn sub(&self, o: &CJet) -> CJet {
        let n = self.n.min(o.n);
        let mut a = [Complex64::new(0.0, 0.0); MAX_JET];
        for k in 0..n {
            a[k] = self.a[k] - o.a[k];
        }
        CJet { n, a }
    }

    pub fn scale(&self, c: Complex64) -> CJet {
        let mut a = [Complex64::new(0.0, 0.0); MAX_JET];
        for k in 0..self.n {
            a[k] = self.a[k] * c;
        }
        CJet { n: self.n, a }
    }

    /// Cauchy product.
    pub fn mul(&self, o: &CJet) -> CJet {
        let n = self.n.min(o.n);
        let mut a = [Complex64::new(0.0, 0.0); MAX_JET];
        for k in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..=k {
                acc += self.a[i] * o.a[k - i];
            }
            a[k] = acc;
        }
        CJet { n, a }
    }

    /// `1/f`, requires `f(t₀) ≠ 0`.
    pub fn recip(&self) -> CJet {
        let mut a = [Complex64::new(0.0, 0.0); MAX_JET];
        let inv0 = Complex64::new(1.0, 0.0) / self.a[0];
        a[0] = inv0;
        for k in 1..self.n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.a[j] * a[k - j];
            }
            a[k] = -inv0 * acc;
        }
        CJet { n: self.n, a }
    }

    /// `exp(f)` via the standard recurrence `b_k = (1/k)Σ j·a_j·b_{k−j}`.
    pub fn exp(&self) -> CJet {
        let mut a = [Complex64::new(0.0, 0.0); MAX_JET];
        a[0] = self.a[0].exp();
        for k in 1..self.n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.a[j] * (j as f64) * a[k - j];
            }
            a[k] = acc / k as f64;
        }
        CJet { n: self.n, a }
    }

    pub fn powi(&self, p: u32) -> CJet {
        let mut out = CJet::constant_re(1.0, self.n);
        for _ in 0..p {
            out = out.mul(self);
        }
        out
    }
}
