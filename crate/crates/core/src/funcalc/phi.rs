//! Truncation threshold for the exponential series, and the Beta-integral
//! identity used by the exponential-bound argument.

use super::FuncalcError;
use crate::tol::{ln_factorial, Tol};

/// Threshold `φ(ξ) = ⌈e·ξ²⌉ + 1`, validated by sweep: for every `m > φ(ξ)`
/// (up to the sweep bound), `ξ^m/m! ≤ 1/√(m!)`.
///
/// The choice is justified by `√(m!) ≥ (m/e)^{m/2}`: for `m > e·ξ²` the
/// right side exceeds `ξ^m`. The sweep is an independent oracle for the
/// defining implication.
pub fn phi_threshold(xi: f64, tol: &Tol) -> Result<u64, FuncalcError> {
    if !(xi >= 0.0) || xi > tol.phi_max_xi {
        return Err(FuncalcError::PhiArgumentOutOfRange {
            xi,
            max: tol.phi_max_xi,
        });
    }
    let phi = (std::f64::consts::E * xi * xi).ceil() as u64 + 1;
    let sweep_to = tol.phi_sweep_max_m.max(phi as usize + 64);
    for m in (phi as usize + 1)..=sweep_to {
        if !phi_property_holds(xi, m) {
            return Err(FuncalcError::PhiSweepFailed { xi, m });
        }
    }
    Ok(phi)
}

/// The defining implication at one `m`: `ξ^m/m! ≤ 1/√(m!)`, i.e.
/// `m·ln ξ ≤ ½·ln m!`.
pub fn phi_property_holds(xi: f64, m: usize) -> bool {
    if xi == 0.0 {
        return true;
    }
    m as f64 * xi.ln() <= 0.5 * ln_factorial(m)
}

// 16-point Gauss–Legendre nodes/weights on [−1, 1]; exact through degree 31.
const GL16: [(f64, f64); 8] = [
    (0.0950125098376374, 0.1894506104550685),
    (0.2816035507792589, 0.1826034150449236),
    (0.4580167776572274, 0.1691565193950025),
    (0.6178762444026438, 0.1495959888165767),
    (0.7554044083550030, 0.1246289712555339),
    (0.8656312023878318, 0.0951585116824928),
    (0.9445750230732326, 0.0622535239386479),
    (0.9894009349916499, 0.0271524594117541),
];

/// Quadrature check of
/// `(1/((j−1)!(m−j)!))·∫₀¹ s^{j−1}(1−s)^{m−j} ds = 1/m!`;
/// returns the absolute deviation. The integrand is a polynomial of degree
/// `m−1`, integrated exactly for `m ≤ 32`.
pub fn beta_identity_check(j: u32, m: u32) -> Result<f64, FuncalcError> {
    if j < 1 || j > m || m > 20 {
        return Err(FuncalcError::BadParameter(format!(
            "need 1 ≤ j ≤ m ≤ 20, got j={j}, m={m}"
        )));
    }
    let mut quad = 0.0_f64;
    for &(x, w) in &GL16 {
        for s in [0.5 * (1.0 - x), 0.5 * (1.0 + x)] {
            quad += 0.5 * w * s.powi(j as i32 - 1) * (1.0 - s).powi((m - j) as i32);
        }
    }
    let pref = (ln_factorial(j as usize - 1) + ln_factorial((m - j) as usize)).exp();
    let lhs = quad / pref;
    let rhs = (-ln_factorial(m as usize)).exp();
    Ok((lhs - rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_values() {
        let tol = Tol::default();
        assert_eq!(phi_threshold(0.0, &tol).unwrap(), 1);
        assert_eq!(phi_threshold(1.0, &tol).unwrap(), 4); // ⌈e⌉+1
        let p3 = phi_threshold(3.0, &tol).unwrap();
        assert_eq!(p3, (std::f64::consts::E * 9.0).ceil() as u64 + 1); // 26
        assert!(phi_threshold(101.0, &tol).is_err());
        assert!(phi_threshold(-1.0, &tol).is_err());
    }

    #[test]
    fn phi_sweep_xi_one() {
        // for ξ=1: 1/m! ≤ 1/√(m!) always; the sweep runs m = 5..400
        for m in 5..=400 {
            assert!(phi_property_holds(1.0, m));
        }
    }

    #[test]
    fn phi_sweep_xi_three() {
        for m in 27..=400 {
            assert!(phi_property_holds(3.0, m), "m={m}");
        }
    }

    #[test]
    fn beta_identity_small_cases() {
        // j=1, m=1: ∫₀¹ ds = 1 = 1/1!
        assert!(beta_identity_check(1, 1).unwrap() < 1e-15);
        // j=1, m=2: ∫₀¹(1−s)ds = 1/2 = 1/2!
        assert!(beta_identity_check(1, 2).unwrap() < 1e-15);
        // j=3, m=7: (1/(2!·4!))·B(3,5) = 1/5040
        assert!(beta_identity_check(3, 7).unwrap() < 1e-14);
    }

    #[test]
    fn beta_identity_full_range() {
        for m in 1..=20u32 {
            for j in 1..=m {
                let dev = beta_identity_check(j, m).unwrap();
                assert!(dev <= 1e-12, "j={j} m={m} dev={dev:.3e}");
            }
        }
    }
}
