//! Certified operators on the group algebra: coordinate multipliers,
//! right-invariant derivatives, and polynomial-coefficient operators.

use num_complex::Complex64;

use super::kernel::{GroupAlgebra, GroupKernel};
use super::HeisenbergError;
use crate::leibniz::{
    compose_certificates, identity_certificate, scalar_certificate, sum_certificates,
    zero_certificate, LeibnizCertificate,
};
use crate::tol::Tol;

/// Coordinate axes of the group in exponential coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

fn multiplier_op(axis: Axis, coeff: Complex64) -> impl Fn(&GroupAlgebra, &GroupKernel) -> GroupKernel + Send + Sync + 'static
{
    move |_alg: &GroupAlgebra, f: &GroupKernel| match axis {
        Axis::X => f.pointwise(|x, _, _| coeff * x),
        Axis::Y => f.pointwise(|_, y, _| coeff * y),
        Axis::Z => f.pointwise(|_, _, z| coeff * z),
    }
}

/// Order-1 certificate for multiplication by `coeff·(coordinate)`:
/// the plain Leibniz rule `δ(f⋆g) = δ(f)⋆g + f⋆δ(g)` (δ₂₀ = δ₁₀ = id).
fn coordinate_certificate(
    alg: &GroupAlgebra,
    axis: Axis,
    coeff: Complex64,
) -> LeibnizCertificate<GroupAlgebra> {
    let name = match axis {
        Axis::X => "x",
        Axis::Y => "y",
        Axis::Z => "z",
    };
    let tag = if coeff == Complex64::new(1.0, 0.0) {
        format!("mult({name})")
    } else {
        format!("mult({},{}·{name})", coeff.re, coeff.im)
    };
    let d10 = std::sync::Arc::new(identity_certificate(alg));
    let d20 = std::sync::Arc::new(identity_certificate(alg));
    LeibnizCertificate::higher(
        alg,
        tag,
        false,
        multiplier_op(axis, coeff),
        d10,
        d20,
        Vec::new(),
    )
}

/// Certificates for the coordinate multipliers δ_x, δ_y, δ_z.
///
/// δ_x, δ_y satisfy the plain Leibniz rule (order 1). The central coordinate
/// picks up the commutator of the group law and is order 2:
/// `δ_z(f⋆g) = δ_z(f)⋆g + f⋆δ_z(g) + δ_x(f)⋆δ_y(g) − δ_y(f)⋆δ_x(g)`.
pub fn delta_coordinate(alg: &GroupAlgebra, axis: Axis) -> LeibnizCertificate<GroupAlgebra> {
    let one = Complex64::new(1.0, 0.0);
    match axis {
        Axis::X | Axis::Y => coordinate_certificate(alg, axis, one),
        Axis::Z => {
            let dx = std::sync::Arc::new(coordinate_certificate(alg, Axis::X, one));
            let dy = std::sync::Arc::new(coordinate_certificate(alg, Axis::Y, one));
            let neg_dy = std::sync::Arc::new(coordinate_certificate(
                alg,
                Axis::Y,
                Complex64::new(-1.0, 0.0),
            ));
            let d10 = std::sync::Arc::new(identity_certificate(alg));
            let d20 = std::sync::Arc::new(identity_certificate(alg));
            let cross = vec![
                (dx, dy),
                (neg_dy, std::sync::Arc::new(coordinate_certificate(alg, Axis::X, one))),
            ];
            LeibnizCertificate::higher(
                alg,
                "mult(z)",
                false,
                multiplier_op(Axis::Z, one),
                d10,
                d20,
                cross,
            )
        }
    }
}

/// The wrong central rule (cross terms omitted) — a negative control whose
/// residual must not vanish under refinement.
pub fn delta_z_without_cross(alg: &GroupAlgebra) -> LeibnizCertificate<GroupAlgebra> {
    let d10 = std::sync::Arc::new(identity_certificate(alg));
    let d20 = std::sync::Arc::new(identity_certificate(alg));
    LeibnizCertificate::higher(
        alg,
        "mult(z)#nocross",
        false,
        multiplier_op(Axis::Z, Complex64::new(1.0, 0.0)),
        d10,
        d20,
        Vec::new(),
    )
}

/// 4th-order centered finite difference along one grid axis (zero extension).
fn fd4(alg: &GroupAlgebra, f: &GroupKernel, axis: Axis) -> GroupKernel {
    let n = alg.grid.n;
    let h = alg.grid.step();
    let mut out = GroupKernel::zeros(alg.grid);
    let get = |data: &[Complex64], i: i64, j: i64, k: i64| -> Complex64 {
        if i < 0 || j < 0 || k < 0 || i >= n as i64 || j >= n as i64 || k >= n as i64 {
            Complex64::new(0.0, 0.0)
        } else {
            data[alg.grid.index(i as usize, j as usize, k as usize)]
        }
    };
    let (di, dj, dk) = match axis {
        Axis::X => (1i64, 0i64, 0i64),
        Axis::Y => (0, 1, 0),
        Axis::Z => (0, 0, 1),
    };
    for i in 0..n as i64 {
        for j in 0..n as i64 {
            for k in 0..n as i64 {
                let m2 = get(&f.data, i - 2 * di, j - 2 * dj, k - 2 * dk);
                let m1 = get(&f.data, i - di, j - dj, k - dk);
                let p1 = get(&f.data, i + di, j + dj, k + dk);
                let p2 = get(&f.data, i + 2 * di, j + 2 * dj, k + 2 * dk);
                out.data[alg.grid.index(i as usize, j as usize, k as usize)] =
                    (m2 - m1 * 8.0 + p1 * 8.0 - p2) / (12.0 * h);
            }
        }
    }
    out
}

/// Right-invariant vector field of `v = (a,b,c)`:
/// `X_R = a∂x + b∂y + (c + a·y − b·x)∂z`, discretized with 4th-order
/// differences. Order-0 certificate (left-multiplier property
/// `X_R(f⋆g) = X_R(f)⋆g`).
pub fn right_invariant_derivative(
    alg: &GroupAlgebra,
    v: [f64; 3],
) -> LeibnizCertificate<GroupAlgebra> {
    if v == [0.0, 0.0, 0.0] {
        return zero_certificate(alg);
    }
    let tag = format!("xr({},{},{})", v[0], v[1], v[2]);
    LeibnizCertificate::order0(alg, tag, false, move |alg: &GroupAlgebra, f: &GroupKernel| {
        let mut out = GroupKernel::zeros(alg.grid);
        if v[0] != 0.0 {
            let dx = fd4(alg, f, Axis::X);
            out = out.add(&dx.scale(Complex64::new(v[0], 0.0)));
        }
        if v[1] != 0.0 {
            let dy = fd4(alg, f, Axis::Y);
            out = out.add(&dy.scale(Complex64::new(v[1], 0.0)));
        }
        let dz = fd4(alg, f, Axis::Z);
        let coeff = dz.pointwise(|x, y, _| Complex64::new(v[2] + v[0] * y - v[1] * x, 0.0));
        out.add(&coeff)
    })
}

/// A differential operator with polynomial coefficients: a sum of terms
/// `P(x,y,z)·X_{1R}⋯X_{kR}`.
#[derive(Debug, Clone)]
pub struct PolyDiffOp {
    pub terms: Vec<PolyTerm>,
}

#[derive(Debug, Clone)]
pub struct PolyTerm {
    /// monomial exponents (x,y,z) with complex coefficients
    pub coeffs: Vec<((u32, u32, u32), Complex64)>,
    /// right-invariant derivative word, applied right-to-left
    pub word: Vec<[f64; 3]>,
}

impl PolyDiffOp {
    pub fn unit() -> Self {
        PolyDiffOp {
            terms: vec![PolyTerm {
                coeffs: vec![((0, 0, 0), Complex64::new(1.0, 0.0))],
                word: Vec::new(),
            }],
        }
    }

    pub fn monomial_word(
        exp: (u32, u32, u32),
        coeff: f64,
        word: Vec<[f64; 3]>,
    ) -> Self {
        PolyDiffOp {
            terms: vec![PolyTerm {
                coeffs: vec![(exp, Complex64::new(coeff, 0.0))],
                word,
            }],
        }
    }

    pub fn max_degree(&self) -> u32 {
        self.terms
            .iter()
            .flat_map(|t| t.coeffs.iter().map(|((a, b, c), _)| a + b + c))
            .max()
            .unwrap_or(0)
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.iter().map(|t| t.word.len()).max().unwrap_or(0)
    }

    /// Direct evaluation (multipliers exact, derivatives 4th-order).
    pub fn apply(&self, alg: &GroupAlgebra, f: &GroupKernel) -> GroupKernel {
        let mut out = GroupKernel::zeros(alg.grid);
        for term in &self.terms {
            let mut v = f.clone();
            for vec in term.word.iter().rev() {
                let cert = right_invariant_derivative(alg, *vec);
                v = cert.apply(alg, &v);
            }
            // polynomial multiplier
            let mut acc = GroupKernel::zeros(alg.grid);
            for &((a, b, c), co) in &term.coeffs {
                let part = v.pointwise(|x, y, z| {
                    co * x.powi(a as i32) * y.powi(b as i32) * z.powi(c as i32)
                });
                acc = acc.add(&part);
            }
            out = out.add(&acc);
        }
        out
    }
}

/// Assemble a Leibniz certificate for a polynomial-coefficient operator by
/// composing coordinate-multiplier and right-invariant-derivative
/// certificates through the closure constructions.
pub fn certify_poly_op(
    alg: &GroupAlgebra,
    d: &PolyDiffOp,
    tol: &Tol,
) -> Result<LeibnizCertificate<GroupAlgebra>, HeisenbergError> {
    if d.max_degree() > 4 || d.max_word_len() > 4 {
        return Err(HeisenbergError::DegreeCapExceeded {
            degree: d.max_degree().max(d.max_word_len() as u32),
            cap: 4,
        });
    }
    let one = Complex64::new(1.0, 0.0);
    let mut total: Option<LeibnizCertificate<GroupAlgebra>> = None;
    for term in &d.terms {
        // derivative word (right-to-left composition)
        let mut word_cert: Option<LeibnizCertificate<GroupAlgebra>> = None;
        for vec in term.word.iter() {
            let c = right_invariant_derivative(alg, *vec);
            word_cert = Some(match word_cert {
                None => c,
                Some(acc) => compose_certificates(alg, &acc, &c, tol.compose_depth_max)
                    .map_err(HeisenbergError::Certify)?,
            });
        }
        // polynomial multiplier: sum over monomials of scalar·x^a·y^b·z^c
        let mut poly_cert: Option<LeibnizCertificate<GroupAlgebra>> = None;
        for &((a, b, c), co) in &term.coeffs {
            let mut mono: Option<LeibnizCertificate<GroupAlgebra>> = None;
            let mut push = |axis: Axis, count: u32, mono: &mut Option<LeibnizCertificate<GroupAlgebra>>| -> Result<(), HeisenbergError> {
                for _ in 0..count {
                    let cc = coordinate_certificate(alg, axis, one);
                    *mono = Some(match mono.take() {
                        None => cc,
                        Some(acc) => compose_certificates(alg, &acc, &cc, tol.compose_depth_max)
                            .map_err(HeisenbergError::Certify)?,
                    });
                }
                Ok(())
            };
            push(Axis::X, a, &mut mono)?;
            push(Axis::Y, b, &mut mono)?;
            push(Axis::Z, c, &mut mono)?;
            let scaled = match mono {
                None => scalar_certificate(alg, co),
                Some(m) => compose_certificates(
                    alg,
                    &scalar_certificate(alg, co),
                    &m,
                    tol.compose_depth_max,
                )
                .map_err(HeisenbergError::Certify)?,
            };
            poly_cert = Some(match poly_cert {
                None => scaled,
                Some(acc) => sum_certificates(alg, &acc, &scaled),
            });
        }
        let poly_cert = poly_cert.expect("nonempty coefficient list");
        let term_cert = match word_cert {
            None => poly_cert,
            Some(w) => compose_certificates(alg, &poly_cert, &w, tol.compose_depth_max)
                .map_err(HeisenbergError::Certify)?,
        };
        total = Some(match total {
            None => term_cert,
            Some(acc) => sum_certificates(alg, &acc, &term_cert),
        });
    }
    Ok(total.expect("nonempty term list"))
}

/// Sup norm of `D(f)` over the grid: the group-side Schwartz seminorm.
pub fn schwartz_seminorm_group(alg: &GroupAlgebra, f: &GroupKernel, d: &PolyDiffOp) -> f64 {
    d.apply(alg, f).sup_norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::kernel::HeisenbergGrid;
    use crate::leibniz::check_leibniz;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn test_algebra(n: usize) -> GroupAlgebra {
        GroupAlgebra::new(HeisenbergGrid::new(n, 4.0))
    }

    fn gaussian_pair(alg: &GroupAlgebra) -> (GroupKernel, GroupKernel) {
        let f = GroupKernel::from_fn(alg.grid, |x, y, z| {
            c((-1.5 * (x * x + y * y + z * z)).exp())
        })
        .unwrap();
        let g = GroupKernel::from_fn(alg.grid, |x, y, z| {
            c((-2.0 * (x * x + y * y + z * z)).exp() * (1.0 + 0.5 * x))
        })
        .unwrap();
        (f, g)
    }

    /// Steep pair: twisted tails below rounding at the box edge, so the
    /// exact-commutation checks see no truncation floor.
    fn steep_pair(alg: &GroupAlgebra) -> (GroupKernel, GroupKernel) {
        let f = GroupKernel::from_fn(alg.grid, |x, y, z| {
            c((-2.5 * (x * x + y * y + z * z)).exp())
        })
        .unwrap();
        let g = GroupKernel::from_fn(alg.grid, |x, y, z| {
            c((-3.0 * (x * x + y * y + z * z)).exp() * (1.0 + 0.5 * x))
        })
        .unwrap();
        (f, g)
    }

    #[test]
    fn delta_x_leibniz_small_residual() {
        let alg = test_algebra(12);
        let cert = delta_coordinate(&alg, Axis::X);
        assert_eq!(cert.order, 1);
        let pair = gaussian_pair(&alg);
        let rep = check_leibniz(&alg, &cert, &[pair], 1.0).unwrap();
        // h = 8/12: O(h²) scale with a modest constant
        assert!(rep.max_residual < 0.1, "residual {:.3e}", rep.max_residual);
    }

    #[test]
    fn delta_z_rule_beats_wrong_rule() {
        let alg = test_algebra(12);
        let good = delta_coordinate(&alg, Axis::Z);
        assert_eq!(good.order, 2);
        let bad = delta_z_without_cross(&alg);
        let pair = gaussian_pair(&alg);
        let rep_good = check_leibniz(&alg, &good, &[pair.clone()], 1.0).unwrap();
        let rep_bad = check_leibniz(&alg, &bad, &[pair], 1.0).unwrap();
        assert!(
            rep_good.max_residual * 5.0 < rep_bad.max_residual,
            "good {:.3e} bad {:.3e}",
            rep_good.max_residual,
            rep_bad.max_residual
        );
    }

    #[test]
    fn central_field_commutes_to_truncation() {
        // Z_R = ∂z commutes with the z-structure of the convolution; the
        // residual is the twisted-tail mass truncated at the box edge
        let alg = test_algebra(16);
        let cert = right_invariant_derivative(&alg, [0.0, 0.0, 1.0]);
        assert_eq!(cert.order, 0);
        let pair = steep_pair(&alg);
        let rep = check_leibniz(&alg, &cert, &[pair], 1.0).unwrap();
        assert!(rep.max_residual < 1e-4, "residual {:.3e}", rep.max_residual);
    }

    #[test]
    fn general_field_order0_residual() {
        let alg = test_algebra(12);
        let cert = right_invariant_derivative(&alg, [1.0, 0.5, 0.0]);
        let pair = gaussian_pair(&alg);
        let rep = check_leibniz(&alg, &cert, &[pair], 1.0).unwrap();
        // O(h²) with h = 2/3 at this grid
        assert!(rep.max_residual < 0.6, "residual {:.3e}", rep.max_residual);
    }

    #[test]
    fn zero_vector_is_zero_certificate() {
        let alg = test_algebra(12);
        let cert = right_invariant_derivative(&alg, [0.0, 0.0, 0.0]);
        assert!(cert.is_zero);
    }

    #[test]
    fn unit_poly_op_is_identity_like() {
        let alg = test_algebra(12);
        let d = PolyDiffOp::unit();
        let cert = certify_poly_op(&alg, &d, &Tol::default()).unwrap();
        assert_eq!(cert.order, 0);
        let (f, _) = gaussian_pair(&alg);
        let out = cert.apply(&alg, &f);
        let diff = out.sub(&f).sup_norm();
        assert!(diff == 0.0);
    }

    #[test]
    fn certify_x_times_central_derivative() {
        let alg = test_algebra(12);
        let d = PolyDiffOp::monomial_word((1, 0, 0), 1.0, vec![[0.0, 0.0, 1.0]]);
        let cert = certify_poly_op(&alg, &d, &Tol::default()).unwrap();
        let pair = gaussian_pair(&alg);
        let rep = check_leibniz(&alg, &cert, &[pair], 1.0).unwrap();
        assert!(rep.max_residual < 0.2, "residual {:.3e}", rep.max_residual);
        // certificate values agree with direct application
        let (f, _) = gaussian_pair(&alg);
        let via_cert = cert.apply(&alg, &f);
        let direct = d.apply(&alg, &f);
        assert!(via_cert.sub(&direct).sup_norm() < 1e-12);
    }

    #[test]
    fn degree_cap_enforced() {
        let alg = test_algebra(12);
        let d = PolyDiffOp::monomial_word((5, 0, 0), 1.0, vec![]);
        assert!(matches!(
            certify_poly_op(&alg, &d, &Tol::default()),
            Err(HeisenbergError::DegreeCapExceeded { .. })
        ));
    }

    #[test]
    fn seminorm_gaussian_against_closed_form() {
        // D = x²·∂x on e^{−r²}: sup |x²·(−2x)e^{−r²}| = sup 2|x|³e^{−x²}
        let alg = test_algebra(16);
        let f = GroupKernel::from_fn(alg.grid, |x, y, z| c((-(x * x + y * y + z * z)).exp()))
            .unwrap();
        let d = PolyDiffOp::monomial_word((2, 0, 0), 1.0, vec![[1.0, 0.0, 0.0]]);
        // X_R for (1,0,0) is ∂x + y∂z; on the x-axis-symmetric Gaussian the
        // y∂z part contributes y·(−2z)e^{−r²}, small near the sup point
        let got = schwartz_seminorm_group(&alg, &f, &d);
        // closed form for the ∂x part: max over grid of |x|²·|−2x+(−2z)y|e^{−r²}
        let mut want = 0.0_f64;
        for i in 0..alg.grid.n {
            for j in 0..alg.grid.n {
                for k in 0..alg.grid.n {
                    let (x, y, z) = (
                        alg.grid.coord(i),
                        alg.grid.coord(j),
                        alg.grid.coord(k),
                    );
                    let v = x * x * (2.0 * x + 2.0 * z * y).abs() * (-(x * x + y * y + z * z)).exp();
                    want = want.max(v);
                }
            }
        }
        assert!((got - want).abs() <= 0.05 * want, "got {got:.4} want {want:.4}");
    }
}
