//! Residual verification of certificates on sampled element pairs.

use serde::Serialize;

use super::certificate::LeibnizCertificate;
use super::LeibnizError;
use crate::algebra::StarAlgebra;

/// Outcome of a residual sweep.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub max_residual: f64,
    pub sample_count: usize,
    /// Index of the worst sample pair.
    pub worst_pair: usize,
    pub tol: f64,
    pub pass: bool,
}

fn ensure_backend<A: StarAlgebra>(
    alg: &A,
    cert: &LeibnizCertificate<A>,
) -> Result<(), LeibnizError> {
    if cert.backend != alg.backend_tag() {
        return Err(LeibnizError::BackendMismatch {
            expected: cert.backend.clone(),
            found: alg.backend_tag(),
        });
    }
    Ok(())
}

/// Evaluate the certificate's Leibniz identity on one pair and return the
/// residual `‖δ(ab) − [δ(a)δ₂₀(b) + δ₁₀(a)δ(b) + Σ δ₁ᵢ(a)δ₂ᵢ(b)]‖`
/// (order 0: `‖δ(ab) − δ(a)b‖`).
pub fn leibniz_residual<A: StarAlgebra>(
    alg: &A,
    cert: &LeibnizCertificate<A>,
    a: &A::Elem,
    b: &A::Elem,
) -> f64 {
    let ab = alg.mul(a, b);
    let lhs = cert.apply(alg, &ab);
    let rhs = match &cert.coeffs {
        None => alg.mul(&cert.apply(alg, a), b),
        Some(co) => {
            let mut acc = alg.mul(&cert.apply(alg, a), &co.delta20.apply(alg, b));
            acc = alg.add(
                &acc,
                &alg.mul(&co.delta10.apply(alg, a), &cert.apply(alg, b)),
            );
            for (l, r) in &co.cross_terms {
                acc = alg.add(&acc, &alg.mul(&l.apply(alg, a), &r.apply(alg, b)));
            }
            acc
        }
    };
    alg.norm(&alg.sub(&lhs, &rhs))
}

/// Residual sweep of the Leibniz identity over sample pairs.
pub fn check_leibniz<A: StarAlgebra>(
    alg: &A,
    cert: &LeibnizCertificate<A>,
    pairs: &[(A::Elem, A::Elem)],
    tol: f64,
) -> Result<ResidualReport, LeibnizError> {
    ensure_backend(alg, cert)?;
    if pairs.is_empty() {
        return Err(LeibnizError::EmptySample);
    }
    let mut max_residual = 0.0_f64;
    let mut worst = 0usize;
    for (idx, (a, b)) in pairs.iter().enumerate() {
        let r = leibniz_residual(alg, cert, a, b);
        if r > max_residual {
            max_residual = r;
            worst = idx;
        }
    }
    Ok(ResidualReport {
        max_residual,
        sample_count: pairs.len(),
        worst_pair: worst,
        tol,
        pass: max_residual <= tol,
    })
}

/// Max over the sample of `‖δ₂₀(x*) − δ₂₀(x)*‖`.
pub fn check_star_condition<A: StarAlgebra>(
    alg: &A,
    cert: &LeibnizCertificate<A>,
    sample: &[A::Elem],
    tol: f64,
) -> Result<ResidualReport, LeibnizError> {
    ensure_backend(alg, cert)?;
    let co = cert
        .coeffs
        .as_ref()
        .ok_or(LeibnizError::MissingCoefficients)?;
    if sample.is_empty() {
        return Err(LeibnizError::EmptySample);
    }
    let mut max_residual = 0.0_f64;
    let mut worst = 0usize;
    for (idx, x) in sample.iter().enumerate() {
        let lhs = co.delta20.apply(alg, &alg.adjoint(x));
        let rhs = alg.adjoint(&co.delta20.apply(alg, x));
        let r = alg.norm(&alg.sub(&lhs, &rhs));
        if r > max_residual {
            max_residual = r;
            worst = idx;
        }
    }
    Ok(ResidualReport {
        max_residual,
        sample_count: sample.len(),
        worst_pair: worst,
        tol,
        pass: max_residual <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::super::certificate::*;
    use super::*;
    use crate::algebra::{MatrixAlgebra, MatrixElement};
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_pairs(dim: usize, count: usize, seed: u64) -> Vec<(MatrixElement, MatrixElement)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                (
                    MatrixElement::random_dense(&mut rng, dim, 1.0),
                    MatrixElement::random_dense(&mut rng, dim, 1.0),
                )
            })
            .collect()
    }

    #[test]
    fn identity_order0_passes() {
        let alg = MatrixAlgebra::new(4);
        let cert = identity_certificate(&alg);
        let rep = check_leibniz(&alg, &cert, &random_pairs(4, 10, 1), 1e-12).unwrap();
        assert!(rep.pass, "residual {}", rep.max_residual);
    }

    #[test]
    fn identity_order1_variant_passes() {
        let alg = MatrixAlgebra::new(4);
        let cert = identity_certificate_order1(&alg);
        assert_eq!(cert.order, 1);
        let rep = check_leibniz(&alg, &cert, &random_pairs(4, 10, 2), 1e-12).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn left_multiplier_order0() {
        let alg = MatrixAlgebra::new(4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = MatrixElement::random_dense(&mut rng, 4, 1.0);
        let cert = left_multiplier_certificate(&alg, "m", m);
        assert_eq!(cert.order, 0);
        let rep = check_leibniz(&alg, &cert, &random_pairs(4, 10, 4), 1e-12).unwrap();
        assert!(rep.pass, "residual {}", rep.max_residual);
    }

    #[test]
    fn scalar_certificate_variants() {
        let alg = MatrixAlgebra::new(3);
        for lam in [c(1.0, 0.0), c(0.0, 0.0), c(2.0, 1.0)] {
            let cert = scalar_certificate(&alg, lam);
            assert_eq!(cert.order, 0);
            let rep = check_leibniz(&alg, &cert, &random_pairs(3, 8, 5), 1e-12).unwrap();
            assert!(rep.pass);
        }
    }

    #[test]
    fn commutator_is_order1_derivation() {
        let alg = MatrixAlgebra::new(5);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let d = MatrixElement::random_dense(&mut rng, 5, 1.0);
        let cert = commutator_certificate(&alg, "d", d);
        assert_eq!(cert.order, 1);
        let rep = check_leibniz(&alg, &cert, &random_pairs(5, 10, 7), 1e-11).unwrap();
        assert!(rep.pass, "residual {}", rep.max_residual);
    }

    #[test]
    fn sum_increments_order_and_passes() {
        let alg = MatrixAlgebra::new(4);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let m1 = MatrixElement::random_dense(&mut rng, 4, 1.0);
        let m2 = MatrixElement::random_dense(&mut rng, 4, 1.0);
        let c1 = left_multiplier_certificate(&alg, "m1", m1);
        let c2 = left_multiplier_certificate(&alg, "m2", m2);
        let s = sum_certificates(&alg, &c1, &c2);
        assert_eq!(s.order, 1); // max(0,0)+1
        let rep = check_leibniz(&alg, &s, &random_pairs(4, 10, 9), 1e-11).unwrap();
        assert!(rep.pass, "residual {}", rep.max_residual);
    }

    #[test]
    fn sum_with_zero_keeps_values() {
        let alg = MatrixAlgebra::new(4);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let d = MatrixElement::random_dense(&mut rng, 4, 1.0);
        let cert = commutator_certificate(&alg, "d", d);
        let z = zero_certificate(&alg);
        let s = sum_certificates(&alg, &cert, &z);
        assert_eq!(s.order, cert.order + 1);
        let x = MatrixElement::random_dense(&mut rng, 4, 1.0);
        let diff = alg.sub(&s.apply(&alg, &x), &cert.apply(&alg, &x));
        assert!(alg.norm(&diff) <= 1e-12);
    }

    #[test]
    fn compose_order0_multipliers() {
        let alg = MatrixAlgebra::new(4);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m1 = MatrixElement::random_dense(&mut rng, 4, 1.0);
        let m2 = MatrixElement::random_dense(&mut rng, 4, 1.0);
        let c1 = left_multiplier_certificate(&alg, "m1", m1.clone());
        let c2 = left_multiplier_certificate(&alg, "m2", m2.clone());
        let comp = compose_certificates(&alg, &c1, &c2, 16).unwrap();
        assert_eq!(comp.order, 0); // n = m = 0 case
        let rep = check_leibniz(&alg, &comp, &random_pairs(4, 10, 12), 1e-11).unwrap();
        assert!(rep.pass);
        // values equal left multiplication by m1·m2
        let prod = left_multiplier_certificate(&alg, "m1m2", m1.mul(&m2).unwrap());
        let x = MatrixElement::random_dense(&mut rng, 4, 1.0);
        let diff = alg.sub(&comp.apply(&alg, &x), &prod.apply(&alg, &x));
        assert!(alg.norm(&diff) <= 1e-12);
    }

    #[test]
    fn compose_id_keeps_values() {
        let alg = MatrixAlgebra::new(4);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let d = MatrixElement::random_dense(&mut rng, 4, 1.0);
        let cert = commutator_certificate(&alg, "d", d);
        let id = identity_certificate(&alg);
        let comp = compose_certificates(&alg, &id, &cert, 16).unwrap();
        let x = MatrixElement::random_dense(&mut rng, 4, 1.0);
        let diff = alg.sub(&comp.apply(&alg, &x), &cert.apply(&alg, &x));
        assert!(alg.norm(&diff) <= 1e-12);
        let rep = check_leibniz(&alg, &comp, &random_pairs(4, 10, 14), 1e-11).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn compose_higher_orders_passes() {
        let alg = MatrixAlgebra::new(4);
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let d1 = MatrixElement::random_dense(&mut rng, 4, 1.0);
        let d2 = MatrixElement::random_dense(&mut rng, 4, 1.0);
        let c1 = commutator_certificate(&alg, "d1", d1);
        let c2 = commutator_certificate(&alg, "d2", d2);
        let comp = compose_certificates(&alg, &c1, &c2, 16).unwrap();
        let rep = check_leibniz(&alg, &comp, &random_pairs(4, 10, 16), 1e-10).unwrap();
        assert!(rep.pass, "residual {}", rep.max_residual);
    }

    #[test]
    fn star_condition_identity_and_zero() {
        let alg = MatrixAlgebra::new(3);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let sample: Vec<MatrixElement> = (0..20)
            .map(|_| MatrixElement::random_dense(&mut rng, 3, 1.0))
            .collect();
        // δ₂₀ = id
        let d = MatrixElement::random_dense(&mut rng, 3, 1.0);
        let cert = commutator_certificate(&alg, "d", d);
        let rep = check_star_condition(&alg, &cert, &sample, 1e-13).unwrap();
        assert!(rep.pass);
        assert!(rep.max_residual == 0.0);
        // δ₂₀ = 0 (right multiplier)
        let m = MatrixElement::random_dense(&mut rng, 3, 1.0);
        let cert = right_multiplier_certificate(&alg, "m", m);
        let rep = check_star_condition(&alg, &cert, &sample, 1e-13).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn star_condition_detects_violation() {
        // δ₂₀(x) = m·x with m = [[0,1],[0,0]] (not self-adjoint) violates
        // the star condition; package it as a synthetic order-1 certificate.
        let alg = MatrixAlgebra::new(2);
        let mut md = ndarray::Array2::zeros((2, 2));
        md[[0, 1]] = c(1.0, 0.0);
        let m = MatrixElement::new(md).unwrap();
        let bad20 = std::sync::Arc::new(left_multiplier_certificate(&alg, "bad", m));
        let d10 = std::sync::Arc::new(zero_certificate(&alg));
        let cert = LeibnizCertificate::higher(
            &alg,
            "synthetic",
            false,
            |_alg, x: &MatrixElement| x.clone(),
            d10,
            bad20,
            Vec::new(),
        );
        assert!(!cert.star_ok);
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        let sample: Vec<MatrixElement> = (0..20)
            .map(|_| MatrixElement::random_dense(&mut rng, 2, 1.0))
            .collect();
        let rep = check_star_condition(&alg, &cert, &sample, 1e-13).unwrap();
        assert!(!rep.pass);
        assert!(rep.max_residual > 0.1);
    }

    #[test]
    fn backend_mismatch_detected() {
        let alg4 = MatrixAlgebra::new(4);
        let alg3 = MatrixAlgebra::new(3);
        let cert = identity_certificate(&alg4);
        let pairs = random_pairs(3, 2, 19);
        assert!(matches!(
            check_leibniz(&alg3, &cert, &pairs, 1e-12),
            Err(LeibnizError::BackendMismatch { .. })
        ));
    }

    #[test]
    fn matrix_lift_preserves_order_and_residual() {
        let alg = MatrixAlgebra::new(3);
        let balg = crate::leibniz::block::BlockAlgebra::new(alg.clone(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let m = MatrixElement::random_dense(&mut rng, 3, 1.0);
        let cert = left_multiplier_certificate(&alg, "m", m);
        let lifted = matrix_lift(&alg, &cert, 2);
        assert_eq!(lifted.order, 0);
        let pairs: Vec<_> = (0..6)
            .map(|k| {
                let mk = |rng: &mut ChaCha8Rng| {
                    balg.from_blocks(
                        (0..4)
                            .map(|_| MatrixElement::random_dense(rng, 3, 1.0))
                            .collect(),
                    )
                };
                let _ = k;
                (mk(&mut rng), mk(&mut rng))
            })
            .collect();
        let rep = check_leibniz(&balg, &lifted, &pairs, 1e-11).unwrap();
        assert!(rep.pass, "residual {}", rep.max_residual);

        // lift of the identity acts as the identity on blocks
        let idl = matrix_lift(&alg, &identity_certificate(&alg), 2);
        let x = &pairs[0].0;
        let diff = balg.sub(&idl.apply(&balg, x), x);
        assert!(balg.norm(&diff) == 0.0);
    }
}
