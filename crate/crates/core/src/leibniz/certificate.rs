//! Certificate data structure and the closure constructions.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::LeibnizError;
use crate::algebra::StarAlgebra;

/// A pure endomorphism of the backend algebra, with a structural tag.
pub struct OpHandle<A: StarAlgebra> {
    pub tag: String,
    func: Arc<dyn Fn(&A, &A::Elem) -> A::Elem + Send + Sync>,
}

impl<A: StarAlgebra> Clone for OpHandle<A> {
    fn clone(&self) -> Self {
        OpHandle {
            tag: self.tag.clone(),
            func: Arc::clone(&self.func),
        }
    }
}

impl<A: StarAlgebra> OpHandle<A> {
    pub fn new(
        tag: impl Into<String>,
        f: impl Fn(&A, &A::Elem) -> A::Elem + Send + Sync + 'static,
    ) -> Self {
        OpHandle {
            tag: tag.into(),
            func: Arc::new(f),
        }
    }

    pub fn apply(&self, alg: &A, x: &A::Elem) -> A::Elem {
        (self.func)(alg, x)
    }
}

/// Coefficient family of an order-`n ≥ 1` certificate.
pub struct Coefficients<A: StarAlgebra> {
    pub delta10: Arc<LeibnizCertificate<A>>,
    pub delta20: Arc<LeibnizCertificate<A>>,
    pub cross_terms: Vec<(Arc<LeibnizCertificate<A>>, Arc<LeibnizCertificate<A>>)>,
}

impl<A: StarAlgebra> Clone for Coefficients<A> {
    fn clone(&self) -> Self {
        Coefficients {
            delta10: Arc::clone(&self.delta10),
            delta20: Arc::clone(&self.delta20),
            cross_terms: self
                .cross_terms
                .iter()
                .map(|(l, r)| (Arc::clone(l), Arc::clone(r)))
                .collect(),
        }
    }
}

/// An operator together with the recursive witness of its Leibniz identity.
pub struct LeibnizCertificate<A: StarAlgebra> {
    pub op: OpHandle<A>,
    pub order: u32,
    /// `None` exactly for order-0 certificates.
    pub coeffs: Option<Coefficients<A>>,
    /// Whether this certificate's `δ₂₀` satisfies the star condition
    /// (vacuously true at order 0).
    pub star_ok: bool,
    /// Whether the operator itself commutes with the involution,
    /// `δ(x*) = δ(x)*`; used to propagate `star_ok` through compositions.
    pub star_equivariant: bool,
    /// Identically-zero operator marker; zero terms are dropped from
    /// expansions, which keeps certificate DAGs small.
    pub is_zero: bool,
    pub backend: String,
}

impl<A: StarAlgebra> Clone for LeibnizCertificate<A> {
    fn clone(&self) -> Self {
        LeibnizCertificate {
            op: self.op.clone(),
            order: self.order,
            coeffs: self.coeffs.clone(),
            star_ok: self.star_ok,
            star_equivariant: self.star_equivariant,
            is_zero: self.is_zero,
            backend: self.backend.clone(),
        }
    }
}

/// Serializable structural description (tags and orders, no closures).
#[derive(Debug, Clone, Serialize)]
pub struct CertNode {
    pub tag: String,
    pub order: u32,
    pub star_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta10: Option<Box<CertNode>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta20: Option<Box<CertNode>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cross_terms: Vec<(CertNode, CertNode)>,
}

impl<A: StarAlgebra> LeibnizCertificate<A> {
    pub fn order0(
        alg: &A,
        tag: impl Into<String>,
        star_equivariant: bool,
        f: impl Fn(&A, &A::Elem) -> A::Elem + Send + Sync + 'static,
    ) -> Self {
        LeibnizCertificate {
            op: OpHandle::new(tag, f),
            order: 0,
            coeffs: None,
            star_ok: true,
            star_equivariant,
            is_zero: false,
            backend: alg.backend_tag(),
        }
    }

    /// Build an order-`1 + max(constituent orders)` certificate from an
    /// explicit coefficient family.
    pub fn higher(
        alg: &A,
        tag: impl Into<String>,
        star_equivariant: bool,
        f: impl Fn(&A, &A::Elem) -> A::Elem + Send + Sync + 'static,
        delta10: Arc<LeibnizCertificate<A>>,
        delta20: Arc<LeibnizCertificate<A>>,
        cross_terms: Vec<(Arc<LeibnizCertificate<A>>, Arc<LeibnizCertificate<A>>)>,
    ) -> Self {
        let mut max_child = delta10.order.max(delta20.order);
        for (l, r) in &cross_terms {
            max_child = max_child.max(l.order).max(r.order);
        }
        let star_ok = delta20.star_equivariant || delta20.is_zero;
        LeibnizCertificate {
            op: OpHandle::new(tag, f),
            order: max_child + 1,
            coeffs: Some(Coefficients {
                delta10,
                delta20,
                cross_terms,
            }),
            star_ok,
            star_equivariant,
            is_zero: false,
            backend: alg.backend_tag(),
        }
    }

    /// Same as [`higher`](Self::higher) but with an explicitly declared order
    /// (the sum construction declares `max(n,m)+1` regardless of dropped
    /// zero terms).
    pub fn higher_with_order(
        alg: &A,
        tag: impl Into<String>,
        order: u32,
        star_equivariant: bool,
        f: impl Fn(&A, &A::Elem) -> A::Elem + Send + Sync + 'static,
        delta10: Arc<LeibnizCertificate<A>>,
        delta20: Arc<LeibnizCertificate<A>>,
        cross_terms: Vec<(Arc<LeibnizCertificate<A>>, Arc<LeibnizCertificate<A>>)>,
    ) -> Self {
        let star_ok = delta20.star_equivariant || delta20.is_zero;
        LeibnizCertificate {
            op: OpHandle::new(tag, f),
            order,
            coeffs: Some(Coefficients {
                delta10,
                delta20,
                cross_terms,
            }),
            star_ok,
            star_equivariant,
            is_zero: false,
            backend: alg.backend_tag(),
        }
    }

    pub fn apply(&self, alg: &A, x: &A::Elem) -> A::Elem {
        self.op.apply(alg, x)
    }

    pub fn tag(&self) -> &str {
        &self.op.tag
    }

    /// Collect this node and all coefficient descendants (deduplicated by
    /// tag, parent before children).
    pub fn nodes(&self) -> Vec<Arc<LeibnizCertificate<A>>> {
        let mut out: Vec<Arc<LeibnizCertificate<A>>> = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        fn walk<A: StarAlgebra>(
            c: &Arc<LeibnizCertificate<A>>,
            out: &mut Vec<Arc<LeibnizCertificate<A>>>,
            seen: &mut std::collections::BTreeSet<String>,
        ) {
            if !seen.insert(c.tag().to_string()) {
                return;
            }
            out.push(Arc::clone(c));
            if let Some(co) = &c.coeffs {
                walk(&co.delta10, out, seen);
                walk(&co.delta20, out, seen);
                for (l, r) in &co.cross_terms {
                    walk(l, out, seen);
                    walk(r, out, seen);
                }
            }
        }
        let me = Arc::new(self.clone());
        walk(&me, &mut out, &mut seen);
        out
    }

    /// Structural description for logging and regression files.
    pub fn describe(&self) -> CertNode {
        CertNode {
            tag: self.tag().to_string(),
            order: self.order,
            star_ok: self.star_ok,
            delta10: self
                .coeffs
                .as_ref()
                .map(|c| Box::new(c.delta10.describe())),
            delta20: self
                .coeffs
                .as_ref()
                .map(|c| Box::new(c.delta20.describe())),
            cross_terms: self
                .coeffs
                .as_ref()
                .map(|c| {
                    c.cross_terms
                        .iter()
                        .map(|(l, r)| (l.describe(), r.describe()))
                        .collect()
                })
                .unwrap_or_default(),
        }
    }
}

/// `x ↦ x`, order 0 (`id(ab) = id(a)·b`). The preferred identity form.
pub fn identity_certificate<A: StarAlgebra>(alg: &A) -> LeibnizCertificate<A> {
    LeibnizCertificate::order0(alg, "id", true, |_alg, x| x.clone())
}

/// `x ↦ x` packaged as an order-1 certificate with `δ₂₀ = id`, `δ₁₀ = 0`.
pub fn identity_certificate_order1<A: StarAlgebra>(alg: &A) -> LeibnizCertificate<A> {
    let d20 = Arc::new(identity_certificate(alg));
    let d10 = Arc::new(zero_certificate(alg));
    LeibnizCertificate::higher(
        alg,
        "id#o1",
        true,
        |_alg, x| x.clone(),
        d10,
        d20,
        Vec::new(),
    )
}

/// `x ↦ 0`, order 0.
pub fn zero_certificate<A: StarAlgebra>(alg: &A) -> LeibnizCertificate<A> {
    let mut c = LeibnizCertificate::order0(alg, "zero", true, |alg: &A, _x| alg.zero());
    c.is_zero = true;
    c
}

/// `x ↦ λx`, order 0 (`λ(ab) = (λa)·b`).
pub fn scalar_certificate<A: StarAlgebra>(alg: &A, lambda: Complex64) -> LeibnizCertificate<A> {
    let tag = format!("scalar({},{})", lambda.re, lambda.im);
    let mut c = LeibnizCertificate::order0(alg, tag, lambda.im == 0.0, move |alg: &A, x| {
        alg.scale(lambda, x)
    });
    if lambda == Complex64::new(0.0, 0.0) {
        c.is_zero = true;
    }
    c
}

/// `x ↦ m·x`, order 0 (`m(ab) = (ma)·b`).
pub fn left_multiplier_certificate<A: StarAlgebra>(
    alg: &A,
    tag: impl Into<String>,
    m: A::Elem,
) -> LeibnizCertificate<A> {
    let tag = format!("lmul({})", tag.into());
    LeibnizCertificate::order0(alg, tag, false, move |alg: &A, x| alg.mul(&m, x))
}

/// `x ↦ x·m`, order 1 with `δ₁₀ = id`, `δ₂₀ = 0` (`(ab)m = a·(bm)`).
pub fn right_multiplier_certificate<A: StarAlgebra>(
    alg: &A,
    tag: impl Into<String>,
    m: A::Elem,
) -> LeibnizCertificate<A> {
    let tag = format!("rmul({})", tag.into());
    let d10 = Arc::new(identity_certificate(alg));
    let d20 = Arc::new(zero_certificate(alg));
    LeibnizCertificate::higher(
        alg,
        tag,
        false,
        move |alg: &A, x| alg.mul(x, &m),
        d10,
        d20,
        Vec::new(),
    )
}

/// `x ↦ dx − xd`, order 1 with `δ₁₀ = δ₂₀ = id` (a derivation).
pub fn commutator_certificate<A: StarAlgebra>(
    alg: &A,
    tag: impl Into<String>,
    d: A::Elem,
) -> LeibnizCertificate<A> {
    let tag = format!("comm({})", tag.into());
    let d10 = Arc::new(identity_certificate(alg));
    let d20 = Arc::new(identity_certificate(alg));
    // skew-adjoint d would make this star-equivariant; not assumed
    LeibnizCertificate::higher(
        alg,
        tag,
        false,
        move |alg: &A, x| alg.sub(&alg.mul(&d, x), &alg.mul(x, &d)),
        d10,
        d20,
        Vec::new(),
    )
}

/// Expansion of one summand for the sum construction: the terms of a
/// certified operator's own Leibniz identity, all moved to cross position.
fn expansion_terms<A: StarAlgebra>(
    alg: &A,
    c: &Arc<LeibnizCertificate<A>>,
) -> Vec<(Arc<LeibnizCertificate<A>>, Arc<LeibnizCertificate<A>>)> {
    let mut out = Vec::new();
    if c.is_zero {
        return out;
    }
    match &c.coeffs {
        None => {
            // order 0: δ(ab) = δ(a)·b = δ(a)·id(b)
            out.push((Arc::clone(c), Arc::new(identity_certificate(alg))));
        }
        Some(co) => {
            if !co.delta20.is_zero {
                out.push((Arc::clone(c), Arc::clone(&co.delta20)));
            }
            if !co.delta10.is_zero {
                out.push((Arc::clone(&co.delta10), Arc::clone(c)));
            }
            for (l, r) in &co.cross_terms {
                if !l.is_zero && !r.is_zero {
                    out.push((Arc::clone(l), Arc::clone(r)));
                }
            }
        }
    }
    out
}

/// Certificate for `δ + δ′`, declared order `max(n, m) + 1`: both Leibniz
/// expansions move to cross terms, `δ₁₀ = δ₂₀ = 0`.
pub fn sum_certificates<A: StarAlgebra>(
    alg: &A,
    c1: &LeibnizCertificate<A>,
    c2: &LeibnizCertificate<A>,
) -> LeibnizCertificate<A> {
    let a1 = Arc::new(c1.clone());
    let a2 = Arc::new(c2.clone());
    let mut cross = expansion_terms(alg, &a1);
    cross.extend(expansion_terms(alg, &a2));
    let tag = format!("sum({},{})", c1.tag(), c2.tag());
    let order = c1.order.max(c2.order) + 1;
    let op1 = c1.op.clone();
    let op2 = c2.op.clone();
    LeibnizCertificate::higher_with_order(
        alg,
        tag,
        order,
        c1.star_equivariant && c2.star_equivariant,
        move |alg: &A, x| alg.add(&op1.apply(alg, x), &op2.apply(alg, x)),
        Arc::new(zero_certificate(alg)),
        Arc::new(zero_certificate(alg)),
        cross,
    )
}

/// Certificate for `δ ∘ δ′` assembled by the three inductive cases of the
/// subalgebra proof. Errors if the recursion exceeds `depth_max`.
pub fn compose_certificates<A: StarAlgebra>(
    alg: &A,
    c1: &LeibnizCertificate<A>,
    c2: &LeibnizCertificate<A>,
    depth_max: usize,
) -> Result<LeibnizCertificate<A>, LeibnizError> {
    compose_rec(
        alg,
        &Arc::new(c1.clone()),
        &Arc::new(c2.clone()),
        depth_max,
        0,
    )
    .map(|c| (*c).clone())
}

fn compose_op<A: StarAlgebra>(c1: &Arc<LeibnizCertificate<A>>, c2: &Arc<LeibnizCertificate<A>>) -> (String, OpHandle<A>) {
    let tag = format!("compose({},{})", c1.tag(), c2.tag());
    let o1 = c1.op.clone();
    let o2 = c2.op.clone();
    let op = OpHandle::new(tag.clone(), move |alg: &A, x: &A::Elem| {
        o1.apply(alg, &o2.apply(alg, x))
    });
    (tag, op)
}

fn compose_rec<A: StarAlgebra>(
    alg: &A,
    c1: &Arc<LeibnizCertificate<A>>,
    c2: &Arc<LeibnizCertificate<A>>,
    depth_max: usize,
    depth: usize,
) -> Result<Arc<LeibnizCertificate<A>>, LeibnizError> {
    if depth > depth_max {
        return Err(LeibnizError::RecursionDepth { max: depth_max });
    }
    if c1.is_zero || c2.is_zero {
        return Ok(Arc::new(zero_certificate(alg)));
    }
    let (tag, op) = compose_op(c1, c2);
    let star_eq = c1.star_equivariant && c2.star_equivariant;
    let zero = || Arc::new(zero_certificate(alg));

    let cert = match (&c1.coeffs, &c2.coeffs) {
        // case n = m = 0: δ(δ′(ab)) = δ(δ′(a))·b
        (None, None) => LeibnizCertificate {
            op,
            order: 0,
            coeffs: None,
            star_ok: true,
            star_equivariant: star_eq,
            is_zero: false,
            backend: alg.backend_tag(),
        },
        // case m = 0: δ(δ′(ab)) = δ(δ′(a))δ₂₀(b) + δ₁₀(δ′(a))δ(b) + Σ δ₁ᵢ(δ′(a))δ₂ᵢ(b)
        (Some(k1), None) => {
            let mut cross = Vec::new();
            if !k1.delta10.is_zero {
                let l = compose_rec(alg, &k1.delta10, c2, depth_max, depth + 1)?;
                if !l.is_zero {
                    cross.push((l, Arc::clone(c1)));
                }
            }
            for (l, r) in &k1.cross_terms {
                let lc = compose_rec(alg, l, c2, depth_max, depth + 1)?;
                if !lc.is_zero && !r.is_zero {
                    cross.push((lc, Arc::clone(r)));
                }
            }
            let mut f = LeibnizCertificate::higher(
                alg,
                tag,
                star_eq,
                |_, _| unreachable!(),
                zero(),
                Arc::clone(&k1.delta20),
                cross,
            );
            f.op = op;
            f
        }
        // case n = 0: δ(δ′(ab)) = δ(δ′(a))δ′₂₀(b) + δ(δ′₁₀(a))δ′(b) + Σ δ(δ′₁ⱼ(a))δ′₂ⱼ(b)
        (None, Some(k2)) => {
            let mut cross = Vec::new();
            if !k2.delta10.is_zero {
                let l = compose_rec(alg, c1, &k2.delta10, depth_max, depth + 1)?;
                if !l.is_zero {
                    cross.push((l, Arc::clone(c2)));
                }
            }
            for (l, r) in &k2.cross_terms {
                let lc = compose_rec(alg, c1, l, depth_max, depth + 1)?;
                if !lc.is_zero && !r.is_zero {
                    cross.push((lc, Arc::clone(r)));
                }
            }
            let mut f = LeibnizCertificate::higher(
                alg,
                tag,
                star_eq,
                |_, _| unreachable!(),
                zero(),
                Arc::clone(&k2.delta20),
                cross,
            );
            f.op = op;
            f
        }
        // general case: the full double expansion
        (Some(k1), Some(k2)) => {
            let d20 = compose_rec(alg, &k1.delta20, &k2.delta20, depth_max, depth + 1)?;
            let d10 = compose_rec(alg, &k1.delta10, &k2.delta10, depth_max, depth + 1)?;
            let mut cross = Vec::new();
            let mut push =
                |l: Arc<LeibnizCertificate<A>>, r: Arc<LeibnizCertificate<A>>| {
                    if !l.is_zero && !r.is_zero {
                        cross.push((l, r));
                    }
                };
            // δ₁₀(δ′(a))·δ(δ′₂₀(b))
            push(
                compose_rec(alg, &k1.delta10, c2, depth_max, depth + 1)?,
                compose_rec(alg, c1, &k2.delta20, depth_max, depth + 1)?,
            );
            // Σᵢ δ₁ᵢ(δ′(a))·δ₂ᵢ(δ′₂₀(b))
            for (l, r) in &k1.cross_terms {
                push(
                    compose_rec(alg, l, c2, depth_max, depth + 1)?,
                    compose_rec(alg, r, &k2.delta20, depth_max, depth + 1)?,
                );
            }
            // δ(δ′₁₀(a))·δ₂₀(δ′(b))
            push(
                compose_rec(alg, c1, &k2.delta10, depth_max, depth + 1)?,
                compose_rec(alg, &k1.delta20, c2, depth_max, depth + 1)?,
            );
            // Σᵢ δ₁ᵢ(δ′₁₀(a))·δ₂ᵢ(δ′(b))
            for (l, r) in &k1.cross_terms {
                push(
                    compose_rec(alg, l, &k2.delta10, depth_max, depth + 1)?,
                    compose_rec(alg, r, c2, depth_max, depth + 1)?,
                );
            }
            // Σⱼ over δ′ cross terms
            for (l2, r2) in &k2.cross_terms {
                push(
                    compose_rec(alg, c1, l2, depth_max, depth + 1)?,
                    compose_rec(alg, &k1.delta20, r2, depth_max, depth + 1)?,
                );
                push(
                    compose_rec(alg, &k1.delta10, l2, depth_max, depth + 1)?,
                    compose_rec(alg, c1, r2, depth_max, depth + 1)?,
                );
                for (l1, r1) in &k1.cross_terms {
                    push(
                        compose_rec(alg, l1, l2, depth_max, depth + 1)?,
                        compose_rec(alg, r1, r2, depth_max, depth + 1)?,
                    );
                }
            }
            let mut f = LeibnizCertificate::higher(
                alg,
                tag,
                star_eq,
                |_, _| unreachable!(),
                d10,
                d20,
                cross,
            );
            f.op = op;
            f
        }
    };
    Ok(Arc::new(cert))
}

/// Entrywise lift of a certificate to the n×n block algebra; order preserved.
pub fn matrix_lift<A: StarAlgebra>(
    alg: &A,
    cert: &LeibnizCertificate<A>,
    n: usize,
) -> LeibnizCertificate<crate::leibniz::block::BlockAlgebra<A>> {
    crate::leibniz::block::lift_certificate(alg, cert, n)
}
