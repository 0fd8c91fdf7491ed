//! n×n block algebra over an arbitrary backend, and the entrywise
//! certificate lift (order-preserving).

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use super::certificate::{Coefficients, LeibnizCertificate, OpHandle};
use crate::algebra::StarAlgebra;

/// Elements are n×n matrices with entries in the base algebra (row-major).
#[derive(Clone)]
pub struct BlockElement<E: Clone> {
    pub n: usize,
    pub blocks: Vec<E>,
}

impl<E: Clone> BlockElement<E> {
    pub fn block(&self, i: usize, j: usize) -> &E {
        &self.blocks[i * self.n + j]
    }
}

/// The block algebra `M_n(A)`.
#[derive(Clone)]
pub struct BlockAlgebra<A: StarAlgebra> {
    pub base: A,
    pub n: usize,
}

impl<A: StarAlgebra> BlockAlgebra<A> {
    pub fn new(base: A, n: usize) -> Self {
        BlockAlgebra { base, n }
    }

    pub fn from_blocks(&self, blocks: Vec<A::Elem>) -> BlockElement<A::Elem> {
        assert_eq!(blocks.len(), self.n * self.n);
        BlockElement { n: self.n, blocks }
    }

    /// Diagonal embedding of a base element.
    pub fn diag_embed(&self, x: &A::Elem) -> BlockElement<A::Elem> {
        let mut blocks = Vec::with_capacity(self.n * self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                blocks.push(if i == j { x.clone() } else { self.base.zero() });
            }
        }
        BlockElement { n: self.n, blocks }
    }
}

impl<A: StarAlgebra> StarAlgebra for BlockAlgebra<A> {
    type Elem = BlockElement<A::Elem>;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        BlockElement {
            n: self.n,
            blocks: a
                .blocks
                .iter()
                .zip(b.blocks.iter())
                .map(|(x, y)| self.base.add(x, y))
                .collect(),
        }
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        BlockElement {
            n: self.n,
            blocks: a
                .blocks
                .iter()
                .zip(b.blocks.iter())
                .map(|(x, y)| self.base.sub(x, y))
                .collect(),
        }
    }

    fn scale(&self, c: Complex64, a: &Self::Elem) -> Self::Elem {
        BlockElement {
            n: self.n,
            blocks: a.blocks.iter().map(|x| self.base.scale(c, x)).collect(),
        }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let n = self.n;
        let mut blocks = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = self.base.mul(a.block(i, 0), b.block(0, j));
                for k in 1..n {
                    acc = self.base.add(&acc, &self.base.mul(a.block(i, k), b.block(k, j)));
                }
                blocks.push(acc);
            }
        }
        BlockElement { n, blocks }
    }

    fn adjoint(&self, a: &Self::Elem) -> Self::Elem {
        let n = self.n;
        let mut blocks = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                blocks.push(self.base.adjoint(a.block(j, i)));
            }
        }
        BlockElement { n, blocks }
    }

    /// Cross norm `√(Σ ‖block‖²)`; submultiplicative, adequate for residual
    /// checks (the base operator norm is recovered at n = 1).
    fn norm(&self, a: &Self::Elem) -> f64 {
        a.blocks
            .iter()
            .map(|x| {
                let v = self.base.norm(x);
                v * v
            })
            .sum::<f64>()
            .sqrt()
    }

    fn zero(&self) -> Self::Elem {
        BlockElement {
            n: self.n,
            blocks: (0..self.n * self.n).map(|_| self.base.zero()).collect(),
        }
    }

    fn compatible(&self, a: &Self::Elem) -> bool {
        a.n == self.n && a.blocks.iter().all(|x| self.base.compatible(x))
    }

    fn backend_tag(&self) -> String {
        format!("block{}({})", self.n, self.base.backend_tag())
    }
}

/// Entrywise lift of a certificate: every node's operator applies to each
/// block, structure and orders unchanged.
pub fn lift_certificate<A: StarAlgebra>(
    base: &A,
    cert: &LeibnizCertificate<A>,
    n: usize,
) -> LeibnizCertificate<BlockAlgebra<A>> {
    let mut memo: BTreeMap<String, Arc<LeibnizCertificate<BlockAlgebra<A>>>> = BTreeMap::new();
    let lifted = lift_rec(base, &Arc::new(cert.clone()), n, &mut memo);
    (*lifted).clone()
}

fn lift_rec<A: StarAlgebra>(
    base: &A,
    cert: &Arc<LeibnizCertificate<A>>,
    n: usize,
    memo: &mut BTreeMap<String, Arc<LeibnizCertificate<BlockAlgebra<A>>>>,
) -> Arc<LeibnizCertificate<BlockAlgebra<A>>> {
    let tag = format!("lift{}({})", n, cert.tag());
    if let Some(hit) = memo.get(&tag) {
        return Arc::clone(hit);
    }
    let op0 = cert.op.clone();
    let op = OpHandle::new(tag.clone(), move |alg: &BlockAlgebra<A>, x: &BlockElement<A::Elem>| {
        BlockElement {
            n: x.n,
            blocks: x.blocks.iter().map(|b| op0.apply(&alg.base, b)).collect(),
        }
    });
    let coeffs = cert.coeffs.as_ref().map(|co| Coefficients {
        delta10: lift_rec(base, &co.delta10, n, memo),
        delta20: lift_rec(base, &co.delta20, n, memo),
        cross_terms: co
            .cross_terms
            .iter()
            .map(|(l, r)| (lift_rec(base, l, n, memo), lift_rec(base, r, n, memo)))
            .collect(),
    });
    let out = Arc::new(LeibnizCertificate {
        op,
        order: cert.order,
        coeffs,
        star_ok: cert.star_ok,
        star_equivariant: cert.star_equivariant,
        is_zero: cert.is_zero,
        backend: BlockAlgebra::new(base.clone(), n).backend_tag(),
    });
    memo.insert(tag, Arc::clone(&out));
    out
}
