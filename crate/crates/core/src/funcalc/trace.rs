//! Approximation sequences with recorded operator images.

use std::collections::BTreeMap;

use super::FuncalcError;
use crate::algebra::StarAlgebra;
use crate::leibniz::LeibnizCertificate;

/// A finite approximation sequence `x_1 … x_N` together with the images
/// `δ(x_n)`, `δ(x_n*)` recorded for every node of one or more certificates.
/// The images realize membership of the common closed domain at desk scale;
/// the chosen sequence is part of every downstream result's identity.
pub struct DerivationTrace<A: StarAlgebra> {
    alg: A,
    elements: Vec<A::Elem>,
    self_adjoint: Vec<bool>,
    target: Option<A::Elem>,
    images: BTreeMap<String, Vec<A::Elem>>,
    star_images: BTreeMap<String, Vec<A::Elem>>,
}

/// Convergence bookkeeping for one recorded operator.
#[derive(Debug, Clone)]
pub struct TraceConvergence {
    pub target_gap: Option<f64>,
    /// `‖δ(x_n) − δ(x_{n−1})‖` over the last recorded steps.
    pub image_steps: Vec<f64>,
    pub decreasing_tail: bool,
}

impl<A: StarAlgebra> DerivationTrace<A> {
    /// Constant sequence `x_n = a`.
    pub fn constant(alg: &A, a: A::Elem, len: usize) -> Self {
        let defect = alg.self_adjoint_defect(&a);
        let scale = alg.norm(&a).max(1.0);
        let sa = defect <= 1e-12 * scale;
        DerivationTrace {
            alg: alg.clone(),
            elements: vec![a.clone(); len.max(1)],
            self_adjoint: vec![sa; len.max(1)],
            target: Some(a),
            images: BTreeMap::new(),
            star_images: BTreeMap::new(),
        }
    }

    /// Explicit sequence with an optional limit element.
    pub fn from_elements(alg: &A, elements: Vec<A::Elem>, target: Option<A::Elem>) -> Self {
        assert!(!elements.is_empty());
        let self_adjoint = elements
            .iter()
            .map(|x| alg.self_adjoint_defect(x) <= 1e-12 * alg.norm(x).max(1.0))
            .collect();
        DerivationTrace {
            alg: alg.clone(),
            elements,
            self_adjoint,
            target,
            images: BTreeMap::new(),
            star_images: BTreeMap::new(),
        }
    }

    /// Replace every element by its self-adjoint part `(x + x*)/2`.
    pub fn hermitized(mut self) -> Self {
        self.elements = self
            .elements
            .iter()
            .map(|x| self.alg.hermitize(x))
            .collect();
        self.self_adjoint = vec![true; self.elements.len()];
        self.images.clear();
        self.star_images.clear();
        self
    }

    pub fn algebra(&self) -> &A {
        &self.alg
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, n: usize) -> Result<&A::Elem, FuncalcError> {
        self.elements
            .get(n)
            .ok_or(FuncalcError::TraceIndexOutOfRange {
                n,
                len: self.elements.len(),
            })
    }

    pub fn is_self_adjoint(&self, n: usize) -> bool {
        self.self_adjoint.get(n).copied().unwrap_or(false)
    }

    pub fn target(&self) -> Option<&A::Elem> {
        self.target.as_ref()
    }

    /// Apply every node of the certificate to every `x_n` and `x_n*`,
    /// recording the images by node tag.
    pub fn record_images(&mut self, cert: &LeibnizCertificate<A>) {
        for node in cert.nodes() {
            let tag = node.tag().to_string();
            if self.images.contains_key(&tag) {
                continue;
            }
            let imgs: Vec<A::Elem> = self
                .elements
                .iter()
                .map(|x| node.apply(&self.alg, x))
                .collect();
            let star_imgs: Vec<A::Elem> = self
                .elements
                .iter()
                .map(|x| node.apply(&self.alg, &self.alg.adjoint(x)))
                .collect();
            self.images.insert(tag.clone(), imgs);
            self.star_images.insert(tag, star_imgs);
        }
    }

    pub fn has_images(&self, tag: &str) -> bool {
        self.images.contains_key(tag)
    }

    pub fn image(&self, tag: &str, n: usize) -> Result<&A::Elem, FuncalcError> {
        self.images
            .get(tag)
            .and_then(|v| v.get(n))
            .ok_or_else(|| FuncalcError::MissingImages {
                tag: tag.to_string(),
            })
    }

    pub fn star_image(&self, tag: &str, n: usize) -> Result<&A::Elem, FuncalcError> {
        self.star_images
            .get(tag)
            .and_then(|v| v.get(n))
            .ok_or_else(|| FuncalcError::MissingImages {
                tag: tag.to_string(),
            })
    }

    /// Convergence indicators for one recorded operator tag.
    pub fn convergence(&self, tag: &str) -> Result<TraceConvergence, FuncalcError> {
        let imgs = self
            .images
            .get(tag)
            .ok_or_else(|| FuncalcError::MissingImages {
                tag: tag.to_string(),
            })?;
        let target_gap = self.target.as_ref().map(|t| {
            self.alg
                .norm(&self.alg.sub(self.elements.last().unwrap(), t))
        });
        let mut image_steps = Vec::new();
        for w in imgs.windows(2) {
            image_steps.push(self.alg.norm(&self.alg.sub(&w[1], &w[0])));
        }
        let tail: Vec<f64> = image_steps.iter().rev().take(3).cloned().collect();
        let decreasing_tail = tail.windows(2).all(|w| w[0] <= w[1] + 1e-15);
        Ok(TraceConvergence {
            target_gap,
            image_steps,
            decreasing_tail,
        })
    }
}
