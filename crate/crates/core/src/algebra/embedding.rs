use std::sync::Arc;

use super::factor::roots;
use super::field::{FiniteField, FqElem};
use super::linalg::{solve_fp, MatrixFp};
use super::poly::DensePoly;
use crate::error::{Error, Result};

/// Field homomorphism src -> dst determined by the image of the generator z.
#[derive(Clone, Debug)]
pub struct FieldEmbedding {
    src: Arc<FiniteField>,
    dst: Arc<FiniteField>,
    powers: Vec<FqElem>,
}

impl FieldEmbedding {
    /// The embedding sending z to the smallest-index root of the source
    /// modulus in dst.
    pub fn new(src: &Arc<FiniteField>, dst: &Arc<FiniteField>) -> Result<Self> {
        if src.characteristic() != dst.characteristic() {
            return Err(Error::FieldMismatch);
        }
        if !dst.degree().is_multiple_of(src.degree()) {
            return Err(Error::Precondition(format!("F_p^{} does not embed in F_p^{}", src.degree(), dst.degree())));
        }
        if **src == **dst {
            return Ok(Self::identity(src));
        }
        let image = if src.degree() == 1 {
            dst.zero()
        } else {
            let m: Vec<i64> = src.modulus().iter().map(|&c| c as i64).collect();
            let poly = DensePoly::from_ints(dst, &m);
            roots(&poly, 0)
                .into_iter()
                .next()
                .ok_or_else(|| Error::Internal("no root of the modulus in the target field".into()))?
        };
        Ok(Self::from_image(src, dst, image))
    }

    pub fn identity(f: &Arc<FiniteField>) -> Self {
        Self::from_image(f, f, f.generator())
    }

    fn from_image(src: &Arc<FiniteField>, dst: &Arc<FiniteField>, image: FqElem) -> Self {
        let mut powers = Vec::with_capacity(src.degree());
        let mut cur = dst.one();
        for _ in 0..src.degree() {
            powers.push(cur.clone());
            cur = dst.mul(&cur, &image);
        }
        FieldEmbedding { src: src.clone(), dst: dst.clone(), powers }
    }

    pub fn src(&self) -> &Arc<FiniteField> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<FiniteField> {
        &self.dst
    }

    pub fn generator_image(&self) -> FqElem {
        self.apply(&self.src.generator())
    }

    pub fn apply(&self, e: &FqElem) -> FqElem {
        let d = &self.dst;
        let mut acc = d.zero();
        for (&c, pw) in e.coords().iter().zip(&self.powers) {
            if c != 0 {
                acc = d.add(&acc, &d.scale(pw, c));
            }
        }
        acc
    }

    pub fn apply_poly(&self, f: &DensePoly) -> DensePoly {
        DensePoly::from_coeffs(&self.dst, f.coeffs().iter().map(|c| self.apply(c)).collect())
    }

    /// self followed by `next`.
    pub fn then(&self, next: &FieldEmbedding) -> FieldEmbedding {
        let img = next.apply(&self.generator_image());
        let img = if self.src.degree() == 1 { next.dst.zero() } else { img };
        Self::from_image(&self.src, &next.dst, img)
    }

    /// The element of src mapping to `e`, if any.
    pub fn preimage(&self, e: &FqElem) -> Option<FqElem> {
        let p = self.src.characteristic();
        let b = self.dst.degree();
        let n = self.src.degree();
        let mut m = MatrixFp::zeros(p, b, n);
        for (j, pw) in self.powers.iter().enumerate() {
            for (i, &c) in pw.coords().iter().enumerate() {
                m.set(i, j, c);
            }
        }
        let sol = solve_fp(&m, e.coords()).ok()?.solution?;
        Some(self.src.from_coords(&sol))
    }
}
