//! Truncated Laurent series over a finite field with absolute precision.
//!
//! A series is known modulo t^prec. Arithmetic tracks precision
//! pessimistically: the result's precision is the best that can be certified
//! from the operands' precisions.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{DensePoly, FieldEmbedding, FiniteField, FqElem};
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct LaurentSeries {
    field: Arc<FiniteField>,
    /// Exponent of coeffs[0]; equals `prec` for a series that is zero to precision.
    val: i64,
    /// Dense coefficients for exponents val..prec, the first one nonzero.
    coeffs: Vec<FqElem>,
    prec: i64,
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !self.field.is_zero(c) {
                terms.push(format!("({})*t^{}", self.field.format(c), self.val + k as i64));
            }
        }
        terms.push(format!("O(t^{})", self.prec));
        write!(f, "{}", terms.join(" + "))
    }
}

impl PartialEq for LaurentSeries {
    /// Equality as elements known to the common precision.
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl LaurentSeries {
    /// Series sum_k coeffs[k] t^(val + k) + O(t^prec).
    pub fn new(field: &Arc<FiniteField>, val: i64, coeffs: Vec<FqElem>, prec: i64) -> Self {
        let mut s = LaurentSeries { field: field.clone(), val, coeffs, prec };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let keep = (self.prec - self.val).max(0) as usize;
        self.coeffs.truncate(keep);
        self.coeffs.resize(keep, self.field.zero());
        let lead = self.coeffs.iter().position(|c| !self.field.is_zero(c));
        match lead {
            None => {
                self.coeffs.clear();
                self.val = self.prec;
            }
            Some(0) => {}
            Some(i) => {
                self.coeffs.drain(..i);
                self.val += i as i64;
            }
        }
    }

    pub fn zero(field: &Arc<FiniteField>, prec: i64) -> Self {
        LaurentSeries { field: field.clone(), val: prec, coeffs: Vec::new(), prec }
    }

    pub fn constant(field: &Arc<FiniteField>, c: FqElem, prec: i64) -> Self {
        Self::new(field, 0, vec![c], prec)
    }

    pub fn one(field: &Arc<FiniteField>, prec: i64) -> Self {
        Self::constant(field, field.one(), prec)
    }

    pub fn monomial(field: &Arc<FiniteField>, c: FqElem, k: i64, prec: i64) -> Self {
        Self::new(field, k, vec![c], prec)
    }

    /// t^shift * poly(t) + O(t^prec), for an exact polynomial in t.
    pub fn from_poly(poly: &DensePoly, shift: i64, prec: i64) -> Self {
        Self::new(poly.field(), shift, poly.coeffs().to_vec(), prec)
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// `None` when the series vanishes to its precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.val)
    }

    /// Valuation, or the precision for a series that is zero to precision.
    pub fn val_bound(&self) -> i64 {
        self.val
    }

    /// Number of known coefficients from the valuation on.
    pub fn rel_prec(&self) -> i64 {
        self.prec - self.val
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&FqElem> {
        self.coeffs.first()
    }

    /// Coefficient of t^k; zero below the valuation. Panics at or beyond the precision.
    pub fn coeff(&self, k: i64) -> FqElem {
        assert!(k < self.prec, "coefficient t^{k} requested beyond precision {}", self.prec);
        if k < self.val {
            self.field.zero()
        } else {
            self.coeffs[(k - self.val) as usize].clone()
        }
    }

    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        Self::new(&self.field, self.val, self.coeffs.clone(), prec)
    }

    /// Treats the known part as exact and pads with zeros up to `prec`.
    pub fn extend_exact(&self, prec: i64) -> Self {
        if prec <= self.prec {
            return self.truncate(prec);
        }
        let val = self.val.min(prec);
        Self::new(&self.field, val, self.coeffs.clone(), prec)
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        let val = self.val.min(o.val).min(prec);
        let f = &self.field;
        let coeffs = (val..prec)
            .map(|k| {
                let a = self.get(k);
                let b = o.get(k);
                match (a, b) {
                    (Some(a), Some(b)) => f.add(a, b),
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => f.zero(),
                }
            })
            .collect();
        Self::new(f, val, coeffs, prec)
    }

    fn get(&self, k: i64) -> Option<&FqElem> {
        if k < self.val {
            None
        } else {
            self.coeffs.get((k - self.val) as usize)
        }
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            field: self.field.clone(),
            val: self.val,
            coeffs: self.coeffs.iter().map(|c| self.field.neg(c)).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &FqElem) -> Self {
        Self::new(&self.field, self.val, self.coeffs.iter().map(|a| self.field.mul(a, c)).collect(), self.prec)
    }

    /// Multiplication by t^k.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries { field: self.field.clone(), val: self.val + k, coeffs: self.coeffs.clone(), prec: self.prec + k }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let prec = (self.val + o.prec).min(o.val + self.prec);
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.field, prec);
        }
        let r = self.rel_prec().min(o.rel_prec()) as usize;
        let a = DensePoly::from_coeffs(&self.field, self.coeffs[..r.min(self.coeffs.len())].to_vec());
        let b = DensePoly::from_coeffs(&self.field, o.coeffs[..r.min(o.coeffs.len())].to_vec());
        let mut c = a.mul(&b).into_coeffs();
        c.truncate(r);
        Self::new(&self.field, self.val + o.val, c, prec)
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        if e == 0 {
            return Self::one(&self.field, self.rel_prec().max(1));
        }
        let mut acc: Option<Self> = None;
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc.unwrap()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InsufficientPrecision("cannot invert a series that vanishes to its precision".into()));
        }
        let f = &self.field;
        let r = self.rel_prec() as usize;
        let u0inv = f.inv(&self.coeffs[0]).unwrap();
        let mut g = DensePoly::constant(f, u0inv);
        let two = DensePoly::constant(f, f.from_int(2));
        let mut k = 1usize;
        while k < r {
            k = (2 * k).min(r);
            let u = DensePoly::from_coeffs(f, self.coeffs[..k].to_vec());
            let mut e = u.mul(&g).into_coeffs();
            e.truncate(k);
            let e = DensePoly::from_coeffs(f, e);
            let mut next = g.mul(&two.sub(&e)).into_coeffs();
            next.truncate(k);
            g = DensePoly::from_coeffs(f, next);
        }
        Ok(Self::new(f, -self.val, g.into_coeffs(), -self.val + r as i64))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// d/dt.
    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let p = f.characteristic() as i64;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let k = (self.val + i as i64).rem_euclid(p) as u32;
                f.scale(c, k)
            })
            .collect();
        Self::new(f, self.val - 1, coeffs, self.prec - 1)
    }

    /// k-fold d/dt.
    pub fn derivative_n(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |s, _| s.derivative())
    }

    /// Antiderivative in t. Coefficients of t^j with p | j+1 must vanish; the
    /// free coefficients at exponents divisible by p are set to zero.
    pub fn integrate(&self) -> Result<Self> {
        let f = &self.field;
        let p = f.characteristic() as i64;
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            let j1 = (self.val + i as i64 + 1).rem_euclid(p);
            if j1 == 0 {
                if !f.is_zero(c) {
                    return Err(Error::Precondition(format!(
                        "no primitive: nonzero coefficient at t^{}",
                        self.val + i as i64
                    )));
                }
                coeffs.push(f.zero());
            } else {
                let inv = crate::algebra::field::mod_inv(j1 as u32, p as u32);
                coeffs.push(f.scale(c, inv));
            }
        }
        Ok(Self::new(f, self.val + 1, coeffs, self.prec + 1))
    }

    /// Termwise Frobenius: sum c_k^p t^(p k).
    pub fn frobenius(&self) -> Self {
        let f = &self.field;
        let p = f.characteristic() as i64;
        if self.is_zero() {
            return Self::zero(f, p * self.prec);
        }
        let n = (p * (self.prec - self.val)) as usize;
        let mut coeffs = vec![f.zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[p as usize * i] = f.frobenius(c);
        }
        Self::new(f, p * self.val, coeffs, p * self.prec)
    }

    /// Section S_{p-1}: sum_k frobenius_root(c_{pk+p-1}) t^k, valid when t' = 1.
    pub fn section_p_minus_1(&self) -> Self {
        let f = &self.field;
        let p = f.characteristic() as i64;
        // pk + p - 1 < prec  <=>  k < prec / p, and pk + p - 1 >= val  <=>  k >= val / p
        let top = self.prec.div_euclid(p);
        let low = self.val.div_euclid(p).min(top);
        let coeffs = (low..top)
            .map(|k| {
                let e = p * k + p - 1;
                if e < self.val {
                    f.zero()
                } else {
                    f.frobenius_root(&self.coeff(e))
                }
            })
            .collect();
        Self::new(f, low, coeffs, top)
    }

    /// Maps coefficients along a field embedding.
    pub fn map(&self, emb: &FieldEmbedding) -> Self {
        LaurentSeries {
            field: emb.dst().clone(),
            val: self.val,
            coeffs: self.coeffs.iter().map(|c| emb.apply(c)).collect(),
            prec: self.prec,
        }
    }

    /// Evaluates a polynomial with coefficients in the series field at this series.
    pub fn eval_poly(&self, poly: &DensePoly, prec_hint: i64) -> Self {
        let f = &self.field;
        let mut acc = Self::zero(f, prec_hint.max(self.prec));
        let mut first = true;
        for c in poly.coeffs().iter().rev() {
            acc = if first {
                first = false;
                Self::constant(f, c.clone(), prec_hint)
            } else {
                acc.mul(self).add(&Self::constant(f, c.clone(), prec_hint))
            };
        }
        if first {
            Self::zero(f, prec_hint)
        } else {
            acc
        }
    }

    /// F_p-coordinates of the coefficients t^lo .. t^(hi-1), blockwise.
    pub fn fp_coords(&self, lo: i64, hi: i64) -> Vec<u32> {
        let mut out = Vec::with_capacity(((hi - lo).max(0) as usize) * self.field.degree());
        for k in lo..hi {
            out.extend_from_slice(self.coeff(k).coords());
        }
        out
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }
}

/// Power series root y(t) of F(t, Y) = sum_i F_i(t) Y^i with y(0) = y0 a simple
/// root of F(0, Y), computed by Newton iteration to absolute precision `prec`.
pub fn hensel_root(poly: &[DensePoly], y0: &FqElem, prec: i64) -> Result<LaurentSeries> {
    let field = poly[0].field().clone();
    let deriv: Vec<DensePoly> = (1..poly.len()).map(|i| poly[i].scale(&field.from_int(i as i64))).collect();
    let eval = |coeffs: &[DensePoly], y: &LaurentSeries, k: i64| {
        let mut acc = LaurentSeries::zero(&field, k);
        for c in coeffs.iter().rev() {
            acc = acc.mul(y).add(&LaurentSeries::from_poly(c, 0, k));
        }
        acc
    };
    let mut y = LaurentSeries::constant(&field, y0.clone(), 1);
    {
        let d0 = eval(&deriv, &y, 1);
        if d0.is_zero() {
            return Err(Error::Precondition("Hensel lifting from a multiple root".into()));
        }
        if !eval(poly, &y, 1).is_zero() {
            return Err(Error::Precondition("Hensel lifting from a non-root".into()));
        }
    }
    let mut k = 1;
    while k < prec {
        k = (2 * k).min(prec);
        let ye = y.extend_exact(k);
        let num = eval(poly, &ye, k);
        let den = eval(&deriv, &ye, k);
        y = ye.sub(&num.div(&den)?).truncate(k);
    }
    Ok(y.truncate(prec).extend_exact(prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_series(f: &Arc<FiniteField>, val: i64, n: usize, rng: &mut ChaCha8Rng) -> LaurentSeries {
        let mut c: Vec<FqElem> = (0..n).map(|_| f.random(rng)).collect();
        c[0] = f.random_nonzero(rng);
        LaurentSeries::new(f, val, c, val + n as i64)
    }

    #[test]
    fn inverse_and_precision() {
        let f = FiniteField::canonical(5, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = random_series(&f, -3, 20, &mut rng);
        let inv = s.inv().unwrap();
        assert_eq!(inv.valuation(), Some(3));
        assert_eq!(inv.prec(), 3 + 20);
        let one = s.mul(&inv);
        assert_eq!(one.prec(), 20);
        assert_eq!(one, LaurentSeries::one(&f, 20));
    }

    #[test]
    fn section_of_monomials() {
        let f = FiniteField::prime(5).unwrap();
        let t4 = LaurentSeries::monomial(&f, f.one(), 4, 30);
        assert_eq!(t4.section_p_minus_1(), LaurentSeries::one(&f, 6));
        let t = LaurentSeries::monomial(&f, f.one(), 1, 30);
        assert!(t.section_p_minus_1().is_zero());
    }

    #[test]
    fn section_matches_derivative_oracle() {
        for p in [3u64, 5, 7] {
            let f = FiniteField::canonical(p, 2).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(p);
            for _ in 0..10 {
                let s = random_series(&f, -2, 40, &mut rng);
                let lhs = s.section_p_minus_1().frobenius().neg();
                let rhs = s.derivative_n(p as usize - 1);
                let diff = lhs.sub(&rhs);
                assert!(diff.prec() >= 30);
                assert!(diff.is_zero());
            }
        }
    }

    #[test]
    fn integrate_inverts_derivative() {
        let f = FiniteField::prime(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = random_series(&f, 1, 30, &mut rng);
        let d = s.derivative();
        let back = d.integrate().unwrap();
        // agree away from exponents divisible by p
        for k in 1..back.prec() {
            if k % 7 != 0 {
                assert_eq!(back.coeff(k), s.coeff(k));
            }
        }
        assert!(LaurentSeries::monomial(&f, f.one(), -1, 5).integrate().is_err());
    }

    #[test]
    fn hensel_square_root() {
        let f = FiniteField::prime(5).unwrap();
        // Y^2 - (1 + t)
        let poly = vec![DensePoly::from_ints(&f, &[-1, -1]), DensePoly::zero(&f), DensePoly::one(&f)];
        let y = hensel_root(&poly, &f.one(), 25).unwrap();
        let sq = y.square();
        assert_eq!(sq, LaurentSeries::from_poly(&DensePoly::from_ints(&f, &[1, 1]), 0, 25));
    }
}
