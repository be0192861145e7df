use std::fmt;
use std::sync::Arc;

use super::field::{FiniteField, FqElem};
use super::poly::DensePoly;
use crate::error::{Error, Result};

/// Element of F_q(x) in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: DensePoly,
    den: DensePoly,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format("x"))
    }
}

impl RatFunc {
    pub fn new(num: DensePoly, den: DensePoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: DensePoly, den: DensePoly) -> Self {
        if num.is_zero() {
            return Self::zero(num.field());
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() { (num, den) } else { (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap()) };
        let lc = den.lc();
        if den.field().is_one(&lc) {
            return RatFunc { num, den };
        }
        let inv = den.field().inv(&lc).unwrap();
        RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn from_poly(p: DensePoly) -> Self {
        let den = DensePoly::one(p.field());
        RatFunc { num: p, den }
    }

    pub fn zero(field: &Arc<FiniteField>) -> Self {
        Self::from_poly(DensePoly::zero(field))
    }

    pub fn one(field: &Arc<FiniteField>) -> Self {
        Self::from_poly(DensePoly::one(field))
    }

    pub fn x(field: &Arc<FiniteField>) -> Self {
        Self::from_poly(DensePoly::x(field))
    }

    pub fn constant(field: &Arc<FiniteField>, c: FqElem) -> Self {
        Self::from_poly(DensePoly::constant(field, c))
    }

    pub fn from_int(field: &Arc<FiniteField>, c: i64) -> Self {
        Self::constant(field, field.from_int(c))
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        self.num.field()
    }

    pub fn num(&self) -> &DensePoly {
        &self.num
    }

    pub fn den(&self) -> &DensePoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// `Some(c)` when the function is a constant.
    pub fn as_constant(&self) -> Option<FqElem> {
        if self.den.is_one() && self.num.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    /// max(deg num, deg den).
    pub fn height(&self) -> usize {
        self.num.deg().max(self.den.deg()).max(0) as usize
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::normalized(self.num.add(&o.num), self.den.clone());
        }
        let g = self.den.gcd(&o.den);
        let b1 = self.den.div_exact(&g).unwrap();
        let d1 = o.den.div_exact(&g).unwrap();
        let num = self.num.mul(&d1).add(&o.num.mul(&b1));
        Self::normalized(num, self.den.mul(&d1))
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.field());
        }
        if self.den.is_one() && o.den.is_one() {
            return Self::from_poly(self.num.mul(&o.num));
        }
        // cross-cancel before multiplying
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = o.den.div_exact(&g1).unwrap();
        let n2 = o.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let lc = den.lc();
        let inv = den.field().inv(&lc).unwrap();
        RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn scale(&self, c: &FqElem) -> Self {
        if self.field().is_zero(c) {
            return Self::zero(self.field());
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul_poly(&self, p: &DensePoly) -> Self {
        self.mul(&Self::from_poly(p.clone()))
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, e: u64) -> Self {
        RatFunc { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// d/dx.
    pub fn derive(&self) -> Self {
        if self.den.is_one() {
            return Self::from_poly(self.num.derivative());
        }
        let num = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        Self::normalized(num, self.den.square())
    }

    pub fn frobenius(&self) -> Self {
        RatFunc { num: self.num.frobenius(), den: self.den.frobenius() }
    }

    /// The p-th root when the function lies in F_q(x^p).
    pub fn pth_root(&self) -> Option<Self> {
        Some(RatFunc { num: self.num.pth_root()?, den: self.den.pth_root()? })
    }

    /// Value at c, `None` at a pole.
    pub fn eval(&self, c: &FqElem) -> Option<FqElem> {
        let d = self.den.eval(c);
        let f = self.field();
        f.inv(&d).map(|i| f.mul(&self.num.eval(c), &i))
    }

    /// Valuation at the place of a monic irreducible P.
    pub fn valuation_at(&self, p: &DensePoly) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(poly_valuation(&self.num, p) as i64 - poly_valuation(&self.den, p) as i64)
    }

    /// Valuation at infinity: deg den - deg num.
    pub fn valuation_at_infinity(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.den.deg() - self.num.deg())
    }

    pub fn format(&self, var: &str) -> String {
        let n = self.num.format(var);
        if self.den.is_one() {
            return n;
        }
        let d = self.den.format(var);
        let wrap = |s: String, poly: &DensePoly| {
            if poly.coeffs().iter().filter(|c| !poly.field().is_zero(c)).count() > 1
                || poly.field().is_compound(&poly.lc())
            {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(n, &self.num), wrap(d, &self.den))
    }
}

/// Multiplicity of the irreducible p in f (f nonzero).
pub fn poly_valuation(f: &DensePoly, p: &DensePoly) -> usize {
    let mut v = 0;
    let mut cur = f.clone();
    loop {
        let (q, r) = cur.divrem(p).unwrap();
        if !r.is_zero() || cur.is_zero() {
            return v;
        }
        v += 1;
        cur = q;
    }
}
