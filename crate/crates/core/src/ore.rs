//! Differential operators K<d> with d c = c d + c', over F_q(x) or K_N.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{solve_fqx, FiniteField, RatFunc};
use crate::error::{Error, Result};
use crate::function_field::{CurveField, FFElem};

/// A differential field as seen by the operator algebra.
pub trait DiffField: Clone {
    type Elem: Clone + PartialEq + fmt::Display;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn derive(&self, a: &Self::Elem) -> Self::Elem;
    fn from_int(&self, k: i64) -> Self::Elem;
    fn same_field(&self, other: &Self) -> bool;
}

/// F_q(x) with d/dx.
#[derive(Clone, Debug)]
pub struct RationalFunctions(pub Arc<FiniteField>);

impl DiffField for RationalFunctions {
    type Elem = RatFunc;
    fn zero(&self) -> RatFunc {
        RatFunc::zero(&self.0)
    }
    fn one(&self) -> RatFunc {
        RatFunc::one(&self.0)
    }
    fn is_zero(&self, a: &RatFunc) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.add(b)
    }
    fn sub(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.sub(b)
    }
    fn neg(&self, a: &RatFunc) -> RatFunc {
        a.neg()
    }
    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.mul(b)
    }
    fn inv(&self, a: &RatFunc) -> Option<RatFunc> {
        a.inv()
    }
    fn derive(&self, a: &RatFunc) -> RatFunc {
        a.derive()
    }
    fn from_int(&self, k: i64) -> RatFunc {
        RatFunc::from_int(&self.0, k)
    }
    fn same_field(&self, other: &Self) -> bool {
        *self.0 == *other.0
    }
}

/// K_N with the unique extension of d/dx.
#[derive(Clone, Debug)]
pub struct CurveFunctions(pub Arc<CurveField>);

impl DiffField for CurveFunctions {
    type Elem = FFElem;
    fn zero(&self) -> FFElem {
        FFElem::zero(&self.0)
    }
    fn one(&self) -> FFElem {
        FFElem::one(&self.0)
    }
    fn is_zero(&self, a: &FFElem) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &FFElem, b: &FFElem) -> FFElem {
        a.add(b)
    }
    fn sub(&self, a: &FFElem, b: &FFElem) -> FFElem {
        a.sub(b)
    }
    fn neg(&self, a: &FFElem) -> FFElem {
        a.neg()
    }
    fn mul(&self, a: &FFElem, b: &FFElem) -> FFElem {
        a.mul(b)
    }
    fn inv(&self, a: &FFElem) -> Option<FFElem> {
        a.inv().ok()
    }
    fn derive(&self, a: &FFElem) -> FFElem {
        a.derive()
    }
    fn from_int(&self, k: i64) -> FFElem {
        FFElem::one(&self.0).scale_int(k)
    }
    fn same_field(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.nstar() == other.0.nstar()
    }
}

/// sum_i coeffs[i] d^i, without trailing zeros.
#[derive(Clone)]
pub struct OrePoly<F: DiffField> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: DiffField> PartialEq for OrePoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<F: DiffField> fmt::Debug for OrePoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: DiffField> fmt::Display for OrePoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if self.field.is_zero(c) {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "D".to_string(),
                _ => format!("D^{i}"),
            };
            let is_one = *c == self.field.one();
            terms.push(match (i, is_one) {
                (0, _) => format!("({c})"),
                (_, true) => mono,
                _ => format!("({c})*{mono}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl<F: DiffField> OrePoly<F> {
    pub fn new(field: &F, coeffs: Vec<F::Elem>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        OrePoly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &F) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn one(field: &F) -> Self {
        Self::new(field, vec![field.one()])
    }

    /// c d^k.
    pub fn monomial(field: &F, c: F::Elem, k: usize) -> Self {
        let mut v = vec![field.zero(); k + 1];
        v[k] = c;
        Self::new(field, v)
    }

    /// d - f.
    pub fn linear(field: &F, f: &F::Elem) -> Self {
        Self::new(field, vec![field.neg(f), field.one()])
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order; `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&F::Elem> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| self.field.add(&self.coeff(i), &o.coeff(i))).collect();
        Self::new(&self.field, v)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| self.field.sub(&self.coeff(i), &o.coeff(i))).collect();
        Self::new(&self.field, v)
    }

    /// c * self.
    pub fn scale_left(&self, c: &F::Elem) -> Self {
        Self::new(&self.field, self.coeffs.iter().map(|a| self.field.mul(c, a)).collect())
    }

    /// d * self.
    pub fn d_mul(&self) -> Self {
        let f = &self.field;
        let mut v = vec![f.zero(); self.coeffs.len() + 1];
        for (j, b) in self.coeffs.iter().enumerate() {
            v[j + 1] = f.add(&v[j + 1], b);
            v[j] = f.add(&v[j], &f.derive(b));
        }
        Self::new(f, v)
    }

    pub fn monic(&self) -> Result<Self> {
        let lc = self.lc().ok_or(Error::ZeroInput("monic of the zero operator"))?;
        let inv = self.field.inv(lc).ok_or(Error::DivisionByZero)?;
        Ok(self.scale_left(&inv))
    }

    /// Applies `g` to every coefficient.
    pub fn map<G: DiffField>(&self, target: &G, g: impl Fn(&F::Elem) -> G::Elem) -> OrePoly<G> {
        OrePoly::new(target, self.coeffs.iter().map(g).collect())
    }
}

pub fn ore_mul<F: DiffField>(a: &OrePoly<F>, b: &OrePoly<F>) -> Result<OrePoly<F>> {
    if !a.field.same_field(&b.field) {
        return Err(Error::FieldMismatch);
    }
    let mut acc = OrePoly::zero(&a.field);
    let mut dib = b.clone();
    for (i, c) in a.coeffs.iter().enumerate() {
        if i > 0 {
            dib = dib.d_mul();
        }
        if !a.field.is_zero(c) {
            acc = acc.add(&dib.scale_left(c));
        }
    }
    Ok(acc)
}

/// (Q, R) with A = Q B + R and ord R < ord B.
pub fn right_divmod<F: DiffField>(a: &OrePoly<F>, b: &OrePoly<F>) -> Result<(OrePoly<F>, OrePoly<F>)> {
    if !a.field.same_field(&b.field) {
        return Err(Error::FieldMismatch);
    }
    let f = &a.field;
    let db = b.order().ok_or(Error::DivisionByZero)?;
    let lcinv = f.inv(b.lc().unwrap()).ok_or(Error::DivisionByZero)?;
    let mut r = a.clone();
    let Some(da) = a.order().filter(|&d| d >= db) else {
        return Ok((OrePoly::zero(f), r));
    };
    // shifted[k] = d^k B
    let mut shifted = vec![b.clone()];
    for k in 1..=da - db {
        shifted.push(shifted[k - 1].d_mul());
    }
    let mut q = vec![f.zero(); da - db + 1];
    while let Some(dr) = r.order().filter(|&d| d >= db) {
        let k = dr - db;
        let c = f.mul(r.lc().unwrap(), &lcinv);
        r = r.sub(&shifted[k].scale_left(&c));
        q[k] = f.add(&q[k], &c);
        debug_assert!(r.order().is_none_or(|d| d < dr));
    }
    Ok((OrePoly::new(f, q), r))
}

/// Monic greatest common right divisor.
pub fn gcrd<F: DiffField>(a: &OrePoly<F>, b: &OrePoly<F>) -> Result<OrePoly<F>> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroInput("gcrd of two zero operators"));
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let (_, r) = right_divmod(&x, &y)?;
        x = y;
        y = r;
    }
    x.monic()
}

/// d^p modulo d - f: r_0 = 1, r_(k+1) = r_k f + r_k'.
pub fn pth_power_mod<F: DiffField>(field: &F, f: &F::Elem, p: u32) -> F::Elem {
    let mut r = field.one();
    for _ in 0..p {
        r = field.add(&field.mul(&r, f), &field.derive(&r));
    }
    r
}

/// N(d^p) = sum_i N_i(x)^p d^(p i), with N the Frobenius twist of N_*.
pub fn central_operator(curve: &CurveField) -> OrePoly<RationalFunctions> {
    let field = RationalFunctions(curve.base().clone());
    let p = curve.p() as usize;
    let mut v = vec![field.zero(); p * curve.dy() + 1];
    for (i, n) in curve.nstar().iter().enumerate() {
        v[p * i] = RatFunc::from_poly(n.frobenius());
    }
    OrePoly::new(&field, v)
}

/// Operator over F_q(x) viewed over K_N.
pub fn lift_to_curve(l: &OrePoly<RationalFunctions>, curve: &Arc<CurveField>) -> OrePoly<CurveFunctions> {
    let target = CurveFunctions(curve.clone());
    l.map(&target, |c| FFElem::from_rat(curve, c.clone()))
}

/// The monic right factor of N(d^p) over F_q(x) attached to a solution f:
/// a kernel vector of the columns a_0 = 1, a_(i+1) = a_i f + a_i'.
pub fn reconstruct_factor(curve: &Arc<CurveField>, f: &FFElem) -> Result<OrePoly<RationalFunctions>> {
    if !f.is_solution() {
        return Err(Error::Precondition("reconstruct_factor needs a solution".into()));
    }
    let dy = curve.dy();
    let mut cols = vec![FFElem::one(curve)];
    for i in 0..dy {
        let next = cols[i].mul(f).add(&cols[i].derive());
        cols.push(next);
    }
    let m: Vec<Vec<RatFunc>> = (0..dy).map(|r| cols.iter().map(|c| c.coords()[r].clone()).collect()).collect();
    let sol = solve_fqx(curve.base(), &m, dy + 1, None)?;
    let v =
        sol.kernel.into_iter().next().ok_or_else(|| Error::Internal("relation matrix has trivial kernel".into()))?;
    let field = RationalFunctions(curve.base().clone());
    let l = OrePoly::new(&field, v).monic()?;
    if l.order() != Some(dy) {
        return Err(Error::Internal(format!("factor of order {:?}, expected {dy}", l.order())));
    }
    Ok(l)
}

/// Solution -b_(m-1)/m read off the monic gcrd(L, d^p - y_N) = d^m + b_(m-1) d^(m-1) + ...
pub fn vdp_extract(l: &OrePoly<CurveFunctions>, curve: &Arc<CurveField>) -> Result<FFElem> {
    let p = curve.p();
    let ord = l.order().unwrap_or(0);
    if ord == 0 || ord >= p as usize * curve.dy() {
        return Err(Error::TrivialDivisor);
    }
    let field = CurveFunctions(curve.clone());
    let yn = FFElem::y_n(curve);
    let pcurv = OrePoly::new(&field, {
        let mut v = vec![field.zero(); p as usize + 1];
        v[0] = yn.neg();
        v[p as usize] = field.one();
        v
    });
    let lstar = gcrd(l, &pcurv)?;
    let m = lstar.order().unwrap_or(0);
    if m == 0 {
        return Err(Error::TrivialDivisor);
    }
    if m % p as usize == 0 {
        return Err(Error::OrderDivisibleByP { order: m, p });
    }
    let minv = field.inv(&field.from_int(m as i64)).ok_or(Error::DivisionByZero)?;
    Ok(lstar.coeff(m - 1).neg().mul(&minv))
}
