use std::fmt;
use std::sync::Arc;

use super::field::{FiniteField, FqElem};
use crate::error::{Error, Result};

const KARATSUBA_THRESHOLD: usize = 32;

/// Dense univariate polynomial over a finite field, lowest degree first.
/// The coefficient vector never has trailing zeros.
#[derive(Clone)]
pub struct DensePoly {
    field: Arc<FiniteField>,
    coeffs: Vec<FqElem>,
}

impl PartialEq for DensePoly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && *self.field == *other.field
    }
}

impl Eq for DensePoly {}

impl fmt::Debug for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format("x"))
    }
}

impl fmt::Display for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format("x"))
    }
}

impl DensePoly {
    pub fn from_coeffs(field: &Arc<FiniteField>, mut coeffs: Vec<FqElem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        DensePoly { field: field.clone(), coeffs }
    }

    pub fn from_ints(field: &Arc<FiniteField>, coeffs: &[i64]) -> Self {
        Self::from_coeffs(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn zero(field: &Arc<FiniteField>) -> Self {
        DensePoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Arc<FiniteField>) -> Self {
        Self::constant(field, field.one())
    }

    pub fn constant(field: &Arc<FiniteField>, c: FqElem) -> Self {
        Self::from_coeffs(field, vec![c])
    }

    /// The indeterminate x.
    pub fn x(field: &Arc<FiniteField>) -> Self {
        Self::monomial(field, field.one(), 1)
    }

    pub fn monomial(field: &Arc<FiniteField>, c: FqElem, n: usize) -> Self {
        let mut coeffs = vec![field.zero(); n + 1];
        coeffs[n] = c;
        Self::from_coeffs(field, coeffs)
    }

    /// x - c.
    pub fn linear(field: &Arc<FiniteField>, c: &FqElem) -> Self {
        Self::from_coeffs(field, vec![field.neg(c), field.one()])
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<FqElem> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with deg(0) = -1.
    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.field.is_one(&self.coeffs[0])
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lc(&self) -> FqElem {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| self.field.is_one(c))
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(c) => {
                let inv = self.field.inv(c).unwrap();
                self.scale(&inv)
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => f.add(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::from_coeffs(f, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => f.sub(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => f.neg(b),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::from_coeffs(f, coeffs)
    }

    pub fn neg(&self) -> Self {
        DensePoly { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| self.field.neg(c)).collect() }
    }

    pub fn scale(&self, c: &FqElem) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(&self.field);
        }
        DensePoly { field: self.field.clone(), coeffs: self.coeffs.iter().map(|a| self.field.mul(a, c)).collect() }
    }

    /// Multiplication by x^n.
    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); n];
        coeffs.extend(self.coeffs.iter().cloned());
        DensePoly { field: self.field.clone(), coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field);
        }
        let coeffs = mul_slices(&self.field, &self.coeffs, &other.coeffs);
        Self::from_coeffs(&self.field, coeffs)
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        if self.coeffs.len() < d.coeffs.len() {
            return Ok((Self::zero(f), self.clone()));
        }
        let inv = f.inv(&d.lc()).unwrap();
        let dn = d.coeffs.len();
        let mut r = self.coeffs.clone();
        let mut q = vec![f.zero(); r.len() - dn + 1];
        for k in (0..q.len()).rev() {
            let top = &r[k + dn - 1];
            if f.is_zero(top) {
                continue;
            }
            let c = f.mul(top, &inv);
            for (i, dc) in d.coeffs.iter().enumerate() {
                if !f.is_zero(dc) {
                    r[k + i] = f.sub(&r[k + i], &f.mul(&c, dc));
                }
            }
            q[k] = c;
        }
        r.truncate(dn - 1);
        Ok((Self::from_coeffs(f, q), Self::from_coeffs(f, r)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.divrem(d)?.1)
    }

    /// Quotient of an exact division; errors when the remainder is nonzero.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::Internal("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        !self.is_zero() && other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Monic gcd (zero when both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).unwrap();
            a = std::mem::replace(&mut b, r);
        }
        a.monic()
    }

    /// (g, s, t) with s*self + t*other = g, g monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut t0, mut t1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).unwrap();
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(&r0.lc()).unwrap();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Inverse modulo m, when it exists.
    pub fn inv_mod(&self, m: &Self) -> Option<Self> {
        let (g, s, _) = self.rem(m).ok()?.ext_gcd(m);
        if g.is_one() {
            Some(s.rem(m).unwrap())
        } else {
            None
        }
    }

    pub fn eval(&self, c: &FqElem) -> FqElem {
        let f = &self.field;
        let mut acc = f.zero();
        for a in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, c), a);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let p = f.characteristic() as u64;
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| f.scale(c, (i as u64 % p) as u32)).collect();
        Self::from_coeffs(f, coeffs)
    }

    /// Coefficientwise Frobenius: sum c_i^p x^i.
    pub fn frobenius_coeffs(&self) -> Self {
        DensePoly { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| self.field.frobenius(c)).collect() }
    }

    /// self^p as a polynomial: sum c_i^p x^(p i).
    pub fn frobenius(&self) -> Self {
        let f = &self.field;
        let p = f.characteristic() as usize;
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![f.zero(); p * (self.coeffs.len() - 1) + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[p * i] = f.frobenius(c);
        }
        DensePoly { field: f.clone(), coeffs }
    }

    /// The p-th root of a polynomial in x^p; `None` when some exponent is not
    /// divisible by p.
    pub fn pth_root(&self) -> Option<Self> {
        let f = &self.field;
        let p = f.characteristic() as usize;
        let mut coeffs = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i % p == 0 {
                coeffs.push(f.frobenius_root(c));
            } else if !f.is_zero(c) {
                return None;
            }
        }
        Some(Self::from_coeffs(f, coeffs))
    }

    pub fn mul_mod(&self, other: &Self, m: &Self) -> Self {
        self.mul(other).rem(m).unwrap()
    }

    pub fn pow_mod(&self, mut e: u128, m: &Self) -> Self {
        let mut base = self.rem(m).unwrap();
        let mut acc = Self::one(&self.field).rem(m).unwrap();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(&base, m);
            }
        }
        acc
    }

    /// self^(q^k) mod m by repeated p-th powering, avoiding huge exponents.
    pub fn pow_q_iter_mod(&self, k: usize, m: &Self) -> Self {
        let steps = k * self.field.degree();
        let p = self.field.characteristic() as u128;
        let mut acc = self.rem(m).unwrap();
        for _ in 0..steps {
            acc = acc.pow_mod(p, m);
        }
        acc
    }

    /// Irreducibility over the coefficient field by gcd probes with x^(q^i) - x.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let x = Self::x(&self.field);
        let mut h = x.clone();
        for _ in 1..=n / 2 {
            h = h.pow_q_iter_mod(1, self);
            if !self.gcd(&h.sub(&x)).is_one() {
                return false;
            }
        }
        true
    }

    /// Product of the distinct monic irreducible factors.
    pub fn squarefree_part(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInput("squarefree part of zero"));
        }
        let mut out = Self::one(&self.field);
        for (g, _) in super::factor::squarefree_decomposition(&self.monic()) {
            out = out.mul(&g);
        }
        Ok(out)
    }

    /// self(x + c).
    pub fn taylor_shift(&self, c: &FqElem) -> Self {
        let lin = Self::from_coeffs(&self.field, vec![c.clone(), self.field.one()]);
        let mut acc = Self::zero(&self.field);
        for a in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Self::constant(&self.field, a.clone()));
        }
        acc
    }

    /// self(g).
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Self::zero(&self.field);
        for a in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Self::constant(&self.field, a.clone()));
        }
        acc
    }

    /// x^n self(1/x) with n = deg self.
    pub fn reverse(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::from_coeffs(&self.field, c)
    }

    /// Sorting key: degree first, then coefficient indices from the top.
    pub fn sort_key(&self) -> (usize, Vec<u128>) {
        (self.coeffs.len(), self.coeffs.iter().rev().map(|c| self.field.index(c)).collect())
    }

    pub fn format(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let f = &self.field;
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if f.is_zero(c) {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let coeff = f.format(c);
            let term = if i == 0 {
                if f.is_compound(c) {
                    format!("({coeff})")
                } else {
                    coeff
                }
            } else if f.is_one(c) {
                mono
            } else if f.is_compound(c) {
                format!("({coeff})*{mono}")
            } else {
                format!("{coeff}*{mono}")
            };
            if !out.is_empty() {
                out.push_str(" + ");
            }
            out.push_str(&term);
        }
        out
    }
}

fn mul_school(f: &FiniteField, a: &[FqElem], b: &[FqElem]) -> Vec<FqElem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !f.is_zero(y) {
                out[i + j] = f.add(&out[i + j], &f.mul(x, y));
            }
        }
    }
    out
}

fn add_into(f: &FiniteField, dst: &mut [FqElem], src: &[FqElem]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d = f.add(d, s);
    }
}

fn sub_into(f: &FiniteField, dst: &mut [FqElem], src: &[FqElem]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d = f.sub(d, s);
    }
}

fn mul_slices(f: &FiniteField, a: &[FqElem], b: &[FqElem]) -> Vec<FqElem> {
    if a.len().min(b.len()) < KARATSUBA_THRESHOLD {
        return mul_school(f, a, b);
    }
    let h = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(h.min(a.len()));
    let (b0, b1) = b.split_at(h.min(b.len()));
    let z0 = mul_slices(f, a0, b0);
    let z2 = mul_slices(f, a1, b1);
    let mut sa = a0.to_vec();
    sa.resize(h.max(a1.len()), f.zero());
    add_into(f, &mut sa, a1);
    let mut sb = b0.to_vec();
    sb.resize(h.max(b1.len()), f.zero());
    add_into(f, &mut sb, b1);
    let mut z1 = mul_slices(f, &sa, &sb);
    sub_into(f, &mut z1, &z0);
    sub_into(f, &mut z1, &z2);
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    add_into(f, &mut out, &z0);
    add_into(f, &mut out[h..], &z1);
    add_into(f, &mut out[2 * h..], &z2);
    out
}
