//! Finite fields F_q = F_p[z]/(m) with elements stored as coordinate vectors
//! on the power basis 1, z, ..., z^(b-1).
//!
//! Elements carry no reference to their field; every operation goes through
//! the owning [`FiniteField`]. Fields are shared behind `Arc` and compared by
//! characteristic and modulus.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, LazyLock, Mutex, OnceLock};

use rand::Rng;
use smallvec::SmallVec;

use super::poly::DensePoly;
use crate::error::{Error, Result};

/// Coordinates of an element of F_p[z]/(m), lowest power first, length = b.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct FqElem(pub(crate) SmallVec<[u32; 4]>);

impl FqElem {
    pub fn coords(&self) -> &[u32] {
        &self.0
    }
}

pub struct FiniteField {
    p: u32,
    degree: usize,
    /// Monic defining polynomial, lowest coefficient first, length degree + 1.
    modulus: Vec<u32>,
    frob_images: OnceLock<Vec<FqElem>>,
    root_images: OnceLock<Vec<FqElem>>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}[{}]", self.p, self.degree, self.modulus_string())
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

static CANONICAL: LazyLock<Mutex<HashMap<(u32, usize), Arc<FiniteField>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

impl FiniteField {
    fn raw(p: u32, modulus: Vec<u32>) -> FiniteField {
        FiniteField {
            p,
            degree: modulus.len() - 1,
            modulus,
            frob_images: OnceLock::new(),
            root_images: OnceLock::new(),
        }
    }

    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Arc<FiniteField>> {
        Self::canonical(p, 1)
    }

    /// F_p[z]/(modulus); the modulus is made monic and checked for irreducibility.
    pub fn with_modulus(p: u64, modulus: &[i64]) -> Result<Arc<FiniteField>> {
        if !is_prime(p) || p > u32::MAX as u64 / 2 {
            return Err(Error::NotPrime(p));
        }
        let pi = p as i64;
        let mut m: Vec<u32> = modulus.iter().map(|c| c.rem_euclid(pi) as u32).collect();
        while m.last() == Some(&0) {
            m.pop();
        }
        if m.len() < 2 {
            return Err(Error::ReducibleModulus(format!("{modulus:?}")));
        }
        let lead = *m.last().unwrap();
        let inv = mod_inv(lead, p as u32);
        for c in m.iter_mut() {
            *c = ((*c as u64 * inv as u64) % p) as u32;
        }
        let candidate = Arc::new(Self::raw(p as u32, m));
        if candidate.degree > 1 && !modulus_is_irreducible(&candidate)? {
            return Err(Error::ReducibleModulus(candidate.modulus_string()));
        }
        Ok(candidate)
    }

    /// The field of order p^degree defined by the first monic irreducible
    /// polynomial in a fixed enumeration (constant term varies fastest).
    /// Results are cached so repeated calls share one `Arc`.
    pub fn canonical(p: u64, degree: usize) -> Result<Arc<FiniteField>> {
        if !is_prime(p) || p > u32::MAX as u64 / 2 {
            return Err(Error::NotPrime(p));
        }
        if degree == 0 {
            return Err(Error::Precondition("field degree must be positive".into()));
        }
        let key = (p as u32, degree);
        if let Some(f) = CANONICAL.lock().unwrap().get(&key) {
            return Ok(f.clone());
        }
        let field = if degree == 1 {
            Arc::new(Self::raw(p as u32, vec![0, 1]))
        } else {
            let mut found = None;
            let mut idx: u128 = 0;
            let total = (p as u128)
                .checked_pow(degree as u32)
                .ok_or_else(|| Error::Precondition(format!("field F_{p}^{degree} too large")))?;
            while idx < total {
                let mut m = digits(idx, p as u32, degree);
                idx += 1;
                if m[0] == 0 {
                    continue;
                }
                m.push(1);
                let cand = Arc::new(Self::raw(p as u32, m));
                if modulus_is_irreducible(&cand)? {
                    found = Some(cand);
                    break;
                }
            }
            found.ok_or_else(|| Error::Internal("no irreducible polynomial found".into()))?
        };
        let mut cache = CANONICAL.lock().unwrap();
        Ok(cache.entry(key).or_insert(field).clone())
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Extension degree b over F_p.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// q = p^b, or `None` when it does not fit in 128 bits.
    pub fn order(&self) -> Option<u128> {
        (self.p as u128).checked_pow(self.degree as u32)
    }

    pub fn modulus_string(&self) -> String {
        let mut terms = Vec::new();
        for (i, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{i}"),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        terms.join(" + ")
    }

    pub fn zero(&self) -> FqElem {
        FqElem(SmallVec::from_elem(0, self.degree))
    }

    pub fn one(&self) -> FqElem {
        self.from_int(1)
    }

    /// The generator z (equal to a prime-field element when b = 1).
    pub fn generator(&self) -> FqElem {
        if self.degree == 1 {
            return self.from_int((self.p - self.modulus[0]) as i64);
        }
        let mut e = self.zero();
        e.0[1] = 1;
        e
    }

    pub fn from_int(&self, v: i64) -> FqElem {
        let mut e = self.zero();
        e.0[0] = v.rem_euclid(self.p as i64) as u32;
        e
    }

    pub fn from_coords(&self, coords: &[u32]) -> FqElem {
        let mut e = self.zero();
        for (i, &c) in coords.iter().enumerate() {
            if i < self.degree {
                e.0[i] = c % self.p;
            } else if c % self.p != 0 {
                // reduce higher powers through the modulus
                let mut high = self.zero();
                high.0[0] = c % self.p;
                let zi = self.pow(&self.generator(), i as u128);
                e = self.add(&e, &self.mul(&high, &zi));
            }
        }
        e
    }

    pub fn is_zero(&self, a: &FqElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self, a: &FqElem) -> bool {
        a.0[0] == 1 && a.0[1..].iter().all(|&c| c == 0)
    }

    /// `Some(c)` when the element lies in the prime subfield.
    pub fn as_prime(&self, a: &FqElem) -> Option<u32> {
        if a.0[1..].iter().all(|&c| c == 0) {
            Some(a.0[0])
        } else {
            None
        }
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let p = self.p;
        FqElem(
            a.0.iter()
                .zip(b.0.iter())
                .map(|(&x, &y)| {
                    let s = x + y;
                    if s >= p {
                        s - p
                    } else {
                        s
                    }
                })
                .collect(),
        )
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let p = self.p;
        FqElem(a.0.iter().zip(b.0.iter()).map(|(&x, &y)| if x >= y { x - y } else { x + p - y }).collect())
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        let p = self.p;
        FqElem(a.0.iter().map(|&x| if x == 0 { 0 } else { p - x }).collect())
    }

    pub fn scale(&self, a: &FqElem, s: u32) -> FqElem {
        let p = self.p as u64;
        FqElem(a.0.iter().map(|&x| ((x as u64 * s as u64) % p) as u32).collect())
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let p = self.p as u64;
        let n = self.degree;
        if n == 1 {
            return FqElem(SmallVec::from_elem(((a.0[0] as u64 * b.0[0] as u64) % p) as u32, 1));
        }
        let mut acc: SmallVec<[u64; 8]> = SmallVec::from_elem(0, 2 * n - 1);
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                acc[i + j] = (acc[i + j] + x as u64 * y as u64) % p;
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = acc[k] % p;
            if c == 0 {
                continue;
            }
            for i in 0..n {
                let m = self.modulus[i] as u64;
                if m != 0 {
                    acc[k - n + i] = (acc[k - n + i] + (p - m) * c) % p;
                }
            }
        }
        FqElem(acc[..n].iter().map(|&c| (c % p) as u32).collect())
    }

    pub fn square(&self, a: &FqElem) -> FqElem {
        self.mul(a, a)
    }

    pub fn pow(&self, a: &FqElem, mut e: u128) -> FqElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.square(&base);
            }
        }
        acc
    }

    /// Signed power; `None` for a negative power of zero.
    pub fn pow_i(&self, a: &FqElem, e: i64) -> Option<FqElem> {
        if e >= 0 {
            Some(self.pow(a, e as u128))
        } else {
            self.inv(a).map(|ia| self.pow(&ia, (-e) as u128))
        }
    }

    pub fn inv(&self, a: &FqElem) -> Option<FqElem> {
        if self.is_zero(a) {
            return None;
        }
        let p = self.p;
        if self.degree == 1 {
            return Some(FqElem(SmallVec::from_elem(mod_inv(a.0[0], p), 1)));
        }
        // extended Euclid on F_p[z]: find s with s*a = 1 mod m
        let mut r0: Vec<u32> = self.modulus.clone();
        let mut r1: Vec<u32> = a.0.to_vec();
        trim(&mut r1);
        let mut s0: Vec<u32> = vec![];
        let mut s1: Vec<u32> = vec![1];
        while !r1.is_empty() {
            let (q, r) = fp_divrem(&r0, &r1, p);
            let s2 = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant
        let c = mod_inv(r0[0], p);
        let s: Vec<u32> = s0.iter().map(|&x| ((x as u64 * c as u64) % p as u64) as u32).collect();
        Some(self.from_coords(&s))
    }

    pub fn div(&self, a: &FqElem, b: &FqElem) -> Option<FqElem> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    fn frob_images(&self) -> &Vec<FqElem> {
        self.frob_images.get_or_init(|| {
            let z = self.generator();
            let zp = self.pow(&z, self.p as u128);
            let mut images = Vec::with_capacity(self.degree);
            let mut cur = self.one();
            for _ in 0..self.degree {
                images.push(cur.clone());
                cur = self.mul(&cur, &zp);
            }
            images
        })
    }

    fn root_images(&self) -> &Vec<FqElem> {
        self.root_images.get_or_init(|| {
            // inverse Frobenius = Frobenius^(b-1)
            let mut images: Vec<FqElem> = (0..self.degree)
                .map(|i| {
                    let mut e = self.zero();
                    e.0[i] = 1;
                    e
                })
                .collect();
            for _ in 1..self.degree {
                images = images.iter().map(|e| self.frobenius(e)).collect();
            }
            images
        })
    }

    fn apply_linear(&self, a: &FqElem, images: &[FqElem]) -> FqElem {
        let p = self.p as u64;
        let mut acc: SmallVec<[u64; 8]> = SmallVec::from_elem(0, self.degree);
        for (i, &c) in a.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (k, &v) in images[i].0.iter().enumerate() {
                acc[k] = (acc[k] + c as u64 * v as u64) % p;
            }
        }
        FqElem(acc.iter().map(|&c| c as u32).collect())
    }

    /// c -> c^p.
    pub fn frobenius(&self, a: &FqElem) -> FqElem {
        if self.degree == 1 {
            return a.clone();
        }
        self.apply_linear(a, self.frob_images())
    }

    /// The unique r with r^p = c.
    pub fn frobenius_root(&self, a: &FqElem) -> FqElem {
        if self.degree == 1 {
            return a.clone();
        }
        self.apply_linear(a, self.root_images())
    }

    /// The element whose coordinates are the base-p digits of `idx`.
    pub fn element(&self, idx: u128) -> FqElem {
        FqElem(digits(idx, self.p, self.degree).into_iter().collect())
    }

    pub fn index(&self, a: &FqElem) -> u128 {
        a.0.iter().rev().fold(0u128, |acc, &c| acc * self.p as u128 + c as u128)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FqElem {
        FqElem((0..self.degree).map(|_| rng.gen_range(0..self.p)).collect())
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FqElem {
        loop {
            let e = self.random(rng);
            if !self.is_zero(&e) {
                return e;
            }
        }
    }

    /// Column j holds the coordinates of g * z^j.
    pub fn mul_matrix(&self, g: &FqElem) -> Vec<Vec<u32>> {
        let mut cols = Vec::with_capacity(self.degree);
        let z = self.generator();
        let mut cur = g.clone();
        for _ in 0..self.degree {
            cols.push(cur.0.to_vec());
            cur = self.mul(&cur, &z);
        }
        cols
    }

    /// Column j holds the coordinates of (z^j)^p.
    pub fn frobenius_matrix(&self) -> Vec<Vec<u32>> {
        if self.degree == 1 {
            return vec![vec![1]];
        }
        self.frob_images().iter().map(|e| e.0.to_vec()).collect()
    }

    pub fn format(&self, a: &FqElem) -> String {
        if self.degree == 1 {
            return a.0[0].to_string();
        }
        let mut terms = Vec::new();
        for (i, &c) in a.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{i}"),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// True when the formatted element needs parentheses inside a product.
    pub fn is_compound(&self, a: &FqElem) -> bool {
        a.0.iter().filter(|&&c| c != 0).count() > 1
    }
}

fn digits(mut idx: u128, p: u32, n: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(n + 1);
    for _ in 0..n {
        out.push((idx % p as u128) as u32);
        idx /= p as u128;
    }
    out
}

pub(crate) fn mod_inv(a: u32, p: u32) -> u32 {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, a as i64 % p as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i64) as u32
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let mut v: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
    trim(&mut v);
    v
}

fn fp_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut v: Vec<u32> = (0..n)
        .map(|i| {
            let x = *a.get(i).unwrap_or(&0);
            let y = *b.get(i).unwrap_or(&0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut v);
    v
}

fn fp_divrem(a: &[u32], b: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (vec![], r);
    }
    let inv = mod_inv(*b.last().unwrap(), p) as u64;
    let mut q = vec![0u32; r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = (*r.last().unwrap() as u64 * inv) % p as u64;
        q[shift] = c as u32;
        for (i, &bc) in b.iter().enumerate() {
            let t = (c * bc as u64) % p as u64;
            r[shift + i] = ((r[shift + i] as u64 + p as u64 - t) % p as u64) as u32;
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

fn modulus_is_irreducible(field: &Arc<FiniteField>) -> Result<bool> {
    let prime = FiniteField::prime(field.p as u64)?;
    let coeffs: Vec<i64> = field.modulus.iter().map(|&c| c as i64).collect();
    Ok(DensePoly::from_ints(&prime, &coeffs).is_irreducible())
}
