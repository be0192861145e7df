//! Univariate factorization over F_q: squarefree decomposition, distinct-degree
//! splitting and Cantor-Zassenhaus equal-degree splitting.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::field::FqElem;
use super::poly::DensePoly;
use crate::error::{Error, Result};

/// Squarefree decomposition of a monic polynomial: pairwise coprime squarefree
/// factors g with their multiplicities.
pub fn squarefree_decomposition(f: &DensePoly) -> Vec<(DensePoly, usize)> {
    let mut out = Vec::new();
    if f.deg() <= 0 {
        return out;
    }
    let p = f.field().characteristic() as usize;
    let d = f.derivative();
    if d.is_zero() {
        let root = f.pth_root().expect("zero derivative implies a p-th power");
        for (g, m) in squarefree_decomposition(&root) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = f.gcd(&d);
    let mut w = f.div_exact(&c).unwrap();
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_exact(&y).unwrap();
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        c = c.div_exact(&y).unwrap();
        w = y;
    }
    if !c.is_one() {
        let root = c.pth_root().expect("remaining cofactor is a p-th power");
        for (g, m) in squarefree_decomposition(&root) {
            out.push((g, m * p));
        }
    }
    out
}

/// Splits a monic squarefree polynomial into products of irreducibles of
/// equal degree d, returned as (product, d).
pub fn distinct_degree(f: &DensePoly) -> Vec<(DensePoly, usize)> {
    let mut out = Vec::new();
    let x = DensePoly::x(f.field());
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut i = 1;
    while rest.deg() >= 2 * i as i64 {
        h = h.pow_q_iter_mod(1, &rest);
        let g = rest.gcd(&h.sub(&x));
        if !g.is_one() {
            rest = rest.div_exact(&g).unwrap();
            h = h.rem(&rest).unwrap();
            out.push((g, i));
        }
        i += 1;
    }
    if rest.deg() > 0 {
        let d = rest.deg() as usize;
        out.push((rest, d));
    }
    out
}

fn split_once(f: &DensePoly, d: usize, rng: &mut ChaCha8Rng) -> Option<DensePoly> {
    let field = f.field();
    let n = f.deg() as usize;
    let r = DensePoly::from_coeffs(field, (0..n).map(|_| field.random(rng)).collect());
    if r.deg() < 1 {
        return None;
    }
    let g = f.gcd(&r);
    if !g.is_one() {
        return Some(g);
    }
    let p = field.characteristic() as u128;
    let steps = field.degree() * d;
    let cand = if p == 2 {
        // absolute trace r + r^2 + ... + r^(2^(bd-1))
        let mut acc = r.clone();
        let mut cur = r;
        for _ in 1..steps {
            cur = cur.mul_mod(&cur, f);
            acc = acc.add(&cur);
        }
        acc
    } else {
        // r^((q^d-1)/2) = (prod_i r^(p^i))^((p-1)/2)
        let mut prod = r.clone();
        let mut cur = r;
        for _ in 1..steps {
            cur = cur.pow_mod(p, f);
            prod = prod.mul_mod(&cur, f);
        }
        prod.pow_mod((p - 1) / 2, f).sub(&DensePoly::one(field))
    };
    let g = f.gcd(&cand);
    if g.is_one() || g.deg() == f.deg() {
        None
    } else {
        Some(g)
    }
}

/// Splits a monic product of distinct irreducibles of degree d.
pub fn equal_degree(f: &DensePoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<DensePoly> {
    if f.deg() as usize == d {
        return vec![f.clone()];
    }
    let g = loop {
        if let Some(g) = split_once(f, d, rng) {
            break g;
        }
    };
    let h = f.div_exact(&g).unwrap();
    let mut out = equal_degree(&g, d, rng);
    out.extend(equal_degree(&h, d, rng));
    out
}

/// Complete factorization into monic irreducibles with multiplicities, sorted
/// by degree and then coefficients. Deterministic for a given seed.
pub fn poly_factor(f: &DensePoly, seed: u64) -> Result<Vec<(DensePoly, usize)>> {
    if f.is_zero() {
        return Err(Error::ZeroInput("cannot factor the zero polynomial"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (g, m) in squarefree_decomposition(&f.monic()) {
        for (h, d) in distinct_degree(&g) {
            for irr in equal_degree(&h, d, &mut rng) {
                out.push((irr, m));
            }
        }
    }
    out.sort_by_key(|(g, _)| g.sort_key());
    Ok(out)
}

/// Distinct roots of f in its coefficient field, sorted by element index.
pub fn roots(f: &DensePoly, seed: u64) -> Vec<FqElem> {
    if f.deg() < 1 {
        return Vec::new();
    }
    let field = f.field().clone();
    let m = f.monic();
    let x = DensePoly::x(&field);
    let split = m.gcd(&x.pow_q_iter_mod(1, &m).sub(&x));
    if split.deg() < 1 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<FqElem> = equal_degree(&split, 1, &mut rng).into_iter().map(|l| field.neg(&l.coeff(0))).collect();
    out.sort_by_key(|c| field.index(c));
    out
}
