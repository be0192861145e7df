//! Rational Newton-Puiseux expansions (Duval's variant): every branch is
//! produced over its own residue field, one branch per place, so conjugate
//! branches are never duplicated.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{poly_factor, roots, DensePoly, FieldEmbedding, FiniteField, FqElem};
use crate::error::{Error, Result};

const MAX_DEPTH: usize = 64;

/// Parameterization s = lambda T^e and Y = A(T) + coeff T^shift Y_cur(T),
/// where Y_cur is the root of `tail` with Y_cur(0) = 0 (or exactly zero).
#[derive(Clone, Debug)]
pub struct BranchRecipe {
    pub field: Arc<FiniteField>,
    /// Embedding of the field the expansion started over into `field`.
    pub embedding: FieldEmbedding,
    pub e: usize,
    pub lambda: FqElem,
    pub head: BTreeMap<i64, FqElem>,
    pub coeff: FqElem,
    pub shift: i64,
    /// `None` when Y_cur is identically zero.
    pub tail: Option<Vec<DensePoly>>,
}

impl BranchRecipe {
    pub fn start(field: &Arc<FiniteField>) -> Self {
        BranchRecipe {
            field: field.clone(),
            embedding: FieldEmbedding::identity(field),
            e: 1,
            lambda: field.one(),
            head: BTreeMap::new(),
            coeff: field.one(),
            shift: 0,
            tail: None,
        }
    }
}

fn binomials(n: usize, p: u32) -> Vec<Vec<u32>> {
    let mut rows = vec![vec![1u32]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = vec![1u32; i + 1];
        for k in 1..i {
            row[k] = (prev[k - 1] + prev[k]) % p;
        }
        rows.push(row);
    }
    rows
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn ord(poly: &DensePoly) -> Option<i64> {
    let f = poly.field();
    poly.coeffs().iter().position(|c| !f.is_zero(c)).map(|i| i as i64)
}

/// Lower convex hull of (i, j) points sorted by i.
fn lower_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in points {
        while hull.len() >= 2 {
            let o = hull[hull.len() - 2];
            let a = hull[hull.len() - 1];
            let cross = (a.0 - o.0) * (pt.1 - o.1) - (a.1 - o.1) * (pt.0 - o.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull
}

/// All branches of F(s, Y) = sum_i F_i(s) Y^i = 0 near s = 0. `label` names the
/// center in error messages.
pub fn expand_branches(poly: &[DensePoly], seed: u64, label: &str) -> Result<Vec<BranchRecipe>> {
    let field = poly[0].field().clone();
    let mut out = Vec::new();
    let limit = poly.len() - 1;
    recurse(poly.to_vec(), limit, true, BranchRecipe::start(&field), seed, label, 0, &mut out)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    mut poly: Vec<DensePoly>,
    mut r: usize,
    top: bool,
    state: BranchRecipe,
    seed: u64,
    label: &str,
    depth: usize,
    out: &mut Vec<BranchRecipe>,
) -> Result<()> {
    if depth > MAX_DEPTH {
        return Err(Error::Internal(format!("Newton-Puiseux did not terminate above {label}")));
    }
    while poly.last().is_some_and(|c| c.is_zero()) {
        poly.pop();
    }
    if poly[0].is_zero() {
        // Y_cur = 0 is an exact (simple) root
        out.push(BranchRecipe { tail: None, ..state.clone() });
        poly.remove(0);
        r -= 1;
        if r == 0 {
            return Ok(());
        }
    }
    if !top && r == 1 {
        out.push(BranchRecipe { tail: Some(poly), ..state });
        return Ok(());
    }
    let g = state.field.clone();
    let p = g.characteristic();
    let upto = if top { poly.len() - 1 } else { r };
    let points: Vec<(i64, i64)> =
        (0..=upto.min(poly.len() - 1)).filter_map(|i| ord(&poly[i]).map(|j| (i as i64, j))).collect();
    let hull = lower_hull(&points);
    let binom = binomials(poly.len(), p);
    for w in hull.windows(2) {
        let ((i0, j0), (i1, j1)) = (w[0], w[1]);
        let gg = gcd(i1 - i0, j0 - j1);
        let q = (i1 - i0) / gg;
        let m = (j0 - j1) / gg;
        if q % p as i64 == 0 {
            return Err(Error::WildRamification { center: label.to_string(), ramification: q as usize * state.e });
        }
        let phi = DensePoly::from_coeffs(
            &g,
            (0..=gg).map(|k| poly[(i0 + k * q) as usize].coeff((j0 - k * m) as usize)).collect(),
        );
        let (sign, u, vneg) = ext_gcd(q, m);
        let (u, vneg) = if sign < 0 { (-u, -vneg) } else { (u, vneg) };
        // u q + vneg m = 1  =>  v = -vneg
        let v = -vneg;
        let ell = q * j0 + m * i0;
        for (psi, mult) in poly_factor(&phi, seed)? {
            if psi.deg() == 1 && g.is_zero(&psi.coeff(0)) {
                continue;
            }
            let g1 = FiniteField::canonical(p as u64, g.degree() * psi.deg() as usize)?;
            let emb = FieldEmbedding::new(&g, &g1)?;
            let xi = roots(&emb.apply_poly(&psi), seed)[0].clone();
            let xi_pow = |k: i64| g1.pow_i(&xi, k).unwrap();
            // F1(T, Y) = F(xi^v T^q, T^m (xi^u + Y)) / T^ell
            let mut parts: Vec<DensePoly> = Vec::with_capacity(poly.len());
            for (i, fi) in poly.iter().enumerate() {
                let mut coeffs: BTreeMap<i64, FqElem> = BTreeMap::new();
                for (j, c) in fi.coeffs().iter().enumerate() {
                    if g.is_zero(c) {
                        continue;
                    }
                    let expo = q * j as i64 + m * i as i64 - ell;
                    debug_assert!(expo >= 0);
                    let val = g1.mul(&emb.apply(c), &xi_pow(v * j as i64));
                    coeffs.insert(expo, val);
                }
                let deg = coeffs.keys().last().copied().unwrap_or(-1);
                let mut dense = vec![g1.zero(); (deg + 1) as usize];
                for (k, c) in coeffs {
                    dense[k as usize] = c;
                }
                parts.push(DensePoly::from_coeffs(&g1, dense));
            }
            let xu = xi_pow(u);
            let mut next = Vec::with_capacity(poly.len());
            for k in 0..poly.len() {
                let mut acc = DensePoly::zero(&g1);
                for (i, part) in parts.iter().enumerate().skip(k) {
                    if part.is_zero() || binom[i][k] == 0 {
                        continue;
                    }
                    let c = g1.scale(&g1.pow(&xu, (i - k) as u128), binom[i][k]);
                    acc = acc.add(&part.scale(&c));
                }
                next.push(acc);
            }
            let head = state
                .head
                .iter()
                .map(|(&k, c)| (q * k, g1.mul(&emb.apply(c), &xi_pow(v * k))))
                .chain(std::iter::once((
                    q * state.shift + m,
                    g1.mul(&emb.apply(&state.coeff), &xi_pow(v * state.shift + u)),
                )))
                .filter(|(_, c)| !g1.is_zero(c))
                .fold(BTreeMap::new(), |mut acc, (k, c)| {
                    let cur = acc.remove(&k).unwrap_or_else(|| g1.zero());
                    let sum = g1.add(&cur, &c);
                    if !g1.is_zero(&sum) {
                        acc.insert(k, sum);
                    }
                    acc
                });
            let child = BranchRecipe {
                field: g1.clone(),
                embedding: state.embedding.then(&emb),
                e: state.e * q as usize,
                lambda: g1.mul(&emb.apply(&state.lambda), &xi_pow(v * state.e as i64)),
                head,
                coeff: g1.mul(&emb.apply(&state.coeff), &xi_pow(v * state.shift)),
                shift: q * state.shift + m,
                tail: None,
            };
            recurse(next, mult, false, child, seed, label, depth + 1, out)?;
        }
    }
    Ok(())
}
