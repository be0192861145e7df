//! Gaussian elimination over F_p and over F_q(x).
//!
//! Pivoting is deterministic: for each column the pivot is the first nonzero
//! entry at the lowest row index among the unused rows. Returned particular
//! solutions set every free variable to zero.

use std::sync::Arc;

use super::field::{mod_inv, FiniteField};
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

/// Field context used by the generic eliminator.
pub trait LinField {
    type Elem: Clone;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
}

#[derive(Clone, Copy, Debug)]
pub struct PrimeField(pub u32);

impl LinField for PrimeField {
    type Elem = u32;
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.0 as u64) as u32
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.0 - a
        }
    }
    fn inv(&self, a: &u32) -> u32 {
        mod_inv(*a, self.0)
    }
}

pub struct RatFuncField(pub Arc<FiniteField>);

impl LinField for RatFuncField {
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
    fn sub(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.sub(b)
    }
    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.mul(b)
    }
    fn neg(&self, a: &RatFunc) -> RatFunc {
        a.neg()
    }
    fn inv(&self, a: &RatFunc) -> RatFunc {
        a.inv().expect("pivot is nonzero")
    }
}

/// Particular solution (if consistent) and a basis of the null space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution<E> {
    pub solution: Option<Vec<E>>,
    pub kernel: Vec<Vec<E>>,
}

/// Solves rows * X = rhs over the field `k`; with `rhs = None` the system is
/// homogeneous.
pub fn solve_generic<K: LinField>(
    k: &K,
    rows: &[Vec<K::Elem>],
    ncols: usize,
    rhs: Option<&[K::Elem]>,
) -> Result<Solution<K::Elem>> {
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::DimensionMismatch("ragged matrix".into()));
    }
    if let Some(v) = rhs {
        if v.len() != rows.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} rows but right-hand side of length {}",
                rows.len(),
                v.len()
            )));
        }
    }
    let nrows = rows.len();
    let mut m: Vec<Vec<K::Elem>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.push(rhs.map(|v| v[i].clone()).unwrap_or_else(|| k.zero()));
            row
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pr) = (r..nrows).find(|&i| !k.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, pr);
        let inv = k.inv(&m[r][c]);
        for j in c..=ncols {
            m[r][j] = k.mul(&m[r][j], &inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || k.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for j in c..=ncols {
                if !k.is_zero(&pivot_row[j]) {
                    row[j] = k.sub(&row[j], &k.mul(&factor, &pivot_row[j]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let consistent = (r..nrows).all(|i| k.is_zero(&m[i][ncols]));
    let solution = consistent.then(|| {
        let mut x = vec![k.zero(); ncols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = m[i][ncols].clone();
        }
        x
    });
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut kernel = Vec::new();
    for f in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![k.zero(); ncols];
        v[f] = k.one();
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = k.neg(&m[i][f]);
        }
        kernel.push(v);
    }
    Ok(Solution { solution, kernel })
}

/// Dense row-major matrix over F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFp {
    pub p: u32,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<u32>,
}

impl MatrixFp {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        MatrixFp { p, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: u32, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged matrix".into()));
        }
        Ok(MatrixFp {
            p,
            rows: rows.len(),
            cols,
            entries: rows.iter().flat_map(|r| r.iter().map(|&c| c % p)).collect(),
        })
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.entries[i * self.cols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        (0..self.rows)
            .map(|i| (self.row(i).iter().zip(x).map(|(&a, &b)| a as u64 * b as u64 % p).sum::<u64>() % p) as u32)
            .collect()
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.p;
        MatrixFp {
            p,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&o.entries).map(|(&a, &b)| (a + p - b) % p).collect(),
        }
    }
}

pub fn solve_fp(m: &MatrixFp, v: &[u32]) -> Result<Solution<u32>> {
    if v.len() != m.rows {
        return Err(Error::DimensionMismatch(format!("{} rows but right-hand side of length {}", m.rows, v.len())));
    }
    let rows: Vec<Vec<u32>> = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
    let v: Vec<u32> = v.iter().map(|&c| c % m.p).collect();
    solve_generic(&PrimeField(m.p), &rows, m.cols, Some(&v))
}

/// Solves a system over F_q(x); `rhs = None` gives the homogeneous system.
pub fn solve_fqx(
    field: &Arc<FiniteField>,
    m: &[Vec<RatFunc>],
    ncols: usize,
    rhs: Option<&[RatFunc]>,
) -> Result<Solution<RatFunc>> {
    solve_generic(&RatFuncField(field.clone()), m, ncols, rhs)
}
