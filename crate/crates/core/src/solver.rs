//! Global solutions of f^(p-1) + f^p = a^p in K_N.
//!
//! A solution satisfies f - S(f) = a, where S is the section map read off the
//! coefficients t^(pk+p-1) at a place with t' = 1. The map is F_p-linear, so on
//! a finite candidate space x^j a^i / delta the equation becomes an F_p-linear
//! system on truncated Taylor expansions. The system is sized so that an
//! element with bounded poles vanishing to that order is zero, and every
//! solution is still checked exactly before it is returned.

use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::{roots, solve_fp, DensePoly, FieldEmbedding, FiniteField, MatrixFp, RatFunc};
use crate::error::{Error, Result};
use crate::function_field::{CurveField, FFElem};
use crate::irreducibility::{critical_places, is_reducible, IrreducibilityReport, Verdict};
use crate::local::place::Place;
use crate::local::series::LaurentSeries;

/// Multiplier in the degree cap C r_max d_x d_y.
pub const C_CAP: usize = 8;

/// Span over F_p of z^l x^j a^i / delta, 0 <= j <= bound, 0 <= i < d_y, l < [F_q : F_p].
#[derive(Clone, Debug)]
pub struct CandidateSpace {
    curve: Arc<CurveField>,
    pub delta: DensePoly,
    pub bound: usize,
    /// Upper bound on the degree of the pole divisor of h - S(h) - a for h in the span.
    pub pole_bound: i64,
}

impl CandidateSpace {
    pub fn new(curve: &Arc<CurveField>, delta: DensePoly, bound: usize) -> Self {
        let dy = curve.dy() as i64;
        let dx = curve.dx() as i64;
        let diff_bound =
            if dy == 1 { 0 } else { dy * ((dy - 1) * curve.lc().deg().max(0) + curve.disc().deg().max(0)) };
        let pole_bound = dy * delta.deg().max(0) + dy * bound as i64 + dy * dx + diff_bound;
        CandidateSpace { curve: curve.clone(), delta, bound, pole_bound }
    }

    pub fn curve(&self) -> &Arc<CurveField> {
        &self.curve
    }

    pub fn dimension(&self) -> usize {
        self.curve.base().degree() * self.curve.dy() * (self.bound + 1)
    }

    fn index(&self, k: usize) -> (usize, usize, usize) {
        let b = self.curve.base().degree();
        let l = k % b;
        let rest = k / b;
        (rest / (self.bound + 1), rest % (self.bound + 1), l)
    }

    /// The F_p-combination sum_k c_k h_k.
    pub fn combine(&self, coeffs: &[u32]) -> FFElem {
        let base = self.curve.base();
        let mut nums = vec![vec![base.zero(); self.bound + 1]; self.curve.dy()];
        let z = base.generator();
        for (k, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let (i, j, l) = self.index(k);
            let term = base.scale(&base.pow(&z, l as u128), c);
            nums[i][j] = base.add(&nums[i][j], &term);
        }
        let coords = nums
            .into_iter()
            .map(|n| RatFunc::new(DensePoly::from_coeffs(base, n), self.delta.clone()).unwrap())
            .collect();
        FFElem::from_coords(&self.curve, coords).expect("coordinates match the curve")
    }

    pub fn basis_element(&self, k: usize) -> FFElem {
        let mut e = vec![0u32; self.dimension()];
        e[k] = 1;
        self.combine(&e)
    }

    pub fn basis(&self) -> Vec<FFElem> {
        (0..self.dimension()).map(|k| self.basis_element(k)).collect()
    }
}

/// An unramified place x = c + t, with t' = 1, away from delta, Disc(N_*) and lc(N_*).
#[derive(Clone, Debug)]
pub struct GoodPlace {
    place: Place,
}

impl GoodPlace {
    pub fn place(&self) -> &Place {
        &self.place
    }

    /// [G_P : F_q].
    pub fn degree(&self) -> usize {
        self.place.degree()
    }
}

/// S_(p-1)(f) = sum_k root(f_(pk+p-1)) t^k; needs t' = 1.
pub fn section_series(f: &LaurentSeries, place: &Place) -> Result<LaurentSeries> {
    let g = place.residue();
    if place.tprime_valuation() != 0 || !g.is_one(&place.tprime_lc()) {
        return Err(Error::Precondition("section map needs a place with t' = 1".into()));
    }
    Ok(f.section_p_minus_1())
}

/// First c, scanning F_q and then F_(q^s), s = 2, 3, ..., with
/// (delta Disc lc)(c) != 0 and a root of N_*(c, Y) in the field of c.
pub fn choose_good_place(curve: &Arc<CurveField>, delta: &DensePoly) -> Result<GoodPlace> {
    let base = curve.base();
    let p = base.characteristic() as u64;
    let bad = delta.mul(curve.disc()).mul(curve.lc());
    for s in 1..=64usize {
        let g = FiniteField::canonical(p, base.degree() * s)?;
        let emb = FieldEmbedding::new(base, &g)?;
        let badg = emb.apply_poly(&bad);
        let nst: Vec<DensePoly> = curve.nstar().iter().map(|n| emb.apply_poly(n)).collect();
        let Some(order) = g.order() else { break };
        for idx in 0..order.min(1 << 16) {
            let c = g.element(idx);
            if g.is_zero(&badg.eval(&c)) {
                continue;
            }
            let fiber = DensePoly::from_coeffs(&g, nst.iter().map(|n| n.eval(&c)).collect());
            if let Some(y0) = roots(&fiber, curve.seed()).first() {
                return Ok(GoodPlace { place: Place::regular(curve, &g, &c, y0)? });
            }
        }
    }
    Err(Error::Internal("no good place found".into()))
}

/// Number of Taylor coefficients that certify vanishing for the space.
pub fn system_precision(space: &CandidateSpace, gp: &GoodPlace) -> i64 {
    space.pole_bound / gp.degree() as i64 + 1
}

/// Columns: coordinates of h - S(h) for each basis element h; right-hand
/// side: coordinates of a; rows: t^0 .. t^(prec-1) blockwise over F_p.
pub fn build_global_system(space: &CandidateSpace, gp: &GoodPlace) -> Result<(MatrixFp, Vec<u32>)> {
    build_global_system_at(space, gp, system_precision(space, gp))
}

pub fn build_global_system_at(space: &CandidateSpace, gp: &GoodPlace, prec: i64) -> Result<(MatrixFp, Vec<u32>)> {
    let curve = space.curve();
    let pl = gp.place();
    let g = pl.residue();
    let p = g.characteristic() as i64;
    let work = p * (prec + 1);
    let x = pl.x_to(work);
    let a = pl.a_series_to(work)?;
    let delta_inv = RatFunc::new(DensePoly::one(curve.base()), space.delta.clone())?;
    let dinv = pl.expand_rat(&delta_inv, work);

    let mut xpow = Vec::with_capacity(space.bound + 1);
    xpow.push(dinv);
    for j in 1..=space.bound {
        xpow.push(xpow[j - 1].mul(&x));
    }
    let mut apow = vec![LaurentSeries::one(g, work)];
    for i in 1..curve.dy() {
        apow.push(apow[i - 1].mul(&a));
    }
    let zimg: Vec<_> = {
        let base = curve.base();
        let z = base.generator();
        (0..base.degree()).map(|l| pl.embedding().apply(&base.pow(&z, l as u128))).collect()
    };

    let columns: Vec<Result<Vec<u32>>> = (0..space.dimension())
        .into_par_iter()
        .map(|k| {
            let (i, j, l) = space.index(k);
            let h = apow[i].mul(&xpow[j]).scale(&zimg[l]);
            let col = h.sub(&section_series(&h, pl)?);
            if col.prec() < prec {
                return Err(Error::InsufficientPrecision(format!("column reached t^{}", col.prec())));
            }
            Ok(col.fp_coords(0, prec))
        })
        .collect();
    let columns = columns.into_iter().collect::<Result<Vec<_>>>()?;
    let rows = prec as usize * g.degree();
    let mut m = MatrixFp::zeros(p as u32, rows, columns.len());
    for (c, col) in columns.iter().enumerate() {
        for (r, &v) in col.iter().enumerate() {
            if v != 0 {
                m.set(r, c, v);
            }
        }
    }
    Ok((m, a.fp_coords(0, prec)))
}

/// Denominator and degree bound of level 0. For d_y = 1 this is the
/// rational-case space: the denominator of a and max(deg num a, deg den a).
fn level_zero(curve: &CurveField) -> (DensePoly, usize) {
    let n = curve.nstar();
    if curve.dy() == 1 {
        let a = RatFunc::new(n[0].neg(), n[1].clone()).expect("leading coefficient is nonzero");
        let b = a.num().deg().max(a.den().deg()).max(0) as usize;
        (a.den().clone(), b)
    } else {
        (curve.lc().squarefree_part().expect("lc is nonzero").monic(), curve.dx().max(1) * curve.dy())
    }
}

/// Degree cap C_CAP r_max max(d_x, 1) d_y of the ladder.
pub fn degree_cap(curve: &CurveField) -> usize {
    C_CAP * curve.r_max() * curve.dx().max(1) * curve.dy()
}

/// Candidate space of ladder level `level`.
pub fn ladder_space(curve: &Arc<CurveField>, level: usize) -> CandidateSpace {
    let (delta0, b0) = level_zero(curve);
    let step = (curve.dx().max(1) * curve.dy()) << level;
    let bound = if level == 0 { b0 } else { b0.max(step) };
    let core = curve.lc().monic().mul(&curve.disc().squarefree_part().expect("separable curve").monic());
    let delta = delta0.mul(&core.pow((1u64 << level) - 1));
    CandidateSpace::new(curve, delta, bound)
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub report: IrreducibilityReport,
    pub solution: Option<FFElem>,
    /// Ladder level at which the solution was found.
    pub level: Option<usize>,
}

/// Tries one candidate space; `Ok(None)` when it holds no solution.
pub fn solve_in_space(space: &CandidateSpace) -> Result<Option<FFElem>> {
    let gp = choose_good_place(space.curve(), &space.delta)?;
    let mut prec = system_precision(space, &gp);
    for _ in 0..2 {
        let (m, rhs) = build_global_system_at(space, &gp, prec)?;
        let Some(sol) = solve_fp(&m, &rhs)?.solution else {
            return Ok(None);
        };
        let f = space.combine(&sol);
        if f.is_solution() {
            return Ok(Some(f));
        }
        prec *= 2;
    }
    Ok(None)
}

/// Runs the irreducibility test, then the candidate-space ladder up to the
/// degree cap (or `max_level`).
pub fn solve(curve: &Arc<CurveField>, max_level: Option<usize>) -> Result<SolveOutcome> {
    let report = is_reducible(curve)?;
    if report.verdict == Verdict::Irreducible {
        return Ok(SolveOutcome { report, solution: None, level: None });
    }
    let cap = degree_cap(curve);
    for level in 0..usize::BITS as usize {
        if max_level.is_some_and(|m| level > m) {
            break;
        }
        let space = ladder_space(curve, level);
        if level > 0 && space.bound > cap {
            break;
        }
        if let Some(f) = solve_in_space(&space)? {
            return Ok(SolveOutcome { report, solution: Some(f), level: Some(level) });
        }
    }
    Err(Error::IncompleteSearch { max_degree: cap })
}

/// A solution, or `None` when N_*^p(d) is irreducible.
pub fn solve_priccati(curve: &Arc<CurveField>) -> Result<Option<FFElem>> {
    Ok(solve(curve, None)?.solution)
}

/// Checks nu(f) >= min(nu(a), nu(t') - 1) at every critical place.
pub fn valuation_bound_check(f: &FFElem) -> Result<bool> {
    if !f.is_solution() {
        return Err(Error::Precondition("not a solution".into()));
    }
    for pl in critical_places(f.curve())? {
        let tau = pl.tprime_valuation();
        let bound = pl.a_valuation().map_or(tau - 1, |v| v.min(tau - 1));
        if !pl.expand(f, bound)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
