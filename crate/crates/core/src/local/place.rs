use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::puiseux::{expand_branches, BranchRecipe};
use super::series::{hensel_root, LaurentSeries};
use crate::algebra::{roots, DensePoly, FieldEmbedding, FiniteField, FqElem, RatFunc};
use crate::error::{Error, Result};
use crate::function_field::{CurveField, FFElem};

/// A point of P^1 over F_q: a monic irreducible P(x) or infinity.
#[derive(Clone, PartialEq, Eq)]
pub enum Center {
    Finite(DensePoly),
    Infinity,
}

impl Center {
    pub fn degree(&self) -> usize {
        match self {
            Center::Finite(p) => p.deg() as usize,
            Center::Infinity => 1,
        }
    }
}

impl fmt::Display for Center {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Center::Finite(p) => write!(f, "{}", p.format("x")),
            Center::Infinity => write!(f, "infinity"),
        }
    }
}

impl fmt::Debug for Center {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A place of K_N with its uniformizer t: x = x0 + lambda t^e at a finite
/// center, x = 1/(lambda t^e) at infinity.
#[derive(Clone)]
pub struct Place {
    curve: Arc<CurveField>,
    center: Center,
    residue: Arc<FiniteField>,
    embedding: FieldEmbedding,
    ram_index: usize,
    lambda: FqElem,
    x0: Option<FqElem>,
    head: BTreeMap<i64, FqElem>,
    coeff: FqElem,
    shift: i64,
    tail: Option<Vec<DensePoly>>,
    a_val: Option<i64>,
    pub x_series: LaurentSeries,
    pub a_series: LaurentSeries,
    pub tprime_series: LaurentSeries,
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Place(center {}, e = {}, residue degree {})", self.center, self.ram_index, self.residue.degree())
    }
}

/// Default working precision 4 (p + d_x d_y).
pub fn default_precision(curve: &CurveField) -> i64 {
    4 * (curve.p() as i64 + (curve.dx() * curve.dy()) as i64)
}

/// All places of K_N above `center`.
pub fn places_above(curve: &Arc<CurveField>, center: &Center) -> Result<Vec<Place>> {
    let base = curve.base();
    let p = base.characteristic() as u64;
    let (to_g, x0, poly) = match center {
        Center::Finite(pc) => {
            if !pc.is_monic() || !pc.is_irreducible() {
                return Err(Error::Precondition(format!("center {pc} is not monic irreducible")));
            }
            let g = FiniteField::canonical(p, base.degree() * pc.deg() as usize)?;
            let emb = FieldEmbedding::new(base, &g)?;
            let x0 = roots(&emb.apply_poly(pc), curve.seed())[0].clone();
            let poly: Vec<DensePoly> = curve.nstar().iter().map(|n| emb.apply_poly(n).taylor_shift(&x0)).collect();
            (emb, Some(x0), poly)
        }
        Center::Infinity => {
            let dx = curve.dx();
            let poly: Vec<DensePoly> = curve
                .nstar()
                .iter()
                .map(|n| {
                    let mut c = n.coeffs().to_vec();
                    c.resize(dx + 1, base.zero());
                    c.reverse();
                    DensePoly::from_coeffs(base, c)
                })
                .collect();
            (FieldEmbedding::identity(base), None, poly)
        }
    };
    let label = center.to_string();
    let recipes = expand_branches(&poly, curve.seed(), &label)?;
    recipes.into_iter().map(|r| Place::from_recipe(curve, center.clone(), &to_g, x0.as_ref(), r)).collect()
}

/// Minimal polynomial over F_q of an element c of an extension.
pub fn minimal_polynomial(emb: &FieldEmbedding, c: &FqElem) -> Result<DensePoly> {
    let g = emb.dst();
    let base = emb.src();
    let mut conj = vec![c.clone()];
    loop {
        let next = (0..base.degree()).fold(conj.last().unwrap().clone(), |acc, _| g.frobenius(&acc));
        if next == conj[0] {
            break;
        }
        conj.push(next);
    }
    let mut m = DensePoly::one(g);
    for r in &conj {
        m = m.mul(&DensePoly::linear(g, r));
    }
    let coeffs = m
        .coeffs()
        .iter()
        .map(|c| emb.preimage(c).ok_or_else(|| Error::Internal("minimal polynomial not over F_q".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok(DensePoly::from_coeffs(base, coeffs))
}

impl Place {
    fn from_recipe(
        curve: &Arc<CurveField>,
        center: Center,
        to_g: &FieldEmbedding,
        x0: Option<&FqElem>,
        r: BranchRecipe,
    ) -> Result<Self> {
        let embedding = to_g.then(&r.embedding);
        let x0 = x0.map(|c| r.embedding.apply(c));
        Self::assemble(curve, center, r.field, embedding, r.e, r.lambda, x0, r.head, r.coeff, r.shift, r.tail)
    }

    /// Unramified place x = c + t through the simple root y0 of N_*(c, Y),
    /// both in `g`; requires lc(c) != 0 and a simple root.
    pub fn regular(curve: &Arc<CurveField>, g: &Arc<FiniteField>, c: &FqElem, y0: &FqElem) -> Result<Self> {
        let emb = FieldEmbedding::new(curve.base(), g)?;
        let center = Center::Finite(minimal_polynomial(&emb, c)?);
        let shifted: Vec<DensePoly> = curve.nstar().iter().map(|n| emb.apply_poly(n).taylor_shift(c)).collect();
        // tail(T, Y) = N_*(c + T, y0 + Y)
        let lin = DensePoly::from_coeffs(g, vec![y0.clone(), g.one()]);
        let mut tail_full = vec![DensePoly::zero(g)];
        let mut ypow = vec![DensePoly::one(g)];
        for (i, n) in shifted.iter().enumerate() {
            if i > 0 {
                ypow = poly_mul_y(&ypow, &lin);
            }
            for (k, yc) in ypow.iter().enumerate() {
                if tail_full.len() <= k {
                    tail_full.push(DensePoly::zero(g));
                }
                let add = n.scale(&yc.coeff(0));
                tail_full[k] = tail_full[k].add(&add);
            }
        }
        if !g.is_zero(&tail_full[0].coeff(0)) || g.is_zero(&tail_full[1].coeff(0)) {
            return Err(Error::Precondition("regular place needs a simple root of N_*(c, Y)".into()));
        }
        let mut head = BTreeMap::new();
        if !g.is_zero(y0) {
            head.insert(0, y0.clone());
        }
        let tail = if tail_full[0].is_zero() { None } else { Some(tail_full) };
        Self::assemble(curve, center, g.clone(), emb, 1, g.one(), Some(c.clone()), head, g.one(), 0, tail)
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        curve: &Arc<CurveField>,
        center: Center,
        residue: Arc<FiniteField>,
        embedding: FieldEmbedding,
        e: usize,
        lambda: FqElem,
        x0: Option<FqElem>,
        head: BTreeMap<i64, FqElem>,
        coeff: FqElem,
        shift: i64,
        tail: Option<Vec<DensePoly>>,
    ) -> Result<Self> {
        let prec = default_precision(curve);
        let g = residue.clone();
        let zero = LaurentSeries::zero(&g, prec);
        let mut place = Place {
            curve: curve.clone(),
            center,
            residue,
            embedding,
            ram_index: e,
            lambda,
            x0,
            head,
            coeff,
            shift,
            tail,
            a_val: None,
            x_series: zero.clone(),
            a_series: zero.clone(),
            tprime_series: zero,
        };
        let p = g.characteristic() as usize;
        if e.is_multiple_of(p) {
            return Err(Error::WildRamification { center: place.center.to_string(), ramification: e });
        }
        // a has valuation at most d_x (its zero divisor has degree d_x) unless a = 0
        let probe = place.a_series_to(prec.max(curve.dx() as i64 + 2) + place.head_low().min(0))?;
        place.a_val = probe.valuation();
        place.a_series = place.a_series_to(prec)?;
        place.x_series = place.x_to(prec);
        place.tprime_series = place.tprime_to(prec);
        Ok(place)
    }

    fn head_low(&self) -> i64 {
        let h = self.head.keys().next().copied().unwrap_or(0);
        h.min(self.shift)
    }

    pub fn curve(&self) -> &Arc<CurveField> {
        &self.curve
    }

    pub fn center(&self) -> &Center {
        &self.center
    }

    /// Residue field G_P.
    pub fn residue(&self) -> &Arc<FiniteField> {
        &self.residue
    }

    /// Embedding of F_q into G_P.
    pub fn embedding(&self) -> &FieldEmbedding {
        &self.embedding
    }

    /// Ramification index e(P'|P).
    pub fn ram_index(&self) -> usize {
        self.ram_index
    }

    /// [G_P : F_q].
    pub fn degree(&self) -> usize {
        self.residue.degree() / self.curve.base().degree()
    }

    /// [G_P : residue field of the center].
    pub fn relative_degree(&self) -> usize {
        self.degree() / self.center.degree()
    }

    pub fn is_infinite(&self) -> bool {
        self.center == Center::Infinity
    }

    /// e_P = 1 - nu(t').
    pub fn e_p(&self) -> i64 {
        1 - self.tprime_valuation()
    }

    pub fn tprime_valuation(&self) -> i64 {
        match self.center {
            Center::Finite(_) => 1 - self.ram_index as i64,
            Center::Infinity => self.ram_index as i64 + 1,
        }
    }

    /// nu(a); `None` when a = 0.
    pub fn a_valuation(&self) -> Option<i64> {
        self.a_val
    }

    /// eta = nu(t') - nu(a) (negative infinity when a = 0).
    pub fn eta(&self) -> i64 {
        match self.a_val {
            Some(v) => self.tprime_valuation() - v,
            None => i64::MIN,
        }
    }

    pub fn x_to(&self, prec: i64) -> LaurentSeries {
        let g = &self.residue;
        let e = self.ram_index as i64;
        match &self.x0 {
            Some(x0) => LaurentSeries::constant(g, x0.clone(), prec).add(&LaurentSeries::monomial(
                g,
                self.lambda.clone(),
                e,
                prec,
            )),
            None => LaurentSeries::monomial(g, g.inv(&self.lambda).unwrap(), -e, prec),
        }
    }

    /// Leading coefficient of t'.
    pub fn tprime_lc(&self) -> FqElem {
        let g = &self.residue;
        let e = g.from_int(self.ram_index as i64);
        match &self.x0 {
            Some(_) => g.inv(&g.mul(&e, &self.lambda)).unwrap(),
            None => g.neg(&g.div(&self.lambda, &e).unwrap()),
        }
    }

    /// t' = dt/dx, an exact monomial for these uniformizers.
    pub fn tprime_to(&self, prec: i64) -> LaurentSeries {
        LaurentSeries::monomial(&self.residue, self.tprime_lc(), self.tprime_valuation(), prec)
    }

    /// Expansion of a to absolute precision `prec`.
    pub fn a_series_to(&self, prec: i64) -> Result<LaurentSeries> {
        let g = &self.residue;
        let mut s = LaurentSeries::zero(g, prec);
        for (&k, c) in &self.head {
            if k < prec {
                s = s.add(&LaurentSeries::monomial(g, c.clone(), k, prec));
            }
        }
        if let Some(tail) = &self.tail {
            let need = (prec - self.shift).max(1);
            let y = hensel_root(tail, &g.zero(), need)?;
            s = s.add(&y.scale(&self.coeff).shift(self.shift));
        }
        Ok(s)
    }

    /// Exact Laurent polynomial of a polynomial in x, as (series, valuation).
    fn poly_at(&self, poly: &DensePoly, rel: i64) -> (LaurentSeries, Option<i64>) {
        let g = &self.residue;
        let mapped = self.embedding.apply_poly(poly);
        let e = self.ram_index as i64;
        let mut terms: BTreeMap<i64, FqElem> = BTreeMap::new();
        match &self.x0 {
            Some(x0) => {
                let shifted = mapped.taylor_shift(x0);
                let mut lam = g.one();
                for (k, c) in shifted.coeffs().iter().enumerate() {
                    if !g.is_zero(c) {
                        terms.insert(e * k as i64, g.mul(c, &lam));
                    }
                    lam = g.mul(&lam, &self.lambda);
                }
            }
            None => {
                let linv = g.inv(&self.lambda).unwrap();
                let mut lam = g.one();
                for (k, c) in mapped.coeffs().iter().enumerate() {
                    if !g.is_zero(c) {
                        terms.insert(-e * k as i64, g.mul(c, &lam));
                    }
                    lam = g.mul(&lam, &linv);
                }
            }
        }
        let Some(&low) = terms.keys().next() else {
            return (LaurentSeries::zero(g, rel), None);
        };
        let prec = low + rel;
        let mut coeffs = vec![g.zero(); rel.max(0) as usize];
        for (k, c) in terms {
            let idx = k - low;
            if idx < rel {
                coeffs[idx as usize] = c;
            }
        }
        (LaurentSeries::new(g, low, coeffs, prec), Some(low))
    }

    /// Valuation of a rational function at this place.
    pub fn rat_valuation(&self, r: &RatFunc) -> Option<i64> {
        if r.is_zero() {
            return None;
        }
        let e = self.ram_index as i64;
        match &self.center {
            Center::Finite(pc) => r.valuation_at(pc).map(|v| v * e),
            Center::Infinity => r.valuation_at_infinity().map(|v| v * e),
        }
    }

    /// Expansion of a rational function with `rel` known coefficients.
    pub fn expand_rat_rel(&self, r: &RatFunc, rel: i64) -> LaurentSeries {
        let rel = rel.max(1);
        let (num, vn) = self.poly_at(r.num(), rel);
        let (den, _) = self.poly_at(r.den(), rel);
        match vn {
            None => num,
            Some(_) => num.div(&den).expect("denominator is a nonzero polynomial"),
        }
    }

    /// Expansion of a rational function to absolute precision `prec`.
    pub fn expand_rat(&self, r: &RatFunc, prec: i64) -> LaurentSeries {
        match self.rat_valuation(r) {
            None => LaurentSeries::zero(&self.residue, prec),
            Some(v) => self.expand_rat_rel(r, prec - v).truncate(prec),
        }
    }

    /// Expansion of f in K_N to absolute precision `prec`.
    pub fn expand(&self, f: &FFElem, prec: i64) -> Result<LaurentSeries> {
        let g = &self.residue;
        let coords = f.coords();
        let va = self.a_val;
        let mut min_term: Option<i64> = None;
        for (i, c) in coords.iter().enumerate() {
            if let Some(v) = self.rat_valuation(c) {
                let term = match (i, va) {
                    (0, _) => v,
                    (_, Some(a)) => v + i as i64 * a,
                    (_, None) => continue,
                };
                min_term = Some(min_term.map_or(term, |m: i64| m.min(term)));
            }
        }
        let Some(min_term) = min_term else {
            return Ok(LaurentSeries::zero(g, prec));
        };
        let rel = (prec - min_term).max(1);
        let a = match va {
            Some(v) => self.a_series_to(v + rel)?,
            None => LaurentSeries::zero(g, prec),
        };
        let mut acc: Option<LaurentSeries> = None;
        let mut apow: Option<LaurentSeries> = None;
        for (i, c) in coords.iter().enumerate() {
            if i > 0 {
                apow = Some(match apow {
                    None => a.clone(),
                    Some(s) => s.mul(&a),
                });
            }
            if c.is_zero() {
                continue;
            }
            let cs = self.expand_rat_rel(c, rel);
            let term = match &apow {
                None => cs,
                Some(s) => cs.mul(s),
            };
            acc = Some(match acc {
                None => term,
                Some(x) => x.add(&term),
            });
        }
        let out = acc.unwrap_or_else(|| LaurentSeries::zero(g, prec));
        if out.prec() < prec {
            return Err(Error::InsufficientPrecision(format!(
                "expansion reached t^{} of requested t^{prec}",
                out.prec()
            )));
        }
        Ok(out.truncate(prec))
    }
}

/// (sum_k c_k Y^k) * lin(Y) for polynomials in Y with constant coefficients.
fn poly_mul_y(a: &[DensePoly], lin: &DensePoly) -> Vec<DensePoly> {
    let g = lin.field();
    let mut out = vec![DensePoly::zero(g); a.len() + lin.coeffs().len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in lin.coeffs().iter().enumerate() {
            out[i + j] = out[i + j].add(&x.scale(y));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn curve(p: u64, rows: &[&[i64]]) -> Arc<CurveField> {
        let f = FiniteField::prime(p).unwrap();
        CurveField::new(&f, rows.iter().map(|r| DensePoly::from_ints(&f, r)).collect(), 0).unwrap()
    }

    fn finite(c: &Arc<CurveField>, ints: &[i64]) -> Center {
        Center::Finite(DensePoly::from_ints(c.base(), ints))
    }

    /// sum_i N_i(x(t)) a(t)^i, which must vanish to the working precision.
    fn residual(pl: &Place, prec: i64) -> LaurentSeries {
        let g = pl.residue();
        let x = pl.x_to(prec + 40);
        let a = pl.a_series_to(prec + 40).unwrap();
        let mut acc = LaurentSeries::zero(g, prec);
        let mut apow = LaurentSeries::one(g, prec + 40);
        for n in pl.curve().nstar() {
            let ni = x.eval_poly(&pl.embedding().apply_poly(n), prec + 40);
            acc = acc.add(&ni.mul(&apow));
            apow = apow.mul(&a);
        }
        acc.truncate(prec)
    }

    #[test]
    fn linear_curve_has_identity_uniformizer() {
        let c = curve(5, &[&[0, -1], &[1]]);
        let pls = places_above(&c, &finite(&c, &[0, 1])).unwrap();
        assert_eq!(pls.len(), 1);
        assert_eq!(pls[0].ram_index(), 1);
        assert_eq!(pls[0].a_valuation(), Some(1));
        assert!(residual(&pls[0], 20).is_zero());
    }

    #[test]
    fn square_root_ramifies_at_zero_and_infinity() {
        let c = curve(5, &[&[0, -1], &[], &[1]]);
        for center in [finite(&c, &[0, 1]), Center::Infinity] {
            let pls = places_above(&c, &center).unwrap();
            assert_eq!(pls.len(), 1);
            assert_eq!(pls[0].ram_index(), 2);
            assert!(residual(&pls[0], 20).is_zero());
        }
        let pls = places_above(&c, &finite(&c, &[-1, 1])).unwrap();
        assert_eq!(pls.len(), 2);
        let pls = places_above(&c, &finite(&c, &[-2, 1])).unwrap();
        assert_eq!(pls.len(), 1);
        assert_eq!(pls[0].relative_degree(), 2);
    }

    #[test]
    fn fundamental_identity_and_expansion_homomorphism() {
        let c = curve(7, &[&[1, 0, 2], &[0, 3], &[1, 1], &[0, 0, 1]]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let centers = [finite(&c, &[0, 1]), finite(&c, &[3, 1]), finite(&c, &[1, 0, 1]), Center::Infinity];
        for center in centers {
            let pls = places_above(&c, &center).unwrap();
            let total: usize = pls.iter().map(|p| p.ram_index() * p.relative_degree()).sum();
            assert_eq!(total, c.dy(), "above {center}");
            for pl in &pls {
                assert!(residual(pl, 15).is_zero(), "{pl:?}");
                let u = FFElem::random(&c, 2, 1, &mut rng);
                let v = FFElem::random(&c, 2, 1, &mut rng);
                let lhs = pl.expand(&u.mul(&v), 10).unwrap();
                let rhs = pl.expand(&u, 30).unwrap().mul(&pl.expand(&v, 30).unwrap()).truncate(10);
                assert_eq!(lhs, rhs);
                assert_eq!(pl.expand(&FFElem::a(&c), 10).unwrap(), pl.a_series_to(10).unwrap());
            }
        }
    }

    #[test]
    fn regular_place_through_simple_root() {
        let c = curve(5, &[&[0, -1], &[], &[1]]);
        let g = c.base().clone();
        // x = 4 = 2^2, so y0 = 2
        let pl = Place::regular(&c, &g, &g.from_int(4), &g.from_int(2)).unwrap();
        assert_eq!(pl.center(), &finite(&c, &[-4, 1]));
        assert_eq!(pl.a_valuation(), Some(0));
        assert!(residual(&pl, 20).is_zero());
    }
}
