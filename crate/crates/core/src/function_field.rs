//! The function field K_N = F_q(x)[a] with N_*(x, a) = 0.
//!
//! Elements are coordinate vectors over F_q(x) on the basis 1, a, ..., a^(d_y-1).
//! The derivation extends d/dx by implicit differentiation, and the p-Riccati
//! map is f -> f^(p-1) + f^p with f^(p-1) obtained by iterated derivation.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::algebra::{
    poly_factor, roots, solve_fp, solve_fqx, DensePoly, FieldEmbedding, FiniteField, MatrixFp, RatFunc,
};
use crate::error::{Error, Result};
use crate::local::series::{hensel_root, LaurentSeries};

/// Polynomial in Y with coefficients in F_q(x), lowest degree first, trimmed.
type YPoly = Vec<RatFunc>;

pub struct CurveField {
    base: Arc<FiniteField>,
    nstar: Vec<DensePoly>,
    dx: usize,
    dy: usize,
    lc: DensePoly,
    disc: DensePoly,
    /// Coefficients of N_*/lc in Y^0 .. Y^(d_y-1).
    monic: Vec<RatFunc>,
    /// Coordinates of a'.
    aprime: Vec<RatFunc>,
    /// Coordinates of a^(p i) for i < d_y.
    frob_basis: Vec<Vec<RatFunc>>,
    seed: u64,
}

impl fmt::Debug for CurveField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CurveField({} over {:?})", self.nstar_string(), self.base)
    }
}

impl CurveField {
    /// Builds K_N from the Y-coefficients of N_*. Rejects N_* that are
    /// constant in Y, inseparable, or reducible over F_q(x).
    pub fn new(base: &Arc<FiniteField>, nstar: Vec<DensePoly>, seed: u64) -> Result<Arc<Self>> {
        let mut nstar = nstar;
        while nstar.last().is_some_and(|c| c.is_zero()) {
            nstar.pop();
        }
        if nstar.iter().any(|c| **c.field() != **base) {
            return Err(Error::FieldMismatch);
        }
        if nstar.len() < 2 {
            return Err(Error::ConstantInY);
        }
        let dy = nstar.len() - 1;
        let dx = nstar.iter().map(|c| c.deg().max(0) as usize).max().unwrap();
        let lc = nstar[dy].clone();
        let lc_r = RatFunc::from_poly(lc.clone());
        let monic: Vec<RatFunc> =
            nstar[..dy].iter().map(|c| RatFunc::from_poly(c.clone()).div(&lc_r).unwrap()).collect();
        let disc = discriminant(base, &nstar)?;
        if disc.is_zero() {
            return Err(Error::NotSeparable);
        }
        let mut curve = CurveField {
            base: base.clone(),
            nstar,
            dx,
            dy,
            lc,
            disc,
            monic,
            aprime: Vec::new(),
            frob_basis: Vec::new(),
            seed,
        };
        curve.check_irreducible()?;
        curve.aprime = curve.compute_aprime()?;
        let p = base.characteristic() as u64;
        let a_p = curve.pow_coords(&curve.a_coords(), p);
        let mut frob = Vec::with_capacity(dy);
        let mut cur = curve.unit_coords(0);
        for _ in 0..dy {
            frob.push(cur.clone());
            cur = curve.mul_coords(&cur, &a_p);
        }
        curve.frob_basis = frob;
        Ok(Arc::new(curve))
    }

    /// K = F_q(x) viewed as K_N with N_* = Y - g, so a = g.
    pub fn rational(g: &RatFunc, seed: u64) -> Result<Arc<Self>> {
        let base = g.field().clone();
        Self::new(&base, vec![g.num().neg(), g.den().clone()], seed)
    }

    pub fn base(&self) -> &Arc<FiniteField> {
        &self.base
    }

    pub fn p(&self) -> u32 {
        self.base.characteristic()
    }

    pub fn nstar(&self) -> &[DensePoly] {
        &self.nstar
    }

    pub fn dx(&self) -> usize {
        self.dx
    }

    pub fn dy(&self) -> usize {
        self.dy
    }

    pub fn lc(&self) -> &DensePoly {
        &self.lc
    }

    /// Res_Y(N_*, dN_*/dY) / lc, made monic.
    pub fn disc(&self) -> &DensePoly {
        &self.disc
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// r_max = (d_x - 1)(d_y - 1) + 1, saturating at zero for d_x = 0.
    pub fn r_max(&self) -> usize {
        self.dx.saturating_sub(1) * (self.dy - 1) + 1
    }

    pub fn nstar_string(&self) -> String {
        let mut terms = Vec::new();
        for (i, c) in self.nstar.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = c.format("x");
            let nterms = c.coeffs().iter().filter(|e| !self.base.is_zero(e)).count();
            let mono = match i {
                0 => String::new(),
                1 => "Y".into(),
                _ => format!("Y^{i}"),
            };
            terms.push(if i == 0 {
                if nterms > 1 {
                    format!("({cs})")
                } else {
                    cs
                }
            } else if c.is_one() {
                mono
            } else if nterms > 1 || self.base.is_compound(&c.lc()) {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            });
        }
        terms.join(" + ")
    }

    fn unit_coords(&self, i: usize) -> Vec<RatFunc> {
        let mut v = vec![RatFunc::zero(&self.base); self.dy];
        v[i] = RatFunc::one(&self.base);
        v
    }

    fn a_coords(&self) -> Vec<RatFunc> {
        if self.dy == 1 {
            vec![self.monic[0].neg()]
        } else {
            self.unit_coords(1)
        }
    }

    /// Reduces a polynomial in a of any degree modulo N_*.
    fn reduce(&self, mut c: Vec<RatFunc>) -> Vec<RatFunc> {
        let dy = self.dy;
        for k in (dy..c.len()).rev() {
            if c[k].is_zero() {
                continue;
            }
            let top = c[k].clone();
            for i in 0..dy {
                if !self.monic[i].is_zero() {
                    c[k - dy + i] = c[k - dy + i].sub(&top.mul(&self.monic[i]));
                }
            }
        }
        c.resize(dy, RatFunc::zero(&self.base));
        c
    }

    fn mul_coords(&self, a: &[RatFunc], b: &[RatFunc]) -> Vec<RatFunc> {
        let mut prod = vec![RatFunc::zero(&self.base); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] = prod[i + j].add(&x.mul(y));
                }
            }
        }
        self.reduce(prod)
    }

    fn pow_coords(&self, a: &[RatFunc], mut e: u64) -> Vec<RatFunc> {
        let mut acc = self.unit_coords(0);
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_coords(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_coords(&base, &base);
            }
        }
        acc
    }

    /// Solves f * X = rhs in K_N through the multiplication matrix of f.
    fn solve_mul(&self, f: &[RatFunc], rhs: &[RatFunc]) -> Result<Vec<RatFunc>> {
        let dy = self.dy;
        let mut cols = Vec::with_capacity(dy);
        let mut cur = f.to_vec();
        let a = self.a_coords();
        for j in 0..dy {
            if j > 0 {
                cur = self.mul_coords(&cur, &a);
            }
            cols.push(cur.clone());
        }
        let rows: Vec<Vec<RatFunc>> = (0..dy).map(|i| (0..dy).map(|j| cols[j][i].clone()).collect()).collect();
        let sol = solve_fqx(&self.base, &rows, dy, Some(rhs))?;
        match sol.solution {
            Some(x) if sol.kernel.is_empty() => Ok(x),
            _ => Err(Error::DivisionByZero),
        }
    }

    /// Evaluates a polynomial in Y with F_q[x] coefficients at a.
    fn eval_at_a(&self, coeffs: &[DensePoly]) -> Vec<RatFunc> {
        let a = self.a_coords();
        let mut acc = vec![RatFunc::zero(&self.base); self.dy];
        for c in coeffs.iter().rev() {
            acc = self.mul_coords(&acc, &a);
            acc[0] = acc[0].add(&RatFunc::from_poly(c.clone()));
        }
        acc
    }

    fn compute_aprime(&self) -> Result<Vec<RatFunc>> {
        let nx: Vec<DensePoly> = self.nstar.iter().map(|c| c.derivative()).collect();
        let ny: Vec<DensePoly> = (1..=self.dy).map(|i| self.nstar[i].scale(&self.base.from_int(i as i64))).collect();
        let num = self.eval_at_a(&nx);
        let den = self.eval_at_a(&ny);
        let q = self.solve_mul(&den, &num)?;
        Ok(q.iter().map(|c| c.neg()).collect())
    }

    /// Finds F_p-linear relations sum alpha z^l x^j a^i = 0 with i < d_y via a
    /// Hensel-lifted branch at a point where lc and disc do not vanish. A
    /// nonzero relation exists exactly when N_* is reducible over F_q(x).
    fn check_irreducible(&self) -> Result<()> {
        if self.dy == 1 {
            return Ok(());
        }
        if self.dx == 0 {
            let consts: Vec<_> = self.nstar.iter().map(|c| c.coeff(0)).collect();
            let poly = DensePoly::from_coeffs(&self.base, consts);
            return if poly.is_irreducible() { Ok(()) } else { Err(Error::NotIrreducible) };
        }
        let (g, c) = self.find_regular_point()?;
        let emb = FieldEmbedding::new(&self.base, &g)?;
        let at_c: Vec<DensePoly> = self.nstar.iter().map(|n| emb.apply_poly(n).taylor_shift(&c)).collect();
        let fiber = DensePoly::from_coeffs(&g, at_c.iter().map(|n| n.coeff(0)).collect());
        let (psi, _) = poly_factor(&fiber, self.seed)?.into_iter().min_by_key(|(f, _)| f.deg()).unwrap();
        let g1 = FiniteField::canonical(g.characteristic() as u64, g.degree() * psi.deg() as usize)?;
        let e1 = FieldEmbedding::new(&g, &g1)?;
        let y0 = roots(&e1.apply_poly(&psi), self.seed)[0].clone();
        let f1: Vec<DensePoly> = at_c.iter().map(|n| e1.apply_poly(n)).collect();
        let m = (2 * self.dx * self.dy + 1) as i64;
        let y = hensel_root(&f1, &y0, m)?;
        let base_to_g1 = emb.then(&e1);
        let c1 = e1.apply(&c);
        let xser = LaurentSeries::from_poly(&DensePoly::from_coeffs(&g1, vec![c1, g1.one()]), 0, m);
        let b = self.base.degree();
        let mut columns = Vec::new();
        let mut ypow = LaurentSeries::one(&g1, m);
        for _ in 0..self.dy {
            let mut xpow = ypow.clone();
            for _ in 0..=self.dx {
                for l in 0..b {
                    let zl = base_to_g1.apply(&self.base.pow(&self.base.generator(), l as u128));
                    let zl = if b == 1 { g1.one() } else { zl };
                    columns.push(xpow.scale(&zl).fp_coords(0, m));
                }
                xpow = xpow.mul(&xser);
            }
            ypow = ypow.mul(&y);
        }
        let nrows = columns[0].len();
        let mut mat = MatrixFp::zeros(g1.characteristic(), nrows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                mat.set(i, j, v);
            }
        }
        let sol = solve_fp(&mat, &vec![0; nrows])?;
        if sol.kernel.is_empty() {
            Ok(())
        } else {
            Err(Error::NotIrreducible)
        }
    }

    /// First point c (scanning F_q, then F_(q^s)) with lc(c) disc(c) != 0.
    pub(crate) fn find_regular_point(&self) -> Result<(Arc<FiniteField>, crate::algebra::FqElem)> {
        let bad = self.lc.mul(&self.disc);
        let p = self.base.characteristic() as u64;
        for s in 1..=16usize {
            let g = FiniteField::canonical(p, self.base.degree() * s)?;
            let emb = FieldEmbedding::new(&self.base, &g)?;
            let badg = emb.apply_poly(&bad);
            let Some(order) = g.order() else { break };
            for idx in 0..order.min(1 << 20) {
                let c = g.element(idx);
                if !g.is_zero(&badg.eval(&c)) {
                    return Ok((g, c));
                }
            }
        }
        Err(Error::Internal("no regular point found".into()))
    }
}

fn ypoly_trim(mut v: YPoly) -> YPoly {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn ypoly_rem(a: &YPoly, b: &YPoly) -> YPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let inv = b[db].inv().unwrap();
    while r.len() > db {
        let k = r.len() - 1;
        let c = r[k].mul(&inv);
        for (i, bc) in b.iter().enumerate() {
            r[k - db + i] = r[k - db + i].sub(&c.mul(bc));
        }
        r = ypoly_trim(r);
        if r.len() == k + 1 {
            r.pop();
        }
    }
    ypoly_trim(r)
}

/// Res_Y(a, b) by the Euclidean remainder sequence over F_q(x).
fn resultant(field: &Arc<FiniteField>, a: YPoly, b: YPoly) -> RatFunc {
    let (mut a, mut b) = (ypoly_trim(a), ypoly_trim(b));
    if a.is_empty() || b.is_empty() {
        return RatFunc::zero(field);
    }
    let mut acc = RatFunc::one(field);
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        if db == 0 {
            return acc.mul(&b[0].pow(da as u64));
        }
        let r = ypoly_rem(&a, &b);
        if r.is_empty() {
            return RatFunc::zero(field);
        }
        let dr = r.len() - 1;
        if (da * db) % 2 == 1 {
            acc = acc.neg();
        }
        acc = acc.mul(&b[db].pow((da - dr) as u64));
        a = b;
        b = r;
    }
}

fn discriminant(field: &Arc<FiniteField>, nstar: &[DensePoly]) -> Result<DensePoly> {
    let dy = nstar.len() - 1;
    let n: YPoly = nstar.iter().map(|c| RatFunc::from_poly(c.clone())).collect();
    let ny: YPoly = (1..=dy).map(|i| RatFunc::from_poly(nstar[i].scale(&field.from_int(i as i64)))).collect();
    let res = resultant(field, n, ny);
    if res.is_zero() {
        return Ok(DensePoly::zero(field));
    }
    let q = res.div(&RatFunc::from_poly(nstar[dy].clone())).unwrap();
    if !q.is_poly() {
        return Err(Error::Internal("discriminant is not a polynomial".into()));
    }
    Ok(q.num().monic())
}

/// Element of K_N.
#[derive(Clone)]
pub struct FFElem {
    curve: Arc<CurveField>,
    coords: Vec<RatFunc>,
}

impl PartialEq for FFElem {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl Eq for FFElem {}

impl fmt::Debug for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = c.format("x");
            let simple = c.is_poly()
                && c.num().coeffs().iter().filter(|e| !c.field().is_zero(e)).count() == 1
                && !c.field().is_compound(&c.num().lc());
            terms.push(match i {
                0 => cs,
                _ => {
                    let mono = if i == 1 { "a".to_string() } else { format!("a^{i}") };
                    if c.is_one() {
                        mono
                    } else if simple {
                        format!("{cs}*{mono}")
                    } else {
                        format!("({cs})*{mono}")
                    }
                }
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl FFElem {
    pub fn from_coords(curve: &Arc<CurveField>, coords: Vec<RatFunc>) -> Result<Self> {
        if coords.len() != curve.dy {
            return Err(Error::DimensionMismatch(format!("expected {} coordinates, got {}", curve.dy, coords.len())));
        }
        Ok(FFElem { curve: curve.clone(), coords })
    }

    pub fn zero(curve: &Arc<CurveField>) -> Self {
        FFElem { curve: curve.clone(), coords: vec![RatFunc::zero(&curve.base); curve.dy] }
    }

    pub fn one(curve: &Arc<CurveField>) -> Self {
        Self::from_rat(curve, RatFunc::one(&curve.base))
    }

    pub fn from_rat(curve: &Arc<CurveField>, r: RatFunc) -> Self {
        let mut e = Self::zero(curve);
        e.coords[0] = r;
        e
    }

    pub fn x(curve: &Arc<CurveField>) -> Self {
        Self::from_rat(curve, RatFunc::x(&curve.base))
    }

    /// The generator a (with a^p = y_N).
    pub fn a(curve: &Arc<CurveField>) -> Self {
        FFElem { curve: curve.clone(), coords: curve.a_coords() }
    }

    /// y_N = a^p.
    pub fn y_n(curve: &Arc<CurveField>) -> Self {
        Self::a(curve).frobenius()
    }

    pub fn curve(&self) -> &Arc<CurveField> {
        &self.curve
    }

    pub fn coords(&self) -> &[RatFunc] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        FFElem { curve: self.curve.clone(), coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        FFElem { curve: self.curve.clone(), coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn neg(&self) -> Self {
        FFElem { curve: self.curve.clone(), coords: self.coords.iter().map(|c| c.neg()).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        FFElem { curve: self.curve.clone(), coords: self.curve.mul_coords(&self.coords, &o.coords) }
    }

    pub fn scale(&self, r: &RatFunc) -> Self {
        FFElem { curve: self.curve.clone(), coords: self.coords.iter().map(|c| c.mul(r)).collect() }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let c = self.curve.base.from_int(k);
        FFElem { curve: self.curve.clone(), coords: self.coords.iter().map(|r| r.scale(&c)).collect() }
    }

    pub fn pow(&self, e: u64) -> Self {
        FFElem { curve: self.curve.clone(), coords: self.curve.pow_coords(&self.coords, e) }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInput("inverse of zero"));
        }
        if self.curve.dy == 1 {
            return Ok(Self::from_rat(&self.curve, self.coords[0].inv().unwrap()));
        }
        let one = self.curve.unit_coords(0);
        Ok(FFElem { curve: self.curve.clone(), coords: self.curve.solve_mul(&self.coords, &one)? })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// The derivation extending d/dx, with a' = -N_x(a)/N_Y(a).
    pub fn derive(&self) -> Self {
        let curve = &self.curve;
        let mut out: Vec<RatFunc> = self.coords.iter().map(|c| c.derive()).collect();
        if curve.dy > 1 {
            let da: Vec<RatFunc> =
                (1..curve.dy).map(|i| self.coords[i].scale(&curve.base.from_int(i as i64))).collect();
            if da.iter().any(|c| !c.is_zero()) {
                let extra = curve.mul_coords(&da, &curve.aprime);
                for (o, e) in out.iter_mut().zip(extra) {
                    *o = o.add(&e);
                }
            }
        }
        FFElem { curve: curve.clone(), coords: out }
    }

    /// f^p written back on the a-basis.
    pub fn frobenius(&self) -> Self {
        let curve = &self.curve;
        let mut out = vec![RatFunc::zero(&curve.base); curve.dy];
        for (c, basis) in self.coords.iter().zip(&curve.frob_basis) {
            if c.is_zero() {
                continue;
            }
            let cp = c.frobenius();
            for (o, b) in out.iter_mut().zip(basis) {
                if !b.is_zero() {
                    *o = o.add(&cp.mul(b));
                }
            }
        }
        FFElem { curve: curve.clone(), coords: out }
    }

    /// f^(p-1) + f^p.
    pub fn riccati_map(&self) -> Self {
        let p = self.curve.p() as usize;
        let mut d = self.clone();
        for _ in 0..p - 1 {
            d = d.derive();
        }
        d.add(&self.frobenius())
    }

    pub fn is_solution(&self) -> bool {
        self.riccati_map() == Self::y_n(&self.curve)
    }

    /// Tr_{K_N/F_q(x)}.
    pub fn trace(&self) -> RatFunc {
        let curve = &self.curve;
        let a = curve.a_coords();
        let mut cur = self.coords.clone();
        let mut acc = RatFunc::zero(&curve.base);
        for j in 0..curve.dy {
            if j > 0 {
                cur = curve.mul_coords(&cur, &a);
            }
            acc = acc.add(&cur[j]);
        }
        acc
    }

    /// f_i = Tr(Q_i(a) f / N_Y(a)), Q_i the quotient of N_* by Y^(i+1).
    pub fn coeff_via_trace(&self, i: usize) -> Result<RatFunc> {
        let curve = &self.curve;
        if i >= curve.dy {
            return Err(Error::IndexOutOfRange { index: i, bound: curve.dy });
        }
        let q: Vec<DensePoly> = curve.nstar[i + 1..].to_vec();
        let qa = curve.eval_at_a(&q);
        let ny: Vec<DensePoly> = (1..=curve.dy).map(|k| curve.nstar[k].scale(&curve.base.from_int(k as i64))).collect();
        let nya = curve.eval_at_a(&ny);
        let prod = curve.mul_coords(&qa, &self.coords);
        let quotient = curve.solve_mul(&nya, &prod)?;
        Ok(FFElem { curve: curve.clone(), coords: quotient }.trace())
    }

    /// g'/g.
    pub fn log_derivative(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInput("logarithmic derivative of zero"));
        }
        self.derive().div(self)
    }

    /// Monic least common denominator of the coordinates.
    pub fn common_denominator(&self) -> DensePoly {
        let mut d = DensePoly::one(&self.curve.base);
        for c in &self.coords {
            let g = d.gcd(c.den());
            d = d.mul(&c.den().div_exact(&g).unwrap());
        }
        d
    }

    /// max over coordinates of max(deg num, deg den).
    pub fn height(&self) -> usize {
        self.coords.iter().map(|c| c.height()).max().unwrap_or(0)
    }

    /// Degree in x of the common denominator and of each rescaled numerator.
    pub fn coefficient_degree(&self) -> usize {
        let d = self.common_denominator();
        let mut m = d.deg().max(0) as usize;
        for c in &self.coords {
            if c.is_zero() {
                continue;
            }
            let num = c.num().mul(&d.div_exact(c.den()).unwrap());
            m = m.max(num.deg() as usize);
        }
        m
    }

    /// Random element with polynomial coordinates of degree <= deg over a
    /// random denominator of degree <= den_deg.
    pub fn random<R: Rng + ?Sized>(curve: &Arc<CurveField>, deg: usize, den_deg: usize, rng: &mut R) -> Self {
        let f = &curve.base;
        let rand_poly = |n: usize, rng: &mut R| DensePoly::from_coeffs(f, (0..=n).map(|_| f.random(rng)).collect());
        let mut den = rand_poly(den_deg, rng);
        if den.is_zero() {
            den = DensePoly::one(f);
        }
        let coords = (0..curve.dy).map(|_| RatFunc::new(rand_poly(deg, rng), den.clone()).unwrap()).collect();
        FFElem { curve: curve.clone(), coords }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn curve(p: u64, nstar: &[&[i64]]) -> Arc<CurveField> {
        let f = FiniteField::prime(p).unwrap();
        CurveField::new(&f, nstar.iter().map(|c| DensePoly::from_ints(&f, c)).collect(), 0).unwrap()
    }

    #[test]
    fn derivative_of_sqrt_x() {
        let c = curve(5, &[&[0, -1], &[], &[1]]);
        let a = FFElem::a(&c);
        let da = a.derive();
        // 2 a a' = 1
        assert_eq!(a.mul(&da).scale_int(2), FFElem::one(&c));
        let x = FFElem::x(&c);
        let expect = a.div(&x).unwrap().scale_int(3);
        assert_eq!(da, expect);
        assert_eq!(x.pow(3).derive(), x.pow(2).scale_int(3));
    }

    #[test]
    fn frobenius_examples() {
        let c = curve(5, &[&[0, -1], &[], &[1]]);
        let a = FFElem::a(&c);
        assert_eq!(a.frobenius(), FFElem::x(&c).pow(2).mul(&a));
        let lin = curve(3, &[&[0, -1], &[1]]);
        assert_eq!(FFElem::a(&lin).frobenius(), FFElem::x(&lin).pow(3));
    }

    #[test]
    fn riccati_examples() {
        let c = curve(5, &[&[0, -1], &[], &[1]]);
        let a = FFElem::a(&c);
        assert!(a.derive().derive().derive().derive().is_zero());
        assert_eq!(a.riccati_map(), FFElem::x(&c).pow(2).mul(&a));
        assert!(a.is_solution());
        let lin = curve(3, &[&[0, -1], &[1]]);
        assert!(FFElem::x(&lin).is_solution());
        assert!(!FFElem::zero(&lin).is_solution());
        let ld = FFElem::x(&lin).log_derivative().unwrap();
        assert!(ld.riccati_map().is_zero());
    }

    #[test]
    fn trace_coefficients() {
        let c = curve(5, &[&[0, -1], &[], &[1]]);
        let a = FFElem::a(&c);
        assert!(a.coeff_via_trace(1).unwrap().is_one());
        assert!(FFElem::one(&c).coeff_via_trace(0).unwrap().is_one());
        assert!(matches!(a.coeff_via_trace(2), Err(Error::IndexOutOfRange { .. })));
        let c3 = curve(7, &[&[1, 0, 1], &[0, 2], &[3], &[1, 1]]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let f = FFElem::random(&c3, 2, 1, &mut rng);
            for i in 0..3 {
                assert_eq!(f.coeff_via_trace(i).unwrap(), f.coords()[i]);
            }
        }
    }

    #[test]
    fn rejects_bad_curves() {
        let f = FiniteField::prime(5).unwrap();
        let mk = |cs: &[&[i64]]| CurveField::new(&f, cs.iter().map(|c| DensePoly::from_ints(&f, c)).collect(), 0);
        assert_eq!(mk(&[&[1, 1]]).unwrap_err(), Error::ConstantInY);
        // Y^2 - x^2 = (Y - x)(Y + x)
        assert_eq!(mk(&[&[0, 0, -1], &[], &[1]]).unwrap_err(), Error::NotIrreducible);
        // Y^5 - x is inseparable
        assert_eq!(mk(&[&[0, -1], &[], &[], &[], &[], &[1]]).unwrap_err(), Error::NotSeparable);
        // Y^2 - 2 over F_5 is irreducible (2 is not a square), Y^2 - 4 is not
        assert!(mk(&[&[-2], &[], &[1]]).is_ok());
        assert_eq!(mk(&[&[-4], &[], &[1]]).unwrap_err(), Error::NotIrreducible);
        // (Y^2 - x)(Y - x - 1) = Y^3 - (x + 1) Y^2 - x Y + x^2 + x
        assert_eq!(mk(&[&[0, 1, 1], &[0, -1], &[-1, -1], &[1]]).unwrap_err(), Error::NotIrreducible);
        assert!(mk(&[&[0, -1], &[], &[], &[1]]).is_ok());
    }
}
