//! Newton iteration for local solutions of f^(p-1) + f^p = a^p, with the
//! (p-1)-fold x-derivative computed as d^(p-1)/dt^(p-1) (t'^(p-1) f).

use super::place::Place;
use super::series::LaurentSeries;
use crate::error::{Error, Result};

/// d/dx of a series at `place`: t' d/dt.
pub fn derive_x(f: &LaurentSeries, place: &Place) -> LaurentSeries {
    let d = f.derivative();
    let tp = place.tprime_to(d.prec() - d.val_bound() + place.tprime_valuation());
    tp.mul(&d)
}

/// d^(p-1)/dt^(p-1) (t'^(p-1) f), with f treated as exact, to absolute precision `prec`.
pub fn pth_derivation(f: &LaurentSeries, place: &Place, prec: i64) -> Result<LaurentSeries> {
    let p = place.residue().characteristic() as i64;
    let tau = place.tprime_valuation();
    let need = prec + p - 1;
    let fv = f.val_bound().min(need);
    let fe = f.extend_exact(need - (p - 1) * tau);
    let g = place.residue();
    let lc = place.tprime_lc();
    // t' is a monomial, so t'^(p-1) is known exactly
    let tp = LaurentSeries::monomial(g, g.pow(&lc, p as u128 - 1), (p - 1) * tau, (need - fv).max((p - 1) * tau + 1));
    let h = tp.mul(&fe).truncate(need);
    let out = h.derivative_n(p as usize - 1);
    if out.prec() < prec {
        return Err(Error::InsufficientPrecision(format!("t^{} of requested t^{prec}", out.prec())));
    }
    Ok(out.truncate(prec))
}

/// f^(p-1) + f^p - a^p at `place` for f treated as exact, to precision `prec`.
pub fn riccati_residual(f: &LaurentSeries, place: &Place, prec: i64) -> Result<LaurentSeries> {
    let p = place.residue().characteristic() as i64;
    let root_prec = prec.div_euclid(p) + 1;
    let fp = f.extend_exact(root_prec.max(f.val_bound() + 1)).frobenius();
    let ap = place.a_series_to(root_prec)?.frobenius();
    Ok(pth_derivation(f, place, prec)?.add(&fp).sub(&ap).truncate(prec))
}

/// One Newton step from f0 whose residual has valuation at least p n. The
/// result f1 = f0 - I, with I the (p-1)-fold x-primitive of the residual
/// taken without t^(pk) terms, has residual valuation at least
/// p (p n + (p-1) e_P).
pub fn newton_refine(f0: &LaurentSeries, place: &Place, n: i64) -> Result<LaurentSeries> {
    let p = place.residue().characteristic() as i64;
    let ep = place.e_p();
    let target = p * (p * n + (p - 1) * ep);
    let out_prec = target + (p - 1) * ep.abs() + p;
    let res_prec = out_prec + (p - 1) * ep.abs() + 1;
    let r = riccati_residual(f0, place, res_prec)?;
    if r.val_bound() < p * n {
        return Err(Error::Precondition(format!("residual has valuation {} below {}", r.val_bound(), p * n)));
    }
    let tau = place.tprime_valuation();
    let g = place.residue();
    let lc = place.tprime_lc();
    let inv_tp = LaurentSeries::monomial(g, g.inv(&lc).expect("t' is nonzero"), -tau, res_prec + ep.abs() * p);
    let mut prim = r;
    for _ in 0..p - 1 {
        prim = prim.mul(&inv_tp).integrate()?;
    }
    if prim.prec() < out_prec {
        return Err(Error::InsufficientPrecision(format!(
            "primitive reached t^{} of requested t^{out_prec}",
            prim.prec()
        )));
    }
    Ok(f0.extend_exact(out_prec).sub(&prim).truncate(out_prec))
}

/// The ramified residue of a local solution f at a place where a has no pole
/// beyond t': the coefficient of t^(nu(t') - 1) divided by lc(t'), in F_p.
pub fn ramified_residue(f: &LaurentSeries, place: &Place) -> Result<u32> {
    if place.eta() > 0 {
        return Err(Error::Precondition("ramified residue needs nu(a) >= nu(t')".into()));
    }
    let tau = place.tprime_valuation();
    if f.prec() < tau {
        return Err(Error::InsufficientPrecision(format!("series known to t^{} only", f.prec())));
    }
    if f.val_bound() >= tau {
        return Ok(0);
    }
    if f.val_bound() < tau - 1 {
        return Err(Error::Precondition(format!("valuation {} below nu(t') - 1", f.val_bound())));
    }
    let g = place.residue();
    let lc = place.tprime_lc();
    let k = g.div(&f.coeff(tau - 1), &lc).expect("t' is nonzero");
    g.as_prime(&k).ok_or_else(|| Error::Precondition(format!("residue {} is not in the prime field", g.format(&k))))
}
