//! Irreducibility of the central operator N_*^p(d) through local solvability
//! of the p-Riccati equation at the finitely many places where a has a pole
//! deeper than t'.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::poly_factor;
use crate::error::Result;
use crate::function_field::CurveField;
use crate::local::place::{places_above, Center, Place};
use crate::local::system::local_solvable;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Reducible,
    Irreducible,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Reducible => write!(f, "reducible"),
            Verdict::Irreducible => write!(f, "irreducible"),
        }
    }
}

/// Outcome at one critical place. `solvable` is `None` when eta <= 0 and the
/// place imposes no condition.
#[derive(Clone, Debug)]
pub struct PlaceReport {
    pub center: String,
    pub ram_index: usize,
    pub residue_degree: usize,
    pub eta: i64,
    pub solvable: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct IrreducibilityReport {
    pub verdict: Verdict,
    pub places: Vec<PlaceReport>,
}

/// Centers over which a or x can have poles: the factors of lc(N_*) and
/// infinity. Above a center of Disc(N_*) coprime to lc, a is integral and
/// nu(t') <= 0, so eta <= 0 and no condition arises there.
pub fn critical_centers(curve: &CurveField) -> Result<Vec<Center>> {
    let mut centers: Vec<Center> = if curve.lc().is_constant() {
        Vec::new()
    } else {
        poly_factor(curve.lc(), curve.seed())?.into_iter().map(|(f, _)| Center::Finite(f)).collect()
    };
    centers.push(Center::Infinity);
    Ok(centers)
}

pub fn critical_places(curve: &Arc<CurveField>) -> Result<Vec<Place>> {
    let centers = critical_centers(curve)?;
    let per_center: Vec<Result<Vec<Place>>> = centers.par_iter().map(|c| places_above(curve, c)).collect();
    let mut out = Vec::new();
    for places in per_center {
        out.extend(places?);
    }
    Ok(out)
}

pub fn is_reducible(curve: &Arc<CurveField>) -> Result<IrreducibilityReport> {
    let places = critical_places(curve)?;
    let reports: Vec<Result<PlaceReport>> = places
        .par_iter()
        .map(|pl| {
            let eta = pl.eta();
            let solvable = if eta > 0 { Some(local_solvable(pl)?) } else { None };
            Ok(PlaceReport {
                center: pl.center().to_string(),
                ram_index: pl.ram_index(),
                residue_degree: pl.degree(),
                eta,
                solvable,
            })
        })
        .collect();
    let places = reports.into_iter().collect::<Result<Vec<_>>>()?;
    let verdict =
        if places.iter().any(|r| r.solvable == Some(false)) { Verdict::Irreducible } else { Verdict::Reducible };
    Ok(IrreducibilityReport { verdict, places })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{DensePoly, FiniteField};

    #[test]
    fn linear_curve_has_only_infinity() {
        let f = FiniteField::prime(3).unwrap();
        let c = CurveField::new(&f, vec![DensePoly::from_ints(&f, &[0, -1]), DensePoly::one(&f)], 0).unwrap();
        let places = critical_places(&c).unwrap();
        assert_eq!(places.len(), 1);
        assert!(places[0].is_infinite());
        assert_eq!(is_reducible(&c).unwrap().verdict, Verdict::Reducible);
    }

    #[test]
    fn inverse_x_verdicts() {
        for p in [3u64, 5, 7] {
            let f = FiniteField::prime(p).unwrap();
            let c = CurveField::new(&f, vec![DensePoly::from_ints(&f, &[-1]), DensePoly::x(&f)], 0).unwrap();
            let rep = is_reducible(&c).unwrap();
            assert_eq!(rep.verdict, Verdict::Irreducible);
            assert_eq!(rep.places.len(), 2);
        }
        let f = FiniteField::canonical(3, 3).unwrap();
        let c = CurveField::new(&f, vec![DensePoly::from_ints(&f, &[-1]), DensePoly::x(&f)], 0).unwrap();
        assert_eq!(is_reducible(&c).unwrap().verdict, Verdict::Reducible);
    }
}
