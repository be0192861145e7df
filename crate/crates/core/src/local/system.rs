//! The F_p-linear system deciding local solvability at a place where a has a
//! pole deeper than t'.
//!
//! Writing f = sum_k X_k t^(k + nu(a)) and g_i for the coefficients of
//! t'^(p-1) / t^((p-1) nu(t')), the coefficient of t^(p(k + nu(a))) in
//! f^(p-1) + f^p = a^p reads
//!
//!   X_k^p - sum_l g_(pk - (p-1)(eta-1) - l) X_l = a_k^p,
//!
//! and the rows k < eta only involve X_0 .. X_(eta-1). The remaining rows are
//! always solvable because g_0 multiplies an unknown of higher index.

use super::place::Place;
use crate::algebra::{solve_fp, MatrixFp};
use crate::error::Result;

/// (Phi - D) X = Phi (a_0, .., a_(eta-1)) over F_p, in blocks of size [G_P : F_p].
#[derive(Clone, Debug)]
pub struct LocalSystem {
    pub eta: usize,
    pub dmat: MatrixFp,
    pub phi: MatrixFp,
    pub rhs: Vec<u32>,
}

impl LocalSystem {
    pub fn block_size(&self) -> usize {
        self.dmat.rows / self.eta
    }

    pub fn is_solvable(&self) -> bool {
        solve_fp(&self.phi.sub(&self.dmat), &self.rhs).map(|s| s.solution.is_some()).unwrap_or(false)
    }
}

pub fn build_local_system(place: &Place) -> Result<Option<LocalSystem>> {
    let eta = place.eta();
    if eta <= 0 {
        return Ok(None);
    }
    let g = place.residue();
    let p = g.characteristic() as i64;
    let b = g.degree();
    let n = eta as usize * b;
    let va = place.a_valuation().expect("eta > 0 forces a != 0");
    let tau = place.tprime_valuation();

    let tp = place.tprime_to(tau + eta).pow(p as u64 - 1);
    let base = (p - 1) * tau;
    let gcoef = |i: i64| tp.coeff(base + i);
    let a = place.a_series_to(va + eta)?;

    let mut dmat = MatrixFp::zeros(p as u32, n, n);
    let mut phi = MatrixFp::zeros(p as u32, n, n);
    let frob = g.frobenius_matrix();
    let mut rhs = Vec::with_capacity(n);
    for k in 0..eta {
        let r0 = k as usize * b;
        for i in 0..b {
            for j in 0..b {
                phi.set(r0 + i, r0 + j, frob[j][i]);
            }
        }
        for l in 0..eta {
            let idx = p * k - (p - 1) * (eta - 1) - l;
            if idx < 0 {
                continue;
            }
            let m = g.mul_matrix(&gcoef(idx));
            let c0 = l as usize * b;
            for i in 0..b {
                for j in 0..b {
                    dmat.set(r0 + i, c0 + j, m[j][i]);
                }
            }
        }
        rhs.extend_from_slice(g.frobenius(&a.coeff(va + k)).coords());
    }
    Ok(Some(LocalSystem { eta: eta as usize, dmat, phi, rhs }))
}

/// True when f^(p-1) + f^p = a^p has a solution in the completion at `place`.
pub fn local_solvable(place: &Place) -> Result<bool> {
    Ok(build_local_system(place)?.is_none_or(|s| s.is_solvable()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{DensePoly, FiniteField};
    use crate::function_field::CurveField;
    use crate::local::place::{places_above, Center};

    fn inverse_x(base: &std::sync::Arc<FiniteField>) -> std::sync::Arc<CurveField> {
        CurveField::new(base, vec![DensePoly::from_ints(base, &[-1]), DensePoly::x(base)], 0).unwrap()
    }

    #[test]
    fn artin_schreier_obstruction_at_zero() {
        for p in [3u64, 5, 7] {
            let c = inverse_x(&FiniteField::prime(p).unwrap());
            let pl = &places_above(&c, &Center::Finite(DensePoly::x(c.base()))).unwrap()[0];
            let sys = build_local_system(pl).unwrap().unwrap();
            assert_eq!(sys.eta, 1);
            assert_eq!(sys.dmat.get(0, 0), 1);
            assert_eq!(sys.rhs, vec![1]);
            assert!(!local_solvable(pl).unwrap());
            let other = &places_above(&c, &Center::Finite(DensePoly::from_ints(c.base(), &[-1, 1]))).unwrap()[0];
            assert!(build_local_system(other).unwrap().is_none());
        }
    }

    #[test]
    fn obstruction_vanishes_over_degree_p_extension() {
        let c = inverse_x(&FiniteField::canonical(3, 3).unwrap());
        let pl = &places_above(&c, &Center::Finite(DensePoly::x(c.base()))).unwrap()[0];
        assert_eq!(build_local_system(pl).unwrap().unwrap().block_size(), 3);
        assert!(local_solvable(pl).unwrap());
    }
}
