use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use priccati::algebra::{DensePoly, FiniteField, RatFunc};
use priccati::expr::parse_bivariate;
use priccati::solver::{
    choose_good_place, degree_cap, ladder_space, section_series, solve_in_space, valuation_bound_check,
};
use priccati::{solve, CurveField, Error, FFElem, Verdict};

fn curve(p: u64, b: usize, nstar: &str) -> Arc<CurveField> {
    let f = FiniteField::canonical(p, b).unwrap();
    CurveField::new(&f, parse_bivariate(&f, nstar).unwrap(), 0).unwrap()
}

fn curves() -> impl Strategy<Value = Arc<CurveField>> {
    prop_oneof![
        Just(curve(3, 1, "Y^2 - x")),
        Just(curve(5, 1, "Y^2 - x^3 - x - 1")),
        Just(curve(7, 1, "x*Y^3 - x^2 - 1")),
        Just(curve(3, 2, "Y^2 - z*x")),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// At a place with t' = 1, the (p-1)-th derivative of f expands to -S(f)^p.
    #[test]
    fn section_matches_derivation(c in curves(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = FFElem::random(&c, 2, 1, &mut rng);
        let gp = choose_good_place(&c, &DensePoly::one(c.base())).unwrap();
        let pl = gp.place();
        let prec = 30;
        let p = c.p() as usize;
        let d = (0..p - 1).fold(f.clone(), |d, _| d.derive());
        let s = section_series(&pl.expand(&f, prec).unwrap(), pl).unwrap();
        let lhs = s.frobenius().neg().truncate(prec - p as i64);
        let rhs = pl.expand(&d, prec - p as i64).unwrap();
        prop_assert!(lhs.sub(&rhs).is_zero());
    }

    /// Solutions built from a known rational f are recovered at level 0 with
    /// the predicted shape.
    #[test]
    fn construct_and_recover(p in prop::sample::select(vec![3u64, 5, 7]), n in prop::collection::vec(0i64..7, 1..4), d in prop::collection::vec(0i64..7, 1..4)) {
        let f = FiniteField::prime(p).unwrap();
        let den = DensePoly::from_ints(&f, &d);
        prop_assume!(!den.is_zero());
        let h = RatFunc::new(DensePoly::from_ints(&f, &n), den).unwrap();
        let y = (0..p - 1).fold(h.clone(), |d, _| d.derive()).add(&h.pow(p));
        let g = y.pth_root().unwrap();
        let c = CurveField::rational(&g, 0).unwrap();
        let out = solve(&c, Some(0)).unwrap();
        prop_assert_eq!(out.report.verdict, Verdict::Reducible);
        let sol = out.solution.unwrap();
        prop_assert!(sol.is_solution());
        prop_assert!(valuation_bound_check(&sol).unwrap());
        prop_assert!(sol.coords()[0].den().divides(g.den()));
    }
}

#[test]
fn solutions_meet_the_local_valuation_bound() {
    for (p, b, nstar) in [(5, 1, "Y^2 - x"), (7, 1, "Y^3 - x^2 - 1"), (3, 3, "x*Y - 1"), (13, 1, "Y^2 - x")] {
        let c = curve(p, b, nstar);
        let out = solve(&c, None).unwrap();
        let f = out.solution.unwrap();
        assert!(f.is_solution());
        assert!(valuation_bound_check(&f).unwrap(), "{nstar} over F_{p}^{b}");
    }
}

#[test]
fn ladder_grows_and_is_capped() {
    let c = curve(7, 1, "Y^3 - x^2 - 1");
    let s0 = ladder_space(&c, 0);
    let s1 = ladder_space(&c, 1);
    assert!(s1.bound > s0.bound);
    assert!(s1.delta.deg() >= s0.delta.deg());
    assert!(s1.dimension() > s0.dimension());
    assert_eq!(degree_cap(&c), 8 * c.r_max() * c.dx().max(1) * c.dy());
    assert!(solve_in_space(&s0).unwrap().is_none());
    assert!(solve_in_space(&s1).unwrap().unwrap().is_solution());
    assert!(matches!(solve(&c, Some(0)), Err(Error::IncompleteSearch { .. })));
}

#[test]
fn irreducible_instances_have_no_solution() {
    for p in [3u64, 5, 7, 11] {
        let out = solve(&curve(p, 1, "x*Y - 1"), None).unwrap();
        assert_eq!(out.report.verdict, Verdict::Irreducible);
        assert!(out.solution.is_none());
    }
}

#[test]
fn solving_is_deterministic() {
    let c = curve(7, 1, "Y^3 - x^2 - 1");
    let a = solve(&c, None).unwrap().solution.unwrap();
    let b = solve(&c, None).unwrap().solution.unwrap();
    assert_eq!(a, b);
}
