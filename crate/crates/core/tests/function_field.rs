use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use priccati::algebra::{DensePoly, FiniteField, RatFunc};
use priccati::expr::{parse_bivariate, parse_element, parse_ratfunc};
use priccati::{CurveField, Error, FFElem};

fn curve(p: u64, b: usize, nstar: &str) -> Arc<CurveField> {
    let f = FiniteField::canonical(p, b).unwrap();
    CurveField::new(&f, parse_bivariate(&f, nstar).unwrap(), 0).unwrap()
}

fn curves() -> impl Strategy<Value = Arc<CurveField>> {
    prop_oneof![
        Just(curve(3, 1, "Y^2 - x")),
        Just(curve(5, 1, "Y^2 - x^3 - x - 1")),
        Just(curve(7, 1, "x*Y^3 - x^2 - 1")),
        Just(curve(5, 1, "Y^2 + x*Y + x")),
        Just(curve(3, 2, "Y^2 - z*x")),
        Just(curve(2, 1, "Y^3 + x*Y + 1")),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_operations(c in curves(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = FFElem::random(&c, 2, 1, &mut rng);
        let g = FFElem::random(&c, 2, 1, &mut rng);
        let h = FFElem::random(&c, 1, 0, &mut rng);
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
        if !f.is_zero() {
            prop_assert_eq!(f.mul(&f.inv().unwrap()), FFElem::one(&c));
        }
        prop_assert_eq!(f.frobenius(), f.pow(c.p() as u64));
        prop_assert_eq!(f.mul(&g).frobenius(), f.frobenius().mul(&g.frobenius()));
    }

    #[test]
    fn derivation_rules(c in curves(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = FFElem::random(&c, 2, 1, &mut rng);
        let g = FFElem::random(&c, 2, 1, &mut rng);
        prop_assert_eq!(f.mul(&g).derive(), f.derive().mul(&g).add(&f.mul(&g.derive())));
        prop_assert!(f.frobenius().derive().is_zero());
        // N_*(x, a) = 0, and differentiating it gives a' d_Y N_* + d_x N_* = 0
        let a = FFElem::a(&c);
        let mut value = FFElem::zero(&c);
        let mut dx_part = FFElem::zero(&c);
        let mut dy_part = FFElem::zero(&c);
        for (i, n) in c.nstar().iter().enumerate() {
            let ni = FFElem::from_rat(&c, RatFunc::from_poly(n.clone()));
            let dni = FFElem::from_rat(&c, RatFunc::from_poly(n.derivative()));
            value = value.add(&ni.mul(&a.pow(i as u64)));
            dx_part = dx_part.add(&dni.mul(&a.pow(i as u64)));
            if i > 0 {
                dy_part = dy_part.add(&ni.mul(&a.pow(i as u64 - 1)).scale_int(i as i64));
            }
        }
        prop_assert!(value.is_zero());
        prop_assert!(a.derive().mul(&dy_part).add(&dx_part).is_zero());
        prop_assert_eq!(FFElem::x(&c).derive(), FFElem::one(&c));
    }

    #[test]
    fn log_derivatives_are_in_the_kernel(c in curves(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = FFElem::random(&c, 2, 1, &mut rng);
        prop_assume!(!g.is_zero());
        prop_assert!(g.log_derivative().unwrap().riccati_map().is_zero());
    }

    #[test]
    fn element_display_parses_back(c in curves(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = FFElem::random(&c, 3, 2, &mut rng);
        let back = parse_element(&c, &f.to_string()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn ratfunc_format_parses_back(p in prop::sample::select(vec![2u64, 3, 5, 7]), n in prop::collection::vec(0i64..7, 1..5), d in prop::collection::vec(0i64..7, 1..4)) {
        let f = FiniteField::prime(p).unwrap();
        let den = DensePoly::from_ints(&f, &d);
        prop_assume!(!den.is_zero());
        let r = RatFunc::new(DensePoly::from_ints(&f, &n), den).unwrap();
        prop_assert_eq!(parse_ratfunc(&f, &r.format("x")).unwrap(), r);
    }

    #[test]
    fn trace_is_additive(c in curves(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = FFElem::random(&c, 2, 1, &mut rng);
        let g = FFElem::random(&c, 2, 1, &mut rng);
        prop_assert_eq!(f.add(&g).trace(), f.trace().add(&g.trace()));
        let dy = RatFunc::from_int(c.base(), c.dy() as i64);
        prop_assert_eq!(FFElem::one(&c).trace(), dy);
    }
}

#[test]
fn nstar_string_parses_back() {
    for (p, s) in [(3, "Y^2 - x"), (7, "x*Y^3 - x^2 - 1"), (5, "(x^2 + 1)*Y - x")] {
        let c = curve(p, 1, s);
        let again = curve(p, 1, &c.nstar_string());
        assert_eq!(c.nstar(), again.nstar());
    }
}

#[test]
fn rejects_degenerate_curves() {
    let f = FiniteField::prime(5).unwrap();
    let bad = |s: &str| CurveField::new(&f, parse_bivariate(&f, s).unwrap(), 0).unwrap_err();
    assert!(matches!(bad("x^2 + 1"), Error::ConstantInY));
    assert!(matches!(bad("Y^2 - x^2"), Error::NotIrreducible));
    assert!(matches!(bad("Y^5 - x"), Error::NotSeparable));
}

#[test]
fn parser_errors() {
    let f = FiniteField::prime(5).unwrap();
    for s in ["", "Y^", "x^-1", "(x", "x + + ", "q", "1/0", "x^1.5"] {
        assert!(parse_ratfunc(&f, s).is_err(), "{s:?} should not parse");
    }
    assert!(parse_ratfunc(&f, "z").is_err());
    let r = parse_ratfunc(&f, "2x(x+1)/(x - 1)^2").unwrap();
    assert_eq!(r.num().deg(), 2);
    assert_eq!(r.den().deg(), 2);
}
