//! End-to-end acceptance checks. Runs without the libtest harness so that one
//! PASS/FAIL line per criterion is always printed; exits nonzero if any fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use priccati::algebra::{poly_factor, DensePoly, FiniteField, RatFunc};
use priccati::irreducibility::critical_centers;
use priccati::local::newton::{newton_refine, pth_derivation, riccati_residual};
use priccati::local::place::{places_above, Center, Place};
use priccati::local::series::LaurentSeries;
use priccati::ore::{
    central_operator, lift_to_curve, pth_power_mod, reconstruct_factor, right_divmod, vdp_extract, RationalFunctions,
};
use priccati::{solve, CurveField, FFElem, Verdict};
use priccati_cli::{
    cmd_factor, cmd_irreducible, cmd_solve, operator_degree, rational_nstar, verdict_of, InstanceSpec, EXIT_OK,
};

type Check = std::result::Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn curve_from(p: u64, nstar: &str) -> Arc<CurveField> {
    InstanceSpec::new(p, nstar).curve().expect("valid instance")
}

fn rand_poly(f: &Arc<FiniteField>, deg: usize, rng: &mut ChaCha8Rng) -> DensePoly {
    DensePoly::from_coeffs(f, (0..=deg).map(|_| f.random(rng)).collect())
}

fn rand_ratfunc(f: &Arc<FiniteField>, deg: usize, rng: &mut ChaCha8Rng) -> RatFunc {
    let num = rand_poly(f, rng.gen_range(0..=deg), rng);
    let mut den = rand_poly(f, rng.gen_range(0..=deg), rng);
    if den.is_zero() {
        den = DensePoly::one(f);
    }
    RatFunc::new(num, den).unwrap()
}

/// f^(p-1) + f^p computed directly in F_p(x).
fn riccati_rat(f: &RatFunc) -> RatFunc {
    let p = f.field().characteristic() as u64;
    let mut d = f.clone();
    for _ in 0..p - 1 {
        d = d.derive();
    }
    d.add(&f.pow(p))
}

/// Rational g whose equation is solvable: g = (f^(p-1) + f^p)^(1/p).
fn constructed_g(f: &RatFunc) -> RatFunc {
    riccati_rat(f).pth_root().expect("riccati image is a p-th power")
}

fn solution_of(curve: &Arc<CurveField>) -> Result<FFElem, String> {
    solve(curve, None)
        .map_err(|e| format!("{}: {e}", curve.nstar_string()))?
        .solution
        .ok_or_else(|| format!("{}: no solution", curve.nstar_string()))
}

fn criterion_1() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut pairs = 0;
    for p in [3u64, 5, 7, 13] {
        let curve = curve_from(p, "Y^2 - x");
        let f = solution_of(&curve)?;
        for _ in 0..25 {
            let g = loop {
                let g = FFElem::random(&curve, 3, 2, &mut rng);
                if !g.is_zero() {
                    break g;
                }
            };
            let lg = g.log_derivative().map_err(|e| e.to_string())?;
            ensure(lg.riccati_map().is_zero(), || format!("p={p}: riccati_map(g'/g) != 0 for g={g}"))?;
            ensure(f.sub(&lg).is_solution(), || format!("p={p}: f - g'/g not a solution for g={g}"))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn criterion_2() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut n = 0;
    for i in 0..50 {
        let p = [3u64, 5, 7][i % 3];
        let fp = FiniteField::prime(p).unwrap();
        let f = rand_ratfunc(&fp, 4, &mut rng);
        let g = constructed_g(&f);
        let spec = InstanceSpec::new(p, &rational_nstar(&g));
        let irr = cmd_irreducible(&spec);
        ensure(irr.code == EXIT_OK && verdict_of(&irr) == Some(Verdict::Reducible), || {
            format!("p={p} f={f}: irreducible reported {}", irr.text)
        })?;
        let out = cmd_solve(&spec);
        let verified = out.report.witness.as_ref().and_then(|w| w.verified) == Some(true);
        ensure(out.code == EXIT_OK && verified, || format!("p={p} f={f}: solve gave {}", out.text))?;
        n += 1;
    }
    Ok(format!("{n} instances"))
}

/// Whether c^p - c = 1 has a root in F_q, by enumeration.
fn artin_schreier_has_root(f: &FiniteField) -> bool {
    let p = f.characteristic() as u128;
    let q = f.order().expect("small field");
    (0..q).any(|i| {
        let c = f.element(i);
        f.sub(&f.pow(&c, p), &c) == f.one()
    })
}

fn criterion_3() -> Check {
    let mut seen = Vec::new();
    let cases: Vec<(u64, usize)> = vec![(3, 1), (5, 1), (7, 1), (11, 1), (3, 3)];
    for (p, b) in cases {
        let field = FiniteField::canonical(p, b).unwrap();
        let oracle = if artin_schreier_has_root(&field) { Verdict::Reducible } else { Verdict::Irreducible };
        let expected = if b == 1 { Verdict::Irreducible } else { Verdict::Reducible };
        ensure(oracle == expected, || format!("oracle disagrees with the expected verdict over F_{p}^{b}"))?;
        let spec = InstanceSpec::new(p, "x*Y - 1").with_ext_degree(b);
        let out = cmd_irreducible(&spec);
        ensure(verdict_of(&out) == Some(oracle), || format!("F_{p}^{b}: verdict {}", out.report.verdict))?;
        if oracle == Verdict::Reducible {
            let s = cmd_solve(&spec);
            let verified = s.report.witness.as_ref().and_then(|w| w.verified) == Some(true);
            ensure(s.code == EXIT_OK && verified, || format!("F_{p}^{b}: no verified solution\n{}", s.text))?;
        }
        seen.push(format!("F_{}:{}", field.order().unwrap(), oracle));
    }
    Ok(seen.join(" "))
}

fn criterion_4() -> Check {
    let mut times = Vec::new();
    for p in [5u64, 7, 11, 13] {
        let spec = InstanceSpec::new(p, "Y^2 - x");
        let start = Instant::now();
        let s = cmd_solve(&spec);
        let ok = s.report.witness.as_ref().and_then(|w| w.verified) == Some(true);
        ensure(s.code == EXIT_OK && ok, || format!("p={p}: solve failed\n{}", s.text))?;
        let fac = cmd_factor(&spec);
        let elapsed = start.elapsed();
        let w = fac.report.witness.as_ref().ok_or_else(|| format!("p={p}: no factor"))?;
        ensure(fac.code == EXIT_OK && w.order == Some(2) && w.verified == Some(true), || {
            format!("p={p}: factor failed\n{}", fac.text)
        })?;
        // independent check of monicity and right division
        let curve = spec.curve().unwrap();
        let l = reconstruct_factor(&curve, &solution_of(&curve)?).map_err(|e| e.to_string())?;
        ensure(l.lc().is_some_and(|c| c.is_one()), || format!("p={p}: factor not monic"))?;
        let (_, r) = right_divmod(&central_operator(&curve), &l).map_err(|e| e.to_string())?;
        ensure(r.is_zero(), || format!("p={p}: factor does not right-divide"))?;
        ensure(elapsed < Duration::from_secs(30), || format!("p={p}: took {elapsed:?}"))?;
        times.push(format!("p={p}:{:.2}s", elapsed.as_secs_f64()));
    }
    Ok(times.join(" "))
}

fn size_bounds(curve: &Arc<CurveField>) -> Result<(usize, usize), String> {
    let f = solution_of(curve)?;
    let l = reconstruct_factor(curve, &f).map_err(|e| e.to_string())?;
    let (dx, dy, r) = (curve.dx(), curve.dy(), curve.r_max());
    let sdeg = f.coefficient_degree();
    let ldeg = operator_degree(&l);
    ensure(sdeg <= 8 * r * dx * dy, || format!("{}: solution degree {sdeg}", curve.nstar_string()))?;
    ensure(ldeg <= 8 * r * dx * dy.pow(3), || format!("{}: factor degree {ldeg}", curve.nstar_string()))?;
    Ok((sdeg, ldeg))
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut n = 0;
    for i in 0..50 {
        let p = [3u64, 5, 7][i % 3];
        let fp = FiniteField::prime(p).unwrap();
        let g = constructed_g(&rand_ratfunc(&fp, 4, &mut rng));
        size_bounds(&curve_from(p, &rational_nstar(&g)))?;
        n += 1;
    }
    for p in [5u64, 7, 11, 13] {
        size_bounds(&curve_from(p, "Y^2 - x"))?;
        n += 1;
    }
    let mut sizes = Vec::new();
    for p in [3u64, 5, 7, 11, 13] {
        sizes.push(size_bounds(&curve_from(p, "Y - (x^2 + x + 1)"))?);
        n += 1;
    }
    ensure(sizes.windows(2).all(|w| w[0] == w[1]), || format!("sizes vary with p: {sizes:?}"))?;
    Ok(format!("{n} instances, fixed family sizes {:?}", sizes[0]))
}

fn criterion_6() -> Check {
    for p in [5u64, 7, 11, 13] {
        let curve = curve_from(p, "Y^2 - x");
        let f = solution_of(&curve)?;
        let l = reconstruct_factor(&curve, &f).map_err(|e| e.to_string())?;
        let g = vdp_extract(&lift_to_curve(&l, &curve), &curve).map_err(|e| format!("p={p}: {e}"))?;
        ensure(g.is_solution(), || format!("p={p}: extracted {g} is not a solution"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..100 {
        let p = [3u64, 5, 7, 11][i % 4];
        let fp = FiniteField::prime(p).unwrap();
        let curve = CurveField::rational(&RatFunc::x(&fp), 0).unwrap();
        let f = rand_ratfunc(&fp, 3, &mut rng);
        let lhs = pth_power_mod(&RationalFunctions(fp.clone()), &f, p as u32);
        let rhs = FFElem::from_rat(&curve, f.clone()).riccati_map();
        ensure(FFElem::from_rat(&curve, lhs.clone()) == rhs, || format!("p={p} f={f}: {lhs} vs {rhs}"))?;
    }
    Ok("4 extractions, 100 pth_power_mod comparisons".into())
}

fn random_series(f: &Arc<FiniteField>, prec: i64, rng: &mut ChaCha8Rng) -> LaurentSeries {
    let val = rng.gen_range(-10..10);
    let coeffs = (val..prec).map(|_| f.random(rng)).collect();
    LaurentSeries::new(f, val, coeffs, prec)
}

fn random_curve(p: u64, rng: &mut ChaCha8Rng) -> Arc<CurveField> {
    let fp = FiniteField::prime(p).unwrap();
    loop {
        let dy = rng.gen_range(1..=3usize);
        let mut nstar: Vec<DensePoly> = (0..=dy).map(|_| rand_poly(&fp, rng.gen_range(0..=2), rng)).collect();
        if nstar[dy].is_zero() {
            nstar[dy] = DensePoly::one(&fp);
        }
        if let Ok(c) = CurveField::new(&fp, nstar, rng.gen()) {
            return c;
        }
    }
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    // d^(p-1)/dt^(p-1) h = -sum h_(pk+p-1) t^(pk)
    let prec = 50;
    for p in [3u64, 5] {
        let fp = FiniteField::prime(p).unwrap();
        for _ in 0..50 {
            let h = random_series(&fp, prec + p as i64, &mut rng);
            let lhs = h.derivative_n(p as usize - 1).truncate(prec);
            let rhs = h.section_p_minus_1().frobenius().neg().truncate(prec);
            ensure(lhs.sub(&rhs).is_zero(), || format!("p={p}: identity fails for {h:?}"))?;
        }
        // and the x-derivative version at a ramified place, against expansion of f^(p-1)
        let curve = curve_from(p, "Y^2 - x");
        let place = places_above(&curve, &Center::Finite(DensePoly::x(curve.base()))).unwrap().remove(0);
        for _ in 0..10 {
            let f = FFElem::random(&curve, 2, 1, &mut rng);
            let mut d = f.clone();
            for _ in 0..p - 1 {
                d = d.derive();
            }
            let lhs = pth_derivation(&place.expand(&f, 60).unwrap(), &place, prec).map_err(|e| e.to_string())?;
            let rhs = place.expand(&d, prec).unwrap();
            ensure(lhs.sub(&rhs).is_zero(), || format!("p={p}: derivation mismatch for {f}"))?;
        }
    }

    let mut chains = 0;
    while chains < 20 {
        let p = [3u64, 5][chains % 2];
        let curve = random_curve(p, &mut rng);
        let c = curve.base().random(&mut rng);
        let places: Vec<Place> = places_above(&curve, &Center::Finite(DensePoly::linear(curve.base(), &c))).unwrap();
        let Some(pl) = places.into_iter().find(|pl| pl.a_valuation().is_some_and(|v| v > -pl.e_p())) else {
            continue;
        };
        let mut n = pl.a_valuation().unwrap();
        let mut f = LaurentSeries::zero(pl.residue(), n);
        let mut last = riccati_residual(&f, &pl, p as i64 * n + 1).unwrap().val_bound();
        for _ in 0..3 {
            f = newton_refine(&f, &pl, n).map_err(|e| format!("{}: {e}", curve.nstar_string()))?;
            let target = p as i64 * (p as i64 * n + (p as i64 - 1) * pl.e_p());
            let v = riccati_residual(&f, &pl, target + 1).unwrap().val_bound();
            ensure(v > last && v >= target, || {
                format!("{}: residual valuation {last} -> {v} (target {target})", curve.nstar_string())
            })?;
            last = v;
            n = v.div_euclid(p as i64);
        }
        chains += 1;
    }

    let mut curves = 0;
    let mut place_count = 0;
    while curves < 30 {
        let p = [5u64, 7][curves % 2];
        let curve = random_curve(p, &mut rng);
        let mut centers = critical_centers(&curve).unwrap();
        if !curve.disc().is_constant() {
            for (q, _) in poly_factor(curve.disc(), 0).unwrap() {
                centers.push(Center::Finite(q));
            }
        }
        centers.push(Center::Finite(DensePoly::linear(curve.base(), &curve.base().random(&mut rng))));
        for c in &centers {
            let places = places_above(&curve, c).map_err(|e| format!("{}: {e}", curve.nstar_string()))?;
            let sum: usize = places.iter().map(|pl| pl.ram_index() * pl.relative_degree()).sum();
            ensure(sum == curve.dy(), || format!("{} over {c}: sum e f = {sum}", curve.nstar_string()))?;
            place_count += places.len();
        }
        curves += 1;
    }
    Ok(format!("100 series identities, {chains} Newton chains, {place_count} places on {curves} curves"))
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..30 {
        let p = [3u64, 5, 7][i % 3];
        let fp = FiniteField::prime(p).unwrap();
        let g = constructed_g(&rand_ratfunc(&fp, 3, &mut rng));
        let curve = CurveField::rational(&g, 0).unwrap();
        let out = solve(&curve, Some(0)).map_err(|e| format!("g={g}: {e}"))?;
        let f = out.solution.ok_or_else(|| format!("g={g}: no level-0 solution"))?;
        let r = &f.coords()[0];
        let bound = g.num().deg().max(g.den().deg()).max(0);
        ensure(r.den().divides(g.den()), || format!("g={g}: den({r}) does not divide den(g)"))?;
        ensure(r.num().deg() <= bound, || format!("g={g}: numerator degree of {r} exceeds {bound}"))?;
    }
    Ok("30 instances".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (1, "affine kernel", criterion_1),
        (2, "construct and recover", criterion_2),
        (3, "Artin-Schreier a = 1/x", criterion_3),
        (4, "Y^2 - x solve and factor", criterion_4),
        (5, "size bounds", criterion_5),
        (6, "cross-method checks", criterion_6),
        (7, "local suite", criterion_7),
        (8, "rational solution shape", criterion_8),
    ];
    let mut failed = 0;
    for (n, name, run) in criteria {
        let start = Instant::now();
        let res = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("criterion {n} ({name}): PASS [{detail}] {secs:.2}s"),
            Err(why) => {
                failed += 1;
                println!("criterion {n} ({name}): FAIL [{why}] {secs:.2}s");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
