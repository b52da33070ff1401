use chatelet_core::chatelet::{obstruction_exponent, BlockStructure};
use chatelet_core::decider::{
    check_conditions, decide_with, reduce_problem_with, Anchor, Config, Problem, Status, Verdict, VerdictReport,
};
use chatelet_core::exact_math::{factor_rational_poly, is_rational_square, rat, ratio, Poly, Rat};
use num_traits::Zero;
use proptest::prelude::*;

fn config() -> Config {
    Config {
        norm_bound: 6,
        ..Config::default()
    }
}

fn decide(a: &Rat, p: &Poly) -> VerdictReport {
    decide_with(&Problem::new(a.clone(), p.clone()).unwrap(), &config()).unwrap()
}

fn small_poly() -> impl Strategy<Value = Poly> {
    proptest::collection::vec(proptest::collection::vec(-3i64..=3, 2..=4), 1..=2)
        .prop_map(|fs| fs.iter().fold(Poly::one(), |acc, f| &acc * &Poly::from_ints(f)))
        .prop_filter("nonzero, degree at most 6", |p| !p.is_zero() && p.deg() <= 6)
}

fn non_square() -> impl Strategy<Value = Rat> {
    (-12i64..=12)
        .prop_map(rat)
        .prop_filter("non-square", |a| !a.is_zero() && !is_rational_square(a))
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 48,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn verdict_invariant_under_coset_and_shift(a in non_square(), p in small_poly(), c in -2i64..=2, d in 1i64..=3) {
        let base = decide(&a, &p);
        let d2 = rat(d * d);
        prop_assert_eq!(decide(&(&a * &d2), &p).verdict, base.verdict);
        prop_assert_eq!(decide(&a, &p.scale(&d2)).verdict, base.verdict);
        prop_assert_eq!(decide(&a, &p.scale(&ratio(1, d * d))).verdict, base.verdict);
        prop_assert_eq!(decide(&a, &p.shift(&rat(c))).verdict, base.verdict);
    }

    #[test]
    fn reports_are_well_formed(a in non_square(), p in small_poly()) {
        let r = decide(&a, &p);
        let primaries = r.reason_chain.iter().filter(|s| s.primary).count();
        prop_assert_eq!(primaries, 1);
        if r.verdict == Verdict::NotRational {
            let primary = r.primary_step().unwrap().anchor;
            prop_assert!(matches!(
                primary,
                Anchor::LowDegree | Anchor::CohomologyObstruction | Anchor::FiberClassInfeasibility | Anchor::DelPezzoDescent
            ));
        }
        let c = r.conditions.as_ref().unwrap();
        prop_assert_eq!(c.cond1.status, Status::Holds);
        prop_assert_eq!(c.cond5.status, Status::Holds);
        for (_, s) in c.all() {
            prop_assert!(s.status == Status::Unknown || !s.evidence.is_empty());
        }
    }

    #[test]
    fn reduction_is_idempotent(a in non_square(), p in small_poly()) {
        let once = reduce_problem_with(&Problem::new(a, p).unwrap(), &config()).unwrap();
        let twice = reduce_problem_with(&once.problem, &config()).unwrap();
        prop_assert_eq!(&twice.problem, &once.problem);
        prop_assert!(twice.trace.is_empty());
        let p = &once.problem.p;
        prop_assert!(p.is_squarefree());
        prop_assert!(p.deg() <= 2 || p.deg().is_multiple_of(2));
        let rebuilt = once.factors.iter().fold(Poly::constant(rat(1)), |acc, f| &acc * f);
        prop_assert_eq!(rebuilt.monic(), p.monic());
    }

    /// At the cohomology stage the lattice value agrees with the closed form on the blocks.
    #[test]
    fn lattice_matches_closed_form(a in non_square(), p in small_poly()) {
        let r = decide(&a, &p);
        let Some(h1) = &r.h1 else { return Ok(()) };
        let red = reduce_problem_with(&Problem::new(a, p).unwrap(), &config()).unwrap();
        let (odd, factors) = match &red.odd_form {
            Some((_, f)) => (true, f.clone()),
            None => (false, red.factors.clone()),
        };
        let blocks = BlockStructure::new(factors.iter().map(Poly::deg).collect()).unwrap();
        prop_assert_eq!(h1.len(), obstruction_exponent(&blocks, odd).unwrap());
        prop_assert!(h1.is_elementary(2));
    }
}

#[test]
fn golden_verdicts() {
    let cases: [(i64, &[i64], Verdict, Anchor); 5] = [
        (9, &[1, 0, 1], Verdict::Rational, Anchor::SquareCoefficient),
        (-1, &[2], Verdict::Rational, Anchor::LowDegree),
        (-1, &[-1], Verdict::NotRational, Anchor::LowDegree),
        (6, &[6, 0, 5, 0, 1], Verdict::NotRational, Anchor::CohomologyObstruction),
        (
            5,
            &[2, 0, 0, 0, 0, 0, 0, 0, 1],
            Verdict::NotRational,
            Anchor::FiberClassInfeasibility,
        ),
    ];
    for (a, p, verdict, anchor) in cases {
        let r = decide(&rat(a), &Poly::from_ints(p));
        assert_eq!(r.verdict, verdict, "a = {a}, P = {p:?}");
        assert_eq!(r.primary_step().unwrap().anchor, anchor, "a = {a}, P = {p:?}");
    }
}

#[test]
fn condition_examples() {
    let p = &Poly::from_ints(&[2, 0, 1]) * &Poly::from_ints(&[3, 0, 1]);
    let c = check_conditions(&Problem::new(rat(6), p).unwrap());
    for (name, s) in c.all() {
        assert_eq!(s.status, Status::Holds, "{name}");
    }
    let c = check_conditions(&Problem::new(rat(4), Poly::from_ints(&[1, 0, 0, 1])).unwrap());
    assert_eq!(c.cond1.status, Status::Fails);
    // (x² + 1)(x² + 2)(x² + 3): subfields are the classes of products of −1, −2, −3
    let p = &(&Poly::from_ints(&[1, 0, 1]) * &Poly::from_ints(&[2, 0, 1])) * &Poly::from_ints(&[3, 0, 1]);
    assert!(factor_rational_poly(&p).unwrap().factors.len() == 3);
    let c = check_conditions(&Problem::new(rat(5), p.clone()).unwrap());
    assert_eq!(c.cond3.status, Status::Fails);
    let c = check_conditions(&Problem::new(rat(-6), p).unwrap());
    assert_eq!(c.cond3.status, Status::Holds);
    // cond4 fails when a factor splits
    let p = &Poly::from_ints(&[1, 0, 1]) * &Poly::from_ints(&[1, -1, 0, 1]);
    let c = check_conditions(&Problem::new(rat(-1), p).unwrap());
    assert_eq!(c.cond4.status, Status::Fails);
}
