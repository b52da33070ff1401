use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{
    check_conditions_with, data, reduce_problem_with, Anchor, Config, Data, Datum, Problem, ReasonStep, Status,
    TraceEntry, Verdict, VerdictReport,
};
use crate::chatelet::{
    build_pic_x, build_pic_x_certified, build_pic_y, obstruction_exponent, pic_x_cohomology, BlockStructure,
};
use crate::delpezzo::{conic_partner, descent_exhaust, enumerate_conic_classes, fiber_infeasible, nu_prime_bound};
use crate::exact_math::{
    is_rational_square, rat_sqrt, solve_norm_equation_bounded, solve_ternary_bounded, NormSearch, Poly, Rat,
    TernarySearch,
};
use crate::lattice::{fixed_sublattice, smith_normal_form, AbelianInvariants, IntMatrix};
use crate::{Error, Result};

fn step(name: &str, anchor: Anchor, primary: bool, data: Data) -> ReasonStep {
    ReasonStep {
        step: name.to_string(),
        anchor,
        primary,
        data,
    }
}

fn report(verdict: Verdict, reason_chain: Vec<ReasonStep>) -> VerdictReport {
    VerdictReport {
        verdict,
        reason_chain,
        conditions: None,
        h1: None,
        h_minus1: None,
        reduction_trace: Vec::new(),
    }
}

/// Errors that mean a bound was hit rather than that the input is bad.
fn is_resource(e: &Error) -> bool {
    matches!(
        e,
        Error::FactorizationBoundExceeded { .. }
            | Error::QuadraticSplitUndecided { .. }
            | Error::GroupOrderCapExceeded { .. }
            | Error::DepthCapExceeded { .. }
            | Error::EmptySearch
    )
}

fn undecided(name: &str, anchor: Anchor, e: &Error) -> VerdictReport {
    report(
        Verdict::Undecided,
        vec![step(name, anchor, true, data([("exhausted", e.to_string().into())]))],
    )
}

pub fn decide_low_degree(a: &Rat, p: &Poly) -> VerdictReport {
    low_degree(a, p, &Config::default())
}

fn low_degree(a: &Rat, p: &Poly, config: &Config) -> VerdictReport {
    assert!(p.deg() <= 2, "low-degree criteria need deg P <= 2");
    if let Some(s) = rat_sqrt(a) {
        return report(
            Verdict::Rational,
            vec![step(
                "a_is_square",
                Anchor::SquareCoefficient,
                true,
                data([("sqrt_a", s.into())]),
            )],
        );
    }
    let bound = config.norm_bound;
    match p.deg() {
        1 => report(
            Verdict::Rational,
            vec![step("linear", Anchor::LowDegree, true, data([("P", p.clone().into())]))],
        ),
        0 => {
            let b = p.coeff(0);
            binary(a, &b, bound, "constant", Vec::new())
        }
        _ => {
            // P = b (x + e)² + c
            let b = p.coeff(2);
            let e = p.coeff(1) / (Rat::from_integer(BigInt::from(2)) * &b);
            let c = p.eval(&-e.clone());
            if c.is_zero() {
                let flag = vec![TraceEntry {
                    op: "quadratic_c_zero".into(),
                    data: data([("b", b.clone().into()), ("e", e.into())]),
                }];
                return binary(a, &b, bound, "quadratic_c_zero", flag);
            }
            let base = data([("b", b.clone().into()), ("c", c.clone().into())]);
            match solve_ternary_bounded(a, &b, &c, bound) {
                Ok(TernarySearch::Witness { s, t, w }) => {
                    let mut d = base;
                    d.push((
                        "witness".into(),
                        Datum::Texts(vec![fmt_rat(&s), fmt_rat(&t), fmt_rat(&w)]),
                    ));
                    report(Verdict::Rational, vec![step("quadratic", Anchor::LowDegree, true, d)])
                }
                Ok(TernarySearch::Impossible) => {
                    let mut d = base;
                    d.push(("obstruction".into(), "sign".into()));
                    report(
                        Verdict::NotRational,
                        vec![step("quadratic", Anchor::LowDegree, true, d)],
                    )
                }
                Ok(TernarySearch::NoneFound) => {
                    let mut d = base;
                    d.push(("bound".into(), Datum::Int(BigInt::from(bound))));
                    report(Verdict::Undecided, vec![step("quadratic", Anchor::LowDegree, true, d)])
                }
                Err(e) => undecided("quadratic", Anchor::LowDegree, &e),
            }
        }
    }
}

fn fmt_rat(q: &Rat) -> String {
    if q.is_integer() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// `b ∈ k² − a k²`.
fn binary(a: &Rat, b: &Rat, bound: u64, name: &str, trace: Vec<TraceEntry>) -> VerdictReport {
    let base = data([("b", b.clone().into())]);
    let mut out = match solve_norm_equation_bounded(a, b, bound) {
        Ok(NormSearch::Witness { s, t }) => {
            let mut d = base;
            d.push(("witness".into(), Datum::Texts(vec![fmt_rat(&s), fmt_rat(&t)])));
            report(Verdict::Rational, vec![step(name, Anchor::LowDegree, true, d)])
        }
        Ok(NormSearch::Impossible) => {
            let mut d = base;
            d.push(("obstruction".into(), "sign".into()));
            report(Verdict::NotRational, vec![step(name, Anchor::LowDegree, true, d)])
        }
        Ok(NormSearch::NoneFound) => {
            let mut d = base;
            d.push(("bound".into(), Datum::Int(BigInt::from(bound))));
            report(Verdict::Undecided, vec![step(name, Anchor::LowDegree, true, d)])
        }
        Err(e) => undecided(name, Anchor::LowDegree, &e),
    };
    out.reduction_trace = trace;
    out
}

pub fn decide(p: &Problem) -> Result<VerdictReport> {
    decide_with(p, &Config::default())
}

pub fn decide_with(p: &Problem, config: &Config) -> Result<VerdictReport> {
    let conditions = check_conditions_with(p, config);
    let mut out = run(p, config, &conditions)?;
    out.conditions = Some(conditions);
    Ok(out)
}

fn run(p: &Problem, config: &Config, conditions: &super::ConditionReport) -> Result<VerdictReport> {
    if conditions.cond1.status == Status::Fails {
        return Ok(report(
            Verdict::Rational,
            vec![step(
                "a_is_square",
                Anchor::SquareCoefficient,
                true,
                conditions.cond1.evidence.clone(),
            )],
        ));
    }
    debug_assert!(!is_rational_square(&p.a));
    let mut chain = vec![step(
        "a_not_square",
        Anchor::SquareCoefficient,
        false,
        conditions.cond1.evidence.clone(),
    )];

    let red = match reduce_problem_with(p, config) {
        Ok(r) => r,
        Err(e) if is_resource(&e) => return Ok(undecided("reduce", Anchor::SplitComponent, &e)),
        Err(e) => return Err(e),
    };
    let removed: Vec<Poly> = red
        .trace
        .iter()
        .filter(|t| t.op == "remove_split_factor")
        .filter_map(|t| match &t.data[0].1 {
            Datum::Poly(f) => Some(f.clone()),
            _ => None,
        })
        .collect();
    if !removed.is_empty() {
        chain.push(step(
            "remove_split_factors",
            Anchor::SplitComponent,
            false,
            data([("removed", Datum::Polys(removed))]),
        ));
    }

    let canonical = &red.problem;
    if canonical.p.deg() <= 2 {
        let mut low = low_degree(&canonical.a, &canonical.p, config);
        chain.append(&mut low.reason_chain);
        low.reason_chain = chain;
        let mut trace = red.trace;
        trace.append(&mut low.reduction_trace);
        low.reduction_trace = trace;
        return Ok(low);
    }

    // cohomology stage, on the odd form when the degree was odd
    let (odd, block_factors) = match &red.odd_form {
        Some((_, f)) => (true, f.clone()),
        None => (false, red.factors.clone()),
    };
    let blocks = BlockStructure::new(block_factors.iter().map(Poly::deg).collect())?;
    let j = obstruction_exponent(&blocks, odd)?;
    let certified = p.certificates.galois_group.is_some();
    let model = match &p.certificates.galois_group {
        Some(actions) => build_pic_x_certified(&blocks, actions, config.group_cap),
        None => build_pic_x(&blocks, config.group_cap),
    };
    let coh = match model.and_then(|m| pic_x_cohomology(&m, config.group_cap)) {
        Ok(c) => c,
        Err(e) if is_resource(&e) => {
            let mut out = undecided("pic_x_cohomology", Anchor::CohomologyObstruction, &e);
            out.reduction_trace = red.trace;
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    let consistent = coh.m1_h1 == coh.m1_h_minus1
        && coh.m1_h1.len() == j
        && coh.m1_h1.is_elementary(2)
        && coh.m2_h1.is_empty()
        && coh.m2_h_minus1.is_empty();
    if !consistent {
        if certified {
            return Err(Error::InvalidCertificate(format!(
                "group gives H^1 = {} but the block structure forces (Z/2)^{j}",
                coh.m1_h1
            )));
        }
        panic!("lattice H^1 = {} disagrees with the closed form j = {j}", coh.m1_h1);
    }
    let h1 = direct_sum(&coh.m1_h1, &coh.m2_h1);
    let h_minus1 = direct_sum(&coh.m1_h_minus1, &coh.m2_h_minus1);
    let blocks_datum = Datum::Ints(blocks.block_degrees().iter().map(|&d| BigInt::from(d)).collect());
    chain.push(step(
        "pic_x_cohomology",
        Anchor::CohomologyObstruction,
        j > 0,
        data([
            ("blocks", blocks_datum),
            ("r", blocks.r().into()),
            ("r_prime", blocks.r_prime().into()),
            ("odd_degree", odd.into()),
            ("j", j.into()),
            ("group_order", coh.group_order.into()),
            ("certified_group", certified.into()),
            ("h1", (&h1).into()),
            ("h_minus1", (&h_minus1).into()),
        ]),
    ));
    let manin = step(
        "manin_branch",
        Anchor::ManinDisjoint,
        false,
        data([
            ("cond3", conditions.cond3.status.as_str().into()),
            ("same_verdict", true.into()),
        ]),
    );

    let finish = |chain: Vec<ReasonStep>, trace: Vec<TraceEntry>| VerdictReport {
        verdict: Verdict::NotRational,
        reason_chain: chain,
        conditions: None,
        h1: Some(h1.clone()),
        h_minus1: Some(h_minus1.clone()),
        reduction_trace: trace,
    };

    if j > 0 {
        chain.push(manin);
        return Ok(finish(chain, red.trace));
    }

    // j = 0: the even form decides between the two remaining stages
    let even_blocks = BlockStructure::new(red.factors.iter().map(Poly::deg).collect())?;
    let r = even_blocks.r();
    let resource = |e: Error, trace: Vec<TraceEntry>| -> Result<VerdictReport> {
        if is_resource(&e) {
            let mut out = undecided("pic_y", Anchor::FiberClassInfeasibility, &e);
            out.reduction_trace = trace;
            Ok(out)
        } else {
            Err(e)
        }
    };
    let pic_y = match build_pic_y(&even_blocks, config.group_cap) {
        Ok(m) => m,
        Err(e) => return resource(e, red.trace),
    };
    let fixed_rank = fixed_sublattice(&pic_y.lattice).len();
    let omega_sq = 8 - r as i64;
    if r >= 8 {
        let f = &config.fiber;
        let search = fiber_infeasible(r, f.m_max, (-f.nu_abs, f.nu_abs), f.len_max);
        assert!(search.infeasible && search.symbolic_infeasible);
        chain.push(step(
            "fiber_class_infeasibility",
            Anchor::FiberClassInfeasibility,
            true,
            data([
                ("r", r.into()),
                ("omega_squared", omega_sq.into()),
                ("pic_y_rank", pic_y.lattice.rank().into()),
                ("pic_y_fixed_rank", fixed_rank.into()),
                ("m_max", f.m_max.into()),
                ("nu_abs", f.nu_abs.into()),
                ("len_max", f.len_max.into()),
                ("multisets_checked", (search.multisets_checked as u128).into()),
            ]),
        ));
    } else {
        let points = r + 1;
        let classes = enumerate_conic_classes(points)?;
        for g in &classes {
            conic_partner(g, points)?;
        }
        let m0 = config.descent_m0;
        let summary = match descent_exhaust(r, m0, config.descent_depth_cap) {
            Ok(s) => s,
            Err(e) => return resource(e, red.trace),
        };
        let interval = nu_prime_bound(r, m0)?;
        chain.push(step(
            "del_pezzo_descent",
            Anchor::DelPezzoDescent,
            true,
            data([
                ("r", r.into()),
                ("omega_squared", omega_sq.into()),
                ("pic_y_rank", pic_y.lattice.rank().into()),
                ("pic_y_fixed_rank", fixed_rank.into()),
                ("conic_classes", classes.len().into()),
                ("m0", m0.into()),
                (
                    "nu_interval",
                    Datum::Ints(vec![BigInt::from(interval.lo), BigInt::from(interval.hi)]),
                ),
                ("branches", summary.branches.into()),
                ("max_depth", summary.max_depth.into()),
                ("all_terminal", summary.all_terminal.into()),
            ]),
        ));
    }
    chain.push(manin);
    Ok(finish(chain, red.trace))
}

fn direct_sum(x: &AbelianInvariants, y: &AbelianInvariants) -> AbelianInvariants {
    let ds: Vec<BigInt> = x.divisors.iter().chain(&y.divisors).cloned().collect();
    let n = ds.len();
    if n == 0 {
        return AbelianInvariants::trivial();
    }
    let mut m = IntMatrix::zeros(n, n);
    for (i, d) in ds.into_iter().enumerate() {
        m.set(i, i, d);
    }
    AbelianInvariants::from_divisors(smith_normal_form(&m).diagonal())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_math::rat;

    fn decide_ints(a: i64, p: &[i64]) -> VerdictReport {
        decide(&Problem::new(rat(a), Poly::from_ints(p)).unwrap()).unwrap()
    }

    fn primary(r: &VerdictReport) -> Anchor {
        let p: Vec<_> = r.reason_chain.iter().filter(|s| s.primary).collect();
        assert_eq!(p.len(), 1);
        p[0].anchor
    }

    #[test]
    fn golden_low_degree() {
        let r = decide_ints(9, &[1, 0, 1]);
        assert_eq!((r.verdict, primary(&r)), (Verdict::Rational, Anchor::SquareCoefficient));
        let r = decide_ints(-1, &[2]);
        assert_eq!((r.verdict, primary(&r)), (Verdict::Rational, Anchor::LowDegree));
        let r = decide_ints(-1, &[-1]);
        assert_eq!((r.verdict, primary(&r)), (Verdict::NotRational, Anchor::LowDegree));
        assert_eq!(decide_ints(7, &[3, 5]).verdict, Verdict::Rational);
        // x² + 1 = 1·x² + 1, 1 = 1² − 2·0² − 1·0²
        assert_eq!(decide_ints(2, &[1, 0, 1]).verdict, Verdict::Rational);
        // −x² − 1 with a = −1: s² + t² + w² = −1 has no solution
        assert_eq!(decide_ints(-1, &[-1, 0, -1]).verdict, Verdict::NotRational);
    }

    #[test]
    fn cohomology_obstruction_case() {
        let p = &Poly::from_ints(&[2, 0, 1]) * &Poly::from_ints(&[3, 0, 1]);
        let r = decide(&Problem::new(rat(6), p).unwrap()).unwrap();
        assert_eq!(r.verdict, Verdict::NotRational);
        assert_eq!(primary(&r), Anchor::CohomologyObstruction);
        assert_eq!(r.h1.unwrap(), AbelianInvariants::from_divisors(vec![BigInt::from(2)]));
        let c = r.conditions.unwrap();
        for (_, s) in c.all() {
            assert_eq!(s.status, Status::Holds);
        }
    }

    #[test]
    fn high_degree_cases() {
        let r = decide_ints(5, &[2, 0, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(
            (r.verdict, primary(&r)),
            (Verdict::NotRational, Anchor::FiberClassInfeasibility)
        );
        assert!(r.h1.unwrap().is_empty());
        let p = &Poly::from_ints(&[1, 0, 1]) * &Poly::from_ints(&[1, -1, 0, 1]);
        let r = decide(&Problem::new(rat(-1), p).unwrap()).unwrap();
        assert_eq!(
            (r.verdict, primary(&r)),
            (Verdict::NotRational, Anchor::DelPezzoDescent)
        );
        assert_eq!(r.reduction_trace[0].op, "remove_split_factor");
    }

    #[test]
    fn cond3_fails_multiquadratic() {
        let p = &(&Poly::from_ints(&[1, 0, 1]) * &Poly::from_ints(&[2, 0, 1])) * &Poly::from_ints(&[3, 0, 1]);
        let c = check_conditions_with(&Problem::new(rat(5), p).unwrap(), &Config::default());
        assert_eq!(c.cond3.status, Status::Fails);
        assert_eq!(c.cond4.status, Status::Holds);
    }
}
