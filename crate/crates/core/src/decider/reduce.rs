use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{data, Config, Data, Datum, Problem};
use crate::exact_math::{factor_with, is_rational_square, split_irreducible, square_class, Poly, QuadraticSplit, Rat};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub op: String,
    pub data: Data,
}

fn entry(op: &str, data: Data) -> TraceEntry {
    TraceEntry {
        op: op.to_string(),
        data,
    }
}

/// Canonical form of a problem: `a` a squarefree integer, `P = u · Π f_i` with `u` a squarefree
/// integer and distinct monic `f_i` irreducible over `Q(√a)`, of even degree once the degree
/// is at least 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub problem: Problem,
    pub unit: BigInt,
    /// Irreducible factors of `problem.p`, sorted.
    pub factors: Vec<Poly>,
    /// Polynomial and factors just before the degree was made even, if that happened.
    pub odd_form: Option<(Poly, Vec<Poly>)>,
    pub trace: Vec<TraceEntry>,
}

pub fn reduce_problem(p: &Problem) -> Result<Reduction> {
    reduce_problem_with(p, &Config::default())
}

fn assemble(unit: &BigInt, factors: &[Poly]) -> Poly {
    factors
        .iter()
        .fold(Poly::constant(Rat::from_integer(unit.clone())), |acc, f| &acc * f)
}

fn sorted(mut v: Vec<Poly>) -> Vec<Poly> {
    v.sort_by(|f, g| f.deg().cmp(&g.deg()).then_with(|| f.cmp(g)));
    v
}

fn normalize_unit(unit: &Rat, trace: &mut Vec<TraceEntry>) -> BigInt {
    let u = square_class(unit);
    if Rat::from_integer(u.clone()) != *unit {
        trace.push(entry(
            "normalize_unit",
            data([("from", unit.clone().into()), ("to", u.clone().into())]),
        ));
    }
    u
}

pub fn reduce_problem_with(p: &Problem, config: &Config) -> Result<Reduction> {
    if is_rational_square(&p.a) {
        return Err(Error::SquareParameter(alloc::format!("{}", p.a)));
    }
    let mut trace = Vec::new();
    let a = square_class(&p.a);
    let a_rat = Rat::from_integer(a.clone());
    if a_rat != p.a {
        trace.push(entry(
            "normalize_a",
            data([("from", p.a.clone().into()), ("to", a.clone().into())]),
        ));
    }

    // z² − a y² = g² h is birational to z² − a y² = h
    let fac = factor_with(&p.p, &config.kronecker)?;
    let mut unit = fac.unit.clone();
    let mut kept = Vec::new();
    let mut squares = Vec::new();
    for (f, m) in fac.factors {
        if m % 2 == 1 {
            kept.push(f.clone());
        }
        if m >= 2 {
            squares.push(f.pow(m - m % 2));
        }
    }
    if !squares.is_empty() {
        trace.push(entry(
            "remove_square_factors",
            data([("removed", Datum::Polys(squares))]),
        ));
    }

    // a factor c (A² − a B²) is a norm from Q(√a) times c
    let mut inert = Vec::new();
    for f in kept {
        match split_irreducible(&f, &a_rat, &config.split)? {
            QuadraticSplit::Irreducible => inert.push(f),
            QuadraticSplit::Split { c, a_part, b_part } => {
                trace.push(entry(
                    "remove_split_factor",
                    data([
                        ("factor", f.into()),
                        ("c", c.clone().into()),
                        ("A", a_part.into()),
                        ("B", b_part.into()),
                    ]),
                ));
                unit *= c;
            }
        }
    }
    let mut unit = normalize_unit(&unit, &mut trace);
    let mut factors = sorted(inert);
    let mut poly = assemble(&unit, &factors);
    let mut odd_form = None;

    let d = poly.deg();
    if d >= 3 && d % 2 == 1 {
        if poly.coeff(0).is_zero() {
            let c = (1i64..)
                .find(|&c| !poly.eval(&Rat::from_integer(BigInt::from(c))).is_zero())
                .expect("a nonzero polynomial has finitely many roots");
            let c_rat = Rat::from_integer(BigInt::from(c));
            poly = poly.shift(&c_rat);
            factors = sorted(factors.iter().map(|f| f.shift(&c_rat)).collect());
            trace.push(entry("shift", data([("c", c.into())])));
        }
        odd_form = Some((poly.clone(), factors.clone()));
        // x^{d+1} P(1/x): roots 1/c_i and 0
        let mut new_unit = Rat::from_integer(unit.clone());
        let mut new_factors = alloc::vec![Poly::x()];
        for f in &factors {
            let rev = f.reversed(f.deg());
            new_unit *= rev.leading();
            new_factors.push(rev.monic());
        }
        let evenized = poly.reversed(d + 1);
        trace.push(entry(
            "evenize",
            data([
                ("degree_before", d.into()),
                ("degree_after", (d + 1).into()),
                ("result", evenized.clone().into()),
            ]),
        ));
        unit = normalize_unit(&new_unit, &mut trace);
        factors = sorted(new_factors);
        poly = assemble(&unit, &factors);
    }

    let problem = Problem {
        a: a_rat,
        p: poly,
        certificates: p.certificates.clone(),
    };
    Ok(Reduction {
        problem,
        unit,
        factors,
        odd_form,
        trace,
    })
}
