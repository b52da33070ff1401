use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

use super::{data, Config, Data, Datum, Problem};
use crate::exact_math::{
    factor_with, is_rational_square, rat_sqrt, split_irreducible, square_class, Factorization, QuadraticSplit, Rat,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Holds,
    Fails,
    Unknown,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Holds => "HOLDS",
            Status::Fails => "FAILS",
            Status::Unknown => "UNKNOWN",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionStatus {
    pub status: Status,
    pub evidence: Data,
}

impl ConditionStatus {
    fn new(status: Status, evidence: Data) -> Self {
        ConditionStatus { status, evidence }
    }
}

/// Conditions (1) to (5) on the input problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    /// `a` is not a square.
    pub cond1: ConditionStatus,
    /// `P` is squarefree of degree at least 3.
    pub cond2: ConditionStatus,
    /// `Q(√a)` lies in the splitting field of `P`.
    pub cond3: ConditionStatus,
    /// Every irreducible factor of `P` stays irreducible over `Q(√a)`.
    pub cond4: ConditionStatus,
    /// Characteristic is not 2 and `P` is separable.
    pub cond5: ConditionStatus,
}

impl ConditionReport {
    pub fn all(&self) -> [(&'static str, &ConditionStatus); 5] {
        [
            ("cond1", &self.cond1),
            ("cond2", &self.cond2),
            ("cond3", &self.cond3),
            ("cond4", &self.cond4),
            ("cond5", &self.cond5),
        ]
    }
}

pub fn check_conditions(p: &Problem) -> ConditionReport {
    check_conditions_with(p, &Config::default())
}

pub fn check_conditions_with(p: &Problem, config: &Config) -> ConditionReport {
    let cond1 = match rat_sqrt(&p.a) {
        Some(s) => ConditionStatus::new(Status::Fails, data([("sqrt_a", s.into())])),
        None => ConditionStatus::new(Status::Holds, data([("square_class", square_class(&p.a).into())])),
    };

    let deg = p.p.deg();
    let cond2 = if !p.p.is_squarefree() {
        let g = p.p.gcd(&p.p.derivative());
        ConditionStatus::new(Status::Fails, data([("repeated_part", g.into())]))
    } else if deg < 3 {
        ConditionStatus::new(Status::Fails, data([("degree", deg.into())]))
    } else {
        ConditionStatus::new(Status::Holds, data([("degree", deg.into())]))
    };

    let factorization = factor_with(&p.p, &config.kronecker);

    let cond4 = match &factorization {
        Err(e) => ConditionStatus::new(Status::Unknown, data([("reason", e.to_string().into())])),
        Ok(fac) => cond4_from(fac, &p.a, config),
    };

    let cond3 = match &factorization {
        Ok(fac) if fac.factors.iter().all(|(f, _)| f.deg() <= 2) => multiquadratic(fac, &p.a),
        _ => match &p.certificates.cond3 {
            Some(c) => ConditionStatus::new(
                if c.holds { Status::Holds } else { Status::Fails },
                data([("certificate", c.justification.clone().into())]),
            ),
            None => ConditionStatus::new(Status::Unknown, Data::new()),
        },
    };

    let cond5 = ConditionStatus::new(Status::Holds, data([("characteristic", 0i64.into())]));
    ConditionReport {
        cond1,
        cond2,
        cond3,
        cond4,
        cond5,
    }
}

fn cond4_from(fac: &Factorization, a: &Rat, config: &Config) -> ConditionStatus {
    if is_rational_square(a) {
        return ConditionStatus::new(Status::Holds, data([("reason", "Q(sqrt a) = Q".into())]));
    }
    let mut inert = Vec::new();
    for (f, _) in &fac.factors {
        match split_irreducible(f, a, &config.split) {
            Ok(QuadraticSplit::Irreducible) => inert.push(f.clone()),
            Ok(QuadraticSplit::Split { c, a_part, b_part }) => {
                return ConditionStatus::new(
                    Status::Fails,
                    data([
                        ("factor", f.clone().into()),
                        ("c", c.into()),
                        ("A", a_part.into()),
                        ("B", b_part.into()),
                    ]),
                )
            }
            Err(e) => return ConditionStatus::new(Status::Unknown, data([("reason", e.to_string().into())])),
        }
    }
    ConditionStatus::new(Status::Holds, data([("inert_factors", Datum::Polys(inert))]))
}

/// When every factor has degree at most 2 the splitting field is `Q(√D_1, …, √D_k)` for the
/// discriminants `D_i`; its quadratic subfields are the square classes of products of the `D_i`.
fn multiquadratic(fac: &Factorization, a: &Rat) -> ConditionStatus {
    let mut gens: Vec<BigInt> = Vec::new();
    for (f, _) in &fac.factors {
        if f.deg() == 2 {
            let disc = f.coeff(1) * f.coeff(1) - Rat::from_integer(BigInt::from(4)) * f.coeff(0);
            let d = square_class(&disc);
            if !d.is_one() && !gens.contains(&d) {
                gens.push(d);
            }
        }
    }
    if gens.len() > 16 {
        return ConditionStatus::new(Status::Unknown, data([("reason", "too many quadratic factors".into())]));
    }
    let mut subfields = BTreeSet::new();
    for mask in 1u32..(1 << gens.len()) {
        let prod: BigInt = gens
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, d)| d.clone())
            .product();
        let d = square_class(&Rat::from_integer(prod));
        if !d.is_one() {
            subfields.insert(d);
        }
    }
    let target = if is_rational_square(a) {
        BigInt::one()
    } else {
        square_class(a)
    };
    let holds = target.is_one() || subfields.contains(&target);
    let evidence = data([
        ("quadratic_subfields", Datum::Ints(subfields.into_iter().collect())),
        ("a_class", target.into()),
    ]);
    ConditionStatus::new(if holds { Status::Holds } else { Status::Fails }, evidence)
}
