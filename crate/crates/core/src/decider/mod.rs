//! The decision pipeline for `z² = a y² + P(x)`: conditions, reductions, the low-degree
//! criteria, and the three obstruction stages.

mod conditions;
mod pipeline;
mod reduce;

pub use conditions::{check_conditions, check_conditions_with, ConditionReport, ConditionStatus, Status};
pub use pipeline::{decide, decide_low_degree, decide_with};
pub use reduce::{reduce_problem, reduce_problem_with, Reduction, TraceEntry};

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::chatelet::RootAction;
use crate::exact_math::{Kronecker, Poly, Rat, SplitSearch};
use crate::lattice::{AbelianInvariants, DEFAULT_GROUP_CAP};
use crate::{Error, Result};

/// A value attached to a report entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Datum {
    Int(BigInt),
    Rat(Rat),
    Poly(Poly),
    Bool(bool),
    Text(String),
    Ints(Vec<BigInt>),
    Polys(Vec<Poly>),
    Texts(Vec<String>),
}

impl From<usize> for Datum {
    fn from(n: usize) -> Self {
        Datum::Int(BigInt::from(n))
    }
}

impl From<i64> for Datum {
    fn from(n: i64) -> Self {
        Datum::Int(BigInt::from(n))
    }
}

impl From<u128> for Datum {
    fn from(n: u128) -> Self {
        Datum::Int(BigInt::from(n))
    }
}

impl From<BigInt> for Datum {
    fn from(n: BigInt) -> Self {
        Datum::Int(n)
    }
}

impl From<Rat> for Datum {
    fn from(q: Rat) -> Self {
        Datum::Rat(q)
    }
}

impl From<Poly> for Datum {
    fn from(p: Poly) -> Self {
        Datum::Poly(p)
    }
}

impl From<bool> for Datum {
    fn from(b: bool) -> Self {
        Datum::Bool(b)
    }
}

impl From<&str> for Datum {
    fn from(s: &str) -> Self {
        Datum::Text(s.to_string())
    }
}

impl From<String> for Datum {
    fn from(s: String) -> Self {
        Datum::Text(s)
    }
}

impl From<&AbelianInvariants> for Datum {
    fn from(inv: &AbelianInvariants) -> Self {
        Datum::Ints(inv.divisors.clone())
    }
}

pub type Data = Vec<(String, Datum)>;

pub(crate) fn data<const N: usize>(entries: [(&str, Datum); N]) -> Data {
    entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// User-supplied facts the pipeline cannot derive on its own.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Certificates {
    /// Generators of the Galois group as permutations of the roots of the reduced polynomial,
    /// listed factor by factor in the order of the reduction's factor list.
    pub galois_group: Option<Vec<RootAction>>,
    pub cond3: Option<Cond3Certificate>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cond3Certificate {
    pub holds: bool,
    pub justification: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    pub a: Rat,
    pub p: Poly,
    pub certificates: Certificates,
}

impl Problem {
    pub fn new(a: Rat, p: Poly) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::InvalidProblem("a = 0".into()));
        }
        if p.is_zero() {
            return Err(Error::InvalidProblem("P = 0".into()));
        }
        Ok(Problem {
            a,
            p,
            certificates: Certificates::default(),
        })
    }

    pub fn with_certificates(mut self, certificates: Certificates) -> Self {
        self.certificates = certificates;
        self
    }
}

/// Bounds for the fiber-class search attached to high-degree reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberBounds {
    pub m_max: i64,
    pub nu_abs: i64,
    pub len_max: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub kronecker: Kronecker,
    pub split: SplitSearch,
    /// Height bound for norm-equation searches.
    pub norm_bound: u64,
    pub group_cap: usize,
    pub fiber: FiberBounds,
    /// Starting `m` for the descent attached to degree 4 and 6 reports.
    pub descent_m0: i64,
    pub descent_depth_cap: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            kronecker: Kronecker::default(),
            split: SplitSearch::default(),
            norm_bound: 32,
            group_cap: DEFAULT_GROUP_CAP,
            fiber: FiberBounds {
                m_max: 3,
                nu_abs: 12,
                len_max: 8,
            },
            descent_m0: 12,
            descent_depth_cap: 64,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Rational,
    NotRational,
    Undecided,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Rational => "RATIONAL",
            Verdict::NotRational => "NOT_RATIONAL",
            Verdict::Undecided => "UNDECIDED",
        }
    }
}

/// The result a reason step rests on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Anchor {
    /// `a` is a rational square.
    SquareCoefficient,
    /// The explicit criteria for `deg P ≤ 2`.
    LowDegree,
    /// `Q(√a)` is not inside the splitting field (Manin's obstruction).
    ManinDisjoint,
    /// A factor of `P` splitting over `Q(√a)` can be removed.
    SplitComponent,
    /// `H¹(G, Pic X) = (Z/2)^j`.
    CohomologyObstruction,
    /// No invariant fiber class exists for even degree at least 8.
    FiberClassInfeasibility,
    /// Descent on del Pezzo surfaces for degree 4 and 6.
    DelPezzoDescent,
}

impl Anchor {
    pub fn as_str(self) -> &'static str {
        match self {
            Anchor::SquareCoefficient => "square_coefficient",
            Anchor::LowDegree => "low_degree",
            Anchor::ManinDisjoint => "manin_disjoint",
            Anchor::SplitComponent => "split_component",
            Anchor::CohomologyObstruction => "cohomology_obstruction",
            Anchor::FiberClassInfeasibility => "fiber_class_infeasibility",
            Anchor::DelPezzoDescent => "del_pezzo_descent",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReasonStep {
    pub step: String,
    pub anchor: Anchor,
    /// The step the verdict rests on; every decided report has exactly one.
    pub primary: bool,
    pub data: Data,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerdictReport {
    pub verdict: Verdict,
    pub reason_chain: Vec<ReasonStep>,
    pub conditions: Option<ConditionReport>,
    /// `H¹(G, Pic X)`, when the lattice stage ran.
    pub h1: Option<AbelianInvariants>,
    /// `Ĥ⁻¹(G, Pic X)`, when the lattice stage ran.
    pub h_minus1: Option<AbelianInvariants>,
    pub reduction_trace: Vec<TraceEntry>,
}

impl VerdictReport {
    pub fn primary_step(&self) -> Option<&ReasonStep> {
        self.reason_chain.iter().find(|s| s.primary)
    }
}
