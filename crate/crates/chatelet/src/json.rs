//! JSON rendering of reports. Rationals are strings `"num/den"` (bare `"n"` for integers),
//! polynomials are coefficient lists lowest degree first, and object keys keep insertion order.

use chatelet_core::chatelet::{PicCohomology, SublatticeQuotients};
use chatelet_core::decider::{ConditionReport, Data, Datum, ReasonStep, TraceEntry, VerdictReport};
use chatelet_core::delpezzo::{ConicClass, DescentSummary, FiberCandidate, FiberSearch};
use chatelet_core::exact_math::{Poly, Rat};
use chatelet_core::lattice::{AbelianInvariants, IntMatrix, IntVector};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

pub fn rational(q: &Rat) -> Value {
    if q.is_integer() {
        Value::String(q.numer().to_string())
    } else {
        Value::String(format!("{}/{}", q.numer(), q.denom()))
    }
}

pub fn poly(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(rational).collect())
}

/// Integers that fit in `i64` become JSON numbers, larger ones strings.
pub fn integer(n: &BigInt) -> Value {
    match i64::try_from(n) {
        Ok(v) => Value::from(v),
        Err(_) => Value::String(n.to_string()),
    }
}

pub fn divisors(inv: &AbelianInvariants) -> Value {
    Value::Array(inv.divisors.iter().map(integer).collect())
}

pub fn vector(v: &IntVector) -> Value {
    Value::Array(v.iter().map(integer).collect())
}

pub fn matrix(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector(&m.row(i))).collect())
}

pub fn datum(d: &Datum) -> Value {
    match d {
        Datum::Int(n) => integer(n),
        Datum::Rat(q) => rational(q),
        Datum::Poly(p) => poly(p),
        Datum::Bool(b) => Value::Bool(*b),
        Datum::Text(s) => Value::String(s.clone()),
        Datum::Ints(v) => Value::Array(v.iter().map(integer).collect()),
        Datum::Polys(v) => Value::Array(v.iter().map(poly).collect()),
        Datum::Texts(v) => Value::Array(v.iter().cloned().map(Value::String).collect()),
    }
}

pub fn data(d: &Data) -> Value {
    Value::Object(d.iter().map(|(k, v)| (k.clone(), datum(v))).collect())
}

fn reason(s: &ReasonStep) -> Value {
    json!({
        "step": s.step,
        "anchor": s.anchor.as_str(),
        "role": if s.primary { "primary" } else { "supporting" },
        "data": data(&s.data),
    })
}

fn trace(t: &TraceEntry) -> Value {
    json!({ "op": t.op, "data": data(&t.data) })
}

pub fn conditions(c: &ConditionReport) -> Value {
    let mut m = Map::new();
    for (name, s) in c.all() {
        m.insert(
            name.to_string(),
            json!({ "status": s.status.as_str(), "evidence": data(&s.evidence) }),
        );
    }
    Value::Object(m)
}

pub fn verdict_report(r: &VerdictReport) -> Value {
    json!({
        "verdict": r.verdict.as_str(),
        "reason_chain": r.reason_chain.iter().map(reason).collect::<Vec<_>>(),
        "conditions": r.conditions.as_ref().map_or(Value::Null, conditions),
        "invariants": {
            "h1": r.h1.as_ref().map_or(Value::Null, divisors),
            "h_minus1": r.h_minus1.as_ref().map_or(Value::Null, divisors),
        },
        "reduction_trace": r.reduction_trace.iter().map(trace).collect::<Vec<_>>(),
    })
}

pub fn cohomology(c: &PicCohomology) -> Value {
    json!({
        "group_order": c.group_order,
        "m1": { "h_minus1": divisors(&c.m1_h_minus1), "h1": divisors(&c.m1_h1) },
        "m2": { "h_minus1": divisors(&c.m2_h_minus1), "h1": divisors(&c.m2_h1) },
    })
}

pub fn quotients(q: &SublatticeQuotients) -> Value {
    json!({
        "m0_mod_mb": divisors(&q.m0_mod_mb),
        "me_mod_mb": divisors(&q.me_mod_mb),
        "m0_mod_me": divisors(&q.m0_mod_me),
    })
}

pub fn conic_class(c: &ConicClass) -> Value {
    json!({ "d": c.d, "a": c.a, "class": c.to_string() })
}

fn fiber_candidate(c: &FiberCandidate) -> Value {
    json!({ "m": c.m, "nu": c.nu, "multiplicities": c.multiplicities })
}

pub fn fiber_search(s: &FiberSearch) -> Value {
    json!({
        "r": s.r,
        "infeasible": s.infeasible,
        "symbolic_infeasible": s.symbolic_infeasible,
        "witness": s.witness.as_ref().map_or(Value::Null, fiber_candidate),
        "multisets_checked": s.multisets_checked,
    })
}

pub fn descent_summary(s: &DescentSummary) -> Value {
    json!({
        "r": s.r,
        "m0": s.m0,
        "branches": s.branches.to_string(),
        "max_depth": s.max_depth,
        "min_depth": s.min_depth,
        "terminal_m": s.terminal_m,
        "all_terminal": s.all_terminal,
    })
}

pub fn error(kind: &str, message: &str) -> Value {
    json!({ "error": { "kind": kind, "message": message } })
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
