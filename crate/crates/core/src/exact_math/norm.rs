//! Bounded searches for rational points on `b = s² − a t²` and `c = s² − a t² − b w²`.
//!
//! Results are three-valued: a witness, a proof of impossibility (sign obstruction only), or an
//! exhausted search.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{is_rational_square, rat_sqrt, Rat};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormSearch {
    /// `b = s² − a t²`.
    Witness {
        s: Rat,
        t: Rat,
    },
    NoneFound,
    Impossible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TernarySearch {
    /// `c = s² − a t² − b w²`.
    Witness {
        s: Rat,
        t: Rat,
        w: Rat,
    },
    NoneFound,
    Impossible,
}

/// Integers `0, 1, −1, 2, −2, …, bound, −bound`.
fn signed_range(bound: u64) -> impl Iterator<Item = i64> + Clone {
    core::iter::once(0).chain((1..=bound as i64).flat_map(|k| [k, -k]))
}

fn within(q: &Rat, bound: u64) -> bool {
    let b = BigInt::from(bound);
    q.numer().abs() <= b && q.denom() <= &b
}

/// Rationals of height at most `bound`, by increasing height, positive before negative.
fn rationals(bound: u64) -> impl Iterator<Item = Rat> {
    core::iter::once(Rat::zero()).chain((1..=bound as i64).flat_map(move |h| {
        // height h: u/v with max(|u|, v) = h, gcd(u, v) = 1
        let mut shell: Vec<(i64, i64)> = (1..=h)
            .flat_map(|v| (-h..=h).map(move |u| (u, v)))
            .filter(|&(u, v)| u != 0 && u.abs().max(v) == h && u.gcd(&v) == 1)
            .collect();
        shell.sort_by_key(|&(u, v)| (v, u.abs(), u < 0));
        shell
            .into_iter()
            .map(|(u, v)| Rat::new(BigInt::from(u), BigInt::from(v)))
            .collect::<Vec<_>>()
    }))
}

pub fn solve_norm_equation_bounded(a: &Rat, b: &Rat, bound: u64) -> Result<NormSearch> {
    if bound == 0 {
        return Err(Error::EmptySearch);
    }
    if is_rational_square(a) {
        return Err(Error::SquareParameter(alloc::format!("{a}")));
    }
    if b.is_zero() {
        return Ok(NormSearch::Witness {
            s: Rat::zero(),
            t: Rat::zero(),
        });
    }
    if a.is_negative() && b.is_negative() {
        return Ok(NormSearch::Impossible);
    }
    for t in rationals(bound) {
        let target = b + a * &t * &t;
        if let Some(s) = rat_sqrt(&target) {
            if within(&s, bound) {
                return Ok(NormSearch::Witness { s, t });
            }
        }
    }
    Ok(NormSearch::NoneFound)
}

/// Searches `t = u1/v`, `w = u2/v` with `|u1|, |u2|, v ≤ bound`.
pub fn solve_ternary_bounded(a: &Rat, b: &Rat, c: &Rat, bound: u64) -> Result<TernarySearch> {
    if bound == 0 {
        return Err(Error::EmptySearch);
    }
    if c.is_zero() {
        return Ok(TernarySearch::Witness {
            s: Rat::zero(),
            t: Rat::zero(),
            w: Rat::zero(),
        });
    }
    if a.is_negative() && b.is_negative() && c.is_negative() {
        return Ok(TernarySearch::Impossible);
    }
    for v in 1..=bound as i64 {
        let v = BigInt::from(v);
        for u1 in signed_range(bound) {
            let t = Rat::new(BigInt::from(u1), v.clone());
            let partial = c + a * &t * &t;
            for u2 in signed_range(bound) {
                let w = Rat::new(BigInt::from(u2), v.clone());
                if let Some(s) = rat_sqrt(&(&partial + b * &w * &w)) {
                    return Ok(TernarySearch::Witness { s, t, w });
                }
            }
        }
    }
    Ok(TernarySearch::NoneFound)
}
