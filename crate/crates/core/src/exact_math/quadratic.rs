//! Splitting of irreducible rational polynomials over Q(sqrt a).
//!
//! An irreducible `f` of degree `n` either stays irreducible over `K = Q(sqrt a)` or splits as
//! `c (A + sqrt(a) B)(A - sqrt(a) B)` with `A` monic of degree `n/2`. Both outcomes are decided
//! by Frobenius data at unramified primes `p`:
//!
//! * `(a/p) = -1`: Frobenius swaps the two conjugate factors, so a split `f` has only
//!   even-degree factors mod `p`. An odd-degree factor proves irreducibility over `K`.
//! * `(a/p) = 1`: a split `f` factors mod `p` into two halves of degree `n/2`. A degree pattern
//!   with no subset summing to `n/2` proves irreducibility over `K`.
//!
//! By Chebotarev such a prime exists whenever `f` is irreducible over `K`. In the split case the
//! halves are found mod a large prime, lifted by rational reconstruction and checked exactly.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::modp::{large_primes, rational_reconstruct, small_primes, Fp, FpPoly};
use super::{factor_rational_poly, is_rational_square, rat_sqrt, Poly, Rat};
use crate::{Error, Result};

/// `A(x) + sqrt(a)·B(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadExtPoly {
    pub base: Poly,
    pub surd: Poly,
    pub a: Rat,
}

impl QuadExtPoly {
    pub fn new(base: Poly, surd: Poly, a: Rat) -> Result<Self> {
        if is_rational_square(&a) {
            return Err(Error::SquareParameter(alloc::format!("{a}")));
        }
        Ok(QuadExtPoly { base, surd, a })
    }

    pub fn conjugate(&self) -> QuadExtPoly {
        QuadExtPoly {
            base: self.base.clone(),
            surd: -&self.surd,
            a: self.a.clone(),
        }
    }

    /// `A² − a·B²`, the product with the conjugate.
    pub fn norm(&self) -> Poly {
        &(&self.base * &self.base) - &(&self.surd * &self.surd).scale(&self.a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuadraticSplit {
    Irreducible,
    /// `f = c (A² − a B²)`.
    Split {
        c: Rat,
        a_part: Poly,
        b_part: Poly,
    },
}

/// Prime budgets for [`factor_over_quadratic`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitSearch {
    pub certificate_primes: usize,
    pub recovery_primes: usize,
}

impl Default for SplitSearch {
    fn default() -> Self {
        SplitSearch {
            certificate_primes: 400,
            recovery_primes: 6,
        }
    }
}

pub fn factor_over_quadratic(f: &Poly, a: &Rat) -> Result<QuadraticSplit> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    if is_rational_square(a) {
        return Err(Error::SquareParameter(alloc::format!("{a}")));
    }
    if f.deg() >= 1 && !factor_rational_poly(f)?.is_irreducible() {
        return Err(Error::ReducibleInput);
    }
    split_irreducible(f, a, &SplitSearch::default())
}

/// Same as [`factor_over_quadratic`] for input already known to be irreducible.
pub(crate) fn split_irreducible(f: &Poly, a: &Rat, search: &SplitSearch) -> Result<QuadraticSplit> {
    let n = f.deg();
    if n == 0 || n % 2 == 1 {
        return Ok(QuadraticSplit::Irreducible);
    }
    let c = f.leading();
    let g = f.monic();
    if n == 2 {
        return Ok(split_quadratic(&g, a, c));
    }
    let bad = bad_modulus(&g, a);
    let mut tried = 0usize;
    if let Some(split) = recover(&g, a, &bad, 2, &mut tried) {
        return Ok(with_unit(split, c));
    }
    for p in small_primes()
        .filter(|p| !bad.is_multiple_of(&BigInt::from(*p)))
        .take(search.certificate_primes)
    {
        tried += 1;
        if non_split_certificate(&g, a, p) {
            return Ok(QuadraticSplit::Irreducible);
        }
    }
    if let Some(split) = recover(&g, a, &bad, search.recovery_primes, &mut tried) {
        return Ok(with_unit(split, c));
    }
    Err(Error::QuadraticSplitUndecided { primes: tried })
}

fn with_unit(split: (Poly, Poly), c: Rat) -> QuadraticSplit {
    QuadraticSplit::Split {
        c,
        a_part: split.0,
        b_part: split.1,
    }
}

/// Closed form for monic `x² + px + q`: `A = x + p/2`, and `f` splits iff `(p²/4 − q)/a` is a
/// rational square `β²`, with `B = β`.
fn split_quadratic(g: &Poly, a: &Rat, c: Rat) -> QuadraticSplit {
    let half = g.coeff(1) / Rat::from_integer(BigInt::from(2));
    let rest = (&half * &half - g.coeff(0)) / a;
    match rat_sqrt(&rest) {
        Some(beta) if !beta.is_zero() => QuadraticSplit::Split {
            c,
            a_part: Poly::new(alloc::vec![half, Rat::one()]),
            b_part: Poly::constant(beta),
        },
        _ => QuadraticSplit::Irreducible,
    }
}

/// Product of everything a good prime must avoid: 2, numerator and denominator of `a`, every
/// coefficient denominator of `g`.
fn bad_modulus(g: &Poly, a: &Rat) -> BigInt {
    let mut bad = BigInt::from(2) * a.numer().abs() * a.denom();
    for c in g.coeffs() {
        bad *= c.denom();
    }
    bad
}

fn reduce(g: &Poly, fp: Fp) -> Option<FpPoly> {
    let h = fp.reduce_poly(g.coeffs())?;
    (h.len() == g.deg() + 1 && fp.is_squarefree(&h)).then_some(h)
}

fn subset_sums(pattern: &[usize]) -> BTreeSet<usize> {
    let mut sums = BTreeSet::new();
    sums.insert(0usize);
    for d in pattern {
        let next: Vec<usize> = sums.iter().map(|s| s + d).collect();
        sums.extend(next);
    }
    sums
}

fn non_split_certificate(g: &Poly, a: &Rat, p: u64) -> bool {
    let fp = Fp::new(p);
    let Some(h) = reduce(g, fp) else {
        return false;
    };
    let Some(am) = fp.reduce_rat(a) else {
        return false;
    };
    let pattern = fp.degree_pattern(&h);
    match fp.legendre(am) {
        -1 => pattern.iter().any(|d| d % 2 == 1),
        1 => !subset_sums(&pattern).contains(&(g.deg() / 2)),
        _ => false,
    }
}

fn recover(g: &Poly, a: &Rat, bad: &BigInt, budget: usize, tried: &mut usize) -> Option<(Poly, Poly)> {
    let n = g.deg();
    let mut used = 0;
    for p in large_primes() {
        if used == budget {
            break;
        }
        if bad.is_multiple_of(&BigInt::from(p)) {
            continue;
        }
        let fp = Fp::new(p);
        let Some(am) = fp.reduce_rat(a) else {
            continue;
        };
        if fp.legendre(am) != 1 {
            continue;
        }
        let Some(h) = reduce(g, fp) else {
            continue;
        };
        used += 1;
        *tried += 1;
        let s = fp.sqrt(am).expect("residue");
        let factors = fp.factor_squarefree(&h);
        let inv2 = fp.inv(2);
        let inv2s = fp.inv(fp.mul(2, s));
        // The half containing factor 0; its complement only flips the sign of B.
        let k = factors.len();
        for mask in 0u64..(1u64 << (k - 1)) {
            let mask = (mask << 1) | 1;
            let deg: usize = (0..k)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| factors[i].len() - 1)
                .sum();
            if deg != n / 2 {
                continue;
            }
            let mut half: FpPoly = alloc::vec![1];
            for (i, fac) in factors.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    half = fp.poly_mul(&half, fac);
                }
            }
            let other = fp.poly_divrem(&h, &half).0;
            let a_p = fp.poly_scale(&fp.poly_add(&half, &other), inv2);
            let b_p = fp.poly_scale(&fp.poly_sub(&half, &other), inv2s);
            if let Some(found) = lift(&a_p, &b_p, p, g, a) {
                return Some(found);
            }
        }
    }
    None
}

fn lift(a_p: &[u64], b_p: &[u64], p: u64, g: &Poly, a: &Rat) -> Option<(Poly, Poly)> {
    let rec = |v: &[u64]| -> Option<Poly> {
        let coeffs: Option<Vec<Rat>> = v.iter().map(|&c| rational_reconstruct(c, p)).collect();
        coeffs.map(Poly::new)
    };
    let big_a = rec(a_p)?;
    let mut big_b = rec(b_p)?;
    if big_b.is_zero() || big_a.deg() != g.deg() / 2 || !big_a.is_monic() {
        return None;
    }
    if big_b.leading() < Rat::zero() {
        big_b = -&big_b;
    }
    let norm = &(&big_a * &big_a) - &(&big_b * &big_b).scale(a);
    (norm == *g).then_some((big_a, big_b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_math::{rat, ratio};

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    fn split(c: i64, a_part: &[i64], b_part: &[i64]) -> QuadraticSplit {
        QuadraticSplit::Split {
            c: rat(c),
            a_part: p(a_part),
            b_part: p(b_part),
        }
    }

    #[test]
    fn examples() {
        assert_eq!(
            factor_over_quadratic(&p(&[1, 0, 1]), &rat(-1)).unwrap(),
            split(1, &[0, 1], &[1])
        );
        assert_eq!(
            factor_over_quadratic(&p(&[2, 0, 1]), &rat(6)).unwrap(),
            QuadraticSplit::Irreducible
        );
        assert_eq!(
            factor_over_quadratic(&p(&[1, 0, 0, 0, 1]), &rat(-1)).unwrap(),
            split(1, &[0, 0, 1], &[1])
        );
    }

    #[test]
    fn preconditions() {
        assert_eq!(
            factor_over_quadratic(&p(&[-1, 0, 1]), &rat(2)),
            Err(Error::ReducibleInput)
        );
        assert!(matches!(
            factor_over_quadratic(&p(&[1, 0, 1]), &rat(4)),
            Err(Error::SquareParameter(_))
        ));
    }

    #[test]
    fn odd_degree_never_splits() {
        assert_eq!(
            factor_over_quadratic(&p(&[1, -1, 0, 1]), &rat(-23)).unwrap(),
            QuadraticSplit::Irreducible
        );
    }

    #[test]
    fn quartic_splits() {
        // x^4 + 1 splits over Q(sqrt 2) and Q(sqrt -2) as well.
        assert_eq!(
            factor_over_quadratic(&p(&[1, 0, 0, 0, 1]), &rat(2)).unwrap(),
            split(1, &[1, 0, 1], &[0, 1])
        );
        assert_eq!(
            factor_over_quadratic(&p(&[1, 0, 0, 0, 1]), &rat(-2)).unwrap(),
            split(1, &[-1, 0, 1], &[0, 1])
        );
        assert_eq!(
            factor_over_quadratic(&p(&[1, 0, 0, 0, 1]), &rat(3)).unwrap(),
            QuadraticSplit::Irreducible
        );
    }

    #[test]
    fn scaled_and_rational_coefficients() {
        // 3 (x^2 - 2x - 1) = 3 ((x - 1)^2 - 2)
        let f = p(&[-3, -6, 3]);
        assert_eq!(
            factor_over_quadratic(&f, &rat(8)).unwrap(),
            QuadraticSplit::Split {
                c: rat(3),
                a_part: p(&[-1, 1]),
                b_part: Poly::constant(ratio(1, 2)),
            }
        );
    }

    #[test]
    fn sextic_and_octic() {
        // (x^3 + 1/2)^2 - 5 (x + 1)^2, irreducible over Q
        let a = rat(5);
        let big_a = Poly::new(alloc::vec![ratio(1, 2), rat(0), rat(0), rat(1)]);
        let big_b = p(&[1, 1]);
        let f = &(&big_a * &big_a) - &(&big_b * &big_b).scale(&a);
        assert!(factor_rational_poly(&f).unwrap().is_irreducible());
        assert_eq!(
            factor_over_quadratic(&f, &a).unwrap(),
            QuadraticSplit::Split {
                c: rat(1),
                a_part: big_a,
                b_part: big_b,
            }
        );
        assert_eq!(
            factor_over_quadratic(&p(&[2, 0, 0, 0, 0, 0, 0, 0, 1]), &rat(5)).unwrap(),
            QuadraticSplit::Irreducible
        );
    }

    #[test]
    fn norm_of_ext_poly() {
        let q = QuadExtPoly::new(p(&[0, 1]), p(&[1]), rat(-1)).unwrap();
        assert_eq!(q.norm(), p(&[1, 0, 1]));
        assert_eq!(q.conjugate().norm(), q.norm());
    }
}
