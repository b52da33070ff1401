//! Exact rational and polynomial arithmetic.
//!
//! Everything here is exact: there is no floating point anywhere in the crate.

mod factor;
mod modp;
mod norm;
mod poly;
mod quadratic;

pub use factor::{
    factor_rational_poly, factor_with, squarefree_decomposition, squarefree_part, FactorBackend, Factorization,
    Kronecker,
};
pub use norm::{solve_norm_equation_bounded, solve_ternary_bounded, NormSearch, TernarySearch};
pub use poly::Poly;
pub(crate) use quadratic::split_irreducible;
pub use quadratic::{factor_over_quadratic, QuadExtPoly, QuadraticSplit, SplitSearch};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational; always kept in lowest terms with a positive denominator.
pub type Rat = num_rational::BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Exact integer square root, if `n` is a perfect square.
pub fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if &(&s * &s) == n {
        Some(s)
    } else {
        None
    }
}

/// Exact square root of a rational, if it is the square of a rational.
pub fn rat_sqrt(q: &Rat) -> Option<Rat> {
    let n = int_sqrt(q.numer())?;
    let d = int_sqrt(q.denom())?;
    Some(Rat::new(n, d))
}

pub fn is_rational_square(q: &Rat) -> bool {
    rat_sqrt(q).is_some()
}

/// Representative of the square class of a nonzero rational: a squarefree integer `D` with
/// `q / D` a rational square.
///
/// Square factors are stripped by trial division up to 10^6; a remaining cofactor is only
/// removed when it is itself a perfect square.
pub fn square_class(q: &Rat) -> BigInt {
    assert!(!q.is_zero(), "square class of zero");
    let sign = q.numer().sign();
    let mut n = (q.numer() * q.denom()).abs();
    let mut out = BigInt::one();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(1_000_000u32);
    while &p * &p <= n && p <= limit {
        let mut e = 0u32;
        while n.is_multiple_of(&p) {
            n /= &p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= &p;
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    if int_sqrt(&n).is_none() {
        out *= n;
    }
    if sign == Sign::Minus {
        -out
    } else {
        out
    }
}

/// Least common multiple of the denominators of a coefficient list.
pub(crate) fn denominator_lcm(coeffs: &[Rat]) -> BigInt {
    coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

pub(crate) fn content(values: &[BigInt]) -> BigInt {
    values.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_tests() {
        assert_eq!(rat_sqrt(&ratio(9, 4)), Some(ratio(3, 2)));
        assert_eq!(rat_sqrt(&rat(2)), None);
        assert_eq!(rat_sqrt(&rat(-4)), None);
        assert!(is_rational_square(&rat(0)));
    }

    #[test]
    fn square_class_strips_squares() {
        assert_eq!(square_class(&rat(24)), BigInt::from(6));
        assert_eq!(square_class(&rat(-9)), BigInt::from(-1));
        assert_eq!(square_class(&ratio(1, 2)), BigInt::from(2));
        assert_eq!(square_class(&ratio(-5, 12)), BigInt::from(-15));
    }
}
