//! Polynomials over prime fields F_p with p < 2^63.
//!
//! Only used as a certificate engine: degree patterns of factorizations modulo p bound the
//! possible factor degrees over Q, and Frobenius patterns decide splitting over Q(sqrt a).

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::Rat;

pub(crate) type FpPoly = Vec<u64>;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        debug_assert!(p > 2 && is_prime(p));
        Fp { p }
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % self.p as u128) as u64
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p));
        self.pow(a, self.p - 2)
    }

    pub fn reduce_int(self, n: &BigInt) -> u64 {
        let r = n.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("reduced residue fits")
    }

    /// Reduction of a rational; `None` when p divides the denominator.
    pub fn reduce_rat(self, q: &Rat) -> Option<u64> {
        let d = self.reduce_int(q.denom());
        if d == 0 {
            return None;
        }
        Some(self.mul(self.reduce_int(q.numer()), self.inv(d)))
    }

    /// Legendre symbol of `a` as -1, 0 or 1.
    pub fn legendre(self, a: u64) -> i32 {
        let a = a % self.p;
        if a == 0 {
            return 0;
        }
        if self.pow(a, (self.p - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }

    /// Tonelli-Shanks square root of a quadratic residue.
    pub fn sqrt(self, a: u64) -> Option<u64> {
        let a = a % self.p;
        if a == 0 {
            return Some(0);
        }
        if self.legendre(a) != 1 {
            return None;
        }
        let p = self.p;
        let mut q = p - 1;
        let mut s = 0u32;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let mut z = 2u64;
        while self.legendre(z) != -1 {
            z += 1;
        }
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, q.div_ceil(2));
        while t != 1 {
            let mut i = 0u32;
            let mut t2 = t;
            while t2 != 1 {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let b = self.pow(c, 1u64 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }

    pub fn trim(self, mut f: FpPoly) -> FpPoly {
        while f.last() == Some(&0) {
            f.pop();
        }
        f
    }

    pub fn reduce_poly(self, coeffs: &[Rat]) -> Option<FpPoly> {
        let v: Option<Vec<u64>> = coeffs.iter().map(|c| self.reduce_rat(c)).collect();
        v.map(|v| self.trim(v))
    }

    pub fn poly_add(self, a: &[u64], b: &[u64]) -> FpPoly {
        let n = a.len().max(b.len());
        let v = (0..n)
            .map(|i| self.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect();
        self.trim(v)
    }

    pub fn poly_sub(self, a: &[u64], b: &[u64]) -> FpPoly {
        let n = a.len().max(b.len());
        let v = (0..n)
            .map(|i| self.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect();
        self.trim(v)
    }

    pub fn poly_scale(self, a: &[u64], c: u64) -> FpPoly {
        self.trim(a.iter().map(|&x| self.mul(x, c)).collect())
    }

    pub fn poly_mul(self, a: &[u64], b: &[u64]) -> FpPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        self.trim(out)
    }

    pub fn poly_divrem(self, a: &[u64], b: &[u64]) -> (FpPoly, FpPoly) {
        assert!(!b.is_empty(), "division by zero polynomial mod p");
        let db = b.len() - 1;
        let inv = self.inv(b[db]);
        let mut rem = a.to_vec();
        if rem.len() <= db {
            return (Vec::new(), self.trim(rem));
        }
        let mut quot = vec![0u64; rem.len() - db];
        for k in (0..quot.len()).rev() {
            let c = self.mul(rem[k + db], inv);
            if c == 0 {
                continue;
            }
            for (i, &y) in b.iter().enumerate() {
                rem[k + i] = self.sub(rem[k + i], self.mul(c, y));
            }
            quot[k] = c;
        }
        rem.truncate(db);
        (self.trim(quot), self.trim(rem))
    }

    pub fn monic(self, a: &[u64]) -> FpPoly {
        match a.last() {
            None => Vec::new(),
            Some(&lc) => self.poly_scale(a, self.inv(lc)),
        }
    }

    pub fn poly_gcd(self, a: &[u64], b: &[u64]) -> FpPoly {
        let mut x = self.trim(a.to_vec());
        let mut y = self.trim(b.to_vec());
        while !y.is_empty() {
            let (_, r) = self.poly_divrem(&x, &y);
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    pub fn derivative(self, a: &[u64]) -> FpPoly {
        let v = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| self.mul(c, i as u64 % self.p))
            .collect();
        self.trim(v)
    }

    pub fn is_squarefree(self, f: &[u64]) -> bool {
        self.poly_gcd(f, &self.derivative(f)).len() == 1
    }

    /// `base^e mod modulus` with the exponent given by its binary digits.
    pub fn poly_powmod(self, base: &[u64], e: &BigUint, modulus: &[u64]) -> FpPoly {
        let mut acc: FpPoly = vec![1];
        let (_, b) = self.poly_divrem(base, modulus);
        let bits = e.bits();
        for i in (0..bits).rev() {
            acc = self.poly_divrem(&self.poly_mul(&acc, &acc), modulus).1;
            if e.bit(i) {
                acc = self.poly_divrem(&self.poly_mul(&acc, &b), modulus).1;
            }
        }
        self.poly_divrem(&acc, modulus).1
    }

    /// Distinct-degree factorization of a monic squarefree polynomial: pairs
    /// `(d, product of all irreducible factors of degree d)`.
    pub fn ddf(self, f: &[u64]) -> Vec<(usize, FpPoly)> {
        let mut out = Vec::new();
        let mut rest = self.monic(f);
        let x: FpPoly = vec![0, 1];
        let p = BigUint::from(self.p);
        let mut h = x.clone();
        let mut d = 0;
        while rest.len() > 1 {
            d += 1;
            if 2 * d > rest.len() - 1 {
                out.push((rest.len() - 1, rest.clone()));
                break;
            }
            h = self.poly_powmod(&h, &p, &rest);
            let g = self.poly_gcd(&rest, &self.poly_sub(&h, &x));
            if g.len() > 1 {
                rest = self.poly_divrem(&rest, &g).0;
                h = self.poly_divrem(&h, &rest).1;
                out.push((d, g));
            }
        }
        out
    }

    /// Equal-degree splitting of a product of distinct monic irreducibles of degree `d`.
    /// Deterministic: tries the shifts `x + t` for t = 0, 1, 2, ...
    pub fn edf(self, f: &[u64], d: usize) -> Vec<FpPoly> {
        let n = f.len() - 1;
        if n == d {
            return vec![self.monic(f)];
        }
        let e = (BigUint::from(self.p).pow(d as u32) - BigUint::one()) >> 1;
        let mut t = 0u64;
        loop {
            let base: FpPoly = self.trim(vec![t % self.p, 1]);
            let h = self.poly_sub(&self.poly_powmod(&base, &e, f), &[1]);
            let g = self.poly_gcd(f, &h);
            if g.len() > 1 && g.len() < f.len() {
                let other = self.poly_divrem(f, &g).0;
                let mut out = self.edf(&g, d);
                out.extend(self.edf(&self.monic(&other), d));
                return out;
            }
            t += 1;
            assert!(t < self.p, "equal-degree splitting failed");
        }
    }

    /// Complete factorization of a squarefree polynomial into monic irreducibles,
    /// sorted by degree then coefficients.
    pub fn factor_squarefree(self, f: &[u64]) -> Vec<FpPoly> {
        let mut out = Vec::new();
        for (d, g) in self.ddf(f) {
            out.extend(self.edf(&g, d));
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Degree multiset of the irreducible factors (squarefree input).
    pub fn degree_pattern(self, f: &[u64]) -> Vec<usize> {
        let mut out = Vec::new();
        for (d, g) in self.ddf(f) {
            let k = (g.len() - 1) / d;
            out.extend(core::iter::repeat_n(d, k));
        }
        out.sort_unstable();
        out
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulm = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powm = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulm(acc, b);
            }
            b = mulm(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powm(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulm(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Odd primes in increasing order starting at 3.
pub(crate) fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).step_by(2).filter(|&n| is_prime(n))
}

/// Primes descending from just below 2^61.
pub(crate) fn large_primes() -> impl Iterator<Item = u64> {
    let start = (1u64 << 61) - 1;
    (0..).map(move |k| start - 2 * k).filter(|&n| is_prime(n))
}

/// Rational reconstruction of `a mod m` with numerator and denominator below sqrt(m/2).
pub(crate) fn rational_reconstruct(a: u64, m: u64) -> Option<Rat> {
    let bound = BigInt::from(num_integer::Roots::sqrt(&(m / 2)));
    let (mut r0, mut r1) = (BigInt::from(m), BigInt::from(a));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || num_traits::Signed::abs(&t1) > bound {
        return None;
    }
    let q = Rat::new(r1, t1);
    let check = Fp { p: m }.reduce_rat(&q)?;
    (check == a).then_some(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(2_305_843_009_213_693_951)); // 2^61 - 1
        assert!(!is_prime(561));
        assert_eq!(small_primes().take(5).collect::<Vec<_>>(), vec![3, 5, 7, 11, 13]);
    }

    #[test]
    fn sqrt_mod_p() {
        let f = Fp::new(101);
        for a in 1..101u64 {
            if let Some(r) = f.sqrt(a) {
                assert_eq!(f.mul(r, r), a);
            } else {
                assert_eq!(f.legendre(a), -1);
            }
        }
    }

    #[test]
    fn factor_mod_p_patterns() {
        let f = Fp::new(7);
        // x^4 + 1 mod 7 splits into two quadratics.
        let g = vec![1, 0, 0, 0, 1];
        assert_eq!(f.degree_pattern(&g), vec![2, 2]);
        let factors = f.factor_squarefree(&g);
        let prod = factors.iter().fold(vec![1u64], |acc, h| f.poly_mul(&acc, h));
        assert_eq!(prod, g);
    }

    #[test]
    fn reconstruct_small_fraction() {
        let m = large_primes().next().unwrap();
        let fp = Fp { p: m };
        let q = Rat::new(BigInt::from(-7), BigInt::from(12));
        let a = fp.reduce_rat(&q).unwrap();
        assert_eq!(rational_reconstruct(a, m), Some(q));
    }
}
