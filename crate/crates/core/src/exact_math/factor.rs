//! Factorization of rational polynomials.
//!
//! Squarefree parts come from Yun's algorithm. Irreducible factors come from a pluggable
//! [`FactorBackend`]; the default is Kronecker's interpolation method, with two cheap exact
//! shortcuts in front of it: rational roots, and degree patterns of factorizations modulo small
//! primes (a factor of degree `d` over Q forces a subset of the mod-p factor degrees summing to
//! `d`, for every good prime `p`).

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::modp::{small_primes, Fp};
use super::poly::{eval_int, int_exact_div};
use super::{Poly, Rat};
use crate::{Error, Result};

/// `unit · Π factor^mult`, every factor monic and irreducible over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Rat,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> Poly {
        let mut acc = Poly::constant(self.unit.clone());
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m);
        }
        acc
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.factors.iter().map(|(f, _)| f.deg()).collect()
    }
}

/// Finds factors of primitive squarefree integer polynomials.
pub trait FactorBackend {
    /// A nontrivial factor of `f` (coefficients lowest degree first, degree ≥ 2), or `None`
    /// when `f` is irreducible over Q.
    fn find_factor(&self, f: &[BigInt]) -> Result<Option<Vec<BigInt>>>;
}

/// Kronecker's method behind rational-root and modular degree-pattern filters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kronecker {
    /// Largest input degree for which the interpolation search is attempted.
    pub max_degree: usize,
    /// Largest coefficient magnitude of the primitive input.
    pub max_coeff: u64,
    /// Upper limit on interpolation candidates per factor degree.
    pub max_candidates: u64,
}

impl Default for Kronecker {
    fn default() -> Self {
        Kronecker {
            max_degree: 8,
            max_coeff: 1_000_000,
            max_candidates: 4_000_000,
        }
    }
}

impl Kronecker {
    fn bound_error(&self, detail: &str) -> Error {
        Error::FactorizationBoundExceeded {
            max_degree: self.max_degree,
            max_coeff: self.max_coeff,
            detail: detail.into(),
        }
    }
}

impl FactorBackend for Kronecker {
    fn find_factor(&self, f: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        let n = f.len() - 1;
        if n <= 1 {
            return Ok(None);
        }
        if f[0].is_zero() {
            return Ok(Some(vec![BigInt::zero(), BigInt::one()]));
        }
        let allowed = allowed_factor_degrees(f);
        let candidates: Vec<usize> = (1..=n / 2).filter(|d| allowed.contains(d)).collect();
        if candidates.is_empty() {
            return Ok(None);
        }
        let height = f.iter().map(|c| c.abs()).max().unwrap_or_default();
        if n > self.max_degree {
            return Err(self.bound_error(&format!("degree {n}")));
        }
        if height > BigInt::from(self.max_coeff) {
            return Err(self.bound_error(&format!("coefficient {height}")));
        }
        for d in candidates {
            let found = if d == 1 {
                rational_root_factor(f)
            } else {
                self.interpolation_search(f, d)?
            };
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

/// Degrees `d` in `[0, n]` compatible with the factor-degree patterns modulo several primes.
fn allowed_factor_degrees(f: &[BigInt]) -> BTreeSet<usize> {
    let n = f.len() - 1;
    let mut allowed: BTreeSet<usize> = (0..=n).collect();
    let mut used = 0;
    for p in small_primes().take(60) {
        if used == 8 || allowed.len() <= 2 {
            break;
        }
        let fp = Fp::new(p);
        if fp.reduce_int(&f[n]) == 0 {
            continue;
        }
        let g: Vec<u64> = fp.trim(f.iter().map(|c| fp.reduce_int(c)).collect());
        if !fp.is_squarefree(&g) {
            continue;
        }
        used += 1;
        let mut sums = BTreeSet::new();
        sums.insert(0usize);
        for d in fp.degree_pattern(&g) {
            let next: Vec<usize> = sums.iter().map(|s| s + d).collect();
            sums.extend(next);
        }
        allowed = allowed.intersection(&sums).copied().collect();
    }
    allowed
}

fn positive_divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = 1u64;
    while k * k <= n {
        if n.is_multiple_of(k) {
            small.push(k);
            if k * k != n {
                large.push(n / k);
            }
        }
        k += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn rational_root_factor(f: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = f.len() - 1;
    let c0 = f[0].abs().to_u64()?;
    let cn = f[n].abs().to_u64()?;
    for q in positive_divisors(cn) {
        for p in positive_divisors(c0) {
            if p.gcd(&q) != 1 {
                continue;
            }
            for sign in [1i64, -1] {
                let p = BigInt::from(p) * sign;
                let q = BigInt::from(q);
                // root p/q  <=>  q^n f(p/q) = 0
                let mut acc = BigInt::zero();
                let mut qpow = BigInt::one();
                let mut terms = vec![BigInt::zero(); n + 1];
                let mut ppow = BigInt::one();
                for (k, term) in terms.iter_mut().enumerate() {
                    *term = &f[k] * &ppow;
                    ppow *= &p;
                }
                for k in (0..=n).rev() {
                    acc += &terms[k] * &qpow;
                    qpow *= &q;
                }
                if acc.is_zero() {
                    return Some(vec![-p, q]);
                }
            }
        }
    }
    None
}

impl Kronecker {
    fn interpolation_search(&self, f: &[BigInt], d: usize) -> Result<Option<Vec<BigInt>>> {
        let n = f.len() - 1;
        let reach = (n + 6) as i64;
        let mut points: Vec<(BigInt, i64)> = (-reach..=reach)
            .map(|x| (eval_int(f, &BigInt::from(x)), x))
            .filter(|(v, _)| !v.is_zero())
            .collect();
        points.sort_by(|a, b| {
            a.0.abs()
                .cmp(&b.0.abs())
                .then(a.1.abs().cmp(&b.1.abs()))
                .then(a.1.cmp(&b.1))
        });
        let extra = 2usize;
        if points.len() < d + 1 + extra {
            return Err(self.bound_error("not enough evaluation points"));
        }
        points.truncate(d + 1 + extra);
        let mut divisors: Vec<Vec<i128>> = Vec::with_capacity(d + 1);
        let mut values: Vec<i128> = Vec::new();
        for (v, _) in &points {
            let Some(m) = v.abs().to_u64() else {
                return Err(self.bound_error("evaluation too large"));
            };
            values.push(v.to_i128().expect("fits"));
            divisors.push(positive_divisors(m).into_iter().map(i128::from).collect());
        }
        let xs: Vec<i128> = points.iter().map(|(_, x)| *x as i128).collect();
        let interp_x = &xs[..=d];
        let extra_x = &xs[d + 1..];
        let extra_v = &values[d + 1..];

        let total: u128 = divisors[..=d]
            .iter()
            .enumerate()
            .map(|(i, ds)| ds.len() as u128 * if i == 0 { 1 } else { 2 })
            .product();
        if total > self.max_candidates as u128 {
            return Err(self.bound_error(&format!("{total} interpolation candidates for degree {d}")));
        }

        // D·g(x) = Σ y_i (D / D_i) Π_{j≠i} (x − x_j), with D_i = Π_{j≠i} (x_i − x_j).
        let mut dens = Vec::with_capacity(d + 1);
        let mut nums: Vec<Vec<i128>> = Vec::with_capacity(d + 1);
        for i in 0..=d {
            let mut den = 1i128;
            let mut num = vec![1i128];
            for j in 0..=d {
                if i == j {
                    continue;
                }
                den *= interp_x[i] - interp_x[j];
                let mut next = vec![0i128; num.len() + 1];
                for (k, c) in num.iter().enumerate() {
                    next[k + 1] += c;
                    next[k] -= c * interp_x[j];
                }
                num = next;
            }
            dens.push(den);
            nums.push(num);
        }
        let common = dens.iter().fold(1i128, |acc, &x| acc.lcm(&x));
        let basis: Vec<Vec<i128>> = (0..=d)
            .map(|i| nums[i].iter().map(|c| c * (common / dens[i])).collect())
            .collect();

        let lead = f[n].to_i128().expect("bounded");
        let constant = f[0].to_i128().expect("bounded");
        let choices: Vec<Vec<i128>> = divisors[..=d]
            .iter()
            .enumerate()
            .map(|(i, ds)| {
                if i == 0 {
                    ds.clone()
                } else {
                    ds.iter().flat_map(|&x| [x, -x]).collect()
                }
            })
            .collect();
        let mut odometer = vec![0usize; d + 1];
        loop {
            let ys: Vec<i128> = (0..=d).map(|i| choices[i][odometer[i]]).collect();
            if let Some(g) = candidate(&basis, &ys, common, d, lead, constant, extra_x, extra_v) {
                let g_big: Vec<BigInt> = g.iter().map(|&c| BigInt::from(c)).collect();
                if int_exact_div(f, &g_big).is_some() {
                    return Ok(Some(g_big));
                }
            }
            let mut k = 0;
            loop {
                if k > d {
                    return Ok(None);
                }
                odometer[k] += 1;
                if odometer[k] < choices[k].len() {
                    break;
                }
                odometer[k] = 0;
                k += 1;
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn candidate(
    basis: &[Vec<i128>],
    ys: &[i128],
    common: i128,
    d: usize,
    lead: i128,
    constant: i128,
    extra_x: &[i128],
    extra_v: &[i128],
) -> Option<Vec<i128>> {
    let mut g = vec![0i128; d + 1];
    for (y, b) in ys.iter().zip(basis) {
        for (k, c) in b.iter().enumerate() {
            g[k] = g[k].checked_add(y.checked_mul(*c)?)?;
        }
    }
    for c in g.iter_mut() {
        if *c % common != 0 {
            return None;
        }
        *c /= common;
    }
    if g[d] == 0 || lead % g[d] != 0 || g[0] == 0 || constant % g[0] != 0 {
        return None;
    }
    for (&x, &v) in extra_x.iter().zip(extra_v) {
        let mut acc = 0i128;
        for c in g.iter().rev() {
            acc = acc.checked_mul(x)?.checked_add(*c)?;
        }
        if acc == 0 || v % acc != 0 {
            return None;
        }
    }
    Some(g)
}

/// `P / gcd(P, P')`, scaled to keep the leading coefficient of `P`.
pub fn squarefree_part(p: &Poly) -> Result<Poly> {
    if p.is_zero() {
        return Err(Error::ZeroInput);
    }
    let g = p.gcd(&p.derivative());
    let q = p.exact_div(&g).expect("gcd divides");
    Ok(q.monic().scale(&p.leading()))
}

/// Yun's squarefree decomposition: monic, pairwise coprime, squarefree parts with
/// multiplicities, so that `P = lc(P) · Π part^mult`.
pub fn squarefree_decomposition(p: &Poly) -> Result<Vec<(Poly, u32)>> {
    if p.is_zero() {
        return Err(Error::ZeroInput);
    }
    let f = p.monic();
    let mut out = Vec::new();
    if f.deg() == 0 {
        return Ok(out);
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.exact_div(&a0).expect("gcd divides");
    let c = df.exact_div(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative();
    let mut i = 1u32;
    while b.deg() > 0 {
        let a = b.gcd(&d);
        let b_next = b.exact_div(&a).expect("gcd divides");
        let c_next = d.exact_div(&a).expect("gcd divides");
        if a.deg() > 0 {
            out.push((a, i));
        }
        d = &c_next - &b_next.derivative();
        b = b_next;
        i += 1;
    }
    Ok(out)
}

pub fn factor_rational_poly(p: &Poly) -> Result<Factorization> {
    factor_with(p, &Kronecker::default())
}

pub fn factor_with(p: &Poly, backend: &dyn FactorBackend) -> Result<Factorization> {
    if p.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(p)? {
        for f in split_fully(&part, backend)? {
            factors.push((f, mult));
        }
    }
    factors.sort();
    Ok(Factorization {
        unit: p.leading(),
        factors,
    })
}

fn split_fully(f: &Poly, backend: &dyn FactorBackend) -> Result<Vec<Poly>> {
    if f.deg() <= 1 {
        return Ok(vec![f.monic()]);
    }
    let (_, prim) = f.primitive_part();
    match backend.find_factor(&prim)? {
        None => Ok(vec![f.monic()]),
        Some(g) => {
            let g = Poly::from_bigints(&g).monic();
            let h = f
                .exact_div(&g)
                .ok_or_else(|| Error::InvalidProblem("backend returned a non-divisor".into()))?;
            let mut out = split_fully(&g, backend)?;
            out.extend(split_fully(&h, backend)?);
            Ok(out)
        }
    }
}
