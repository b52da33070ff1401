//! Arithmetic of invariant curve classes on `Y`, conic classes on blown-up planes, and the
//! descent on `m` for `r ∈ {4, 6}`.
//!
//! Throughout `ω = 8 − r = Ω·Ω`. A `G`-invariant curve `C ≡ −mΩ + ν E_{3r/2}` with
//! multiplicities `m_j` at the blown-up points satisfies
//! `Σ m_j² = 4mν + ωm²` and `Σ m_j = 2ν + mω − 2`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

fn omega(r: usize) -> i64 {
    8 - r as i64
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberCandidate {
    pub m: i64,
    pub nu: i64,
    pub multiplicities: Vec<i64>,
}

pub fn fiber_equations_check(r: usize, cand: &FiberCandidate) -> bool {
    let w = omega(r);
    let (m, nu) = (cand.m, cand.nu);
    let s1: i64 = cand.multiplicities.iter().sum();
    let s2: i64 = cand.multiplicities.iter().map(|x| x * x).sum();
    s2 == 4 * m * nu + w * m * m && s1 == 2 * nu + m * w - 2
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberSearch {
    pub r: usize,
    /// No candidate within the bounds satisfies both equations.
    pub infeasible: bool,
    pub witness: Option<FiberCandidate>,
    /// `ω ≤ 0`, which rules out every `m ≥ 1` without search.
    pub symbolic_infeasible: bool,
    pub multisets_checked: u64,
}

/// Exhaustive search over `1 ≤ m ≤ m_max`, `ν ∈ [nu_lo, nu_hi]` and multisets of at most
/// `len_max` multiplicities in `[1, 2m]` (zero multiplicities change neither sum).
pub fn fiber_infeasible(r: usize, m_max: i64, nu_range: (i64, i64), len_max: usize) -> FiberSearch {
    let w = omega(r);
    let mut checked = 0u64;
    let mut witness = None;
    'outer: for m in 1..=m_max {
        let (lo, hi) = nu_range;
        // From the equations with ν ≤ hi.
        let s1_max = 2 * hi + m * w - 2;
        let s2_max = 4 * m * hi + w * m * m;
        if s1_max < 0 || s2_max < 0 {
            continue;
        }
        let mut stack: Vec<i64> = Vec::with_capacity(len_max);
        let mut found = None;
        dfs(
            &mut stack,
            1,
            2 * m,
            len_max,
            0,
            0,
            s1_max,
            s2_max,
            &mut |s1, s2, ms| {
                checked += 1;
                let twice_nu = s1 - m * w + 2;
                if twice_nu % 2 != 0 {
                    return false;
                }
                let nu = twice_nu / 2;
                if nu < lo || nu > hi || s2 != 4 * m * nu + w * m * m {
                    return false;
                }
                found = Some(FiberCandidate {
                    m,
                    nu,
                    multiplicities: ms.to_vec(),
                });
                true
            },
        );
        if found.is_some() {
            witness = found;
            break 'outer;
        }
    }
    if let Some(c) = &witness {
        debug_assert!(fiber_equations_check(r, c));
    }
    FiberSearch {
        r,
        infeasible: witness.is_none(),
        witness,
        symbolic_infeasible: w <= 0,
        multisets_checked: checked,
    }
}

/// Visits nondecreasing multisets with entries in `[min, max]`; stops when `visit` returns true.
#[allow(clippy::too_many_arguments)]
fn dfs(
    stack: &mut Vec<i64>,
    min: i64,
    max: i64,
    len_max: usize,
    s1: i64,
    s2: i64,
    s1_max: i64,
    s2_max: i64,
    visit: &mut dyn FnMut(i64, i64, &[i64]) -> bool,
) -> bool {
    if visit(s1, s2, stack) {
        return true;
    }
    if stack.len() == len_max {
        return false;
    }
    for x in min..=max {
        if s1 + x > s1_max || s2 + x * x > s2_max {
            break;
        }
        stack.push(x);
        let stop = dfs(stack, x, max, len_max, s1 + x, s2 + x * x, s1_max, s2_max, visit);
        stack.pop();
        if stop {
            return true;
        }
    }
    false
}

/// Admissible `ν′` for given `m`: the integers in `(−ωm/4, −1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NuInterval {
    pub lo: i64,
    pub hi: i64,
}

impl NuInterval {
    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn contains(&self, nu: i64) -> bool {
        self.lo <= nu && nu <= self.hi
    }

    pub fn values(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

fn check_descent_r(r: usize) -> Result<()> {
    if r == 4 || r == 6 {
        Ok(())
    } else {
        Err(Error::UnsupportedParameter(format!("r = {r}, expected 4 or 6")))
    }
}

pub fn nu_prime_bound(r: usize, m: i64) -> Result<NuInterval> {
    check_descent_r(r)?;
    if m < 1 {
        return Err(Error::UnsupportedParameter(format!("m = {m}, expected m >= 1")));
    }
    // ν > −ωm/4  <=>  ν ≥ ⌊−ωm/4⌋ + 1
    let lo = (-omega(r) * m).div_euclid(4) + 1;
    Ok(NuInterval { lo, hi: -1 })
}

/// `d·l − Σ a_i F_i` on the plane blown up in `n` points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConicClass {
    pub d: i64,
    pub a: Vec<i64>,
}

impl ConicClass {
    pub fn self_intersection(&self) -> i64 {
        self.d * self.d - self.a.iter().map(|x| x * x).sum::<i64>()
    }

    /// `Γ·Ω` with `Ω = −3l + Σ F_i`.
    pub fn canonical_degree(&self) -> i64 {
        -3 * self.d + self.a.iter().sum::<i64>()
    }
}

impl fmt::Display for ConicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.d {
            1 => write!(f, "l")?,
            d => write!(f, "{d}l")?,
        }
        for (i, &a) in self.a.iter().enumerate() {
            match a {
                0 => {}
                1 => write!(f, "-F{}", i + 1)?,
                a => write!(f, "-{a}F{}", i + 1)?,
            }
        }
        Ok(())
    }
}

fn check_points(n: usize) -> Result<()> {
    if n == 5 || n == 7 {
        Ok(())
    } else {
        Err(Error::UnsupportedParameter(format!("n = {n}, expected 5 or 7")))
    }
}

/// Classes with `Γ·Γ = 0`, `Γ·Ω = −2`, `1 ≤ d ≤ d_max`, `0 ≤ a_i ≤ a_max`; ordered by `d`, then
/// by `a` in decreasing lexicographic order.
pub fn enumerate_conic_classes_bounded(n: usize, d_max: i64, a_max: i64) -> Vec<ConicClass> {
    let mut out = Vec::new();
    for d in 1..=d_max {
        let mut a = vec![0i64; n];
        loop {
            let c = ConicClass { d, a: a.clone() };
            if c.self_intersection() == 0 && c.canonical_degree() == -2 {
                out.push(c);
            }
            // odometer
            let mut k = 0;
            while k < n {
                a[k] += 1;
                if a[k] <= a_max {
                    break;
                }
                a[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    out.sort_by(|x, y| x.d.cmp(&y.d).then_with(|| y.a.cmp(&x.a)));
    out
}

pub fn enumerate_conic_classes(n: usize) -> Result<Vec<ConicClass>> {
    check_points(n)?;
    Ok(enumerate_conic_classes_bounded(n, 5, 2))
}

/// `−Ω − Γ` for five points, `−2Ω − Γ` for seven.
pub fn conic_partner(g: &ConicClass, n: usize) -> Result<ConicClass> {
    check_points(n)?;
    let k = if n == 5 { 1 } else { 2 };
    let partner = ConicClass {
        d: 3 * k - g.d,
        a: g.a.iter().map(|a| k - a).collect(),
    };
    let set = enumerate_conic_classes(n)?;
    if g.a.len() != n || !set.contains(&partner) {
        return Err(Error::PairingBroken(format!("{g}")));
    }
    Ok(partner)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentState {
    pub r: usize,
    pub m: i64,
    pub history: Vec<i64>,
}

impl DescentState {
    pub fn new(r: usize, m: i64) -> Result<Self> {
        check_descent_r(r)?;
        if m < 1 {
            return Err(Error::UnsupportedParameter(format!("m = {m}, expected m >= 1")));
        }
        Ok(DescentState {
            r,
            m,
            history: Vec::new(),
        })
    }

    /// No admissible `ν′` remains (or `m` is no longer positive): the contradiction.
    pub fn is_terminal(&self) -> bool {
        self.m < 1 || nu_prime_bound(self.r, self.m).map_or(true, |i| i.is_empty())
    }
}

pub fn descent_step(s: &DescentState, nu: i64) -> Result<DescentState> {
    let interval = nu_prime_bound(s.r, s.m)?;
    if !interval.contains(nu) {
        return Err(Error::UnsupportedParameter(format!(
            "nu = {nu} outside ({}, -1] for m = {}",
            interval.lo - 1,
            s.m
        )));
    }
    let m = if s.r == 4 { s.m + nu } else { s.m + 2 * nu };
    let mut history = s.history.clone();
    history.push(nu);
    Ok(DescentState { r: s.r, m, history })
}

/// Summary of every admissible `ν`-sequence from `m0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentSummary {
    pub r: usize,
    pub m0: i64,
    /// Number of maximal sequences; each ends in a terminal state.
    pub branches: u128,
    pub max_depth: usize,
    pub min_depth: usize,
    /// Values of `m` at which branches terminate, increasing.
    pub terminal_m: Vec<i64>,
    pub all_terminal: bool,
}

pub fn descent_exhaust(r: usize, m0: i64, depth_cap: usize) -> Result<DescentSummary> {
    DescentState::new(r, m0)?;
    // (branches, max depth, min depth) for every m ≤ m0, computed upward; m strictly decreases.
    let size = m0 as usize + 1;
    let mut table: Vec<(u128, usize, usize)> = vec![(0, 0, 0); size];
    let mut terminal = Vec::new();
    for m in 1..=m0 {
        let state = DescentState::new(r, m)?;
        if state.is_terminal() {
            table[m as usize] = (1, 0, 0);
            terminal.push(m);
            continue;
        }
        let mut entry = (0u128, 0usize, usize::MAX);
        for nu in nu_prime_bound(r, m)?.values() {
            let next = descent_step(&state, nu)?;
            debug_assert!(next.m < m && next.m >= 1);
            let (b, hi, lo) = table[next.m as usize];
            entry.0 += b;
            entry.1 = entry.1.max(hi + 1);
            entry.2 = entry.2.min(lo + 1);
        }
        if entry.1 > depth_cap {
            return Err(Error::DepthCapExceeded { cap: depth_cap });
        }
        table[m as usize] = entry;
    }
    let (branches, max_depth, min_depth) = table[m0 as usize];
    // Terminal values actually reachable from m0.
    let mut reachable = vec![false; size];
    reachable[m0 as usize] = true;
    for m in (1..=m0).rev() {
        if !reachable[m as usize] {
            continue;
        }
        let state = DescentState::new(r, m)?;
        if state.is_terminal() {
            continue;
        }
        for nu in nu_prime_bound(r, m)?.values() {
            reachable[descent_step(&state, nu)?.m as usize] = true;
        }
    }
    terminal.retain(|&m| reachable[m as usize]);
    Ok(DescentSummary {
        r,
        m0,
        branches,
        max_depth,
        min_depth,
        terminal_m: terminal,
        all_terminal: true,
    })
}

/// Human-readable trace of one branch: always take the smallest admissible `|ν|`.
pub fn descent_greedy_trace(r: usize, m0: i64) -> Result<Vec<String>> {
    let mut s = DescentState::new(r, m0)?;
    let mut out = Vec::new();
    while !s.is_terminal() {
        let nu = nu_prime_bound(r, s.m)?.hi;
        let next = descent_step(&s, nu)?;
        out.push(format!("m={} nu={} -> m={}", s.m, nu, next.m));
        s = next;
    }
    out.push(format!("m={} has no admissible nu", s.m));
    Ok(out)
}
