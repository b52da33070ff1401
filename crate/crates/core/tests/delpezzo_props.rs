use std::collections::BTreeSet;

use chatelet_core::delpezzo::{
    conic_partner, descent_exhaust, enumerate_conic_classes, enumerate_conic_classes_bounded, fiber_equations_check,
    fiber_infeasible, nu_prime_bound, ConicClass, DescentState, FiberCandidate,
};
use chatelet_core::Error;

/// All count vectors `(c_1, …, c_k)` with `Σ c_i ≤ len`: multiset with `c_i` copies of `i`.
fn count_vectors(k: usize, len: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for c in 0..=len {
        for mut rest in count_vectors(k - 1, len - c) {
            rest.insert(0, c);
            out.push(rest);
        }
    }
    out
}

fn naive_fiber_feasible(r: usize, m_max: i64, nu: (i64, i64), len: usize) -> bool {
    for m in 1..=m_max {
        for counts in count_vectors(2 * m as usize, len) {
            let ms: Vec<i64> = counts
                .iter()
                .enumerate()
                .flat_map(|(i, &c)| std::iter::repeat_n(i as i64 + 1, c))
                .collect();
            for n in nu.0..=nu.1 {
                let cand = FiberCandidate {
                    m,
                    nu: n,
                    multiplicities: ms.clone(),
                };
                if fiber_equations_check(r, &cand) {
                    return true;
                }
            }
        }
    }
    false
}

#[test]
fn fiber_search_matches_naive_enumeration() {
    for r in 3..=10 {
        let s = fiber_infeasible(r, 2, (-6, 6), 4);
        assert_eq!(!s.infeasible, naive_fiber_feasible(r, 2, (-6, 6), 4), "r = {r}");
        if let Some(w) = &s.witness {
            assert!(fiber_equations_check(r, w));
        }
        if r >= 8 {
            assert!(s.infeasible && s.symbolic_infeasible);
        }
    }
}

#[test]
fn nu_interval_matches_brute_force() {
    for r in [4usize, 6] {
        let omega = 8 - r as i64;
        for m in 1..=40 {
            let expected: Vec<i64> = (-200..=-1).filter(|&nu| 4 * nu > -omega * m).collect();
            let got: Vec<i64> = nu_prime_bound(r, m).unwrap().values().collect();
            assert_eq!(got, expected, "r = {r}, m = {m}");
        }
    }
    assert!(matches!(nu_prime_bound(5, 3), Err(Error::UnsupportedParameter(_))));
}

fn class(d: i64, a: Vec<i64>) -> ConicClass {
    ConicClass { d, a }
}

/// Classes for seven points, written down by shape: `d l − Σ a_i F_i` with a fixed multiset
/// of `a_i` per degree.
fn seven_point_classes() -> BTreeSet<ConicClass> {
    let shapes: [(i64, [i64; 7]); 5] = [
        (1, [1, 0, 0, 0, 0, 0, 0]),
        (2, [1, 1, 1, 1, 0, 0, 0]),
        (3, [2, 1, 1, 1, 1, 1, 0]),
        (4, [2, 2, 2, 1, 1, 1, 1]),
        (5, [2, 2, 2, 2, 2, 2, 1]),
    ];
    let mut out = BTreeSet::new();
    for (d, shape) in shapes {
        permutations(&shape, &mut |a| {
            out.insert(class(d, a.to_vec()));
        });
    }
    out
}

fn permutations(items: &[i64], visit: &mut dyn FnMut(&[i64])) {
    fn go(cur: &mut Vec<i64>, rest: &mut Vec<i64>, visit: &mut dyn FnMut(&[i64])) {
        if rest.is_empty() {
            visit(cur);
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            go(cur, rest, visit);
            cur.pop();
            rest.insert(i, x);
        }
    }
    go(&mut Vec::new(), &mut items.to_vec(), visit);
}

#[test]
fn conic_classes_match_shapes() {
    let five: BTreeSet<ConicClass> = enumerate_conic_classes(5).unwrap().into_iter().collect();
    let mut expected = BTreeSet::new();
    for i in 0..5 {
        let mut a = vec![0; 5];
        a[i] = 1;
        expected.insert(class(1, a));
        let mut a = vec![1; 5];
        a[i] = 0;
        expected.insert(class(2, a));
    }
    assert_eq!(five, expected);

    let seven = enumerate_conic_classes(7).unwrap();
    assert_eq!(seven.iter().cloned().collect::<BTreeSet<_>>(), seven_point_classes());
    let mut histogram = [0usize; 5];
    for c in &seven {
        histogram[c.d as usize - 1] += 1;
    }
    assert_eq!(histogram, [7, 35, 42, 35, 7]);

    // larger search boxes find nothing new
    assert_eq!(
        enumerate_conic_classes_bounded(5, 6, 3),
        enumerate_conic_classes(5).unwrap()
    );
    assert_eq!(enumerate_conic_classes_bounded(7, 6, 3), seven);
}

#[test]
fn partner_is_an_involution_without_fixed_points() {
    for n in [5usize, 7] {
        let classes = enumerate_conic_classes(n).unwrap();
        let mut images = BTreeSet::new();
        for g in &classes {
            let p = conic_partner(g, n).unwrap();
            assert_ne!(&p, g);
            assert_eq!(&conic_partner(&p, n).unwrap(), g);
            // Γ + Γ' = −kΩ
            let k = if n == 5 { 1 } else { 2 };
            assert_eq!(g.d + p.d, 3 * k);
            images.insert(p);
        }
        assert_eq!(images.len(), classes.len());
    }
    assert!(matches!(
        conic_partner(&class(1, vec![1, 1, 0, 0, 0]), 5),
        Err(Error::PairingBroken(_))
    ));
}

/// Plain recursion over every branch.
fn naive_descent(s: &DescentState) -> (u128, usize, usize) {
    if s.is_terminal() {
        return (1, 0, 0);
    }
    let mut total = (0u128, 0usize, usize::MAX);
    for nu in nu_prime_bound(s.r, s.m).unwrap().values() {
        let next = chatelet_core::delpezzo::descent_step(s, nu).unwrap();
        let (b, hi, lo) = naive_descent(&next);
        total.0 += b;
        total.1 = total.1.max(hi + 1);
        total.2 = total.2.min(lo + 1);
    }
    total
}

#[test]
fn descent_matches_naive_recursion() {
    for r in [4usize, 6] {
        for m0 in 1..=16 {
            let s = descent_exhaust(r, m0, 100).unwrap();
            let (b, hi, lo) = naive_descent(&DescentState::new(r, m0).unwrap());
            assert_eq!(
                (s.branches, s.max_depth, s.min_depth),
                (b, hi, lo),
                "r = {r}, m0 = {m0}"
            );
            assert!(s.all_terminal);
        }
    }
    assert_eq!(descent_exhaust(6, 30, 3), Err(Error::DepthCapExceeded { cap: 3 }));
}
