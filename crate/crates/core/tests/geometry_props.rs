use chatelet_core::chatelet::{
    build_pic_x, build_pic_y, pic_x_canonical, pic_x_gram, pic_y_canonical, pic_y_gram, replay_pic_x, BlockStructure,
};
use chatelet_core::lattice::{fixed_sublattice, IntMatrix, IntVector, DEFAULT_GROUP_CAP};
use chatelet_core::surface::{DivisorClass, PointSpec, SurfaceModel, U_INF, X_INF};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use proptest::prelude::*;

fn b(n: i64) -> BigInt {
    BigInt::from(n)
}

/// Each step: indices into the current curve list with multiplicities.
fn steps() -> impl Strategy<Value = Vec<Vec<(usize, u64)>>> {
    proptest::collection::vec(proptest::collection::vec((0usize..16, 0u64..=2), 0..3), 1..6)
}

fn point(s: &SurfaceModel, incidences: &[(usize, u64)], avoid: Option<&str>) -> PointSpec {
    let mut p = PointSpec::new();
    for &(i, m) in incidences {
        let id = &s.curves()[i % s.curves().len()].0;
        if m > 0 && Some(id.as_str()) != avoid {
            p = p.on(id, m);
        }
    }
    p
}

fn check_model(s: &SurfaceModel) -> Result<(), TestCaseError> {
    prop_assert_eq!(s.gram().det().abs(), BigInt::one());
    for (id, c) in s.curves() {
        let g = s.intersect(c, c).unwrap() + s.intersect(c, s.canonical()).unwrap();
        prop_assert!(g.is_even(), "{} has odd C·C + C·Ω", id);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn blow_up_sequences(seq in steps()) {
        let mut s = SurfaceModel::new_quadric();
        prop_assert_eq!(s.canonical_square(), b(8));
        for (k, inc) in seq.iter().enumerate() {
            let label = format!("P{k}");
            let p = point(&s, inc, None);
            let t = s.blow_up(&p, &label).unwrap();
            prop_assert_eq!(t.canonical_square(), s.canonical_square() - 1);
            prop_assert_eq!(t.rank(), s.rank() + 1);
            let e = t.curve(&label).unwrap();
            prop_assert_eq!(t.intersect(e, e).unwrap(), b(-1));
            prop_assert_eq!(t.intersect(e, t.canonical()).unwrap(), b(-1));
            for (id, c) in s.curves() {
                let c2 = t.curve(id).unwrap();
                let m = b(p.multiplicity(id) as i64);
                prop_assert_eq!(t.intersect(c2, c2).unwrap(), s.intersect(c, c).unwrap() - &m * &m);
                prop_assert_eq!(t.intersect(c2, e).unwrap(), m);
            }
            check_model(&t)?;
            let back = t.blow_down(&label).unwrap();
            prop_assert_eq!(back.canonical_square(), t.canonical_square() + 1);
            prop_assert_eq!(back.gram(), s.gram());
            prop_assert_eq!(back.canonical(), s.canonical());
            prop_assert_eq!(back.labels(), s.labels());
            for (id, c) in s.curves() {
                prop_assert_eq!(back.curve(id).unwrap(), c);
            }
            s = t;
        }
    }

    #[test]
    fn elementary_transforms(seq in steps(), inc in proptest::collection::vec((0usize..16, 0u64..=2), 0..3)) {
        let mut s = SurfaceModel::new_quadric();
        for (k, i) in seq.iter().enumerate() {
            s = s.blow_up(&point(&s, i, Some(X_INF)), &format!("P{k}")).unwrap();
        }
        let p = point(&s, &inc, Some(X_INF)).on(X_INF, 1);
        let t = s.elementary_transform(X_INF, &p, "Ebar");
        // the strict transform of x=∞ is contractible only if nothing meets it negatively
        if let Ok(t) = t {
            prop_assert_eq!(t.canonical_square(), s.canonical_square());
            prop_assert_eq!(t.rank(), s.rank());
            let e = t.curve("Ebar").unwrap();
            prop_assert_eq!(t.intersect(e, e).unwrap(), b(0));
            prop_assert_eq!(t.intersect(e, t.canonical()).unwrap(), b(-2));
            check_model(&t)?;
        }
    }
}

fn transpose_mul(g: &IntMatrix, gram: &IntMatrix) -> IntMatrix {
    &(&g.transpose() * gram) * g
}

fn block_structures(max_r: usize) -> Vec<BlockStructure> {
    fn parts(n: usize, max: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in (1..=n.min(max)).rev() {
            for mut rest in parts(n - first, first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    (1..=max_r)
        .flat_map(|r| parts(r, r))
        .map(|p| BlockStructure::new(p).unwrap())
        .collect()
}

/// The closed-form action on `Pic(X)` preserves the replayed intersection form and canonical
/// class.
#[test]
fn pic_x_action_is_isometric() {
    for r in 1..=8 {
        let replay = replay_pic_x(r);
        assert_eq!(replay.rank(), 2 * r + 2);
        assert_eq!(replay.canonical_square(), b(8 - 2 * r as i64));
        assert_eq!(replay.gram().det().abs(), BigInt::one());
    }
    for blocks in block_structures(6) {
        let r = blocks.r();
        let gram = pic_x_gram(r);
        let omega: IntVector = pic_x_canonical(r);
        let model = build_pic_x(&blocks, DEFAULT_GROUP_CAP).unwrap();
        for g in model.lattice.group().elements() {
            assert_eq!(transpose_mul(g, &gram), gram, "blocks {:?}", blocks.block_degrees());
            assert_eq!(g.mul_vec(&omega), omega, "blocks {:?}", blocks.block_degrees());
        }
    }
}

#[test]
fn pic_y_is_consistent() {
    for blocks in block_structures(8).into_iter().filter(|b| b.r() >= 4 && b.r() % 2 == 0) {
        let r = blocks.r();
        let y = build_pic_y(&blocks, DEFAULT_GROUP_CAP).unwrap();
        let gram = pic_y_gram(r);
        let omega = pic_y_canonical(r);
        let model =
            SurfaceModel::from_parts(y.basis_labels.clone(), gram.clone(), DivisorClass::new(omega.clone())).unwrap();
        assert_eq!(model.rank(), r + 2);
        assert_eq!(model.canonical_square(), b(8 - r as i64));
        assert_eq!(gram.det().abs(), BigInt::one());
        let fiber = DivisorClass::new((0..r + 2).map(|i| b(i64::from(i == r + 1))).collect());
        assert_eq!(model.intersect(&fiber, model.canonical()).unwrap(), b(-2));
        assert_eq!(model.intersect(&fiber, &fiber).unwrap(), b(0));
        for g in y.lattice.group().elements() {
            assert_eq!(transpose_mul(g, &gram), gram);
            assert_eq!(g.mul_vec(&omega), omega);
        }
        if blocks.r_prime() == 1 {
            assert_eq!(fixed_sublattice(&y.lattice).len(), 2);
        }
    }
}

/// Blowing up the quadric at the points of the model in order reproduces the replay.
#[test]
fn replay_matches_manual_blow_ups() {
    let r = 3;
    let mut s = SurfaceModel::new_quadric();
    for i in 1..=r {
        s = s.blow_up(&PointSpec::new(), &format!("E{i}")).unwrap();
    }
    s = s.blow_up(&PointSpec::new().on(X_INF, 1).on(U_INF, 1), "E4").unwrap();
    for j in 2..=r {
        let prev = format!("E{}", r + j - 1);
        s = s
            .blow_up(&PointSpec::new().on(&prev, 1).on(U_INF, 1), &format!("E{}", r + j))
            .unwrap();
    }
    let replay = replay_pic_x(r);
    assert_eq!(s.rank(), replay.rank());
    assert_eq!(s.canonical_square(), replay.canonical_square());
    assert_eq!(s.canonical_square(), b(2));
}
