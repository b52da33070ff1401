//! Galois lattices attached to `z² = a y² + P(x)`.
//!
//! With `r = deg P` and roots `c_1..c_r` grouped into blocks (one per irreducible factor), the
//! smooth model `X` has `Pic(X)` of rank `2r + 2` with basis
//! `E_1..E_r, (u=∞), (x=∞), E_{r+1}..E_{2r}`. Galois elements fixing `sqrt a` act by permuting
//! `E_1..E_r`; the others additionally exchange the two fibration sections.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::lattice::{
    h1_via_dual, hermite_rows, integer_kernel, quotient_invariants, tate_h_minus1, AbelianInvariants, GLattice,
    IntMatrix, IntVector,
};
use crate::surface::{DivisorClass, PointSpec, SurfaceModel, U_INF, X_INF};
use crate::{Error, Result};

/// Degrees of the irreducible factors of `P`, in a fixed order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockStructure {
    block_degrees: Vec<usize>,
}

impl BlockStructure {
    pub fn new(block_degrees: Vec<usize>) -> Result<Self> {
        if block_degrees.is_empty() {
            return Err(Error::InvalidBlocks("no blocks".into()));
        }
        if block_degrees.contains(&0) {
            return Err(Error::InvalidBlocks("block of degree 0".into()));
        }
        Ok(BlockStructure { block_degrees })
    }

    pub fn block_degrees(&self) -> &[usize] {
        &self.block_degrees
    }

    pub fn r(&self) -> usize {
        self.block_degrees.iter().sum()
    }

    pub fn r_prime(&self) -> usize {
        self.block_degrees.len()
    }

    pub fn all_even(&self) -> bool {
        self.block_degrees.iter().all(|d| d % 2 == 0)
    }

    pub fn has_odd(&self) -> bool {
        !self.all_even()
    }

    /// `2 · Π d_i`, the order of the model group.
    pub fn model_group_order(&self) -> usize {
        2 * self.block_degrees.iter().product::<usize>()
    }

    /// Root index ranges of the blocks.
    fn ranges(&self) -> Vec<core::ops::Range<usize>> {
        let mut start = 0;
        self.block_degrees
            .iter()
            .map(|d| {
                let r = start..start + d;
                start += d;
                r
            })
            .collect()
    }
}

/// A permutation of the roots together with its N-membership.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootAction {
    /// `image[i]` is the index of `σ(c_i)`.
    pub image: Vec<usize>,
    pub in_n: bool,
}

impl RootAction {
    pub fn matrix(&self) -> IntMatrix {
        let r = self.image.len();
        let mut m = IntMatrix::zeros(r, r);
        for (i, &j) in self.image.iter().enumerate() {
            m.set(j, i, BigInt::one());
        }
        m
    }
}

/// One cyclic shift per block of degree ≥ 2 (in `N`), then one element outside `N` acting
/// trivially on the roots.
pub fn model_group_generators(blocks: &BlockStructure) -> Vec<RootAction> {
    let r = blocks.r();
    let mut out = Vec::new();
    for range in blocks.ranges() {
        if range.len() < 2 {
            continue;
        }
        let mut image: Vec<usize> = (0..r).collect();
        for i in range.clone() {
            image[i] = if i + 1 == range.end { range.start } else { i + 1 };
        }
        out.push(RootAction { image, in_n: true });
    }
    out.push(RootAction {
        image: (0..r).collect(),
        in_n: false,
    });
    out
}

/// A Galois lattice with its basis names and, when known, intersection data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisModel {
    pub lattice: GLattice,
    pub basis_labels: Vec<String>,
    pub blocks: BlockStructure,
    pub gram: Option<IntMatrix>,
    pub canonical: Option<IntVector>,
    /// False when the group is the model group rather than a supplied certificate.
    pub certified_group: bool,
}

pub fn pic_x_labels(r: usize) -> Vec<String> {
    let mut labels: Vec<String> = (1..=r).map(|i| format!("E{i}")).collect();
    labels.push(U_INF.to_string());
    labels.push(X_INF.to_string());
    labels.extend((r + 1..=2 * r).map(|i| format!("E{i}")));
    labels
}

/// Matrix of a root action on `Pic(X)`.
pub fn pic_x_matrix(action: &RootAction) -> IntMatrix {
    let r = action.image.len();
    let n = 2 * r + 2;
    let a = action.matrix();
    let mut g = IntMatrix::zeros(n, n);
    if action.in_n {
        for i in 0..r {
            for j in 0..r {
                g.set(i, j, a.get(i, j).clone());
            }
        }
        for i in r..n {
            g.set(i, i, BigInt::one());
        }
        return g;
    }
    // rows of E_1..E_r: −A on the E block, −1 in the (u=∞) column
    for i in 0..r {
        for j in 0..r {
            g.set(i, j, -a.get(i, j));
        }
        g.set(i, r, -BigInt::one());
    }
    // (u=∞) row
    g.set(r, r, BigInt::one());
    // rows of (x=∞), E_{r+1}..E_{2r}: ones on the E block, c = (0, 1, .., r) in the (u=∞)
    // column, antidiagonal on the last r + 1 columns
    for k in 0..=r {
        let row = r + 1 + k;
        for j in 0..r {
            g.set(row, j, BigInt::one());
        }
        g.set(row, r, BigInt::from(k));
        g.set(row, r + 1 + (r - k), BigInt::one());
    }
    g
}

fn galois_model(blocks: &BlockStructure, actions: &[RootAction], cap: usize, certified: bool) -> Result<GaloisModel> {
    let r = blocks.r();
    for a in actions {
        if a.image.len() != r {
            return Err(Error::DimensionMismatch {
                expected: r,
                got: a.image.len(),
            });
        }
        let mut seen = vec![false; r];
        for &j in &a.image {
            if j >= r || core::mem::replace(&mut seen[j], true) {
                return Err(Error::InvalidCertificate(format!("not a permutation: {:?}", a.image)));
            }
        }
    }
    let gens: Vec<IntMatrix> = actions.iter().map(pic_x_matrix).collect();
    let flags: Vec<bool> = actions.iter().map(|a| a.in_n).collect();
    let lattice = GLattice::from_generators(&gens, &flags, cap)?;
    Ok(GaloisModel {
        lattice,
        basis_labels: pic_x_labels(r),
        blocks: blocks.clone(),
        gram: Some(pic_x_gram(r)),
        canonical: Some(pic_x_canonical(r)),
        certified_group: certified,
    })
}

pub fn build_pic_x(blocks: &BlockStructure, cap: usize) -> Result<GaloisModel> {
    galois_model(blocks, &model_group_generators(blocks), cap, false)
}

/// `Pic(X)` for a user-supplied group of root permutations. Every action must preserve the
/// blocks, and some action must lie outside `N`.
pub fn build_pic_x_certified(blocks: &BlockStructure, actions: &[RootAction], cap: usize) -> Result<GaloisModel> {
    let ranges = blocks.ranges();
    let block_of = |i: usize| ranges.iter().position(|rg| rg.contains(&i));
    for a in actions {
        if a.image.iter().enumerate().any(|(i, &j)| block_of(i) != block_of(j)) {
            return Err(Error::InvalidCertificate("action does not preserve the blocks".into()));
        }
    }
    if actions.iter().all(|a| a.in_n) {
        return Err(Error::InvalidCertificate("no element outside N".into()));
    }
    galois_model(blocks, actions, cap, true)
}

/// Intersection matrix of `Pic(X)` in the basis of [`pic_x_labels`], obtained by replaying the
/// blow-ups that resolve the model.
pub fn pic_x_gram(r: usize) -> IntMatrix {
    replay_pic_x(r).gram().clone()
}

pub fn pic_x_canonical(r: usize) -> IntVector {
    replay_pic_x(r).canonical().coords.clone()
}

/// The `2r` blow-ups of `P¹ × P¹` producing `X`, rebased onto the strict transforms
/// `E_1..E_r, (u=∞), (x=∞), E_{r+1}..E_{2r}`.
///
/// `P_i = (x=c_i) ∩ (u=0)` for `i ≤ r`; `P_{r+1} = (x=∞) ∩ (u=∞)`; `P_{r+j}` is the point of
/// `E_{r+j−1}` on the strict transform of `(u=∞)`.
pub fn replay_pic_x(r: usize) -> SurfaceModel {
    let mut s = SurfaceModel::new_quadric();
    s.register_curve("u=0", DivisorClass::from_ints(&[0, 1]))
        .expect("fresh");
    for i in 1..=r {
        s.register_curve(&format!("x=c{i}"), DivisorClass::from_ints(&[1, 0]))
            .expect("fresh");
    }
    for i in 1..=r {
        let p = PointSpec::new().on(&format!("x=c{i}"), 1).on("u=0", 1);
        s = s.blow_up(&p, &format!("E{i}")).expect("replay");
    }
    s = s
        .blow_up(&PointSpec::new().on(X_INF, 1).on(U_INF, 1), &format!("E{}", r + 1))
        .expect("replay");
    for j in 2..=r {
        let p = PointSpec::new().on(&format!("E{}", r + j - 1), 1).on(U_INF, 1);
        s = s.blow_up(&p, &format!("E{}", r + j)).expect("replay");
    }
    let labels = pic_x_labels(r);
    let classes: Vec<DivisorClass> = labels.iter().map(|l| s.curve(l).expect("registered").clone()).collect();
    s.rebase(labels, &classes).expect("strict transforms form a basis")
}

/// Basis vectors (in `Pic(X)` coordinates) of the summands `M1` and `M2`.
pub fn m1_m2_bases(r: usize) -> (Vec<IntVector>, Vec<IntVector>) {
    let n = 2 * r + 2;
    let (u, x) = (r, r + 1);
    let e_hi = |j: usize| r + 1 + j; // index of E_{r+j}, j ≥ 1
    let unit = |i: usize| {
        let mut v = vec![BigInt::zero(); n];
        v[i] = BigInt::one();
        v
    };
    // j ranges over 1 ≤ j < r/2
    let low: Vec<usize> = (1..=r).filter(|&j| 2 * j < r).collect();
    let mut m1 = Vec::new();
    for i in 0..r {
        let mut v = unit(i);
        v[x] -= 1;
        for &j in &low {
            v[e_hi(j)] -= 1;
        }
        m1.push(v);
    }
    let mut v = unit(u);
    v[x] -= BigInt::from(r);
    for &j in &low {
        v[e_hi(j)] -= BigInt::from(r - j);
    }
    m1.push(v);
    let middle = r.is_multiple_of(2).then_some(r / 2);
    if let Some(j) = middle {
        m1.push(unit(e_hi(j)));
    }
    let mut m2 = vec![unit(x)];
    for j in 1..=r {
        if Some(j) != middle {
            m2.push(unit(e_hi(j)));
        }
    }
    (m1, m2)
}

/// `Pic(X) = M1 ⊕ M2` as two Galois lattices. `M2` is a permutation lattice.
pub fn split_m1_m2(model: &GaloisModel, cap: usize) -> Result<(GaloisModel, GaloisModel)> {
    let r = model.blocks.r();
    let (b1, b2) = m1_m2_bases(r);
    let group = model.lattice.group();
    let g1 = group.restrict(&b1, cap)?;
    let g2 = group.restrict(&b2, cap)?;
    let mut l1: Vec<String> = (1..=r + 1).map(|i| format!("e{i}")).collect();
    if r.is_multiple_of(2) {
        l1.push(format!("e{}", r + 2));
    }
    let mut l2 = vec![X_INF.to_string()];
    l2.extend(
        (r + 1..=2 * r)
            .filter(|&i| r % 2 == 1 || i != 3 * r / 2)
            .map(|i| format!("E{i}")),
    );
    let wrap = |lattice, basis_labels| GaloisModel {
        lattice,
        basis_labels,
        blocks: model.blocks.clone(),
        gram: None,
        canonical: None,
        certified_group: model.certified_group,
    };
    Ok((wrap(GLattice::new(g1), l1), wrap(GLattice::new(g2), l2)))
}

/// `Pic(Y)` for even `r ≥ 4`: basis `E_1..E_r, (u=∞), E_{3r/2}`, acting as `M1` does.
pub fn build_pic_y(blocks: &BlockStructure, cap: usize) -> Result<GaloisModel> {
    let r = blocks.r();
    if r % 2 == 1 {
        return Err(Error::EvenizeFirst(r));
    }
    if r < 4 {
        return Err(Error::UnsupportedParameter(format!("Pic(Y) needs r >= 4, got {r}")));
    }
    let x = build_pic_x(blocks, cap)?;
    let (m1, _) = split_m1_m2(&x, cap)?;
    let mut labels: Vec<String> = (1..=r).map(|i| format!("E{i}")).collect();
    labels.push(U_INF.to_string());
    labels.push(format!("E{}", 3 * r / 2));
    Ok(GaloisModel {
        lattice: m1.lattice,
        basis_labels: labels,
        blocks: blocks.clone(),
        gram: Some(pic_y_gram(r)),
        canonical: Some(pic_y_canonical(r)),
        certified_group: false,
    })
}

/// `E_i² = −1`, `(u=∞)² = −r/2`, `(u=∞)·E_{3r/2} = 1`, `E_{3r/2}² = 0`, all else 0.
pub fn pic_y_gram(r: usize) -> IntMatrix {
    let n = r + 2;
    let mut g = IntMatrix::zeros(n, n);
    for i in 0..r {
        g.set(i, i, -BigInt::one());
    }
    g.set(r, r, -BigInt::from(r / 2));
    g.set(r, r + 1, BigInt::one());
    g.set(r + 1, r, BigInt::one());
    g
}

/// `Ω = −2(u=∞) + Σ E_i − (r/2 + 2) E_{3r/2}`.
pub fn pic_y_canonical(r: usize) -> IntVector {
    let mut v = vec![BigInt::one(); r];
    v.push(BigInt::from(-2));
    v.push(-BigInt::from(r / 2 + 2));
    v
}

/// `M0 / M_b`, `M_e / M_b` and `M0 / M_e`, where `M0 = Z^r`, `M_e` has even total coordinate
/// sum and `M_b` has even coordinate sum on every block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SublatticeQuotients {
    pub m0_mod_mb: AbelianInvariants,
    pub me_mod_mb: AbelianInvariants,
    pub m0_mod_me: AbelianInvariants,
}

/// `{s ∈ Z^r : F s ≡ 0 (mod 2)}` for a 0/1 matrix `F`.
fn parity_sublattice(r: usize, f: &[Vec<i64>]) -> Vec<IntVector> {
    let k = f.len();
    let rows: Vec<Vec<i64>> = f
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut full = row.clone();
            full.extend((0..k).map(|j| if i == j { -2 } else { 0 }));
            full
        })
        .collect();
    let kernel = integer_kernel(&IntMatrix::from_rows(&rows));
    let projected: Vec<IntVector> = kernel.into_iter().map(|v| v[..r].to_vec()).collect();
    hermite_rows(&projected)
}

pub fn block_sublattice_quotients(blocks: &BlockStructure) -> Result<SublatticeQuotients> {
    let r = blocks.r();
    let m0: Vec<IntVector> = (0..r)
        .map(|i| {
            let mut v = vec![BigInt::zero(); r];
            v[i] = BigInt::one();
            v
        })
        .collect();
    let indicator: Vec<Vec<i64>> = blocks
        .ranges()
        .iter()
        .map(|rg| (0..r).map(|i| i64::from(rg.contains(&i))).collect())
        .collect();
    let mb = parity_sublattice(r, &indicator);
    let me = parity_sublattice(r, &[vec![1; r]]);
    Ok(SublatticeQuotients {
        m0_mod_mb: quotient_invariants(&m0, &mb)?,
        me_mod_mb: quotient_invariants(&me, &mb)?,
        m0_mod_me: quotient_invariants(&m0, &me)?,
    })
}

/// The exponent `j` in `H¹(G, Pic X) = (Z/2)^j`.
pub fn obstruction_exponent(blocks: &BlockStructure, degree_is_odd: bool) -> Result<usize> {
    if degree_is_odd != (blocks.r() % 2 == 1) {
        return Err(Error::InvalidBlocks(format!(
            "degree parity does not match r = {}",
            blocks.r()
        )));
    }
    let rp = blocks.r_prime();
    Ok(if degree_is_odd || blocks.all_even() {
        rp - 1
    } else {
        rp - 2
    })
}

/// Cohomology of both summands of `Pic(X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicCohomology {
    pub group_order: usize,
    pub m1_h_minus1: AbelianInvariants,
    pub m1_h1: AbelianInvariants,
    pub m2_h_minus1: AbelianInvariants,
    pub m2_h1: AbelianInvariants,
}

pub fn pic_x_cohomology(model: &GaloisModel, cap: usize) -> Result<PicCohomology> {
    let (m1, m2) = split_m1_m2(model, cap)?;
    Ok(PicCohomology {
        group_order: model.lattice.group().order(),
        m1_h_minus1: tate_h_minus1(&m1.lattice)?,
        m1_h1: h1_via_dual(&m1.lattice)?,
        m2_h_minus1: tate_h_minus1(&m2.lattice)?,
        m2_h1: h1_via_dual(&m2.lattice)?,
    })
}
