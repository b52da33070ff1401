//! Picard-lattice models of rational surfaces.
//!
//! A [`SurfaceModel`] is a basis of `Pic`, its intersection matrix, the canonical class and a
//! list of named curve classes. Points are described only by how their exceptional curve meets
//! the registered curves ([`PointSpec`]); coordinates never appear.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::lattice::{integer_kernel, IntMatrix, IntVector, LinearSolver};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    pub coords: IntVector,
}

impl DivisorClass {
    pub fn new(coords: IntVector) -> Self {
        DivisorClass { coords }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        DivisorClass::new(crate::lattice::int_vector(v))
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn add(&self, other: &DivisorClass) -> DivisorClass {
        DivisorClass::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: &BigInt) -> DivisorClass {
        DivisorClass::new(self.coords.iter().map(|a| a * k).collect())
    }
}

/// Multiplicities `E_P · C̃` of the new exceptional curve with registered curves.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PointSpec {
    pub incidences: BTreeMap<String, u64>,
}

impl PointSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn on(mut self, curve: &str, multiplicity: u64) -> Self {
        self.incidences.insert(curve.to_string(), multiplicity);
        self
    }

    pub fn multiplicity(&self, curve: &str) -> u64 {
        self.incidences.get(curve).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceModel {
    labels: Vec<String>,
    gram: IntMatrix,
    canonical: DivisorClass,
    curves: Vec<(String, DivisorClass)>,
}

pub const X_INF: &str = "x=inf";
pub const U_INF: &str = "u=inf";

impl SurfaceModel {
    /// `P¹ × P¹` with basis `(x=∞), (u=∞)`.
    pub fn new_quadric() -> Self {
        SurfaceModel {
            labels: alloc::vec![X_INF.to_string(), U_INF.to_string()],
            gram: IntMatrix::from_rows(&[alloc::vec![0, 1], alloc::vec![1, 0]]),
            canonical: DivisorClass::from_ints(&[-2, -2]),
            curves: alloc::vec![
                (X_INF.to_string(), DivisorClass::from_ints(&[1, 0])),
                (U_INF.to_string(), DivisorClass::from_ints(&[0, 1])),
            ],
        }
    }

    /// Arbitrary model; the gram matrix must be square and symmetric of the label count.
    pub fn from_parts(labels: Vec<String>, gram: IntMatrix, canonical: DivisorClass) -> Result<Self> {
        let n = labels.len();
        if gram.rows() != n || gram.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: gram.rows(),
            });
        }
        if gram != gram.transpose() {
            return Err(Error::InvalidProblem("intersection matrix is not symmetric".into()));
        }
        if canonical.rank() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: canonical.rank(),
            });
        }
        Ok(SurfaceModel {
            labels,
            gram,
            canonical,
            curves: Vec::new(),
        })
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn canonical(&self) -> &DivisorClass {
        &self.canonical
    }

    pub fn curves(&self) -> &[(String, DivisorClass)] {
        &self.curves
    }

    pub fn curve(&self, id: &str) -> Result<&DivisorClass> {
        self.curves
            .iter()
            .find(|(name, _)| name == id)
            .map(|(_, c)| c)
            .ok_or_else(|| Error::UnknownCurve(id.to_string()))
    }

    fn name_taken(&self, name: &str) -> bool {
        self.labels.iter().any(|l| l == name) || self.curves.iter().any(|(c, _)| c == name)
    }

    pub fn register_curve(&mut self, id: &str, class: DivisorClass) -> Result<()> {
        if self.curves.iter().any(|(c, _)| c == id) {
            return Err(Error::DuplicateLabel(id.to_string()));
        }
        if class.rank() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: class.rank(),
            });
        }
        self.curves.push((id.to_string(), class));
        Ok(())
    }

    /// The same surface in the basis `classes`, which must be a Z-basis of `Pic`.
    pub fn rebase(&self, labels: Vec<String>, classes: &[DivisorClass]) -> Result<SurfaceModel> {
        let n = self.rank();
        if labels.len() != n || classes.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: classes.len().min(labels.len()),
            });
        }
        let cols: Vec<IntVector> = classes.iter().map(|c| c.coords.clone()).collect();
        let b = IntMatrix::from_columns(n, &cols);
        let b_inv = b.inverse_unimodular()?;
        let gram = &(&b.transpose() * &self.gram) * &b;
        let to_new = |d: &DivisorClass| DivisorClass::new(b_inv.mul_vec(&d.coords));
        Ok(SurfaceModel {
            labels,
            gram,
            canonical: to_new(&self.canonical),
            curves: self.curves.iter().map(|(id, c)| (id.clone(), to_new(c))).collect(),
        })
    }

    pub fn intersect(&self, d1: &DivisorClass, d2: &DivisorClass) -> Result<BigInt> {
        for d in [d1, d2] {
            if d.rank() != self.rank() {
                return Err(Error::DimensionMismatch {
                    expected: self.rank(),
                    got: d.rank(),
                });
            }
        }
        let g2 = self.gram.mul_vec(&d2.coords);
        Ok(d1.coords.iter().zip(&g2).map(|(a, b)| a * b).sum())
    }

    fn dot(&self, d1: &DivisorClass, d2: &DivisorClass) -> BigInt {
        self.intersect(d1, d2).expect("classes of this model")
    }

    pub fn canonical_square(&self) -> BigInt {
        self.dot(&self.canonical, &self.canonical)
    }

    /// Blow up a point meeting the registered curves with the given multiplicities. The new
    /// exceptional curve is appended to the basis and registered under `label`.
    pub fn blow_up(&self, p: &PointSpec, label: &str) -> Result<SurfaceModel> {
        if self.name_taken(label) {
            return Err(Error::DuplicateLabel(label.to_string()));
        }
        for id in p.incidences.keys() {
            self.curve(id)?;
        }
        let n = self.rank();
        let mut gram = IntMatrix::zeros(n + 1, n + 1);
        for i in 0..n {
            for j in 0..n {
                gram.set(i, j, self.gram.get(i, j).clone());
            }
        }
        gram.set(n, n, -BigInt::one());
        let lift = |d: &DivisorClass, e: BigInt| {
            let mut c = d.coords.clone();
            c.push(e);
            DivisorClass::new(c)
        };
        let mut curves: Vec<(String, DivisorClass)> = self
            .curves
            .iter()
            .map(|(id, c)| (id.clone(), lift(c, -BigInt::from(p.multiplicity(id)))))
            .collect();
        let mut e = alloc::vec![BigInt::zero(); n];
        e.push(BigInt::one());
        curves.push((label.to_string(), DivisorClass::new(e)));
        let mut labels = self.labels.clone();
        labels.push(label.to_string());
        Ok(SurfaceModel {
            labels,
            gram,
            canonical: lift(&self.canonical, BigInt::one()),
            curves,
        })
    }

    /// Contract the registered curve `f`, which must be numerically a (−1)-curve met
    /// nonnegatively by every other registered curve.
    pub fn blow_down(&self, f: &str) -> Result<SurfaceModel> {
        let fc = self.curve(f)?.clone();
        let ff = self.dot(&fc, &fc);
        let fo = self.dot(&fc, &self.canonical);
        if ff != -BigInt::one() || fo != -BigInt::one() {
            return Err(Error::NotContractible(format!("{f}: F·F = {ff}, F·Ω = {fo}")));
        }
        for (id, c) in &self.curves {
            if id != f && self.dot(c, &fc).is_negative() {
                return Err(Error::NotContractible(format!("{f}: meets {id} negatively")));
            }
        }
        let n = self.rank();
        // The new lattice is F^⊥, and D ↦ D + (D·F)F is the pushforward. When F has a
        // coordinate ±1 at j, p_i = b_i + (b_i·F)F (i ≠ j) is a basis of F^⊥ and
        // D̄ = Σ_{i≠j} (D_i − D_j f_j f_i) p_i.
        let pivot = (0..n).rev().find(|&j| fc.coords[j].abs().is_one());
        let (labels, basis, solver) = match pivot {
            Some(j) => {
                let bf = self.gram.mul_vec(&fc.coords);
                let basis: Vec<IntVector> = (0..n)
                    .filter(|&i| i != j)
                    .map(|i| {
                        let mut v: IntVector = fc.coords.iter().map(|x| x * &bf[i]).collect();
                        v[i] += BigInt::one();
                        v
                    })
                    .collect();
                let labels = (0..n).filter(|&i| i != j).map(|i| self.labels[i].clone()).collect();
                (labels, basis, None)
            }
            None => {
                let row = IntMatrix::from_big_rows(&[self.gram.mul_vec(&fc.coords)])?;
                let basis = integer_kernel(&row);
                let labels = (1..=basis.len()).map(|i| format!("b{i}")).collect();
                let solver = LinearSolver::new(&IntMatrix::from_columns(n, &basis));
                (labels, basis, Some(solver))
            }
        };
        let push = |d: &DivisorClass| -> DivisorClass {
            match (pivot, &solver) {
                (Some(j), _) => {
                    let k = &d.coords[j] * &fc.coords[j];
                    DivisorClass::new(
                        (0..n)
                            .filter(|&i| i != j)
                            .map(|i| &d.coords[i] - &k * &fc.coords[i])
                            .collect(),
                    )
                }
                (None, Some(solver)) => {
                    let df = self.dot(d, &fc);
                    let v: IntVector = d.coords.iter().zip(&fc.coords).map(|(a, b)| a + &df * b).collect();
                    DivisorClass::new(solver.solve(&v).expect("F^⊥ is a direct summand"))
                }
                (None, None) => unreachable!(),
            }
        };
        let k = basis.len();
        let mut gram = IntMatrix::zeros(k, k);
        for i in 0..k {
            let gi = self.gram.mul_vec(&basis[i]);
            for (l, bl) in basis.iter().enumerate() {
                gram.set(i, l, gi.iter().zip(bl).map(|(a, b)| a * b).sum());
            }
        }
        let curves = self
            .curves
            .iter()
            .filter(|(id, _)| id != f)
            .map(|(id, c)| (id.clone(), push(c)))
            .collect();
        Ok(SurfaceModel {
            labels,
            gram,
            canonical: push(&self.canonical),
            curves,
        })
    }

    /// Blow up `p` on the curve `f` (with `F·F = 0`, `F·Ω = −2`, meeting `p` once), then
    /// contract the strict transform of `f`. The new fiber component is registered as `label`.
    pub fn elementary_transform(&self, f: &str, p: &PointSpec, label: &str) -> Result<SurfaceModel> {
        let fc = self.curve(f)?;
        let ff = self.dot(fc, fc);
        let fo = self.dot(fc, &self.canonical);
        if !ff.is_zero() || fo != BigInt::from(-2) {
            return Err(Error::TransformPrecondition(format!("{f}: F·F = {ff}, F·Ω = {fo}")));
        }
        let m = p.multiplicity(f);
        if m != 1 {
            return Err(Error::TransformPrecondition(format!(
                "point meets {f} with multiplicity {m}, need 1"
            )));
        }
        self.blow_up(p, label)?.blow_down(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn quadric() {
        let q = SurfaceModel::new_quadric();
        assert_eq!(q.canonical_square(), b(8));
        let x = q.curve(X_INF).unwrap();
        let u = q.curve(U_INF).unwrap();
        assert_eq!(q.intersect(x, x).unwrap(), b(0));
        assert_eq!(q.intersect(x, u).unwrap(), b(1));
        assert!(q.intersect(x, &DivisorClass::from_ints(&[1])).is_err());
    }

    #[test]
    fn blow_up_rules() {
        let q = SurfaceModel::new_quadric();
        let s = q.blow_up(&PointSpec::new(), "E").unwrap();
        assert_eq!(s.canonical_square(), b(7));
        let s = q.blow_up(&PointSpec::new().on(X_INF, 1), "E").unwrap();
        let c = s.curve(X_INF).unwrap();
        let e = s.curve("E").unwrap();
        assert_eq!(s.intersect(c, c).unwrap(), b(-1));
        assert_eq!(s.intersect(c, s.canonical()).unwrap(), b(-1));
        assert_eq!(s.intersect(e, e).unwrap(), b(-1));
        assert_eq!(
            q.blow_up(&PointSpec::new(), X_INF),
            Err(Error::DuplicateLabel(X_INF.into()))
        );
        assert_eq!(
            q.blow_up(&PointSpec::new().on("nope", 1), "E"),
            Err(Error::UnknownCurve("nope".into()))
        );
    }

    #[test]
    fn roundtrip() {
        let q = SurfaceModel::new_quadric();
        let s = q.blow_up(&PointSpec::new().on(X_INF, 1).on(U_INF, 1), "E").unwrap();
        let back = s.blow_down("E").unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn blow_down_checks() {
        let q = SurfaceModel::new_quadric();
        assert!(matches!(q.blow_down(X_INF), Err(Error::NotContractible(_))));
        let s = q.blow_up(&PointSpec::new().on(X_INF, 1), "E").unwrap();
        // the strict transform of x=inf is now a (−1)-curve and E meets it once
        let t = s.blow_down(X_INF).unwrap();
        assert_eq!(t.canonical_square(), b(8));
        assert_eq!(t.rank(), 2);
    }

    #[test]
    fn elementary_transform_keeps_canonical_square() {
        let q = SurfaceModel::new_quadric();
        let t = q
            .elementary_transform(X_INF, &PointSpec::new().on(X_INF, 1), "Ebar")
            .unwrap();
        assert_eq!(t.canonical_square(), b(8));
        assert_eq!(t.rank(), 2);
        let e = t.curve("Ebar").unwrap();
        assert_eq!(t.intersect(e, e).unwrap(), b(0));
        assert_eq!(t.intersect(e, t.canonical()).unwrap(), b(-2));
        assert!(matches!(
            q.elementary_transform(X_INF, &PointSpec::new().on(X_INF, 2), "Ebar"),
            Err(Error::TransformPrecondition(_))
        ));
    }
}
