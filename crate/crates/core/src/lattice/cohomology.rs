use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::group::GLattice;
use super::matrix::{IntMatrix, IntVector};
use super::snf::{hermite_rows, integer_kernel, smith_normal_form, LinearSolver};
use crate::{Error, Result};

/// Elementary divisors `d_1 | d_2 | …` of a finite abelian group, all `≥ 2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct AbelianInvariants {
    pub divisors: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn from_divisors(mut divisors: Vec<BigInt>) -> Self {
        divisors.retain(|d| !d.is_one());
        AbelianInvariants { divisors }
    }

    pub fn len(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }

    pub fn order(&self) -> BigInt {
        self.divisors.iter().product()
    }

    /// True when the group is `(Z/k)^j` for some `j ≥ 0`.
    pub fn is_elementary(&self, k: u64) -> bool {
        self.divisors.iter().all(|d| *d == BigInt::from(k))
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.divisors.is_empty() {
            return write!(f, "0");
        }
        for (i, d) in self.divisors.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "Z/{d}")?;
        }
        Ok(())
    }
}

/// Invariants of `span(Z_basis) / span(B_generators)`.
pub fn quotient_invariants(z_basis: &[IntVector], b_generators: &[IntVector]) -> Result<AbelianInvariants> {
    let k = z_basis.len();
    if k == 0 {
        return if b_generators.iter().all(|b| b.iter().all(Zero::is_zero)) {
            Ok(AbelianInvariants::trivial())
        } else {
            Err(Error::BNotInZ)
        };
    }
    let n = z_basis[0].len();
    let z = IntMatrix::from_columns(n, z_basis);
    let solver = LinearSolver::new(&z);
    let mut coords = Vec::with_capacity(b_generators.len());
    for b in b_generators {
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.len(),
            });
        }
        coords.push(solver.solve(b).ok_or(Error::BNotInZ)?);
    }
    if coords.is_empty() {
        return Err(Error::InfiniteQuotient);
    }
    let c = IntMatrix::from_columns(k, &coords);
    let snf = smith_normal_form(&c);
    if snf.rank() < k {
        return Err(Error::InfiniteQuotient);
    }
    Ok(AbelianInvariants::from_divisors(snf.diagonal()))
}

/// `Ĥ⁻¹(G, L) = ker(Σ_g g) / ⟨(g − 1) L⟩`.
pub fn tate_h_minus1(lattice: &GLattice) -> Result<AbelianInvariants> {
    let group = lattice.group();
    let n = lattice.rank();
    let mut norm = IntMatrix::zeros(n, n);
    for g in group.elements() {
        norm = &norm + g;
    }
    let z = integer_kernel(&norm);
    let id = IntMatrix::identity(n);
    let mut b = Vec::new();
    for g in group.elements() {
        let d = g - &id;
        for j in 0..n {
            let col = d.column(j);
            if col.iter().any(|x| !x.is_zero()) {
                b.push(col);
            }
        }
    }
    let b = hermite_rows(&b);
    if z.is_empty() && b.is_empty() {
        return Ok(AbelianInvariants::trivial());
    }
    quotient_invariants(&z, &b)
}

/// `H¹(G, L) ≅ Ĥ⁻¹(G, L')` for the dual lattice `L'`.
pub fn h1_via_dual(lattice: &GLattice) -> Result<AbelianInvariants> {
    tate_h_minus1(&lattice.dual()?)
}

/// Basis of `L^G = ∩_g ker(g − 1)`, Hermite-normalized.
pub fn fixed_sublattice(lattice: &GLattice) -> Vec<IntVector> {
    let n = lattice.rank();
    let id = IntMatrix::identity(n);
    let blocks: Vec<IntMatrix> = lattice.group().elements().iter().map(|g| g - &id).collect();
    integer_kernel(&IntMatrix::stack(&blocks))
}
