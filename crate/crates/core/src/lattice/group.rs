use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use super::matrix::{IntMatrix, IntVector};
use super::snf::LinearSolver;
use crate::{Error, Result};

pub const DEFAULT_GROUP_CAP: usize = 4096;

/// A finite group of unimodular matrices, fully enumerated, with an index-≤2 subgroup `N`
/// marked by flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixGroup {
    rank: usize,
    generators: Vec<IntMatrix>,
    generator_in_n: Vec<bool>,
    elements: Vec<IntMatrix>,
    in_n: Vec<bool>,
}

impl MatrixGroup {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[IntMatrix] {
        &self.generators
    }

    pub fn generator_in_n(&self) -> &[bool] {
        &self.generator_in_n
    }

    pub fn elements(&self) -> &[IntMatrix] {
        &self.elements
    }

    pub fn in_n(&self) -> &[bool] {
        &self.in_n
    }

    /// Index of `N` in the group: 1 or 2.
    pub fn n_index(&self) -> usize {
        if self.in_n.iter().all(|&b| b) {
            1
        } else {
            2
        }
    }

    /// Matrices of the action on a stable sublattice with basis `basis` (column vectors), in
    /// the coordinates of that basis. The group is re-closed from the restricted generators.
    pub fn restrict(&self, basis: &[IntVector], cap: usize) -> Result<MatrixGroup> {
        let b = IntMatrix::from_columns(self.rank, basis);
        let solver = LinearSolver::new(&b);
        let gens = self
            .generators
            .iter()
            .map(|g| {
                let cols: Vec<IntVector> = basis
                    .iter()
                    .map(|v| solver.solve(&g.mul_vec(v)).ok_or(Error::BNotInZ))
                    .collect::<Result<_>>()?;
                Ok(IntMatrix::from_columns(basis.len(), &cols))
            })
            .collect::<Result<Vec<_>>>()?;
        close_group(&gens, &self.generator_in_n, cap)
    }

    /// Conjugate action `P⁻¹ g P`, i.e. the same group in the basis given by the columns of `P`.
    pub fn change_basis(&self, p: &IntMatrix, cap: usize) -> Result<MatrixGroup> {
        let p_inv = p.inverse_unimodular()?;
        let gens: Vec<IntMatrix> = self.generators.iter().map(|g| &(&p_inv * g) * p).collect();
        close_group(&gens, &self.generator_in_n, cap)
    }
}

/// Breadth-first closure under right multiplication by the generators.
///
/// An element is in `N` iff it is a product with an even number of non-`N` generators; a
/// matrix reached by two words of different parity is rejected.
pub fn close_group(generators: &[IntMatrix], n_flags: &[bool], cap: usize) -> Result<MatrixGroup> {
    if n_flags.len() != generators.len() {
        return Err(Error::DimensionMismatch {
            expected: generators.len(),
            got: n_flags.len(),
        });
    }
    let rank = generators.first().map_or(0, |g| g.rows());
    for g in generators {
        if !g.is_square() || g.rows() != rank {
            return Err(Error::DimensionMismatch {
                expected: rank,
                got: g.rows().max(g.cols()),
            });
        }
        if !g.is_unimodular() {
            return Err(Error::NotUnimodular);
        }
    }
    let id = IntMatrix::identity(rank);
    let mut index: BTreeMap<IntMatrix, usize> = BTreeMap::new();
    let mut elements = Vec::new();
    let mut in_n = Vec::new();
    index.insert(id.clone(), 0);
    elements.push(id);
    in_n.push(true);
    let mut queue = VecDeque::from([0usize]);
    while let Some(e) = queue.pop_front() {
        for (g, &g_in) in generators.iter().zip(n_flags) {
            let p = &elements[e] * g;
            let flag = in_n[e] == g_in;
            if let Some(&k) = index.get(&p) {
                if in_n[k] != flag {
                    return Err(Error::InconsistentFlags);
                }
                continue;
            }
            if elements.len() == cap {
                return Err(Error::GroupOrderCapExceeded { cap });
            }
            index.insert(p.clone(), elements.len());
            queue.push_back(elements.len());
            elements.push(p);
            in_n.push(flag);
        }
    }
    Ok(MatrixGroup {
        rank,
        generators: generators.to_vec(),
        generator_in_n: n_flags.to_vec(),
        elements,
        in_n,
    })
}

/// `Z^n` with a finite group acting by the matrices of `group`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GLattice {
    group: MatrixGroup,
}

impl GLattice {
    pub fn new(group: MatrixGroup) -> Self {
        GLattice { group }
    }

    pub fn from_generators(generators: &[IntMatrix], n_flags: &[bool], cap: usize) -> Result<Self> {
        Ok(GLattice::new(close_group(generators, n_flags, cap)?))
    }

    pub fn rank(&self) -> usize {
        self.group.rank
    }

    pub fn group(&self) -> &MatrixGroup {
        &self.group
    }

    /// The dual lattice `Hom(L, Z)`, on which `g` acts by `(g⁻¹)ᵀ`. Element order is kept.
    pub fn dual(&self) -> Result<GLattice> {
        let dualize = |g: &IntMatrix| g.inverse_unimodular().map(|i| i.transpose());
        let generators = self.group.generators.iter().map(dualize).collect::<Result<Vec<_>>>()?;
        let elements = self.group.elements.iter().map(dualize).collect::<Result<Vec<_>>>()?;
        Ok(GLattice::new(MatrixGroup {
            rank: self.group.rank,
            generators,
            generator_in_n: self.group.generator_in_n.clone(),
            elements,
            in_n: self.group.in_n.clone(),
        }))
    }
}
