//! Integer matrices, Smith and Hermite normal forms, finite matrix groups and the Tate
//! cohomology groups `Ĥ⁻¹` and `H¹` of lattices.

mod cohomology;
mod group;
mod matrix;
mod snf;

pub use cohomology::{fixed_sublattice, h1_via_dual, quotient_invariants, tate_h_minus1, AbelianInvariants};
pub use group::{close_group, GLattice, MatrixGroup, DEFAULT_GROUP_CAP};
pub use matrix::{int_vector, IntMatrix, IntVector};
pub use snf::{hermite_rows, integer_kernel, smith_normal_form, LinearSolver, SnfResult};
