//! Exact arithmetic core for the rationality problem of `z^2 = a y^2 + P(x)` over the rationals.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised bottom-up:
//!
//! * [`exact_math`]: rationals, polynomials over Q and Q(sqrt a), factorization, norm equations.
//! * [`lattice`]: integer matrices, Smith normal form, finite matrix groups, Tate cohomology.
//! * [`surface`]: Picard-lattice models with intersection form, blow-up and blow-down.
//! * [`chatelet`]: the Galois lattices `Pic(X)`, `M1`, `M2`, `Pic(Y)` built from a block structure.
//! * [`delpezzo`]: fiber-class infeasibility, conic classes on blown-up planes, descent.
//! * [`decider`]: the end-to-end decision pipeline and its report types.
#![no_std]

extern crate alloc;

pub mod chatelet;
pub mod decider;
pub mod delpezzo;
pub mod error;
pub mod exact_math;
pub mod lattice;
pub mod surface;

pub use error::{Error, Result};
