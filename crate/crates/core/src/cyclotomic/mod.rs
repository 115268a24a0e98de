//! Exact arithmetic in `ℚ(ζₙ)`, semilinear matrix groups over it and
//! lattices in `ℂ^d` that such groups preserve.

mod field;
mod heisenberg;
mod lattice;
mod semilinear;

pub use field::{cyclotomic_polynomial, CyclotomicField, CyclotomicNumber};
pub use heisenberg::{heisenberg_demo, u, HeisenbergReport, HeisenbergSetup, LatticeCheck, ScalarContent};
pub use lattice::{lattice_scalar_stabilizer, preserves_lattice, ComplexLattice, ScalarStabilizer};
pub use semilinear::{determinant, semilinear_compose, semilinear_group_closure, SemilinearMatrix};
