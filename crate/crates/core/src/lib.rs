//! Exact computation of twisted Schur multipliers, twisted representation
//! groups and semi-linear lifts of semi-projective representations of
//! finite groups.

pub mod budget;
pub mod cohomology;
pub mod cyclotomic;
pub mod error;
pub mod extensions;
pub mod gmodule;
pub mod io;
pub mod group;
pub mod repgroups;
pub mod selftest;
pub mod semiprojective;
pub mod snf;

pub use budget::Budget;
pub use error::{Error, Result};
pub use gmodule::{DualCharacter, IntMatrix, SignCharacter, TwistedModule};
pub use group::{FiniteGroup, GroupFingerprint, StandardFamily};
pub use snf::{SmithNormalForm, SparseIntMatrix};
