//! Exact state-sum engine for the root-of-unity 4d TQFT on Delta complexes.
//!
//! The crate is organised bottom-up:
//!
//! * [`cyclotomic`]: exact values `c · N^(-e/2)` with `c ∈ Z[ζ_{2N}]`;
//! * [`delta_complex`]: gluing data, skeleton, orientation, boundary;
//! * [`builders`]: the concrete triangulations (spheres, products, ℂP²);
//! * [`statesum`]: weights, brute force, constraint elimination and
//!   quadratic exponential sums;
//! * [`relations`]: exhaustive checks of the local algebraic identities;
//! * [`table`]: the closed-manifold value table and root-of-unity sweeps.

#![allow(clippy::needless_range_loop)]

pub mod builders;
pub mod cyclotomic;
pub mod delta_complex;
pub mod error;
pub mod modular;
pub mod relations;
pub mod statesum;
pub mod table;

pub use cyclotomic::{CycInt, CyclotomicRing, Root, RootSpec, Scalar};
pub use delta_complex::{DeltaComplex, Slot};
pub use error::{Error, Result};
