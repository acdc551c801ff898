//! Hodge numbers of Borcea–Voisin type Calabi–Yau threefolds: crepant
//! resolutions of `(S × E)/C_n` for a K3 surface `S` and an elliptic curve `E`
//! carrying purely non-symplectic automorphisms of order `n ∈ {2, 3, 4, 6}`.
//!
//! The [`engine`] computes the full orbifold Hodge diamond from fixed-locus
//! data; [`closed_forms`] evaluates the per-order formulas in terms of named
//! invariants, and the two are cross-checked against each other.

pub mod closed_forms;
pub mod cyclic_action;
pub mod engine;
pub mod error;
pub mod fixed_locus;
pub mod hodge_algebra;
pub mod report;

pub use error::{Error, Result};
