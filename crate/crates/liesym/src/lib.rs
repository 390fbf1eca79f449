//! Exact computational Lie theory for compact 4-symmetric spaces.
//!
//! The crate builds root systems and Chevalley bases of the simple Lie
//! algebras, represents finite-order inner automorphisms and involutions that
//! preserve a maximal torus, and uses them to recompute the classification of
//! involutions commuting or anticommuting with an inner automorphism of order
//! four.

pub mod error;
pub mod linalg;
pub mod rootsys;
pub mod weyl;
pub mod chevalley;
pub mod torsion;
pub mod glie;
pub mod labels;
pub mod invol;
pub mod classify;

pub use error::{LieError, Result};
