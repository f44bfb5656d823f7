//! Exact arithmetic and factorization invariants for orders Z[f*w] inside
//! imaginary quadratic rings of integers with class number 1.
//!
//! The crate computes the generalized Davenport constant of such an order and
//! its elasticity, both by closed-form evaluation and by independent
//! brute-force search, and produces explicit certificates: products with no
//! order-subproduct, elements attaining the maximal elasticity, and the
//! classical Davenport constant of small abelian groups as a group oracle.

pub mod davenport;
pub mod elasticity;
pub mod error;
pub mod factorization;
pub mod field;
pub mod intfactor;
pub(crate) mod modring;
pub mod orders;
pub mod quadint;
pub mod residue;
pub mod suite;

pub use error::{Error, Result};
pub use field::{make_field, FieldContext, OmegaKind};
pub use quadint::QuadInt;
