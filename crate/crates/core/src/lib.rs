//! Indefinite theta series attached to a signature-(n,2) quadratic space
//! and a cyclic configuration of cone vectors.
//!
//! The crate verifies the incidence conditions on the configuration
//! exactly, evaluates the sign-pairing weight and the resulting sparse
//! q-expansion, produces convergence certificates from a polyhedral cone
//! decomposition, exhibits divergence witnesses when the conditions
//! fail, and numerically assembles the modular completion from
//! two-dimensional Gaussian-smoothed sign integrals.
//!
//! Exact rationals carry everything the verdicts depend on; floating
//! point appears only in cone optimization, quadrature, and series
//! evaluation.

pub mod cones;
pub mod completion;
pub mod error;
pub mod exec;
pub mod incidence;
pub mod matrix;
pub mod quadform;
pub mod rat;
pub mod signwalk;
pub mod simplex;
pub mod theta;

pub use error::{Error, Result};
