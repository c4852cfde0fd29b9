//! Executable forms of the sum of squared logarithms inequality (SSLI) and
//! its relatives.
//!
//! Every predicate, formula and sufficient condition is available as a pure
//! function over value data:
//!
//! * [`base`] holds the shared vector types, the tolerance policy and the
//!   Chebyshev and Jensen building blocks.
//! * [`sympoly`] evaluates elementary symmetric polynomials, exactly or in
//!   floating point, together with their gradients.
//! * [`majorization`] decides the strong, weak and logarithmic majorization
//!   relations and checks them against convex test functions.
//! * [`ssli`] checks the conjectured hypothesis, the rearrangement condition
//!   with its pairing search, and the powered-logarithm variant.
//! * [`expineq`] covers the exponential-sum inequalities over zero-sum
//!   triples and ordered polynomial families.
//! * [`infoineq`] covers relative entropy and the shifted log-sum and
//!   information inequalities.
//! * [`optimize`] attacks the minimization form of the conjecture with a
//!   multi-start penalty method.
//! * [`fuzz`] generates inputs that satisfy each statement's hypothesis by
//!   construction and records every violation with reproduction data.
//! * [`cli`] is the command-line surface used by the `logineq` binary.

pub mod base;
pub mod cli;
pub mod error;
pub mod expineq;
pub mod fuzz;
pub mod infoineq;
pub mod majorization;
pub mod optimize;
pub mod ssli;
pub mod sympoly;

pub use base::{PositiveVector, Tolerance};
pub use error::{Error, Result};
