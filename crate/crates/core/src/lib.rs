//! Exact computer algebra for multilocal free-field vertex calculus.
//!
//! The crate is organised bottom-up:
//!
//! * [`scalar`]: exact arithmetic in cyclotomic fields Q(ζ_M);
//! * [`ratfunc`]: bivariate rational functions with poles on `z = 0`, `w = 0`
//!   and `z = ζ w`, partial fractions and series expansions;
//! * [`fieldcalc`]: generator systems, the field-expression language, normal
//!   ordering and the multilocal OPE engine;
//! * [`fock`]: a truncated Fock-space oracle evaluating raw modes exactly;
//! * [`catalog`]: named systems, derived fields, the two bosonization maps
//!   and the verification checks built on top of them.

pub mod catalog;
pub mod error;
pub mod fieldcalc;
pub mod fock;
pub mod ratfunc;
pub mod scalar;

pub use error::{Error, Result};
pub use ratfunc::{RatFunc, Root};
pub use scalar::Scalar;
