//! Field expressions over free generator systems and the multilocal OPE
//! engine.
//!
//! Trees ([`FieldExpr`]) are evaluated into a canonical form ([`Field`]):
//! Laurent coefficients times fully normal ordered oscillator monomials.
//! Products of canonical fields go through Wick's theorem ([`Bilocal`]);
//! partial fractions in z then give the singular part ([`OpeResult`]) and,
//! after subtracting it, the normal ordered product.

mod canon;
mod expr;
mod ope;
mod parse;
mod system;
mod wick;

pub use canon::{Atom, Field, Monomial};
pub use expr::{FieldExpr, LinearTerm};
pub use ope::{canonicalize, locality_profile, normal_prod, ope, ope_coefficient, LocalityProfile, OpeResult};
pub use parse::{parse_expr, parse_expr_with};
pub use system::{Generator, GeneratorSystem, Lattice, Parity};
pub use wick::{taylor_recenter, Bilocal};
