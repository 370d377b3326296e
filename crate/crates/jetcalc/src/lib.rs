//! Exact differential-polynomial algebra on the jet space of fields over R^d.
//!
//! A [`FieldSet`] declares the fields and the spatial dimension; a [`JetVar`]
//! is a field together with a derivative multi-index; a [`DiffPoly`] is a
//! polynomial in jet variables with exact rational coefficients. On top of
//! that sit the operations every other layer is built from: total derivatives,
//! Euler operators (variational derivatives), divergence extraction, the
//! scaling homotopy, gradient integration in jet coordinates, and exact
//! evaluation.

mod error;
mod fieldset;
pub mod formal;
pub mod linalg;
mod ops;
mod poly;

pub use error::JetError;
pub use fieldset::{FieldRole, FieldSet, JetVar, MultiIndex};
pub use ops::jet_potential;
pub use poly::{DiffPoly, Monomial};

pub use num_rational::BigRational as Rat;

/// Shorthand for an exact rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}

/// Shorthand for an exact rational from an integer.
pub fn rint(n: i64) -> Rat {
    Rat::from_integer(n.into())
}
