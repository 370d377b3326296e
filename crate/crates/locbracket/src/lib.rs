//! Local field-theoretic Poisson brackets and their verification calculus.
//!
//! A [`LocalBracket`] stores the coefficient table `B^{ij}_{(l)}` of a bracket
//! `{phi^i(x), phi^j(y)} = sum_l B^{ij}_{(l)} delta^{(l)}(x-y)`. The
//! distributional side lives in [`DeltaExpr`]: sums of jet-coefficient times
//! delta-derivative factors in up to three base points, with a unique normal
//! form (all coefficients rebased to x). On top sit the checks: skew-symmetry
//! via the formal adjoint, the Jacobi identity via triple-bracket expansion,
//! density brackets, Hamiltonian flows, and annihilator tests, plus a
//! numerical quadrature oracle used to cross-validate symbolic verdicts.

mod bracket;
mod delta;
mod error;
pub mod numeric;
mod report;

pub use bracket::LocalBracket;
pub use delta::{Base, DeltaExpr, RawDelta, RawDeltaTerm};
pub use error::BracketError;
pub use report::{CheckReport, Residual};
