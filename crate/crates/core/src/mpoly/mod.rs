//! Sparse multivariate polynomials and rational functions over `Q`.

mod poly;
mod ratfun;
mod root;
pub mod text;

use thiserror::Error;

pub use poly::{Monomial, Polynomial};
pub use ratfun::RationalFunction;
pub use root::{nth_root, rational_nth_root, rf_nth_root};
pub use text::VarNames;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("operation undefined on zero")]
    ZeroInput,
    #[error("exponent too large")]
    ExponentTooLarge,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("parse error: {0}")]
    Parse(String),
}
