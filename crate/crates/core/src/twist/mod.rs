//! Choice functions, their twistings, and the twisted semigroup ring.

mod choice;
mod ring;

use thiserror::Error;

use crate::graded::GradedError;
use crate::ordgroup::GroupElement;
use crate::valuation::ValuationError;

pub use choice::{ChoiceFunction, ChoiceRule, Domain, DomainKind, TableRule};
pub use ring::{PairVerdict, TwistedDisplay, TwistedRing, TwistedRingElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistError {
    #[error("degree {0} is outside the choice function's domain")]
    OutsideDomain(GroupElement),
    #[error("eps({gamma}) has value {got}")]
    WrongValue { gamma: GroupElement, got: GroupElement },
    #[error("eps({0}) is zero")]
    ZeroValue(GroupElement),
    #[error("eps(0) must be 1")]
    ZeroNotUnit,
    #[error(transparent)]
    Valuation(#[from] ValuationError),
    #[error(transparent)]
    Graded(#[from] Box<GradedError>),
}

impl From<GradedError> for TwistError {
    fn from(e: GradedError) -> Self {
        TwistError::Graded(Box::new(e))
    }
}
