//! Choice functions with trivial twisting, and the counterexample analyzer.
//!
//! [`free_choice`] handles a free value group. [`extend_choice`] performs one
//! extension step `Φ -> Φ + <γ>`; chains of steps replace the maximality
//! argument, which is not constructive. [`analyze_counterexample`] checks the
//! lemmas behind the non-existence of a trivializing choice function on
//! `Σ (1/p) Z` for a finite set of primes.

mod analyzer;
mod extend;
mod free;
mod initial;

use thiserror::Error;

use crate::mpoly::PolyError;
use crate::ordgroup::{FgSubgroup, GroupElement, GroupError};
use crate::twist::{ChoiceFunction, TwistError};
use crate::valuation::ValuationError;

pub use analyzer::{
    analyze_counterexample, candidate_pool, default_constants, enumerate_monomial_tables, prime_valuation, AnalyzerReport, ConsistentTable,
    CounterexampleInput, EnumerationReport, ForcedVerdict, RootVerdict, Verdict,
};
pub use extend::{extend_chain, extend_choice, CaseTwisting, ExtensionRule, ExtensionStep};
pub use free::{free_choice, FreeRule};
pub use initial::{forced_power_check, initial_equivalence_check, make_initial, EquivalenceReport, PowerCheck};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("{0} generators but {1} witnesses")]
    WitnessCount(usize, usize),
    #[error("witness for {gamma} has value {}", got.as_ref().map_or("undefined".to_string(), |g| g.to_string()))]
    WrongWitnessValue { gamma: GroupElement, got: Option<GroupElement> },
    #[error("generators are linearly dependent")]
    DependentGenerators,
    #[error("{0} already lies in the subgroup")]
    AlreadyContained(GroupElement),
    #[error("base choice function is not certified trivial")]
    NotCertified,
    #[error("order of {0} modulo the subgroup does not fit in 32 bits")]
    OrderTooLarge(GroupElement),
    #[error("no root of degree {n0} found for the residue class of {class:?} while adjoining {gamma}")]
    RootNotFound { gamma: GroupElement, n0: u32, class: crate::mpoly::RationalFunction },
    #[error("choice function is not table-backed")]
    NotTable,
    #[error("malformed candidate: {0}")]
    MalformedCandidate(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A subgroup `Φ` together with a choice function on it.
#[derive(Debug, Clone)]
pub struct SubgroupWithChoice {
    pub subgroup: FgSubgroup,
    pub choice: ChoiceFunction,
    /// `ε̄ ≡ 1` holds by construction.
    pub certified_trivial: bool,
    /// The last extension step, when this pair came from [`extend_choice`].
    pub step: Option<ExtensionStep>,
}

impl SubgroupWithChoice {
    /// `Φ` free on `generators`, with `ε` sending each generator to its witness.
    pub fn free(
        valuation: std::sync::Arc<crate::valuation::MonomialValuation>,
        generators: Vec<GroupElement>,
        witnesses: Vec<crate::mpoly::RationalFunction>,
    ) -> Result<Self, ConstructionError> {
        free::free_subgroup_choice(valuation, generators, witnesses)
    }

    /// `⟨α⟩` with `ε(nα) = z^n`.
    pub fn cyclic(
        valuation: std::sync::Arc<crate::valuation::MonomialValuation>,
        alpha: GroupElement,
        z: crate::mpoly::RationalFunction,
    ) -> Result<Self, ConstructionError> {
        Self::free(valuation, vec![alpha], vec![z])
    }
}
