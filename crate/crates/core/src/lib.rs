//! Exact arithmetic for graded algebras of monomial valuations.
//!
//! The crate models a monomial valuation `v` on `K = Q(x_1, ..., x_m)` with
//! values in a lexicographically ordered subgroup of `Q^d`, the associated
//! graded algebra `gr_v(R)` for `R = Q[x_1, ..., x_m]` or `R = K`, and the
//! semigroup ring `Kv[t^{v(R)}]` with the multiplication twisted by a choice
//! function `ε` (a right inverse of `v`). On top of that sit the map
//! `ψ: gr_v(R) -> Kv[t^{v(R)}]_ε`, constructions of choice functions with
//! trivial twisting, and an analyzer for choice functions on `Σ (1/p) Z`.

pub mod cli;
pub mod constructions;
pub mod graded;
pub mod mpoly;
pub mod ordgroup;
pub mod report;
pub mod setup;
pub mod suites;
pub mod twist;
pub mod valuation;

pub use graded::{GradedAlgebra, GradedElement, HomogeneousElement, Subring};
pub use mpoly::{Monomial, Polynomial, RationalFunction, VarNames};
pub use ordgroup::{FgSubgroup, GroupElement};
pub use twist::{ChoiceFunction, TwistedRing, TwistedRingElement};
pub use valuation::{MonomialValuation, ResidueElement};
