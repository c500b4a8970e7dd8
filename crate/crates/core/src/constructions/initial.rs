use std::collections::BTreeMap;

use crate::mpoly::Polynomial;
use crate::ordgroup::GroupElement;
use crate::twist::{ChoiceFunction, TwistedRing};

use super::ConstructionError;

/// Replaces each table value `P/Q` by `ip(P)/ip(Q)`.
///
/// The values keep their valuation and each twisting keeps its residue, so in
/// particular `ε̄ = 1` on a pair exactly when `ε̄' = 1` there.
pub fn make_initial(eps: &ChoiceFunction) -> Result<ChoiceFunction, ConstructionError> {
    let table = eps.table().ok_or(ConstructionError::NotTable)?;
    let v = eps.valuation();
    let mut out = BTreeMap::new();
    for (g, f) in table {
        out.insert(g.clone(), v.initial_fraction(f)?);
    }
    Ok(ChoiceFunction::from_table(v.clone(), eps.domain().clone(), out)?)
}

/// Outcome of comparing `ε(nα)` with `ε(α)^n` through `P^n Q' = Q^n P'`,
/// where `ε(α) = P/Q` and `ε(nα) = P'/Q'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerCheck {
    pub alpha: GroupElement,
    pub n: u32,
    pub lhs: Polynomial,
    pub rhs: Polynomial,
    pub consistent: bool,
}

pub fn forced_power_check(eps: &ChoiceFunction, alpha: &GroupElement, n: u32) -> Result<PowerCheck, ConstructionError> {
    let e1 = eps.eval(alpha)?;
    let en = eps.eval(&alpha.times(n as i64))?;
    let lhs = &e1.num().pow(n) * en.den();
    let rhs = &e1.den().pow(n) * en.num();
    let consistent = lhs == rhs;
    Ok(PowerCheck { alpha: alpha.clone(), n, lhs, rhs, consistent })
}

/// Agreement of `ε̄ = 1` between `ε` and its initial reduction on sampled pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub pairs_checked: usize,
    pub trivial_pairs: usize,
    pub mismatches: Vec<(GroupElement, GroupElement)>,
}

pub fn initial_equivalence_check(eps: &ChoiceFunction, bound: u32) -> Result<EquivalenceReport, ConstructionError> {
    let reduced = make_initial(eps)?;
    let a = TwistedRing::new(eps.clone());
    let b = TwistedRing::new(reduced);
    let pairs = a.sample_pairs(bound);
    let mut trivial_pairs = 0;
    let mut mismatches = Vec::new();
    for (x, y) in &pairs {
        let ta = a.twisting(x, y)?.is_one();
        let tb = b.twisting(x, y)?.is_one();
        if ta {
            trivial_pairs += 1;
        }
        if ta != tb {
            mismatches.push((x.clone(), y.clone()));
        }
    }
    Ok(EquivalenceReport { pairs_checked: pairs.len(), trivial_pairs, mismatches })
}
