use std::sync::Arc;

use num::ToPrimitive;

use crate::mpoly::RationalFunction;
use crate::ordgroup::{FgSubgroup, GroupElement};
use crate::twist::{ChoiceFunction, ChoiceRule, Domain, DomainKind};
use crate::valuation::MonomialValuation;

use super::{ConstructionError, SubgroupWithChoice};

/// `ε(Σ n_i γ_i) = Π z_i^{n_i}` over a basis `γ_i`.
#[derive(Debug)]
pub struct FreeRule {
    basis: FgSubgroup,
    witnesses: Vec<RationalFunction>,
}

impl FreeRule {
    pub fn basis(&self) -> &FgSubgroup {
        &self.basis
    }
}

impl ChoiceRule for FreeRule {
    fn eval(&self, gamma: &GroupElement) -> Option<RationalFunction> {
        let coeffs = self.basis.decompose(gamma)?;
        let mut out = RationalFunction::one();
        for (n, z) in coeffs.iter().zip(&self.witnesses) {
            let n = n.to_i64()?;
            if n != 0 {
                out = &out * &z.powi(n).ok()?;
            }
        }
        Some(out)
    }

    fn describe(&self) -> String {
        format!("free on {} generators", self.witnesses.len())
    }
}

/// Choice function on the group generated by a basis `γ_i`, sending each
/// basis element to its witness `z_i` and extending multiplicatively.
///
/// Requires `v(z_i) = γ_i` and linearly independent `γ_i`. The result satisfies
/// `ε(α) ε(β) = ε(α + β)` in `K`, so its twisting is identically one.
pub fn free_choice(
    valuation: Arc<MonomialValuation>,
    generators: Vec<GroupElement>,
    witnesses: Vec<RationalFunction>,
) -> Result<ChoiceFunction, ConstructionError> {
    Ok(free_subgroup_choice(valuation, generators, witnesses)?.choice)
}

pub(crate) fn free_subgroup_choice(
    valuation: Arc<MonomialValuation>,
    generators: Vec<GroupElement>,
    witnesses: Vec<RationalFunction>,
) -> Result<SubgroupWithChoice, ConstructionError> {
    if generators.len() != witnesses.len() {
        return Err(ConstructionError::WitnessCount(generators.len(), witnesses.len()));
    }
    for (g, z) in generators.iter().zip(&witnesses) {
        if z.is_zero() {
            return Err(ConstructionError::WrongWitnessValue { gamma: g.clone(), got: None });
        }
        let got = valuation.value(z)?;
        if got != *g {
            return Err(ConstructionError::WrongWitnessValue { gamma: g.clone(), got: Some(got) });
        }
    }
    let basis = FgSubgroup::new(valuation.dim(), generators.clone())?;
    if !basis.is_free_basis() {
        return Err(ConstructionError::DependentGenerators);
    }
    let rule = FreeRule { basis: basis.clone(), witnesses };
    let domain = Domain { generators, kind: DomainKind::Group };
    Ok(SubgroupWithChoice {
        subgroup: basis,
        choice: ChoiceFunction::from_rule(valuation, domain, Arc::new(rule), true),
        certified_trivial: true,
        step: None,
    })
}
