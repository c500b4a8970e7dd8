use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::mpoly::{RationalFunction, VarNames};
use crate::ordgroup::{group_ball, semigroup_ball, GroupElement};
use crate::valuation::MonomialValuation;

use super::TwistError;

/// How a choice function produces `ε(γ)`.
///
/// `eval` returns `None` outside the rule's domain. Implementations must keep
/// `v(ε(γ)) = γ`; [`ChoiceFunction`] checks this for tables on construction
/// and the constructions carry it by proof.
pub trait ChoiceRule: Send + Sync + fmt::Debug {
    fn eval(&self, gamma: &GroupElement) -> Option<RationalFunction>;

    /// Short human-readable name of the rule.
    fn describe(&self) -> String;

    /// Explicit entries, for table-backed rules.
    fn table(&self) -> Option<&BTreeMap<GroupElement, RationalFunction>> {
        None
    }
}

/// A finite, explicitly listed choice function.
#[derive(Debug, Clone)]
pub struct TableRule {
    entries: BTreeMap<GroupElement, RationalFunction>,
}

impl ChoiceRule for TableRule {
    fn eval(&self, gamma: &GroupElement) -> Option<RationalFunction> {
        self.entries.get(gamma).cloned()
    }

    fn describe(&self) -> String {
        format!("table with {} entries", self.entries.len())
    }

    fn table(&self) -> Option<&BTreeMap<GroupElement, RationalFunction>> {
        Some(&self.entries)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    /// Nonnegative integer combinations of the generators.
    Semigroup,
    /// All integer combinations.
    Group,
}

/// Generators of the (sub)semigroup a choice function lives on; used to
/// enumerate bounded samples of the domain.
#[derive(Debug, Clone)]
pub struct Domain {
    pub generators: Vec<GroupElement>,
    pub kind: DomainKind,
}

impl Domain {
    /// Elements up to `height` generator steps, each with its least height.
    pub fn ball(&self, dim: usize, height: u32) -> Vec<(GroupElement, u32)> {
        match self.kind {
            DomainKind::Semigroup => semigroup_ball(&self.generators, dim, height),
            DomainKind::Group => group_ball(&self.generators, dim, height),
        }
    }
}

/// A right inverse `ε` of the valuation with `ε(0) = 1`.
#[derive(Clone)]
pub struct ChoiceFunction {
    valuation: Arc<MonomialValuation>,
    domain: Domain,
    rule: Arc<dyn ChoiceRule>,
    certified_trivial: bool,
}

impl ChoiceFunction {
    /// A table-backed choice function. Every entry must have the value of its
    /// key; `0 ↦ 1` is added if absent and rejected if mapped elsewhere.
    pub fn from_table(
        valuation: Arc<MonomialValuation>,
        domain: Domain,
        mut entries: BTreeMap<GroupElement, RationalFunction>,
    ) -> Result<Self, TwistError> {
        let zero = valuation.zero_value();
        for (gamma, f) in &entries {
            if f.is_zero() {
                return Err(TwistError::ZeroValue(gamma.clone()));
            }
            let got = valuation.value(f)?;
            if got != *gamma {
                return Err(TwistError::WrongValue { gamma: gamma.clone(), got });
            }
        }
        match entries.get(&zero) {
            Some(f) if *f != RationalFunction::one() => return Err(TwistError::ZeroNotUnit),
            Some(_) => {}
            None => {
                entries.insert(zero, RationalFunction::one());
            }
        }
        Ok(Self {
            valuation,
            domain,
            rule: Arc::new(TableRule { entries }),
            certified_trivial: false,
        })
    }

    /// Wraps a constructed rule. `certified_trivial` records that the twisting
    /// is identically one by construction rather than by a bounded check.
    pub fn from_rule(
        valuation: Arc<MonomialValuation>,
        domain: Domain,
        rule: Arc<dyn ChoiceRule>,
        certified_trivial: bool,
    ) -> Self {
        Self { valuation, domain, rule, certified_trivial }
    }

    pub fn valuation(&self) -> &Arc<MonomialValuation> {
        &self.valuation
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn rule(&self) -> &dyn ChoiceRule {
        self.rule.as_ref()
    }

    pub fn is_certified_trivial(&self) -> bool {
        self.certified_trivial
    }

    pub fn table(&self) -> Option<&BTreeMap<GroupElement, RationalFunction>> {
        self.rule.table()
    }

    pub fn eval(&self, gamma: &GroupElement) -> Result<RationalFunction, TwistError> {
        if gamma.dim() != self.valuation.dim() {
            return Err(TwistError::OutsideDomain(gamma.clone()));
        }
        if gamma.is_zero() {
            return Ok(RationalFunction::one());
        }
        self.rule.eval(gamma).ok_or_else(|| TwistError::OutsideDomain(gamma.clone()))
    }

    pub fn contains(&self, gamma: &GroupElement) -> bool {
        self.eval(gamma).is_ok()
    }

    /// Sampled domain elements up to `height`, restricted to those `ε` defines.
    pub fn sample_domain(&self, height: u32) -> Vec<(GroupElement, u32)> {
        self.domain
            .ball(self.valuation.dim(), height)
            .into_iter()
            .filter(|(g, _)| self.contains(g))
            .collect()
    }

    /// Multi-line `γ -> ε(γ)` listing over the sampled domain.
    pub fn dump(&self, names: &VarNames, height: u32) -> String {
        let mut out = String::new();
        for (g, _) in self.sample_domain(height) {
            let f = self.eval(&g).expect("sampled inside domain");
            out.push_str(&format!("eps({g}) = {}\n", names.rf(&f)));
        }
        out
    }
}

impl fmt::Debug for ChoiceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChoiceFunction")
            .field("rule", &self.rule.describe())
            .field("generators", &self.domain.generators)
            .field("certified_trivial", &self.certified_trivial)
            .finish()
    }
}
