use std::sync::Arc;

use num::{BigInt, Integer, ToPrimitive, Zero};

use crate::mpoly::RationalFunction;
use crate::ordgroup::{FgSubgroup, GroupElement};
use crate::twist::{ChoiceFunction, ChoiceRule, Domain, DomainKind, TwistError};
use crate::valuation::ResidueElement;

use super::{ConstructionError, SubgroupWithChoice};

/// Choice function on `Ψ = Φ + <γ>` built from one on `Φ`.
///
/// With `n0` the order of `γ` modulo `Φ`, every `ψ ∈ Ψ` is uniquely
/// `α + nγ` with `α ∈ Φ` and `0 ≤ n < n0`, and `ε(ψ) = ε_Φ(α) (a x_γ)^n`.
/// When no multiple of `γ` falls in `Φ`, `n` ranges over `Z` and `a = 1`.
#[derive(Debug)]
pub struct ExtensionRule {
    base: ChoiceFunction,
    psi: FgSubgroup,
    gamma: GroupElement,
    x_gamma: RationalFunction,
    n0: Option<u32>,
    step: RationalFunction,
}

/// One of the two computations of `ε̄_Ψ(ψ1, ψ2)` from the extension proof,
/// as a product of residue factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseTwisting {
    /// 1 when `n1 + n2 < n0` (or no torsion), 2 when the sum wraps around.
    pub case: u8,
    pub factors: Vec<ResidueElement>,
    pub value: ResidueElement,
}

impl ExtensionRule {
    pub fn gamma(&self) -> &GroupElement {
        &self.gamma
    }

    pub fn x_gamma(&self) -> &RationalFunction {
        &self.x_gamma
    }

    pub fn n0(&self) -> Option<u32> {
        self.n0
    }

    /// `a x_γ`, the value on `γ`.
    pub fn step_element(&self) -> &RationalFunction {
        &self.step
    }

    /// `ψ = α + nγ` with `α ∈ Φ` and `0 ≤ n < n0` (any `n` without torsion).
    pub fn canonical_form(&self, psi: &GroupElement) -> Option<(GroupElement, BigInt)> {
        let coeffs = self.psi.decompose(psi)?;
        let r = coeffs.last().expect("γ is a generator").clone();
        match self.n0 {
            None => Some((psi - &self.gamma.scale(&r), r)),
            Some(n0) => {
                let (_, n) = r.div_mod_floor(&BigInt::from(n0));
                Some((psi - &self.gamma.scale(&n), n))
            }
        }
    }

    pub fn recombine(&self, alpha: &GroupElement, n: &BigInt) -> GroupElement {
        alpha + &self.gamma.scale(n)
    }

    fn residue_of(&self, f: &RationalFunction) -> Result<ResidueElement, TwistError> {
        Ok(self.base.valuation().residue(f)?)
    }

    fn base_twisting(&self, a: &GroupElement, b: &GroupElement) -> Result<ResidueElement, TwistError> {
        let ratio = &(&self.base.eval(a)? * &self.base.eval(b)?) / &self.base.eval(&(a + b))?;
        self.residue_of(&ratio)
    }

    /// `ε̄_Ψ(ψ1, ψ2)` through the case analysis of the construction rather than
    /// through the values of `ε_Ψ`.
    pub fn case_twisting(&self, p1: &GroupElement, p2: &GroupElement) -> Result<CaseTwisting, TwistError> {
        let outside = |p: &GroupElement| TwistError::OutsideDomain(p.clone());
        let (alpha, n1) = self.canonical_form(p1).ok_or_else(|| outside(p1))?;
        let (beta, n2) = self.canonical_form(p2).ok_or_else(|| outside(p2))?;
        let n = &n1 + &n2;
        let wraps = self.n0.map(|n0| n >= BigInt::from(n0));
        let mut factors = vec![self.base_twisting(&alpha, &beta)?];
        let case = match wraps {
            None | Some(false) => {
                let (i1, i2) = (n1.to_i64().ok_or_else(|| outside(p1))?, n2.to_i64().ok_or_else(|| outside(p2))?);
                let s = &self.step;
                let ratio = &(&s.powi(i1).map_err(crate::valuation::ValuationError::from)?
                    * &s.powi(i2).map_err(crate::valuation::ValuationError::from)?)
                    / &s.powi(i1 + i2).map_err(crate::valuation::ValuationError::from)?;
                factors.push(self.residue_of(&ratio)?);
                1
            }
            Some(true) => {
                let n0 = self.n0.expect("wrapping needs torsion");
                let wrap = self.gamma.times(n0 as i64);
                let x0 = self.base.eval(&wrap)?;
                factors.push(self.base_twisting(&(&alpha + &beta), &wrap)?);
                factors.push(self.residue_of(&(&self.step.pow(n0) / &x0))?);
                2
            }
        };
        let value = factors.iter().fold(ResidueElement::one(), |acc, f| &acc * f);
        Ok(CaseTwisting { case, factors, value })
    }
}

impl ChoiceRule for ExtensionRule {
    fn eval(&self, psi: &GroupElement) -> Option<RationalFunction> {
        let (alpha, n) = self.canonical_form(psi)?;
        let base = self.base.eval(&alpha).ok()?;
        if n.is_zero() {
            return Some(base);
        }
        Some(&base * &self.step.powi(n.to_i64()?).ok()?)
    }

    fn describe(&self) -> String {
        match self.n0 {
            Some(n0) => format!("extension by {} (n0 = {n0})", self.gamma),
            None => format!("extension by {} (no torsion)", self.gamma),
        }
    }
}

/// Record of one extension step.
#[derive(Debug, Clone)]
pub struct ExtensionStep {
    pub gamma: GroupElement,
    pub x_gamma: RationalFunction,
    /// Least `n ≥ 2` with `nγ ∈ Φ`, if any.
    pub n0: Option<u32>,
    /// `ε_Φ(n0 γ)`.
    pub x0: Option<RationalFunction>,
    /// The root `a` found for the class of `x0 / x_γ^{n0}`.
    pub root: Option<RationalFunction>,
    pub rule: Arc<ExtensionRule>,
}

/// Extends a certified-trivial `(Φ, ε_Φ)` to `Φ + <γ>`.
///
/// Fails when `γ ∈ Φ`, when `v(x_γ) ≠ γ`, or when no root of the class of
/// `x0 / x_γ^{n0}` is found; the root search is sound but incomplete, so
/// `RootNotFound` does not prove that none exists.
pub fn extend_choice(
    base: &SubgroupWithChoice,
    gamma: GroupElement,
    x_gamma: RationalFunction,
) -> Result<SubgroupWithChoice, ConstructionError> {
    if !base.certified_trivial {
        return Err(ConstructionError::NotCertified);
    }
    if base.subgroup.contains(&gamma) {
        return Err(ConstructionError::AlreadyContained(gamma));
    }
    let valuation = base.choice.valuation().clone();
    if x_gamma.is_zero() {
        return Err(ConstructionError::WrongWitnessValue { gamma, got: None });
    }
    let got = valuation.value(&x_gamma)?;
    if got != gamma {
        return Err(ConstructionError::WrongWitnessValue { gamma, got: Some(got) });
    }

    let n0 = match base.subgroup.order_modulo(&gamma) {
        None => None,
        Some(n) => Some(n.to_u32().ok_or_else(|| ConstructionError::OrderTooLarge(gamma.clone()))?),
    };
    let (x0, root, step) = match n0 {
        None => (None, None, x_gamma.clone()),
        Some(n0) => {
            let x0 = base.choice.eval(&gamma.times(n0 as i64))?;
            let class = valuation.residue(&(&x0 / &x_gamma.pow(n0)))?;
            let a = valuation.residue_nth_root(&class, n0).ok_or_else(|| ConstructionError::RootNotFound {
                gamma: gamma.clone(),
                n0,
                class: class.representative().clone(),
            })?;
            let step = &a * &x_gamma;
            (Some(x0), Some(a), step)
        }
    };

    let mut generators = base.subgroup.generators().to_vec();
    generators.push(gamma.clone());
    let psi = FgSubgroup::new(valuation.dim(), generators.clone())?;
    let rule = Arc::new(ExtensionRule {
        base: base.choice.clone(),
        psi: psi.clone(),
        gamma: gamma.clone(),
        x_gamma: x_gamma.clone(),
        n0,
        step,
    });
    let domain = Domain { generators, kind: DomainKind::Group };
    Ok(SubgroupWithChoice {
        subgroup: psi,
        choice: ChoiceFunction::from_rule(valuation, domain, rule.clone(), true),
        certified_trivial: true,
        step: Some(ExtensionStep { gamma, x_gamma, n0, x0, root, rule }),
    })
}

/// Applies [`extend_choice`] along `steps`, returning every intermediate pair
/// after the base.
pub fn extend_chain(
    base: &SubgroupWithChoice,
    steps: &[(GroupElement, RationalFunction)],
) -> Result<Vec<SubgroupWithChoice>, ConstructionError> {
    let mut out: Vec<SubgroupWithChoice> = Vec::with_capacity(steps.len());
    for (gamma, x) in steps {
        let next = extend_choice(out.last().unwrap_or(base), gamma.clone(), x.clone())?;
        out.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::VarNames;
    use crate::twist::TwistedRing;
    use crate::valuation::MonomialValuation;

    fn q(n: i64, d: i64) -> GroupElement {
        GroupElement::scalar(n, d)
    }

    #[test]
    fn square_root_step() {
        // v(y) = 1/2, ε(n) = y^{2n}
        let v = Arc::new(MonomialValuation::new(vec![q(1, 2)]).unwrap());
        let n = VarNames::named(["y"]);
        let y = n.parse_rf("y").unwrap();
        let base = SubgroupWithChoice::cyclic(v, q(1, 1), y.pow(2)).unwrap();
        let ext = extend_choice(&base, q(1, 2), y.clone()).unwrap();
        let step = ext.step.as_ref().unwrap();
        assert_eq!(step.n0, Some(2));
        assert_eq!(step.x0.as_ref().unwrap(), &y.pow(2));
        assert_eq!(step.root.as_ref().unwrap(), &RationalFunction::one());
        for k in -5..=5 {
            assert_eq!(ext.choice.eval(&q(k, 2)).unwrap(), y.powi(k).unwrap());
        }
        let ring = TwistedRing::new(ext.choice.clone());
        assert!(ring.is_trivial(6).unwrap().holds);
    }

    #[test]
    fn root_not_found() {
        let v = Arc::new(MonomialValuation::new(vec![q(1, 1), q(1, 2)]).unwrap());
        let n = VarNames::named(["x", "y"]);
        let base = SubgroupWithChoice::cyclic(v, q(1, 1), n.parse_rf("x").unwrap()).unwrap();
        let err = extend_choice(&base, q(1, 2), n.parse_rf("y").unwrap()).unwrap_err();
        assert!(matches!(err, ConstructionError::RootNotFound { n0: 2, .. }));
    }

    #[test]
    fn disjoint_step() {
        let v = Arc::new(
            MonomialValuation::new(vec![GroupElement::from_ints(&[1, 0]), GroupElement::from_ints(&[0, 1])]).unwrap(),
        );
        let n = VarNames::named(["x", "y"]);
        let base = SubgroupWithChoice::cyclic(v, GroupElement::from_ints(&[1, 0]), n.parse_rf("x").unwrap()).unwrap();
        let ext = extend_choice(&base, GroupElement::from_ints(&[0, 1]), n.parse_rf("y").unwrap()).unwrap();
        assert_eq!(ext.step.as_ref().unwrap().n0, None);
        for (a, b) in [(2, 3), (-1, 4), (0, -2)] {
            let want = &n.parse_rf("x").unwrap().powi(a).unwrap() * &n.parse_rf("y").unwrap().powi(b).unwrap();
            assert_eq!(ext.choice.eval(&GroupElement::from_ints(&[a, b])).unwrap(), want);
        }
    }

    #[test]
    fn rejections() {
        let v = Arc::new(MonomialValuation::new(vec![q(1, 2)]).unwrap());
        let y = VarNames::named(["y"]).parse_rf("y").unwrap();
        let base = SubgroupWithChoice::cyclic(v, q(1, 1), y.pow(2)).unwrap();
        assert_eq!(
            extend_choice(&base, q(2, 1), y.pow(4)).unwrap_err(),
            ConstructionError::AlreadyContained(q(2, 1))
        );
        assert!(matches!(
            extend_choice(&base, q(1, 2), y.pow(2)).unwrap_err(),
            ConstructionError::WrongWitnessValue { .. }
        ));
    }

    #[test]
    fn chain_with_nontrivial_roots() {
        // v(y) = 1/2, v(z) = 1/6, ε(n) = (64 z^6)^n
        let v = Arc::new(MonomialValuation::new(vec![q(1, 2), q(1, 6)]).unwrap());
        let n = VarNames::named(["y", "z"]);
        let base = SubgroupWithChoice::cyclic(v, q(1, 1), n.parse_rf("64*z^6").unwrap()).unwrap();
        let chain = extend_chain(
            &base,
            &[(q(1, 2), n.parse_rf("y").unwrap()), (q(1, 6), n.parse_rf("z").unwrap())],
        )
        .unwrap();
        assert_eq!(chain[0].step.as_ref().unwrap().root.as_ref().unwrap(), &n.parse_rf("8*z^3/y").unwrap());
        assert_eq!(chain[0].choice.eval(&q(1, 2)).unwrap(), n.parse_rf("8*z^3").unwrap());
        assert_eq!(chain[1].step.as_ref().unwrap().n0, Some(3));
        assert_eq!(chain[1].choice.eval(&q(1, 6)).unwrap(), n.parse_rf("2*z").unwrap());
        for k in -12..=12 {
            assert_eq!(chain[1].choice.eval(&q(k, 2)).unwrap(), chain[0].choice.eval(&q(k, 2)).unwrap());
        }
        let rule = &chain[1].step.as_ref().unwrap().rule;
        let ring = TwistedRing::new(chain[1].choice.clone());
        for a in -7..=7 {
            for b in -7..=7 {
                let (p1, p2) = (q(a, 6), q(b, 6));
                let c = rule.case_twisting(&p1, &p2).unwrap();
                assert!(c.value.is_one(), "{p1} {p2}");
                assert!(ring.twisting(&p1, &p2).unwrap().is_one());
            }
        }
    }
}
