use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::RwLock;

use crate::graded::GradedAlgebra;
use crate::mpoly::VarNames;
use crate::ordgroup::GroupElement;
use crate::valuation::ResidueElement;

use super::{ChoiceFunction, TwistError};

/// A finite formal sum `Σ a_i t^{γ_i}` with nonzero coefficients in `Kv`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TwistedRingElement {
    terms: BTreeMap<GroupElement, ResidueElement>,
}

impl TwistedRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `a · t^γ`; zero when `a` is.
    pub fn term(a: ResidueElement, gamma: GroupElement) -> Self {
        let mut out = Self::zero();
        out.add_term(a, gamma);
        out
    }

    pub fn monomial(gamma: GroupElement) -> Self {
        Self::term(ResidueElement::one(), gamma)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &ResidueElement)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.terms.keys()
    }

    pub fn coefficient(&self, gamma: &GroupElement) -> ResidueElement {
        self.terms.get(gamma).cloned().unwrap_or_else(ResidueElement::zero)
    }

    pub fn add_term(&mut self, a: ResidueElement, gamma: GroupElement) {
        if a.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&gamma) {
            Some(b) => &a + &b,
            None => a,
        };
        if !sum.is_zero() {
            self.terms.insert(gamma, sum);
        }
    }

    pub fn scale(&self, c: &ResidueElement) -> Self {
        let mut out = Self::zero();
        for (g, a) in &self.terms {
            out.add_term(a * c, g.clone());
        }
        out
    }

    pub fn display<'a>(&'a self, names: &'a VarNames) -> TwistedDisplay<'a> {
        TwistedDisplay { elem: self, names }
    }
}

impl Add for &TwistedRingElement {
    type Output = TwistedRingElement;

    fn add(self, rhs: &TwistedRingElement) -> TwistedRingElement {
        let mut out = self.clone();
        for (g, a) in &rhs.terms {
            out.add_term(a.clone(), g.clone());
        }
        out
    }
}

impl Neg for &TwistedRingElement {
    type Output = TwistedRingElement;

    fn neg(self) -> TwistedRingElement {
        TwistedRingElement { terms: self.terms.iter().map(|(g, a)| (g.clone(), -a)).collect() }
    }
}

impl Sub for &TwistedRingElement {
    type Output = TwistedRingElement;

    fn sub(self, rhs: &TwistedRingElement) -> TwistedRingElement {
        self + &(-rhs)
    }
}

pub struct TwistedDisplay<'a> {
    elem: &'a TwistedRingElement,
    names: &'a VarNames,
}

impl fmt::Display for TwistedDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elem.is_zero() {
            return write!(f, "0");
        }
        for (i, (g, a)) in self.elem.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{}]*t^{g}", self.names.rf(a.representative()))?;
        }
        Ok(())
    }
}

impl fmt::Debug for TwistedRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(&VarNames::indexed()))
    }
}

/// Outcome of a bounded check over pairs of sampled domain elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairVerdict {
    pub holds: bool,
    pub pairs_checked: usize,
    pub bound: u32,
    pub counterexample: Option<(GroupElement, GroupElement)>,
}

/// `Kv[t^{v(R)}]_ε`: formal sums multiplied by `t^γ × t^γ' = ε̄(γ,γ') t^{γ+γ'}`.
///
/// Twisting values are memoized; the cache is safe for concurrent readers.
pub struct TwistedRing {
    choice: ChoiceFunction,
    cache: RwLock<HashMap<(GroupElement, GroupElement), ResidueElement>>,
}

impl TwistedRing {
    pub fn new(choice: ChoiceFunction) -> Self {
        Self { choice, cache: RwLock::new(HashMap::new()) }
    }

    pub fn choice(&self) -> &ChoiceFunction {
        &self.choice
    }

    /// `ε̄(γ, γ') = residue of ε(γ) ε(γ') / ε(γ + γ')`.
    pub fn twisting(&self, a: &GroupElement, b: &GroupElement) -> Result<ResidueElement, TwistError> {
        let key = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        if let Some(hit) = self.cache.read().expect("twisting cache poisoned").get(&key) {
            return Ok(hit.clone());
        }
        let value = self.twisting_uncached(a, b)?;
        self.cache
            .write()
            .expect("twisting cache poisoned")
            .entry(key)
            .or_insert_with(|| value.clone());
        Ok(value)
    }

    pub fn twisting_uncached(&self, a: &GroupElement, b: &GroupElement) -> Result<ResidueElement, TwistError> {
        let ea = self.choice.eval(a)?;
        let eb = self.choice.eval(b)?;
        let eab = self.choice.eval(&(a + b))?;
        let ratio = &(&ea * &eb) / &eab;
        Ok(self.choice.valuation().residue(&ratio)?)
    }

    pub fn cached_pairs(&self) -> usize {
        self.cache.read().expect("twisting cache poisoned").len()
    }

    pub fn one(&self) -> TwistedRingElement {
        TwistedRingElement::monomial(self.choice.valuation().zero_value())
    }

    pub fn mul(&self, a: &TwistedRingElement, b: &TwistedRingElement) -> Result<TwistedRingElement, TwistError> {
        let mut out = TwistedRingElement::zero();
        for (ga, ca) in a.terms() {
            for (gb, cb) in b.terms() {
                let tw = self.twisting(ga, gb)?;
                out.add_term(&(ca * cb) * &tw, ga + gb);
            }
        }
        Ok(out)
    }

    /// Pairs `(a, b)`, `a ≤ b`, of sampled domain elements whose heights sum
    /// to at most `bound` and whose sum is in the domain.
    pub fn sample_pairs(&self, bound: u32) -> Vec<(GroupElement, GroupElement)> {
        let sample = self.choice.sample_domain(bound);
        let mut pairs = Vec::new();
        for (i, (a, ha)) in sample.iter().enumerate() {
            for (b, hb) in &sample[i..] {
                if ha + hb <= bound && self.choice.contains(&(a + b)) {
                    pairs.push((a.clone(), b.clone()));
                }
            }
        }
        pairs
    }

    /// Checks `ε̄ = 1` on all sampled pairs up to `bound`.
    pub fn is_trivial(&self, bound: u32) -> Result<PairVerdict, TwistError> {
        let pairs = self.sample_pairs(bound);
        let mut counterexample = None;
        for (a, b) in &pairs {
            if !self.twisting(a, b)?.is_one() {
                counterexample = Some((a.clone(), b.clone()));
                break;
            }
        }
        Ok(PairVerdict {
            holds: counterexample.is_none(),
            pairs_checked: pairs.len(),
            bound,
            counterexample,
        })
    }

    /// Checks `in_v(ε(a + b)) = in_v(ε(a)) · in_v(ε(b))` on the same pairs as
    /// [`Self::is_trivial`], computing in the graded algebra of `K`.
    pub fn semigroup_hom_check(&self, bound: u32) -> Result<PairVerdict, TwistError> {
        let gr = GradedAlgebra::field(self.choice.valuation().clone());
        let pairs = self.sample_pairs(bound);
        let mut counterexample = None;
        for (a, b) in &pairs {
            let ia = gr.in_v(&self.choice.eval(a)?)?;
            let ib = gr.in_v(&self.choice.eval(b)?)?;
            let iab = gr.in_v(&self.choice.eval(&(a + b))?)?;
            if gr.h_mul(&ia, &ib) != iab {
                counterexample = Some((a.clone(), b.clone()));
                break;
            }
        }
        Ok(PairVerdict {
            holds: counterexample.is_none(),
            pairs_checked: pairs.len(),
            bound,
            counterexample,
        })
    }
}
