//! The graded algebra `gr_v(R)` and the map `ψ` into `Kv[t^{v(R)}]_ε`.
//!
//! A homogeneous element `in_v(x)` is stored as its degree together with the
//! initial fraction `ip(num x) / ip(den x)`. Two such fractions of the same
//! degree have the same initial form exactly when they are equal as rational
//! functions, so equality needs no further reduction.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num::{BigRational, One};
use thiserror::Error;

use crate::mpoly::{Polynomial, RationalFunction, VarNames};
use crate::ordgroup::GroupElement;
use crate::twist::{TwistError, TwistedRing, TwistedRingElement};
use crate::valuation::{MonomialValuation, ResidueElement, ValuationError};

/// Total degree searched for a monomial of a given value in `ψ⁻¹`.
const MONOMIAL_SEARCH_DEGREE: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error("initial form of zero is undefined")]
    ZeroInput,
    #[error("element is not in the polynomial subring")]
    NotInSubring,
    #[error("degrees differ: {0} vs {1}")]
    DegreeMismatch(GroupElement, GroupElement),
    #[error("no residue lifting available for this setup")]
    NoLifting,
    #[error("residue class {0} cannot be lifted into R")]
    NotLiftable(String),
    #[error("no monomial of value {0} found in R")]
    NoElementOfValue(GroupElement),
    #[error("expected a single nonzero term")]
    NotATerm,
    #[error(transparent)]
    Valuation(#[from] ValuationError),
    #[error(transparent)]
    Twist(#[from] Box<TwistError>),
}

impl From<TwistError> for GradedError {
    fn from(e: TwistError) -> Self {
        GradedError::Twist(Box::new(e))
    }
}

/// The ring `R` whose graded algebra is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subring {
    /// `Q[x_1, ..., x_m]`, graded by the semigroup `v(R)`.
    Polynomial,
    /// `K` itself, graded by the whole value group.
    Field,
}

/// `in_v(x)`: a degree and an initial-fraction representative.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomogeneousElement {
    degree: GroupElement,
    rep: RationalFunction,
}

impl HomogeneousElement {
    pub fn degree(&self) -> &GroupElement {
        &self.degree
    }

    pub fn rep(&self) -> &RationalFunction {
        &self.rep
    }
}

/// A finite sum of homogeneous elements of distinct degrees.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GradedElement {
    components: BTreeMap<GroupElement, HomogeneousElement>,
}

impl GradedElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = &HomogeneousElement> {
        self.components.values()
    }

    pub fn component(&self, degree: &GroupElement) -> Option<&HomogeneousElement> {
        self.components.get(degree)
    }
}

impl From<HomogeneousElement> for GradedElement {
    fn from(h: HomogeneousElement) -> Self {
        let mut components = BTreeMap::new();
        components.insert(h.degree.clone(), h);
        Self { components }
    }
}

/// Produces, for a residue class `a`, some `z' ∈ R` with residue `a`.
///
/// This stands in for the hypothesis `Kv = R/m`; a setup without a lifter
/// cannot check surjectivity of `ψ`.
pub trait ResidueLifter: Send + Sync {
    fn lift(&self, class: &ResidueElement) -> Option<RationalFunction>;
}

/// Lifts rational classes to constants. Complete when `Kv = Q`, e.g. for
/// rationally independent weights.
#[derive(Debug, Clone, Copy, Default)]
pub struct ConstantLifter;

impl ResidueLifter for ConstantLifter {
    fn lift(&self, class: &ResidueElement) -> Option<RationalFunction> {
        class.as_rational().map(RationalFunction::constant)
    }
}

/// Lifts a class to its own representative, which lies in `R` when `R = K`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FieldLifter;

impl ResidueLifter for FieldLifter {
    fn lift(&self, class: &ResidueElement) -> Option<RationalFunction> {
        Some(class.representative().clone())
    }
}

#[derive(Debug, Clone)]
pub struct GradedAlgebra {
    valuation: Arc<MonomialValuation>,
    subring: Subring,
}

impl GradedAlgebra {
    pub fn new(valuation: Arc<MonomialValuation>, subring: Subring) -> Self {
        Self { valuation, subring }
    }

    pub fn polynomial(valuation: Arc<MonomialValuation>) -> Self {
        Self::new(valuation, Subring::Polynomial)
    }

    pub fn field(valuation: Arc<MonomialValuation>) -> Self {
        Self::new(valuation, Subring::Field)
    }

    pub fn valuation(&self) -> &Arc<MonomialValuation> {
        &self.valuation
    }

    pub fn subring(&self) -> Subring {
        self.subring
    }

    pub fn contains(&self, x: &RationalFunction) -> bool {
        self.subring == Subring::Field || x.is_polynomial()
    }

    pub fn in_v(&self, x: &RationalFunction) -> Result<HomogeneousElement, GradedError> {
        if x.is_zero() {
            return Err(GradedError::ZeroInput);
        }
        if !self.contains(x) {
            return Err(GradedError::NotInSubring);
        }
        Ok(HomogeneousElement {
            degree: self.valuation.value(x)?,
            rep: self.valuation.initial_fraction(x)?,
        })
    }

    pub fn h_mul(&self, a: &HomogeneousElement, b: &HomogeneousElement) -> HomogeneousElement {
        HomogeneousElement { degree: &a.degree + &b.degree, rep: &a.rep * &b.rep }
    }

    /// Sum of two same-degree elements; `None` is the zero of that component.
    pub fn h_add(
        &self,
        a: &HomogeneousElement,
        b: &HomogeneousElement,
    ) -> Result<Option<HomogeneousElement>, GradedError> {
        if a.degree != b.degree {
            return Err(GradedError::DegreeMismatch(a.degree.clone(), b.degree.clone()));
        }
        let sum = &a.rep + &b.rep;
        if sum.is_zero() || self.valuation.value(&sum)? > a.degree {
            return Ok(None);
        }
        self.in_v(&sum).map(Some)
    }

    pub fn g_add(&self, a: &GradedElement, b: &GradedElement) -> Result<GradedElement, GradedError> {
        let mut out = a.clone();
        for h in b.components() {
            self.accumulate(&mut out, h.clone())?;
        }
        Ok(out)
    }

    pub fn g_mul(&self, a: &GradedElement, b: &GradedElement) -> Result<GradedElement, GradedError> {
        let mut out = GradedElement::zero();
        for x in a.components() {
            for y in b.components() {
                self.accumulate(&mut out, self.h_mul(x, y))?;
            }
        }
        Ok(out)
    }

    fn accumulate(&self, acc: &mut GradedElement, h: HomogeneousElement) -> Result<(), GradedError> {
        match acc.components.remove(&h.degree) {
            None => {
                acc.components.insert(h.degree.clone(), h);
            }
            Some(prev) => {
                if let Some(sum) = self.h_add(&prev, &h)? {
                    acc.components.insert(sum.degree.clone(), sum);
                }
            }
        }
        Ok(())
    }

    /// `ψ(in_v x) = residue(x / ε(v(x))) · t^{v(x)}`.
    pub fn psi(&self, ring: &TwistedRing, h: &HomogeneousElement) -> Result<TwistedRingElement, GradedError> {
        let d = ring.choice().eval(&h.degree)?;
        let coeff = self.valuation.residue(&(&h.rep / &d))?;
        Ok(TwistedRingElement::term(coeff, h.degree.clone()))
    }

    pub fn psi_graded(&self, ring: &TwistedRing, g: &GradedElement) -> Result<TwistedRingElement, GradedError> {
        let mut out = TwistedRingElement::zero();
        for h in g.components() {
            out = &out + &self.psi(ring, h)?;
        }
        Ok(out)
    }

    /// Preimage of `a · t^γ`: `in_v(r z')` for some `r ∈ R` of value `γ` and a
    /// lift `z'` of `a · residue(ε(γ) / r)`. Here `r = ε(γ)` when that lies in
    /// `R`, otherwise a monomial of value `γ`.
    pub fn psi_inverse_term(
        &self,
        ring: &TwistedRing,
        lifter: &dyn ResidueLifter,
        a: &ResidueElement,
        gamma: &GroupElement,
    ) -> Result<HomogeneousElement, GradedError> {
        if a.is_zero() {
            return Err(GradedError::NotATerm);
        }
        let e = ring.choice().eval(gamma)?;
        let (r, b) = if self.contains(&e) {
            (e, a.clone())
        } else {
            let m = self
                .valuation
                .monomial_of_value(gamma, MONOMIAL_SEARCH_DEGREE)
                .ok_or_else(|| GradedError::NoElementOfValue(gamma.clone()))?;
            let r = RationalFunction::from(Polynomial::term(BigRational::one(), m));
            let b = a * &self.valuation.residue(&(&e / &r))?;
            (r, b)
        };
        let lift = lifter.lift(&b).ok_or_else(|| GradedError::NotLiftable(b.to_string()))?;
        if !self.contains(&lift) {
            return Err(GradedError::NotLiftable(b.to_string()));
        }
        self.in_v(&(&r * &lift))
    }

    pub fn psi_inverse(
        &self,
        ring: &TwistedRing,
        lifter: &dyn ResidueLifter,
        term: &TwistedRingElement,
    ) -> Result<HomogeneousElement, GradedError> {
        let mut terms = term.terms();
        match (terms.next(), terms.next()) {
            (Some((g, a)), None) => self.psi_inverse_term(ring, lifter, a, g),
            _ => Err(GradedError::NotATerm),
        }
    }

    pub fn psi_inverse_graded(
        &self,
        ring: &TwistedRing,
        lifter: &dyn ResidueLifter,
        elem: &TwistedRingElement,
    ) -> Result<GradedElement, GradedError> {
        let mut out = GradedElement::zero();
        for (g, a) in elem.terms() {
            let h = self.psi_inverse_term(ring, lifter, a, g)?;
            self.accumulate(&mut out, h)?;
        }
        Ok(out)
    }

    /// One `deg=<γ> rep=<fraction>` line per component, in increasing degree.
    pub fn report(&self, g: &GradedElement, names: &VarNames) -> String {
        let mut out = String::new();
        for h in g.components() {
            writeln!(out, "deg={} rep={}", h.degree, names.rf(&h.rep)).unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twist::{ChoiceFunction, Domain, DomainKind};

    fn rank_one(weights: &[(i64, i64)], names: &[&str]) -> (Arc<MonomialValuation>, VarNames) {
        let v = MonomialValuation::new(weights.iter().map(|&(n, d)| GroupElement::scalar(n, d)).collect()).unwrap();
        (Arc::new(v), VarNames::named(names.iter().copied()))
    }

    #[test]
    fn in_v_examples() {
        let (v, n) = rank_one(&[(1, 2)], &["x2"]);
        let gr = GraderHelper::new(v, &n);
        let h = gr.in_v("x2 + x2^2");
        assert_eq!(h.degree(), &GroupElement::scalar(1, 2));
        assert_eq!(h.rep(), &n.parse_rf("x2").unwrap());
        let c = gr.in_v("7");
        assert!(c.degree().is_zero());

        let v = Arc::new(
            MonomialValuation::new(vec![GroupElement::from_ints(&[1, 0]), GroupElement::from_ints(&[0, 1])]).unwrap(),
        );
        let n = VarNames::named(["x", "y"]);
        let gr = GradedAlgebra::polynomial(v);
        let h = gr.in_v(&n.parse_rf("x*y").unwrap()).unwrap();
        assert_eq!(h.degree(), &GroupElement::from_ints(&[1, 1]));
        assert_eq!(gr.in_v(&RationalFunction::zero()), Err(GradedError::ZeroInput));
        assert_eq!(gr.in_v(&n.parse_rf("1/x").unwrap()), Err(GradedError::NotInSubring));
    }

    #[test]
    fn homogeneous_arithmetic() {
        let (v, n) = rank_one(&[(1, 2), (1, 3)], &["x2", "x3"]);
        let gr = GraderHelper::new(v, &n);
        let a = gr.in_v("x2");
        let b = gr.in_v("-x2");
        assert_eq!(gr.alg.h_add(&a, &b).unwrap(), None);
        let c = gr.in_v("x2^2");
        let d = gr.in_v("x3^3");
        let s = gr.alg.h_add(&c, &d).unwrap().unwrap();
        assert_eq!(s.degree(), &GroupElement::scalar(1, 1));
        assert_eq!(s.rep(), &n.parse_rf("x2^2 + x3^3").unwrap());
        assert!(matches!(gr.alg.h_add(&a, &c), Err(GradedError::DegreeMismatch(..))));
        assert_eq!(gr.alg.h_mul(&a, &gr.in_v("x3")), gr.in_v("x2*x3"));
    }

    #[test]
    fn graded_sums_and_report() {
        let (v, n) = rank_one(&[(1, 2), (1, 3)], &["x2", "x3"]);
        let gr = GraderHelper::new(v, &n);
        let a = GradedElement::from(gr.in_v("x2"));
        let b = GradedElement::from(gr.in_v("x3"));
        let s = gr.alg.g_add(&a, &b).unwrap();
        assert_eq!(gr.alg.report(&s, &n), "deg=1/3 rep=x3\ndeg=1/2 rep=x2\n");
        let sq = gr.alg.g_mul(&s, &s).unwrap();
        assert_eq!(sq.components().count(), 3);
        let z = gr.alg.g_add(&a, &GradedElement::from(gr.in_v("-x2"))).unwrap();
        assert!(z.is_zero());
    }

    fn ring_on_x(entries: &[(i64, &str)]) -> (GradedAlgebra, TwistedRing, VarNames) {
        let (v, n) = rank_one(&[(1, 1)], &["x"]);
        let table = entries
            .iter()
            .map(|&(k, s)| (GroupElement::scalar(k, 1), n.parse_rf(s).unwrap()))
            .collect();
        let domain = Domain { generators: vec![GroupElement::scalar(1, 1)], kind: DomainKind::Semigroup };
        let eps = ChoiceFunction::from_table(v.clone(), domain, table).unwrap();
        (GradedAlgebra::polynomial(v), TwistedRing::new(eps), n)
    }

    #[test]
    fn psi_examples() {
        let (gr, ring, n) = ring_on_x(&[(1, "2*x"), (2, "x^2")]);
        let f = |s: &str| gr.in_v(&n.parse_rf(s).unwrap()).unwrap();
        let half = ResidueElement::rational(num::BigRational::new(1.into(), 2.into()));
        assert_eq!(
            gr.psi(&ring, &f("x")).unwrap(),
            TwistedRingElement::term(half, GroupElement::scalar(1, 1))
        );
        assert_eq!(gr.psi(&ring, &f("2*x")).unwrap(), TwistedRingElement::monomial(GroupElement::scalar(1, 1)));
        assert_eq!(gr.psi(&ring, &f("x^2")).unwrap(), TwistedRingElement::monomial(GroupElement::scalar(2, 1)));
        assert!(gr.psi(&ring, &f("x^3")).is_err());
    }

    #[test]
    fn psi_inverse_examples() {
        let (gr, ring, n) = ring_on_x(&[(1, "x")]);
        let g1 = GroupElement::scalar(1, 1);
        let h = gr.psi_inverse_term(&ring, &ConstantLifter, &ResidueElement::one(), &g1).unwrap();
        assert_eq!(h, gr.in_v(&n.parse_rf("x").unwrap()).unwrap());
        let h = gr.psi_inverse_term(&ring, &ConstantLifter, &ResidueElement::from_int(3), &g1).unwrap();
        assert_eq!(h, gr.in_v(&n.parse_rf("3*x").unwrap()).unwrap());
        assert_eq!(gr.psi(&ring, &h).unwrap(), TwistedRingElement::term(ResidueElement::from_int(3), g1));
    }

    #[test]
    fn psi_inverse_with_non_polynomial_values() {
        // ε(1) = 2x/(1+x) is not in Q[x]; the preimage goes through the monomial x
        let (gr, ring, n) = ring_on_x(&[(1, "2*x/(1+x)"), (2, "x^2")]);
        let g1 = GroupElement::scalar(1, 1);
        let a = ResidueElement::from_int(5);
        let h = gr.psi_inverse_term(&ring, &ConstantLifter, &a, &g1).unwrap();
        assert_eq!(h, gr.in_v(&n.parse_rf("10*x").unwrap()).unwrap());
        assert_eq!(gr.psi(&ring, &h).unwrap(), TwistedRingElement::term(a, g1));

        let (v, _) = rank_one(&[(2, 1)], &["x"]);
        let domain = Domain { generators: vec![GroupElement::scalar(1, 1)], kind: DomainKind::Group };
        let odd = ChoiceFunction::from_table(v.clone(), domain, BTreeMap::new()).unwrap();
        let gr = GradedAlgebra::polynomial(v);
        let ring = TwistedRing::new(odd);
        assert!(matches!(
            gr.psi_inverse_term(&ring, &ConstantLifter, &ResidueElement::one(), &GroupElement::scalar(1, 1)),
            Err(GradedError::Twist(_))
        ));
    }

    #[test]
    fn constant_lifter_rejects_transcendental_classes() {
        let (v, n) = rank_one(&[(1, 2), (1, 3)], &["x2", "x3"]);
        let r = v.residue(&n.parse_rf("x2^2/x3^3").unwrap()).unwrap();
        assert_eq!(ConstantLifter.lift(&r), None);
        assert!(FieldLifter.lift(&r).is_some());
    }

    struct GraderHelper<'a> {
        alg: GradedAlgebra,
        names: &'a VarNames,
    }

    impl<'a> GraderHelper<'a> {
        fn new(v: Arc<MonomialValuation>, names: &'a VarNames) -> Self {
            Self { alg: GradedAlgebra::polynomial(v), names }
        }

        fn in_v(&self, s: &str) -> HomogeneousElement {
            self.alg.in_v(&self.names.parse_rf(s).unwrap()).unwrap()
        }
    }
}
