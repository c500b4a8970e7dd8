//! Monomial valuations on `Q(x_1, ..., x_m)`.
//!
//! A valuation is fixed by the value of each variable; a polynomial takes the
//! minimum value over its terms and `v(P/Q) = v(P) - v(Q)`. Residue classes
//! of value-zero elements are kept as fractions of initial polynomials, where
//! class equality reduces to an exact polynomial identity.

use std::fmt;
use std::ops::{Add, Mul, Neg};

use num::BigRational;
use thiserror::Error;

use crate::mpoly::{rf_nth_root, Monomial, PolyError, Polynomial, RationalFunction};
use crate::ordgroup::GroupElement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValuationError {
    #[error("valuation needs at least one variable weight")]
    NoWeights,
    #[error("weights have inconsistent dimensions")]
    MixedDimensions,
    #[error("variable x{0} has no weight")]
    UnknownVariable(usize),
    #[error("valuation of zero is undefined")]
    ZeroInput,
    #[error("residue needs value zero, got {0}")]
    NonzeroValue(GroupElement),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `v(x_i) = weights[i]`, extended to monomials additively and to polynomials
/// by taking the minimum over terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialValuation {
    weights: Vec<GroupElement>,
}

impl MonomialValuation {
    pub fn new(weights: Vec<GroupElement>) -> Result<Self, ValuationError> {
        let Some(first) = weights.first() else {
            return Err(ValuationError::NoWeights);
        };
        if weights.iter().any(|w| w.dim() != first.dim()) {
            return Err(ValuationError::MixedDimensions);
        }
        Ok(Self { weights })
    }

    pub fn dim(&self) -> usize {
        self.weights[0].dim()
    }

    pub fn num_vars(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[GroupElement] {
        &self.weights
    }

    pub fn zero_value(&self) -> GroupElement {
        GroupElement::zero(self.dim())
    }

    pub fn monomial_value(&self, m: &Monomial) -> Result<GroupElement, ValuationError> {
        let mut acc = self.zero_value();
        for &(v, e) in m.pairs() {
            let w = self.weights.get(v).ok_or(ValuationError::UnknownVariable(v))?;
            acc = &acc + &w.times(e as i64);
        }
        Ok(acc)
    }

    pub fn poly_value(&self, p: &Polynomial) -> Result<GroupElement, ValuationError> {
        let mut best: Option<GroupElement> = None;
        for (m, _) in p.terms() {
            let v = self.monomial_value(m)?;
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        }
        best.ok_or(ValuationError::ZeroInput)
    }

    pub fn value(&self, f: &RationalFunction) -> Result<GroupElement, ValuationError> {
        Ok(&self.poly_value(f.num())? - &self.poly_value(f.den())?)
    }

    /// A monomial of value `gamma` with total degree at most `max_degree`,
    /// smallest degree first.
    pub fn monomial_of_value(&self, gamma: &GroupElement, max_degree: u32) -> Option<Monomial> {
        let m = self.num_vars();
        let mut layer: Vec<Vec<u32>> = vec![vec![0; m]];
        for _ in 0..=max_degree {
            let mut next = Vec::new();
            for e in &layer {
                let mono = Monomial::from_dense(e);
                if self.monomial_value(&mono).ok()? == *gamma {
                    return Some(mono);
                }
                // extend only from the last nonzero variable so each vector appears once
                let start = e.iter().rposition(|&x| x > 0).unwrap_or(0);
                for i in start..m {
                    let mut f = e.clone();
                    f[i] += 1;
                    next.push(f);
                }
            }
            layer = next;
        }
        None
    }

    /// The terms of `p` of minimal value.
    pub fn initial_part(&self, p: &Polynomial) -> Result<Polynomial, ValuationError> {
        let min = self.poly_value(p)?;
        let mut out = Polynomial::zero();
        for (m, c) in p.terms() {
            if self.monomial_value(m)? == min {
                out.add_term(c.clone(), m.clone());
            }
        }
        Ok(out)
    }

    pub fn is_initial(&self, p: &Polynomial) -> Result<bool, ValuationError> {
        Ok(self.initial_part(p)? == *p)
    }

    /// Whether every term of `p` has the same value.
    pub fn is_homogeneous(&self, p: &Polynomial) -> bool {
        self.is_initial(p).unwrap_or(false)
    }

    /// `ip(num) / ip(den)`: same value and same initial form as `f`.
    pub fn initial_fraction(&self, f: &RationalFunction) -> Result<RationalFunction, ValuationError> {
        let num = self.initial_part(f.num())?;
        let den = self.initial_part(f.den())?;
        Ok(RationalFunction::new(num, den)?)
    }

    /// `in_v(x) = in_v(y)`, i.e. `v(x) = v(y)` and `v(x - y) > v(x)`.
    pub fn in_eq(&self, x: &RationalFunction, y: &RationalFunction) -> Result<bool, ValuationError> {
        let vx = self.value(x)?;
        let vy = self.value(y)?;
        if vx != vy {
            return Ok(false);
        }
        let diff = x - y;
        if diff.is_zero() {
            return Ok(true);
        }
        Ok(self.value(&diff)? > vx)
    }

    pub fn residue(&self, f: &RationalFunction) -> Result<ResidueElement, ValuationError> {
        let v = self.value(f)?;
        if !v.is_zero() {
            return Err(ValuationError::NonzeroValue(v));
        }
        Ok(ResidueElement(self.initial_fraction(f)?))
    }

    /// Residue of `f`, or the zero class when `f` is zero or has positive value.
    pub fn residue_or_zero(&self, f: &RationalFunction) -> Result<ResidueElement, ValuationError> {
        if f.is_zero() {
            return Ok(ResidueElement::zero());
        }
        let v = self.value(f)?;
        if v > self.zero_value() {
            return Ok(ResidueElement::zero());
        }
        self.residue(f)
    }

    /// Some `a ∈ K` with `residue(a^n)` equal to `class`.
    ///
    /// Sound but incomplete: only roots visible to [`rf_nth_root`] on the
    /// stored representative are found.
    pub fn residue_nth_root(&self, class: &ResidueElement, n: u32) -> Option<RationalFunction> {
        let a = rf_nth_root(&class.0, n)?;
        let check = self.residue(&a.pow(n)).ok()?;
        (check == *class).then_some(a)
    }
}

/// A residue class of `Kv`, stored as a fraction of initial polynomials of
/// equal value.
///
/// Products and sums of such fractions stay in this form, so the operations
/// below need no access to the valuation, and equality is exact cross
/// multiplication.
#[derive(Clone, PartialEq, Eq)]
pub struct ResidueElement(RationalFunction);

impl ResidueElement {
    pub fn zero() -> Self {
        Self(RationalFunction::zero())
    }

    pub fn one() -> Self {
        Self(RationalFunction::one())
    }

    pub fn rational(c: BigRational) -> Self {
        Self(RationalFunction::constant(c))
    }

    pub fn from_int(c: i64) -> Self {
        Self::rational(BigRational::from_integer(c.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0 == RationalFunction::one()
    }

    /// The rational number this class equals, when its representative is constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.0.as_constant()
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// A value-zero element of `K` in this class.
    pub fn representative(&self) -> &RationalFunction {
        &self.0
    }

    pub fn inv(&self) -> Option<Self> {
        self.0.inv().ok().map(Self)
    }

    pub fn pow(&self, n: u32) -> Self {
        Self(self.0.pow(n))
    }
}

impl Mul for &ResidueElement {
    type Output = ResidueElement;

    fn mul(self, rhs: &ResidueElement) -> ResidueElement {
        ResidueElement(&self.0 * &rhs.0)
    }
}

impl Add for &ResidueElement {
    type Output = ResidueElement;

    /// Sums of equal-value initial fractions are again initial, or zero.
    fn add(self, rhs: &ResidueElement) -> ResidueElement {
        ResidueElement(&self.0 + &rhs.0)
    }
}

impl Neg for &ResidueElement {
    type Output = ResidueElement;

    fn neg(self) -> ResidueElement {
        ResidueElement(-&self.0)
    }
}

impl fmt::Display for ResidueElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for ResidueElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0)
    }
}

impl From<i64> for ResidueElement {
    fn from(c: i64) -> Self {
        Self::from_int(c)
    }
}

impl Default for ResidueElement {
    fn default() -> Self {
        Self::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::VarNames;

    /// `x2, x3, x5` with weights `1/2, 1/3, 1/5`.
    fn setup() -> (MonomialValuation, VarNames) {
        let v = MonomialValuation::new(vec![
            GroupElement::scalar(1, 2),
            GroupElement::scalar(1, 3),
            GroupElement::scalar(1, 5),
        ])
        .unwrap();
        (v, VarNames::named(["x2", "x3", "x5"]))
    }

    #[test]
    fn value_examples() {
        let (v, n) = setup();
        let f = |s: &str| n.parse_rf(s).unwrap();
        assert_eq!(v.value(&f("x2")).unwrap(), GroupElement::scalar(1, 2));
        assert_eq!(v.value(&f("x2 + x3")).unwrap(), GroupElement::scalar(1, 3));
        assert_eq!(v.value(&f("-7/3")).unwrap(), GroupElement::scalar(0, 1));
        assert_eq!(v.value(&f("x2^2/x3^3")).unwrap(), GroupElement::scalar(0, 1));
        assert_eq!(v.value(&RationalFunction::zero()), Err(ValuationError::ZeroInput));
    }

    #[test]
    fn monomial_search() {
        let (v, n) = setup();
        let m = v.monomial_of_value(&GroupElement::scalar(5, 6), 4).unwrap();
        assert_eq!(v.monomial_value(&m).unwrap(), GroupElement::scalar(5, 6));
        assert_eq!(Polynomial::term(BigRational::from_integer(1.into()), m), n.parse_poly("x2*x3").unwrap());
        assert_eq!(v.monomial_of_value(&GroupElement::scalar(0, 1), 0), Some(Monomial::one()));
        assert_eq!(v.monomial_of_value(&GroupElement::scalar(1, 7), 6), None);
        assert_eq!(v.monomial_of_value(&GroupElement::scalar(-1, 2), 6), None);
    }

    #[test]
    fn initial_part_examples() {
        let (v, n) = setup();
        let p = |s: &str| n.parse_poly(s).unwrap();
        assert_eq!(v.initial_part(&p("x2 + x3")).unwrap(), p("x3"));
        assert_eq!(v.initial_part(&p("x2^2 + x3^3")).unwrap(), p("x2^2 + x3^3"));
        assert_eq!(v.initial_part(&p("4*x2*x3")).unwrap(), p("4*x2*x3"));
        let q = p("x2 + x3 + x5^2");
        let ip = v.initial_part(&q).unwrap();
        assert_eq!(v.initial_part(&ip).unwrap(), ip);
        assert!(v.initial_part(&Polynomial::zero()).is_err());
    }

    #[test]
    fn in_eq_examples() {
        let (v, n) = setup();
        let f = |s: &str| n.parse_rf(s).unwrap();
        assert!(v.in_eq(&f("x2^2"), &f("x2^2 + x2^3")).unwrap());
        assert!(!v.in_eq(&f("x2"), &f("x3")).unwrap());
        assert!(v.in_eq(&f("x2"), &f("x2")).unwrap());
        assert!(v.in_eq(&f("x2"), &RationalFunction::zero()).is_err());
    }

    #[test]
    fn residue_examples() {
        let (v, n) = setup();
        let f = |s: &str| n.parse_rf(s).unwrap();
        assert_eq!(v.residue(&f("5")).unwrap(), ResidueElement::from_int(5));

        let r = v.residue(&f("x2^2/x3^3")).unwrap();
        for c in -3..=3 {
            assert_ne!(r, ResidueElement::from_int(c));
        }
        assert!(!r.is_rational());

        let r2 = v.residue(&f("(x2^2 + x2^5)/x3^3")).unwrap();
        assert_eq!(r, r2);

        assert!(matches!(v.residue(&f("x2")), Err(ValuationError::NonzeroValue(_))));
    }

    #[test]
    fn residue_arithmetic() {
        let (v, n) = setup();
        let f = |s: &str| n.parse_rf(s).unwrap();
        let a = v.residue(&f("x2^2/x3^3")).unwrap();
        let b = v.residue(&f("x3^3/x2^2")).unwrap();
        assert!((&a * &b).is_one());
        assert!((&a + &(-&a)).is_zero());
        let s = v.residue(&f("(x2^2 + x3^3)/x3^3")).unwrap();
        assert_eq!(s, &a + &ResidueElement::one());
    }

    #[test]
    fn residue_roots() {
        let (v, n) = setup();
        let f = |s: &str| n.parse_rf(s).unwrap();
        let c = v.residue(&f("x2^4/x3^6")).unwrap();
        let a = v.residue_nth_root(&c, 2).unwrap();
        assert_eq!(a, f("x2^2/x3^3"));
        let c = v.residue(&f("x2^2/x3^3")).unwrap();
        assert_eq!(v.residue_nth_root(&c, 2), None);
        assert_eq!(
            v.residue_nth_root(&ResidueElement::from_int(8), 3),
            Some(RationalFunction::from_int(2))
        );
    }

    #[test]
    fn rejects_bad_weights() {
        assert_eq!(MonomialValuation::new(vec![]), Err(ValuationError::NoWeights));
        assert_eq!(
            MonomialValuation::new(vec![GroupElement::scalar(1, 1), GroupElement::from_ints(&[1, 0])]),
            Err(ValuationError::MixedDimensions)
        );
    }
}
