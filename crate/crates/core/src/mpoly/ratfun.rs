use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigRational, Zero};

use super::{Polynomial, PolyError};

/// A quotient of polynomials.
///
/// Stored in a canonical, but not fully reduced, form: common monomial content
/// is cancelled, a numerator that is a scalar multiple of (or exactly
/// divisible by) the denominator is divided out, and the denominator is monic
/// in lex order. There is no multivariate gcd, so equality compares cross
/// products rather than representations.
#[derive(Clone)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        Ok(Self::canonical(num, den))
    }

    pub fn zero() -> Self {
        Self { num: Polynomial::zero(), den: Polynomial::one() }
    }

    pub fn one() -> Self {
        Self::from(Polynomial::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from(Polynomial::constant(c))
    }

    pub fn from_int(c: i64) -> Self {
        Self::from(Polynomial::from_int(c))
    }

    pub fn var(i: usize) -> Self {
        Self::from(Polynomial::var(i))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The polynomial this represents, when the denominator is trivial.
    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_polynomial() {
            self.num.as_constant()
        } else {
            None
        }
    }

    fn canonical(num: Polynomial, den: Polynomial) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.monomial_content().gcd(&den.monomial_content());
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_monomial(&g).expect("content divides"),
                den.div_monomial(&g).expect("content divides"),
            )
        };
        if den.num_terms() > 1 {
            if let Some(c) = num.scalar_ratio(&den) {
                return Self::constant(c);
            }
            if let Some(q) = num.div_exact(&den) {
                return Self::from(q);
            }
            if num.num_terms() > 1 {
                if let Some(q) = den.div_exact(&num) {
                    den = q;
                    num = Polynomial::one();
                }
            }
        }
        let (_, lc) = den.leading_term().expect("nonzero denominator");
        let inv = lc.recip();
        if !inv.is_zero() && inv != BigRational::from_integer(1.into()) {
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Self { num, den }
    }

    pub fn inv(&self) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroInverse);
        }
        Ok(Self::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, PolyError> {
        Ok(self * &other.inv()?)
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, n: i64) -> Result<Self, PolyError> {
        let e = u32::try_from(n.unsigned_abs()).map_err(|_| PolyError::ExponentTooLarge)?;
        let p = Self::canonical(self.num.pow(e), self.den.pow(e));
        if n < 0 {
            p.inv()
        } else {
            Ok(p)
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        Self::canonical(self.num.pow(n), self.den.pow(n))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::canonical(self.num.scale(c), self.den.clone())
    }

    /// `max(deg num, deg den)` of the monomial-content-cancelled form.
    pub fn total_degree(&self) -> Result<u64, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroInput);
        }
        Ok(self.num.total_degree().max(self.den.total_degree()))
    }

    /// Whether numerator and denominator might share a non-monomial factor
    /// that the canonical form cannot see, so `total_degree` could overstate.
    pub fn may_have_hidden_common_factor(&self) -> bool {
        self.num.num_terms() > 1 && self.den.num_terms() > 1
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        Self { num: p, den: Polynomial::one() }
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        (&self.num * &other.den) == (&other.num * &self.den)
    }
}

impl Eq for RationalFunction {}

impl Add for &RationalFunction {
    type Output = RationalFunction;

    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::canonical(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::canonical(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;

    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;

    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;

    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::canonical(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

/// Panics on division by zero; see [`RationalFunction::checked_div`].
impl Div for &RationalFunction {
    type Output = RationalFunction;

    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::text::VarNames::indexed().rf(self))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::text::VarNames::indexed().rf(self))
    }
}
