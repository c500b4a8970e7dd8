//! Lexicographically ordered subgroups of `Q^d`.
//!
//! Value groups are modelled as rational vectors of a fixed dimension with the
//! lexicographic order. Finitely generated subgroups carry a precomputed
//! integer echelon basis, which answers membership, integer decomposition and
//! the order of an element modulo the subgroup exactly.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("group elements need at least one coordinate")]
    EmptyElement,
    #[error("element {0} already lies in the subgroup")]
    AlreadyContained(GroupElement),
    #[error("cannot parse group element `{0}`")]
    Parse(String),
}

/// An element of `Q^d` ordered lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    coords: Vec<BigRational>,
}

impl GroupElement {
    pub fn new(coords: Vec<BigRational>) -> Result<Self, GroupError> {
        if coords.is_empty() {
            return Err(GroupError::EmptyElement);
        }
        Ok(Self { coords })
    }

    pub fn zero(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self { coords: vec![BigRational::zero(); dim] }
    }

    /// Rank-one element `num/den`.
    pub fn scalar(num: i64, den: i64) -> Self {
        Self { coords: vec![BigRational::new(num.into(), den.into())] }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| BigRational::from_integer(c.into())).collect())
            .expect("nonempty coordinates")
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, GroupError> {
        self.same_dim(other)?;
        Ok(Self {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_cmp(&self, other: &Self) -> Result<Ordering, GroupError> {
        self.same_dim(other)?;
        Ok(self.coords.cmp(&other.coords))
    }

    pub fn scale(&self, n: &BigInt) -> Self {
        let n = BigRational::from_integer(n.clone());
        Self { coords: self.coords.iter().map(|c| c * &n).collect() }
    }

    pub fn times(&self, n: i64) -> Self {
        self.scale(&BigInt::from(n))
    }

    fn same_dim(&self, other: &Self) -> Result<(), GroupError> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(GroupError::DimensionMismatch(self.dim(), other.dim()))
        }
    }
}

impl Add for &GroupElement {
    type Output = GroupElement;

    fn add(self, rhs: &GroupElement) -> GroupElement {
        self.checked_add(rhs).expect("group elements of equal dimension")
    }
}

impl Sub for &GroupElement {
    type Output = GroupElement;

    fn sub(self, rhs: &GroupElement) -> GroupElement {
        self + &(-rhs)
    }
}

impl Neg for &GroupElement {
    type Output = GroupElement;

    fn neg(self) -> GroupElement {
        GroupElement { coords: self.coords.iter().map(|c| -c).collect() }
    }
}

impl Mul<&GroupElement> for i64 {
    type Output = GroupElement;

    fn mul(self, rhs: &GroupElement) -> GroupElement {
        rhs.times(self)
    }
}

impl fmt::Display for GroupElement {
    /// Rank-one elements print as a bare rational, others as `(a,b,...)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            return write!(f, "{}", self.coords[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for GroupElement {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let inner = match t.strip_prefix('(') {
            Some(rest) => rest
                .strip_suffix(')')
                .ok_or_else(|| GroupError::Parse(s.to_string()))?,
            None => t,
        };
        let coords = inner
            .split(',')
            .map(|c| parse_rational(c).ok_or_else(|| GroupError::Parse(s.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        GroupElement::new(coords)
    }
}

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Integer echelon form of a generator matrix, with the unimodular transform
/// recording how each echelon row arises from the generators.
#[derive(Clone, Debug)]
struct Echelon {
    /// Nonzero echelon rows, scaled by `scale` to be integral.
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    /// `transform[i]` gives the integer combination of generators equal to `rows[i] / scale`.
    transform: Vec<Vec<BigInt>>,
    scale: BigInt,
}

impl Echelon {
    fn new(dim: usize, gens: &[GroupElement]) -> Self {
        let scale = gens
            .iter()
            .flat_map(|g| g.coords.iter())
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let k = gens.len();
        let mut h: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| {
                g.coords
                    .iter()
                    .map(|c| (c * BigRational::from_integer(scale.clone())).to_integer())
                    .collect()
            })
            .collect();
        let mut u: Vec<Vec<BigInt>> = (0..k)
            .map(|i| (0..k).map(|j| BigInt::from((i == j) as i64)).collect())
            .collect();

        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..dim {
            if row == k {
                break;
            }
            loop {
                let pivot = (row..k)
                    .filter(|&r| !h[r][col].is_zero())
                    .min_by(|&a, &b| h[a][col].abs().cmp(&h[b][col].abs()));
                let Some(p) = pivot else { break };
                h.swap(row, p);
                u.swap(row, p);
                let mut done = true;
                for r in row + 1..k {
                    if h[r][col].is_zero() {
                        continue;
                    }
                    let q = h[r][col].div_floor(&h[row][col]);
                    for c in 0..dim {
                        let t = &q * &h[row][c];
                        h[r][c] -= t;
                    }
                    for c in 0..k {
                        let t = &q * &u[row][c];
                        u[r][c] -= t;
                    }
                    if !h[r][col].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if (row..k).any(|r| !h[r][col].is_zero()) {
                pivots.push(col);
                row += 1;
            }
        }
        h.truncate(row);
        u.truncate(row);
        Self { rows: h, pivots, transform: u, scale }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Rational coordinates of `target` with respect to the echelon rows, or
    /// `None` when `target` is outside their rational span.
    fn coordinates(&self, target: &GroupElement) -> Option<Vec<BigRational>> {
        let scale = BigRational::from_integer(self.scale.clone());
        let mut residual: Vec<BigRational> = target.coords.iter().map(|c| c * &scale).collect();
        let mut coeffs = Vec::with_capacity(self.rank());
        let mut next = 0;
        for col in 0..residual.len() {
            if next < self.pivots.len() && self.pivots[next] == col {
                let row = &self.rows[next];
                let c = &residual[col] / BigRational::from_integer(row[col].clone());
                for (r, h) in residual.iter_mut().zip(row) {
                    *r -= &c * BigRational::from_integer(h.clone());
                }
                coeffs.push(c);
                next += 1;
            } else if !residual[col].is_zero() {
                return None;
            }
        }
        Some(coeffs)
    }
}

/// A finitely generated subgroup of `Q^d`.
#[derive(Clone, Debug)]
pub struct FgSubgroup {
    dim: usize,
    generators: Vec<GroupElement>,
    echelon: Echelon,
}

impl FgSubgroup {
    pub const DEFAULT_SCAN_BOUND: u64 = 10_000;

    pub fn new(dim: usize, generators: Vec<GroupElement>) -> Result<Self, GroupError> {
        if dim == 0 {
            return Err(GroupError::EmptyElement);
        }
        if let Some(g) = generators.iter().find(|g| g.dim() != dim) {
            return Err(GroupError::DimensionMismatch(dim, g.dim()));
        }
        let echelon = Echelon::new(dim, &generators);
        Ok(Self { dim, generators, echelon })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    /// Generators are a basis exactly when they are linearly independent.
    pub fn is_free_basis(&self) -> bool {
        self.rank() == self.generators.len()
    }

    /// Integer coefficients `n` with `a = Σ n_i g_i`, if any exist.
    pub fn decompose(&self, a: &GroupElement) -> Option<Vec<BigInt>> {
        if a.dim() != self.dim {
            return None;
        }
        let coeffs = self.echelon.coordinates(a)?;
        if coeffs.iter().any(|c| !c.is_integer()) {
            return None;
        }
        let mut witness = vec![BigInt::zero(); self.generators.len()];
        for (c, t) in coeffs.iter().zip(&self.echelon.transform) {
            let c = c.to_integer();
            for (w, u) in witness.iter_mut().zip(t) {
                *w += &c * u;
            }
        }
        Some(witness)
    }

    pub fn contains(&self, a: &GroupElement) -> bool {
        self.decompose(a).is_some()
    }

    pub fn recombine(&self, coeffs: &[BigInt]) -> GroupElement {
        assert_eq!(coeffs.len(), self.generators.len(), "one coefficient per generator");
        coeffs
            .iter()
            .zip(&self.generators)
            .fold(GroupElement::zero(self.dim), |acc, (n, g)| &acc + &g.scale(n))
    }

    pub fn in_rational_span(&self, a: &GroupElement) -> bool {
        a.dim() == self.dim && self.echelon.coordinates(a).is_some()
    }

    /// Exact order of `g` in `(Q-span of S) / S`: the least `n ≥ 1` with
    /// `n g ∈ S`, or `None` when no nonzero multiple lies in `S`.
    pub fn order_modulo(&self, g: &GroupElement) -> Option<BigInt> {
        let coeffs = self.echelon.coordinates(g)?;
        Some(coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom())))
    }

    /// Least `n ≥ 2` with `n g ∈ S`.
    ///
    /// Returns `Ok(None)` when no multiple up to `bound` lies in `S`. In rank
    /// one, and whenever `g` leaves the rational span of `S`, the answer is
    /// computed exactly; otherwise multiples are scanned up to `bound`.
    pub fn min_multiple(&self, g: &GroupElement, bound: u64) -> Result<Option<u64>, GroupError> {
        if g.dim() != self.dim {
            return Err(GroupError::DimensionMismatch(self.dim, g.dim()));
        }
        if self.contains(g) {
            return Err(GroupError::AlreadyContained(g.clone()));
        }
        if self.dim == 1 {
            return Ok(self.order_modulo(g).and_then(|n| n.to_u64()));
        }
        if !self.in_rational_span(g) {
            return Ok(None);
        }
        Ok((2..=bound).find(|&n| self.contains(&g.scale(&BigInt::from(n)))))
    }
}

/// Elements `Σ n_i g_i` with `n_i ≥ 0` and `Σ n_i ≤ height`, deduplicated,
/// each paired with the least height at which it appears. Sorted by element.
pub fn semigroup_ball(generators: &[GroupElement], dim: usize, height: u32) -> Vec<(GroupElement, u32)> {
    let mut seen = std::collections::BTreeMap::new();
    seen.insert(GroupElement::zero(dim), 0u32);
    let mut frontier = vec![GroupElement::zero(dim)];
    for h in 1..=height {
        let mut next = Vec::new();
        for e in &frontier {
            for g in generators {
                let s = e + g;
                if !seen.contains_key(&s) {
                    seen.insert(s.clone(), h);
                    next.push(s);
                }
            }
        }
        frontier = next;
    }
    seen.into_iter().collect()
}

/// Like [`semigroup_ball`] but with signed coefficients, `Σ |n_i| ≤ height`.
pub fn group_ball(generators: &[GroupElement], dim: usize, height: u32) -> Vec<(GroupElement, u32)> {
    let signed: Vec<GroupElement> = generators
        .iter()
        .flat_map(|g| [g.clone(), -g])
        .collect();
    semigroup_ball(&signed, dim, height)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> GroupElement {
        GroupElement::scalar(n, d)
    }

    #[test]
    fn add_examples() {
        let a = GroupElement::from_ints(&[1, 0]);
        let b = GroupElement::from_ints(&[0, 1]);
        assert_eq!(&a + &b, GroupElement::from_ints(&[1, 1]));
        assert_eq!(&q(1, 2) + &q(1, 3), q(5, 6));
        assert_eq!(&a + &GroupElement::zero(2), a);
        assert_eq!(
            a.checked_add(&q(1, 1)),
            Err(GroupError::DimensionMismatch(2, 1))
        );
    }

    #[test]
    fn cmp_examples() {
        let a = GroupElement::from_ints(&[1, 0]);
        let b = GroupElement::from_ints(&[0, 5]);
        assert_eq!(a.checked_cmp(&b), Ok(Ordering::Greater));
        assert_eq!(q(1, 3).checked_cmp(&q(1, 2)), Ok(Ordering::Less));
        assert_eq!(a.checked_cmp(&a), Ok(Ordering::Equal));
        assert!(a.checked_cmp(&q(1, 1)).is_err());
    }

    #[test]
    fn contains_examples() {
        let s = FgSubgroup::new(2, vec![GroupElement::from_ints(&[1, 0]), GroupElement::from_ints(&[0, 1])]).unwrap();
        let a = GroupElement::from_ints(&[2, 3]);
        assert_eq!(s.decompose(&a), Some(vec![BigInt::from(2), BigInt::from(3)]));

        let z = FgSubgroup::new(1, vec![q(1, 1)]).unwrap();
        assert!(!z.contains(&q(1, 2)));

        let s = FgSubgroup::new(1, vec![q(1, 2), q(1, 3)]).unwrap();
        let w = s.decompose(&q(1, 6)).expect("1/6 in <1/2,1/3>");
        assert_eq!(s.recombine(&w), q(1, 6));
    }

    #[test]
    fn min_multiple_examples() {
        let z = FgSubgroup::new(1, vec![q(1, 1)]).unwrap();
        assert_eq!(z.min_multiple(&q(1, 2), 100), Ok(Some(2)));
        assert_eq!(z.min_multiple(&q(1, 6), 100), Ok(Some(6)));
        assert!(matches!(z.min_multiple(&q(3, 1), 100), Err(GroupError::AlreadyContained(_))));

        let s = FgSubgroup::new(2, vec![GroupElement::from_ints(&[1, 0])]).unwrap();
        assert_eq!(s.min_multiple(&GroupElement::from_ints(&[0, 1]), 100), Ok(None));
    }

    #[test]
    fn min_multiple_rank_two_scan() {
        let s = FgSubgroup::new(2, vec![GroupElement::from_ints(&[2, 0]), GroupElement::from_ints(&[1, 3])]).unwrap();
        let g = GroupElement::from_ints(&[0, 1]);
        // a(2,0) + b(1,3) = (0,n) forces b = 2c, n = 6c
        let exact = s.order_modulo(&g).unwrap();
        let scanned = s.min_multiple(&g, 100).unwrap().unwrap();
        assert_eq!(BigInt::from(scanned), exact);
        assert_eq!(scanned, 6);
    }

    #[test]
    fn empty_subgroup() {
        let s = FgSubgroup::new(1, vec![]).unwrap();
        assert!(s.contains(&GroupElement::zero(1)));
        assert!(!s.contains(&q(1, 1)));
        assert_eq!(s.min_multiple(&q(1, 1), 10), Ok(None));
    }

    #[test]
    fn free_basis_detection() {
        let dep = FgSubgroup::new(1, vec![q(1, 2), q(1, 3)]).unwrap();
        assert!(!dep.is_free_basis());
        let free = FgSubgroup::new(2, vec![GroupElement::from_ints(&[1, 0]), GroupElement::from_ints(&[1, 1])]).unwrap();
        assert!(free.is_free_basis());
    }

    #[test]
    fn parse_and_print() {
        let a: GroupElement = "(1/2, -3)".parse().unwrap();
        assert_eq!(a.to_string(), "(1/2,-3)");
        let b: GroupElement = "5/10".parse().unwrap();
        assert_eq!(b, q(1, 2));
        assert!("(1,".parse::<GroupElement>().is_err());
        assert!("1/0".parse::<GroupElement>().is_err());
    }

    #[test]
    fn balls() {
        let ball = semigroup_ball(&[q(1, 2), q(1, 3)], 1, 2);
        let elems: Vec<_> = ball.iter().map(|(e, _)| e.clone()).collect();
        assert_eq!(elems, vec![q(0, 1), q(1, 3), q(1, 2), q(2, 3), q(5, 6), q(1, 1)]);
        let g = group_ball(&[q(1, 1)], 1, 2);
        assert_eq!(g.len(), 5);
    }
}
