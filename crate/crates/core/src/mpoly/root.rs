//! Exact `n`-th roots of polynomials and rational functions.
//!
//! The polynomial root peels terms off from the top in lex order. If
//! `f = g^n` with `g = g_0 + g_1 + ...` (terms decreasing), the leading term of
//! `f - (g_0 + ... + g_k)^n` is `n g_0^{n-1} g_{k+1}`, which determines the
//! next term. Every term of a true root has exponents between the minimal and
//! maximal exponents of `f` divided by `n`, so the search is confined to a
//! finite box and always terminates.

use num::{BigInt, BigRational, Signed, Zero};

use super::{Monomial, Polynomial, RationalFunction};

/// Exact `n`-th root of a rational number; for even `n` the nonnegative one.
pub fn rational_nth_root(c: &BigRational, n: u32) -> Option<BigRational> {
    assert!(n >= 1, "root degree must be positive");
    if c.is_zero() {
        return Some(BigRational::zero());
    }
    if c.is_negative() && n % 2 == 0 {
        return None;
    }
    let num = integer_nth_root(c.numer(), n)?;
    let den = integer_nth_root(c.denom(), n)?;
    Some(BigRational::new(num, den))
}

fn integer_nth_root(a: &BigInt, n: u32) -> Option<BigInt> {
    let r = a.nth_root(n);
    (num::pow(r.clone(), n as usize) == *a).then_some(r)
}

/// Returns `g` with `g^n = f`, or `None`. Sound: a returned root always
/// satisfies the identity. For even `n` the root with positive leading
/// coefficient is chosen.
pub fn nth_root(f: &Polynomial, n: u32) -> Option<Polynomial> {
    assert!(n >= 2, "root degree must be at least 2");
    if f.is_zero() {
        return Some(Polynomial::zero());
    }
    let vars = f.variables();
    let bounds: Vec<(usize, u32, u32)> = vars
        .iter()
        .map(|&v| {
            let lo = f.terms().map(|(m, _)| m.exponent(v)).min().unwrap_or(0);
            let hi = f.degree_in(v);
            (v, lo.div_ceil(n), hi / n)
        })
        .collect();
    let in_box = |m: &Monomial| {
        m.pairs().iter().all(|&(v, _)| vars.binary_search(&v).is_ok())
            && bounds.iter().all(|&(v, lo, hi)| {
                let e = m.exponent(v);
                lo <= e && e <= hi
            })
    };

    let (lm, lc) = f.leading_term().expect("nonzero");
    let lead_m = lm.root(n)?;
    let lead_c = rational_nth_root(lc, n)?;
    let mut root = Polynomial::term(lead_c.clone(), lead_m.clone());

    // n * lead^(n-1), the divisor for every later term
    let d_m = lead_m.pow(n - 1);
    let d_c = BigRational::from_integer(n.into()) * num::pow(lead_c, (n - 1) as usize);

    let mut last = lead_m;
    loop {
        let rem = f - &root.pow(n);
        let Some((rm, rc)) = rem.leading_term() else {
            return Some(root);
        };
        let m = rm.div(&d_m)?;
        if m >= last || !in_box(&m) {
            return None;
        }
        root.add_term(rc / &d_c, m.clone());
        last = m;
    }
}

/// `n`-th root of the canonical numerator and denominator separately.
///
/// Sound but incomplete: without gcd reduction a perfect power can hide behind
/// a representation whose parts are not themselves perfect powers. The root of
/// the scalar is taken on the numerator; denominators are monic.
pub fn rf_nth_root(f: &RationalFunction, n: u32) -> Option<RationalFunction> {
    let num = nth_root(f.num(), n)?;
    let den = nth_root(f.den(), n)?;
    let root = RationalFunction::new(num, den).ok()?;
    (root.pow(n) == *f).then_some(root)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Polynomial {
        Polynomial::var(0)
    }

    fn y() -> Polynomial {
        Polynomial::var(1)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_roots() {
        assert_eq!(rational_nth_root(&q(4, 9), 2), Some(q(2, 3)));
        assert_eq!(rational_nth_root(&q(-8, 27), 3), Some(q(-2, 3)));
        assert_eq!(rational_nth_root(&q(-4, 1), 2), None);
        assert_eq!(rational_nth_root(&q(2, 1), 2), None);
    }

    #[test]
    fn perfect_square() {
        let f = &(&x() + &y()) * &(&x() + &y());
        assert_eq!(nth_root(&f, 2), Some(&x() + &y()));
    }

    #[test]
    fn sum_of_squares_has_no_root() {
        let f = &x().pow(2) + &y().pow(2);
        assert_eq!(nth_root(&f, 2), None);
        // brute force: any square root has terms among monomials of degree 1
        // in x, y with coefficients in a small range; none squares to f
        let range = -3..=3i64;
        for a in range.clone() {
            for b in range.clone() {
                for c in range.clone() {
                    let g = Polynomial::from_terms([
                        (q(a, 1), Monomial::var(0)),
                        (q(b, 1), Monomial::var(1)),
                        (q(c, 1), Monomial::one()),
                    ]);
                    assert_ne!(g.pow(2), f);
                }
            }
        }
    }

    #[test]
    fn monomial_cube() {
        let f = Polynomial::term(q(1, 1), Monomial::from_dense(&[6, 3]));
        let g = Polynomial::term(q(1, 1), Monomial::from_dense(&[2, 1]));
        assert_eq!(nth_root(&f, 3), Some(g));
    }

    #[test]
    fn rf_roots() {
        let xr = RationalFunction::from(x());
        let yr = RationalFunction::from(y());
        let f = &xr.pow(2) / &yr.pow(4);
        assert_eq!(rf_nth_root(&f, 2), Some(&xr / &yr.pow(2)));

        let z = RationalFunction::var(2);
        let s = &xr + &yr;
        let f = &s.pow(2) / &z.pow(4);
        assert_eq!(rf_nth_root(&f, 2), Some(&s / &z.pow(2)));

        assert_eq!(rf_nth_root(&(&xr / &yr), 2), None);
    }

    #[test]
    fn negative_leading_coefficient_odd_root() {
        let g = &(-&x()) + &Polynomial::from_int(2);
        assert_eq!(nth_root(&g.pow(3), 3), Some(g));
    }
}
