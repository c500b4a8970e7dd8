//! Randomized and exhaustive verification campaigns.
//!
//! Every campaign draws from a seeded [`ChaCha8Rng`], so a seed fixes the
//! whole run. Results come back as [`SuiteOutcome`]s counting checks and
//! failures; the first failure is kept for the report.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num::{BigRational, One};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::graded::{GradedAlgebra, GradedError, ResidueLifter, Subring};
use crate::mpoly::{nth_root, Monomial, Polynomial, RationalFunction};
use crate::ordgroup::GroupElement;
use crate::twist::{ChoiceFunction, Domain, DomainKind, TwistError, TwistedRing, TwistedRingElement};
use crate::valuation::{MonomialValuation, ResidueElement};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub name: String,
    pub checks: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
    pub skipped: Option<String>,
    pub detail: String,
}

impl SuiteOutcome {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            checks: 0,
            failures: 0,
            first_failure: None,
            skipped: None,
            detail: String::new(),
        }
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Self { skipped: Some(reason.into()), ..Self::new(name) }
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn status(&self) -> &'static str {
        match (&self.skipped, self.failures) {
            (Some(_), _) => "SKIPPED",
            (None, 0) => "PASS",
            _ => "FAIL",
        }
    }

    pub fn line(&self) -> String {
        let mut s = format!("{} {}: {} checks, {} failures", self.status(), self.name, self.checks, self.failures);
        if let Some(r) = &self.skipped {
            s.push_str(&format!(" ({r})"));
        }
        if !self.detail.is_empty() {
            s.push_str(&format!("; {}", self.detail));
        }
        if let Some(f) = &self.first_failure {
            s.push_str(&format!("; first failure: {f}"));
        }
        s
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Nonzero rational with small numerator and denominator.
pub fn small_rational(rng: &mut impl Rng) -> BigRational {
    let mut n = rng.gen_range(-5i64..=5);
    if n == 0 {
        n = 1;
    }
    rat(n, rng.gen_range(1..=4))
}

pub fn random_twisted_element(rng: &mut impl Rng, pool: &[GroupElement], max_terms: usize) -> TwistedRingElement {
    let mut out = TwistedRingElement::zero();
    for _ in 0..rng.gen_range(1..=max_terms) {
        let g = pool.choose(rng).expect("nonempty pool").clone();
        out.add_term(ResidueElement::rational(small_rational(rng)), g);
    }
    out
}

fn outside(e: &TwistError) -> bool {
    matches!(e, TwistError::OutsideDomain(_))
}

/// Commutativity, unit, distributivity, and associativity of `×_ε` on random
/// elements with at most four terms, supported within `height / 3`.
pub fn ring_axioms(
    ring: &TwistedRing,
    rng: &mut impl Rng,
    height: u32,
    samples: usize,
) -> Result<Vec<SuiteOutcome>, TwistError> {
    let pool: Vec<GroupElement> = ring.choice().sample_domain((height / 3).max(1)).into_iter().map(|(g, _)| g).collect();
    let mut comm = SuiteOutcome::new("ring.commutative");
    let mut unit = SuiteOutcome::new("ring.unit");
    let mut dist = SuiteOutcome::new("ring.distributive");
    let mut assoc = SuiteOutcome::new("ring.associative");
    let mut skipped = 0;
    let one = ring.one();
    for _ in 0..samples {
        let a = random_twisted_element(rng, &pool, 4);
        let b = random_twisted_element(rng, &pool, 4);
        let c = random_twisted_element(rng, &pool, 4);
        let run = || -> Result<(bool, bool, bool, bool), TwistError> {
            let ab = ring.mul(&a, &b)?;
            let ba = ring.mul(&b, &a)?;
            let left = ring.mul(&a, &(&b + &c))?;
            let right = &ab + &ring.mul(&a, &c)?;
            let abc1 = ring.mul(&ab, &c)?;
            let abc2 = ring.mul(&a, &ring.mul(&b, &c)?)?;
            Ok((ab == ba, ring.mul(&one, &a)? == a, left == right, abc1 == abc2))
        };
        match run() {
            Ok((c1, c2, c3, c4)) => {
                let show = || format!("a={a:?} b={b:?} c={c:?}");
                comm.check(c1, show);
                unit.check(c2, show);
                dist.check(c3, show);
                assoc.check(c4, show);
            }
            Err(e) if outside(&e) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    let mut out = vec![comm, unit, dist, assoc];
    if skipped > 0 {
        for o in &mut out {
            o.detail = format!("{skipped} samples left the domain");
        }
    }
    Ok(out)
}

/// The cocycle identity, its agreement with associativity on single terms,
/// symmetry, and `ε̄(0, α) = 1`, on random triples.
pub fn cocycle(
    ring: &TwistedRing,
    rng: &mut impl Rng,
    height: u32,
    samples: usize,
) -> Result<Vec<SuiteOutcome>, TwistError> {
    let pool: Vec<GroupElement> = ring.choice().sample_domain((height / 3).max(1)).into_iter().map(|(g, _)| g).collect();
    let zero = ring.choice().valuation().zero_value();
    let mut cocycle = SuiteOutcome::new("twist.cocycle");
    let mut single = SuiteOutcome::new("twist.single_term_associativity");
    let mut symmetric = SuiteOutcome::new("twist.symmetric");
    let mut unit = SuiteOutcome::new("twist.unit");
    let mut nonzero = SuiteOutcome::new("twist.nonzero");
    for _ in 0..samples {
        let a = pool.choose(rng).unwrap().clone();
        let b = pool.choose(rng).unwrap().clone();
        let c = pool.choose(rng).unwrap().clone();
        let mut run = || -> Result<(), TwistError> {
            let ab = ring.twisting(&a, &b)?;
            let lhs = &ab * &ring.twisting(&(&a + &b), &c)?;
            let rhs = &ring.twisting(&a, &(&b + &c))? * &ring.twisting(&b, &c)?;
            let show = || format!("({a}, {b}, {c})");
            cocycle.check(lhs == rhs, show);
            let (ta, tb, tc) = (
                TwistedRingElement::monomial(a.clone()),
                TwistedRingElement::monomial(b.clone()),
                TwistedRingElement::monomial(c.clone()),
            );
            let left = ring.mul(&ring.mul(&ta, &tb)?, &tc)?;
            let right = ring.mul(&ta, &ring.mul(&tb, &tc)?)?;
            let abc = &(&a + &b) + &c;
            single.check(left.coefficient(&abc) == lhs && right.coefficient(&abc) == rhs, show);
            symmetric.check(ring.twisting_uncached(&a, &b)? == ring.twisting_uncached(&b, &a)?, show);
            unit.check(ring.twisting_uncached(&zero, &a)?.is_one(), show);
            nonzero.check(!ab.is_zero(), show);
            Ok(())
        };
        match run() {
            Ok(()) => {}
            Err(e) if outside(&e) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(vec![cocycle, single, symmetric, unit, nonzero])
}

/// `ε̄ ≡ 1` and `in_v ∘ ε` multiplicative give the same verdict up to `bound`.
pub fn triviality_agreement(ring: &TwistedRing, bound: u32) -> Result<SuiteOutcome, TwistError> {
    let t = ring.is_trivial(bound)?;
    let h = ring.semigroup_hom_check(bound)?;
    let mut out = SuiteOutcome::new("twist.triviality_agreement");
    out.check(t.holds == h.holds && t.counterexample == h.counterexample, || {
        format!("is_trivial={} hom_check={}", t.holds, h.holds)
    });
    out.detail = format!(
        "trivial={} over {} pairs up to height {}{}",
        t.holds,
        t.pairs_checked,
        bound,
        t.counterexample.as_ref().map_or(String::new(), |(a, b)| format!(", first nontrivial pair ({a}, {b})"))
    );
    Ok(out)
}

/// Shape of [`random_table_choice`].
#[derive(Debug, Clone, Copy)]
pub struct TableOptions {
    /// Weights are small positive rationals (`d = 1`), possibly repeated;
    /// otherwise the weights are the standard basis of `Z^m`.
    pub rational_weights: bool,
    /// Every value has leading constant one.
    pub unit_constants: bool,
    /// Table covers monomials of total degree up to this.
    pub height: u32,
}

const WEIGHTS: [(i64, i64); 8] = [(1, 1), (1, 2), (1, 3), (2, 3), (3, 2), (2, 1), (1, 5), (3, 4)];

fn exponent_vectors(m: usize, height: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                let used: u32 = v.iter().sum();
                (0..=height - used).map(move |e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out
}

/// A random table choice function on the semigroup generated by the
/// variable weights.
///
/// For each value up to `height` generator steps, `ε` is a random monomial of
/// that value times a constant, optionally times a unit `1 + c x_i` or its
/// inverse, or plus a term of higher value. With repeated weights the residue
/// field is larger than `Q` and twistings may be non-constant.
pub fn random_table_choice(rng: &mut impl Rng, opts: TableOptions) -> ChoiceFunction {
    let m = rng.gen_range(1..=3usize);
    let weights: Vec<GroupElement> = if opts.rational_weights {
        (0..m)
            .map(|_| {
                let (n, d) = WEIGHTS[rng.gen_range(0..WEIGHTS.len())];
                GroupElement::scalar(n, d)
            })
            .collect()
    } else {
        (0..m)
            .map(|i| {
                let mut c = vec![0; m];
                c[i] = 1;
                GroupElement::from_ints(&c)
            })
            .collect()
    };
    let v = Arc::new(MonomialValuation::new(weights.clone()).expect("weights"));
    let mut by_value: BTreeMap<GroupElement, Vec<Vec<u32>>> = BTreeMap::new();
    for e in exponent_vectors(m, opts.height) {
        let mono = Monomial::from_dense(&e);
        by_value.entry(v.monomial_value(&mono).expect("known vars")).or_default().push(e);
    }
    let mut table = BTreeMap::new();
    for (gamma, vecs) in by_value {
        if gamma.is_zero() {
            continue;
        }
        let e = vecs.choose(rng).unwrap();
        let c = if opts.unit_constants { BigRational::one() } else { small_rational(rng) };
        let base = RationalFunction::from(Polynomial::term(c, Monomial::from_dense(e)));
        let i = rng.gen_range(0..m);
        let unit = &Polynomial::one() + &Polynomial::term(small_rational(rng), Monomial::var(i));
        let f = match rng.gen_range(0..4) {
            0 => base,
            1 => &base * &RationalFunction::from(unit),
            2 => &base / &RationalFunction::from(unit),
            _ => {
                let higher = Polynomial::term(small_rational(rng), Monomial::from_dense(e).mul(&Monomial::var(i)));
                &base + &RationalFunction::from(higher)
            }
        };
        table.insert(gamma, f);
    }
    let mut generators = weights;
    generators.sort();
    generators.dedup();
    ChoiceFunction::from_table(v, Domain { generators, kind: DomainKind::Semigroup }, table).expect("values by construction")
}

fn random_poly(rng: &mut impl Rng, m: usize, deg: u32, terms: usize) -> Polynomial {
    let mut p = Polynomial::zero();
    for _ in 0..terms {
        let e: Vec<u32> = (0..m).map(|_| rng.gen_range(0..=deg)).collect();
        p.add_term(small_rational(rng), Monomial::from_dense(&e));
    }
    p
}

/// Random element of `R` in `m` variables with at most four terms and
/// exponents up to `deg`; in the field case, sometimes divided by another.
pub fn random_r_element(rng: &mut impl Rng, gr: &GradedAlgebra, deg: u32) -> RationalFunction {
    let m = gr.valuation().num_vars();
    loop {
        let n = rng.gen_range(1..=4);
        let num = random_poly(rng, m, deg, n);
        if num.is_zero() {
            continue;
        }
        if gr.subring() == Subring::Field && rng.gen_bool(0.5) {
            let d = rng.gen_range(1..=2);
            let den = random_poly(rng, m, deg, d);
            if den.is_zero() {
                continue;
            }
            return RationalFunction::new(num, den).expect("nonzero denominator");
        }
        return RationalFunction::from(num);
    }
}

/// Random `c · m` with `m` a monomial of positive value.
fn random_positive_term(rng: &mut impl Rng, v: &MonomialValuation) -> Option<RationalFunction> {
    let m = v.num_vars();
    for _ in 0..10 {
        let e: Vec<u32> = (0..m).map(|_| rng.gen_range(0..=2)).collect();
        let mono = Monomial::from_dense(&e);
        if v.monomial_value(&mono).ok()? > v.zero_value() {
            return Some(RationalFunction::from(Polynomial::term(small_rational(rng), mono)));
        }
    }
    None
}

/// Properties of `ψ: gr_v(R) -> Kv[t^{v(R)}]_ε` on `pairs` random pairs.
///
/// Pairs are drawn so that equal initial forms, equal values with different
/// initial forms, and cancelling sums all occur. Pairs whose values, sum, or
/// product leave the choice function's domain are redrawn.
pub fn psi_suite(
    gr: &GradedAlgebra,
    ring: &TwistedRing,
    lifter: Option<&dyn ResidueLifter>,
    rng: &mut impl Rng,
    pairs: usize,
    deg: u32,
) -> Result<Vec<SuiteOutcome>, GradedError> {
    let v = gr.valuation().clone();
    let eps = ring.choice();
    let mut wd = SuiteOutcome::new("psi.well_defined_injective");
    let mut add = SuiteOutcome::new("psi.additive");
    let mut mul = SuiteOutcome::new("psi.multiplicative");
    let mut values = SuiteOutcome::new("psi.twisting_of_values");
    let mut degree = SuiteOutcome::new("psi.degree");
    let mut round = match lifter {
        Some(_) => SuiteOutcome::new("psi.round_trip"),
        None => SuiteOutcome::skipped("psi.round_trip", "no residue lifting declared"),
    };
    let (mut eq_true, mut eq_false, mut sum_same, mut sum_higher) = (0usize, 0usize, 0usize, 0usize);
    let mut done = 0;
    let mut attempts = 0;
    while done < pairs {
        attempts += 1;
        if attempts > pairs * 50 {
            wd.detail = format!("gave up after {attempts} draws");
            break;
        }
        let x = random_r_element(rng, gr, deg);
        let y = match rng.gen_range(0..4) {
            0 => random_r_element(rng, gr, deg),
            1 => match random_positive_term(rng, &v) {
                Some(t) => &x + &(&x * &t),
                None => continue,
            },
            2 => {
                let c = if rng.gen_bool(0.5) { BigRational::one() } else { small_rational(rng) };
                x.scale(&c)
            }
            _ => match random_positive_term(rng, &v) {
                Some(t) => &(-&x) + &(&x * &t),
                None => continue,
            },
        };
        let s = &x + &y;
        let p = &x * &y;
        let (vx, vy) = (v.value(&x)?, v.value(&y)?);
        let needed = [Some(&vx), Some(&vy), Some(&(&vx + &vy))];
        if needed.iter().flatten().any(|g| !eps.contains(g)) {
            continue;
        }
        let vs = if s.is_zero() { None } else { Some(v.value(&s)?) };
        if vs.as_ref().is_some_and(|g| !eps.contains(g)) {
            continue;
        }
        done += 1;
        let show = || format!("x={x:?} y={y:?}");

        let (ix, iy) = (gr.in_v(&x)?, gr.in_v(&y)?);
        let (px, py) = (gr.psi(ring, &ix)?, gr.psi(ring, &iy)?);
        let same = v.in_eq(&x, &y)?;
        if same {
            eq_true += 1;
        } else {
            eq_false += 1;
        }
        wd.check(same == (px == py), show);

        degree.check(px.support().cloned().collect::<Vec<_>>() == vec![vx.clone()], show);

        if vx == vy {
            let lhs = &px + &py;
            match &vs {
                None => add.check(lhs.is_zero(), show),
                Some(g) if *g == vx => {
                    sum_same += 1;
                    add.check(gr.psi(ring, &gr.in_v(&s)?)? == lhs, show);
                }
                Some(_) => {
                    sum_higher += 1;
                    add.check(lhs.is_zero(), show);
                }
            }
        }

        let ixy = gr.h_mul(&ix, &iy);
        mul.check(gr.psi(ring, &ixy)? == ring.mul(&px, &py)?, show);

        let d = |f: &RationalFunction| eps.eval(&v.value(f)?).map_err(GradedError::from);
        let coeff = v.residue(&(&(&d(&x)? * &d(&y)?) / &d(&p)?))?;
        let want = TwistedRingElement::term(coeff, &vx + &vy);
        let got = ring.mul(&TwistedRingElement::monomial(vx.clone()), &TwistedRingElement::monomial(vy.clone()))?;
        values.check(got == want, show);

        if let Some(l) = lifter {
            round.check(gr.psi_inverse(ring, l, &px)? == ix, show);
            let a = match px.coefficient(&vx) {
                c if rng.gen_bool(0.5) && l.lift(&c).is_some() => c,
                _ => ResidueElement::rational(small_rational(rng)),
            };
            let term = TwistedRingElement::term(a, vx.clone());
            let back = gr.psi_inverse(ring, l, &term)?;
            round.check(gr.psi(ring, &back)? == term, show);
        }
    }
    wd.detail = format!("{eq_true} pairs with equal initial forms, {eq_false} with different ones");
    add.detail = format!("{sum_same} sums of the same value, {sum_higher} sums of higher value");
    Ok(vec![wd, add, mul, values, degree, round])
}

/// `ε(α) ε(β) = ε(α + β)` as elements of `K` for all `α, β` with coordinates
/// in `[-r, r]` over the generators of `eps`'s domain.
pub fn multiplicativity_exhaustive(eps: &ChoiceFunction, r: i64) -> Result<SuiteOutcome, TwistError> {
    let gens = &eps.domain().generators;
    let k = gens.len();
    let combos = |r: i64| -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for _ in 0..k {
            out = out
                .into_iter()
                .flat_map(|v: Vec<i64>| {
                    (-r..=r).map(move |c| {
                        let mut w = v.clone();
                        w.push(c);
                        w
                    })
                })
                .collect();
        }
        out
    };
    let dim = eps.valuation().dim();
    let elem = |c: &[i64]| {
        c.iter()
            .zip(gens)
            .fold(GroupElement::zero(dim), |acc, (n, g)| &acc + &g.times(*n))
    };
    let wide = combos(2 * r);
    let cache: HashMap<GroupElement, RationalFunction> = wide
        .par_iter()
        .map(|c| {
            let g = elem(c);
            eps.eval(&g).map(|f| (g, f))
        })
        .collect::<Result<_, _>>()?;
    let small: Vec<GroupElement> = combos(r).iter().map(|c| elem(c)).collect();
    let failures: Vec<(usize, usize)> = (0..small.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let a = &small[i];
            let fa = &cache[a];
            let small = &small;
            let cache = &cache;
            (0..small.len()).filter_map(move |j| {
                let b = &small[j];
                let prod = fa * &cache[b];
                (prod != cache[&(a + b)]).then_some((i, j))
            })
        })
        .collect();
    let mut out = SuiteOutcome::new("free.multiplicative");
    out.checks = small.len() * small.len();
    out.failures = failures.len();
    out.first_failure = failures.first().map(|(i, j)| format!("({}, {})", small[*i], small[*j]));
    out.detail = format!("coefficients in [-{r}, {r}] over {k} generators");
    Ok(out)
}

/// For random `g`: `nth_root(g^n, n) = ±g` and `deg(g^n) = n deg(g)`, for
/// `n ∈ {2, 3, 5}`; the sign is only determined for odd `n`.
pub fn nth_root_suite(rng: &mut impl Rng, count: usize) -> Vec<SuiteOutcome> {
    let mut roots = SuiteOutcome::new("mpoly.nth_root");
    let mut degs = SuiteOutcome::new("mpoly.degree_of_power");
    for _ in 0..count {
        let g = loop {
            let mut p = Polynomial::zero();
            for _ in 0..rng.gen_range(1..=4) {
                let e: Vec<u32> = (0..3).map(|_| rng.gen_range(0..=3)).collect();
                p.add_term(small_rational(rng), Monomial::from_dense(&e));
            }
            if !p.is_zero() {
                break p;
            }
        };
        for n in [2u32, 3, 5] {
            let f = g.pow(n);
            let show = || format!("g={g:?} n={n}");
            let ok = match nth_root(&f, n) {
                Some(r) => r == g || (n % 2 == 0 && r == -&g),
                None => false,
            };
            roots.check(ok, show);
            degs.check(f.total_degree() == n as u64 * g.total_degree(), show);
            let h = Polynomial::term(BigRational::one(), Monomial::from_dense(&[0, 1, 1]));
            let rf = RationalFunction::new(g.clone(), &h + &Polynomial::from_int(1)).expect("nonzero");
            let rn = rf.pow(n);
            degs.check(
                rn.total_degree().ok() == rf.total_degree().ok().map(|d| d * n as u64),
                || format!("rf={rf:?} n={n}"),
            );
        }
    }
    vec![roots, degs]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_vectors_count() {
        assert_eq!(exponent_vectors(3, 6).len(), 84);
        assert_eq!(exponent_vectors(1, 4).len(), 5);
    }

    #[test]
    fn random_tables_are_valid() {
        let mut r = rng(3);
        for _ in 0..20 {
            let eps = random_table_choice(&mut r, TableOptions { rational_weights: true, unit_constants: false, height: 6 });
            let ring = TwistedRing::new(eps);
            let out = ring_axioms(&ring, &mut r, 6, 3).unwrap();
            assert!(out.iter().all(|o| o.passed()), "{:?}", out);
        }
    }

    #[test]
    fn outcome_lines() {
        let mut o = SuiteOutcome::new("demo");
        o.check(true, || "x".into());
        o.check(false, || "bad".into());
        assert_eq!(o.line(), "FAIL demo: 2 checks, 1 failures; first failure: bad");
        assert_eq!(SuiteOutcome::skipped("s", "why").status(), "SKIPPED");
    }
}
