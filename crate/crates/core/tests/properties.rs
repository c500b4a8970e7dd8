use std::sync::Arc;

use gradval::constructions::{extend_choice, SubgroupWithChoice};
use gradval::mpoly::{nth_root, rf_nth_root};
use gradval::ordgroup::FgSubgroup;
use gradval::{GroupElement, Monomial, MonomialValuation, Polynomial, RationalFunction, VarNames};
use num::{BigInt, BigRational};
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn poly(vars: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((coeff(), prop::collection::vec(0..=max_exp, vars)), 0..=max_terms)
        .prop_map(|terms| Polynomial::from_terms(terms.into_iter().map(|(c, e)| (c, Monomial::from_dense(&e)))))
}

fn nonzero_poly(vars: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    poly(vars, max_exp, max_terms).prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfun() -> impl Strategy<Value = RationalFunction> {
    (poly(2, 3, 3), nonzero_poly(2, 2, 2)).prop_map(|(n, d)| RationalFunction::new(n, d).unwrap())
}

fn nonzero_ratfun() -> impl Strategy<Value = RationalFunction> {
    (nonzero_poly(2, 3, 3), nonzero_poly(2, 2, 2)).prop_map(|(n, d)| RationalFunction::new(n, d).unwrap())
}

fn elem(dim: usize) -> impl Strategy<Value = GroupElement> {
    prop::collection::vec((-8i64..=8, 1i64..=6), dim).prop_map(|cs| {
        GroupElement::new(cs.into_iter().map(|(n, d)| BigRational::new(n.into(), d.into())).collect()).unwrap()
    })
}

/// Weights on `x, y` in `Q^2`: lex order, possibly rationally dependent.
fn valuation() -> impl Strategy<Value = MonomialValuation> {
    prop::collection::vec(elem(2), 2).prop_map(|w| MonomialValuation::new(w).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn polynomial_ring_laws(a in poly(3, 3, 4), b in poly(3, 3, 4), c in poly(3, 2, 3)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &Polynomial::one(), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn degree_and_powers(a in nonzero_poly(3, 3, 4), b in nonzero_poly(3, 3, 4), n in 1u32..=4) {
        prop_assert_eq!((&a * &b).total_degree(), a.total_degree() + b.total_degree());
        prop_assert_eq!(a.pow(n).total_degree(), n as u64 * a.total_degree());
        let mut direct = Polynomial::one();
        for _ in 0..n {
            direct = &direct * &a;
        }
        prop_assert_eq!(a.pow(n), direct);
    }

    #[test]
    fn rational_function_equality(f in ratfun(), g in ratfun(), k in nonzero_poly(2, 2, 2)) {
        // rescaling numerator and denominator by k gives an equal element
        let scaled = RationalFunction::new(f.num() * &k, f.den() * &k).unwrap();
        prop_assert_eq!(&scaled, &f);
        prop_assert_eq!(&scaled + &g, &f + &g);
        prop_assert_eq!(&scaled * &g, &f * &g);
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&(&f - &g) + &g, f.clone());
    }

    #[test]
    fn rational_function_inverse(f in nonzero_ratfun(), g in nonzero_ratfun()) {
        prop_assert_eq!(&f * &f.inv().unwrap(), RationalFunction::one());
        prop_assert_eq!(&(&f / &g) * &g, f.clone());
        prop_assert_eq!(f.powi(-2).unwrap(), f.pow(2).inv().unwrap());
    }

    #[test]
    fn text_round_trip(f in ratfun()) {
        let names = VarNames::named(["x", "y"]);
        let text = names.rf(&f).to_string();
        prop_assert_eq!(names.parse_rf(&text).unwrap(), f);
    }

    #[test]
    fn valuation_axioms(v in valuation(), f in nonzero_ratfun(), g in nonzero_ratfun()) {
        let (vf, vg) = (v.value(&f).unwrap(), v.value(&g).unwrap());
        prop_assert_eq!(v.value(&(&f * &g)).unwrap(), &vf + &vg);
        prop_assert_eq!(v.value(&f.inv().unwrap()).unwrap(), -&vf);
        let s = &f + &g;
        if !s.is_zero() {
            let vs = v.value(&s).unwrap();
            prop_assert!(vs >= vf.clone().min(vg.clone()));
            if vf != vg {
                prop_assert_eq!(vs, vf.min(vg));
            }
        }
    }

    #[test]
    fn initial_forms(v in valuation(), p in nonzero_poly(2, 3, 4), q in nonzero_poly(2, 3, 4), c in coeff()) {
        let ip = |x: &Polynomial| v.initial_part(x).unwrap();
        prop_assert_eq!(ip(&(&p * &q)), &ip(&p) * &ip(&q));
        let (fp, fq) = (RationalFunction::from(p.clone()), RationalFunction::from(q.clone()));
        prop_assert_eq!(v.in_eq(&fp, &fq).unwrap(), ip(&p) == ip(&q));
        // adding higher-value terms keeps the initial form
        let bumped = &p + &(&p * &Polynomial::term(c, Monomial::from_dense(&[1, 1])));
        let higher = v.monomial_value(&Monomial::from_dense(&[1, 1])).unwrap() > v.zero_value();
        if higher {
            prop_assert!(v.in_eq(&fp, &RationalFunction::from(bumped)).unwrap());
        }
    }

    #[test]
    fn residues_multiply(v in valuation(), f in nonzero_ratfun(), g in nonzero_ratfun()) {
        let vf = v.value(&f).unwrap();
        let vg = v.value(&g).unwrap();
        // residue(f / g) = 1 exactly when f and g have the same initial form
        let unit = &(&f * &g) / &(&g * &f);
        prop_assert!(v.residue(&unit).unwrap().is_one());
        if vf == vg {
            let r = v.residue(&(&f / &g)).unwrap();
            prop_assert_eq!(r.is_one(), v.in_eq(&f, &g).unwrap());
        }
    }

    #[test]
    fn order_is_translation_invariant(a in elem(3), b in elem(3), c in elem(3)) {
        prop_assert_eq!(a.cmp(&b), (&a + &c).cmp(&(&b + &c)));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(a.cmp(&b), (-&b).cmp(&(-&a)));
    }

    #[test]
    fn subgroup_decomposition(gens in prop::collection::vec(elem(2), 1..=3), coeffs in prop::collection::vec(-5i64..=5, 3)) {
        let h = FgSubgroup::new(2, gens.clone()).unwrap();
        let g = gens.iter().zip(&coeffs).fold(GroupElement::zero(2), |acc, (x, c)| &acc + &x.times(*c));
        prop_assert!(h.contains(&g));
        let d = h.decompose(&g).unwrap();
        prop_assert_eq!(h.recombine(&d), g.clone());
        if h.is_free_basis() {
            let want: Vec<BigInt> = coeffs[..gens.len()].iter().map(|&c| c.into()).collect();
            prop_assert_eq!(d, want);
        }
    }

    #[test]
    fn minimal_multiple(gens in prop::collection::vec(elem(1), 1..=2), g in elem(1)) {
        let h = FgSubgroup::new(1, gens).unwrap();
        match h.order_modulo(&g) {
            Some(n) => {
                prop_assert!(n >= BigInt::from(1));
                prop_assert!(h.contains(&g.scale(&n)));
                if let Ok(small) = u64::try_from(&n) {
                    for k in 1..small.min(200) {
                        prop_assert!(!h.contains(&g.times(k as i64)));
                    }
                    if small > 1 {
                        prop_assert_eq!(h.min_multiple(&g, 10_000).unwrap().is_some(), small <= 10_000);
                    }
                }
            }
            None => prop_assert!(!h.in_rational_span(&g)),
        }
    }

    #[test]
    fn roots_of_powers(g in nonzero_poly(3, 3, 3), n in prop::sample::select(vec![2u32, 3, 5])) {
        let g = if n % 2 == 0 && g.has_negative_leading_coefficient() { -&g } else { g };
        let f = g.pow(n);
        prop_assert_eq!(nth_root(&f, n), Some(g.clone()));
        let shifted = &f + &Polynomial::from_int(3);
        if let Some(r) = nth_root(&shifted, n) {
            prop_assert_eq!(r.pow(n), shifted);
        }
    }

    #[test]
    fn rational_roots(f in nonzero_ratfun(), n in 2u32..=3) {
        let p = f.pow(n);
        if let Some(r) = rf_nth_root(&p, n) {
            prop_assert_eq!(r.pow(n), p);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// v(z) = 1/(6k) and ε = (cz)^6 on ⟨1/k⟩: adjoining 1/(2k) and then
    /// 1/(6k) gives ε(a/(6k)) = (cz)^a, keeps earlier values, and yields
    /// canonical forms that recombine.
    #[test]
    fn extension_round_trip(c in 1i64..=3, k in prop::sample::select(vec![1i64, 7]), a in -30i64..=30, b in -30i64..=30) {
        let v = Arc::new(MonomialValuation::new(vec![GroupElement::scalar(1, 6 * k)]).unwrap());
        let n = VarNames::named(["z"]);
        let z = n.parse_rf("z").unwrap();
        let cz = z.scale(&BigRational::from_integer(c.into()));
        let base = SubgroupWithChoice::cyclic(v.clone(), GroupElement::scalar(1, k), cz.pow(6)).unwrap();
        let half = extend_choice(&base, GroupElement::scalar(1, 2 * k), z.pow(3)).unwrap();
        let sixth = extend_choice(&half, GroupElement::scalar(1, 6 * k), z.clone()).unwrap();
        let rule = sixth.step.as_ref().unwrap().rule.clone();
        let g = GroupElement::scalar(a, 6 * k);
        let (alpha, m) = rule.canonical_form(&g).unwrap();
        prop_assert!(m >= BigInt::from(0) && m < BigInt::from(3));
        prop_assert!(half.subgroup.contains(&alpha));
        prop_assert_eq!(rule.recombine(&alpha, &m), g.clone());
        prop_assert_eq!(sixth.choice.eval(&g).unwrap(), cz.powi(a).unwrap());
        let h = GroupElement::scalar(b, 2 * k);
        prop_assert_eq!(half.choice.eval(&h).unwrap(), sixth.choice.eval(&h).unwrap());
        prop_assert!(rule.case_twisting(&g, &GroupElement::scalar(b, 6 * k)).unwrap().value.is_one());
    }
}
