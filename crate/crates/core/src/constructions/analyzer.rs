use std::collections::BTreeMap;
use std::sync::Arc;

use num::{BigRational, Integer};
use rayon::prelude::*;

use crate::mpoly::{rf_nth_root, Monomial, Polynomial, RationalFunction, VarNames};
use crate::ordgroup::GroupElement;
use crate::report::Report;
use crate::twist::{ChoiceFunction, Domain, DomainKind, TwistError};
use crate::valuation::MonomialValuation;

use super::{forced_power_check, make_initial, ConstructionError, PowerCheck};

/// The valuation `v(x_p) = 1/p` on one variable `x_p` per prime.
pub fn prime_valuation(primes: &[u32]) -> Result<(Arc<MonomialValuation>, VarNames), ConstructionError> {
    let weights = primes.iter().map(|&p| GroupElement::scalar(1, p as i64)).collect();
    let v = MonomialValuation::new(weights)?;
    let names = VarNames::named(primes.iter().map(|p| format!("x{p}")));
    Ok((Arc::new(v), names))
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn check_primes(primes: &[u32]) -> Result<(), ConstructionError> {
    for (i, &p) in primes.iter().enumerate() {
        if !is_prime(p) {
            return Err(ConstructionError::MalformedCandidate(format!("{p} is not a prime")));
        }
        if primes[..i].contains(&p) {
            return Err(ConstructionError::MalformedCandidate(format!("prime {p} listed twice")));
        }
    }
    Ok(())
}

/// A candidate table for `ε(1/p)`, `p ∈ P`, and `ε(1)`.
#[derive(Debug, Clone)]
pub struct CounterexampleInput {
    pub primes: Vec<u32>,
    pub candidates: BTreeMap<GroupElement, RationalFunction>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcedVerdict {
    pub p: u32,
    pub check: PowerCheck,
    /// Residue of `ε(1/p)^p / ε(1)` is one; this is the product of the
    /// twistings `ε̄(k/p, 1/p)` for `k = 1..p-1` for any extension of the table.
    pub twisting_product_is_one: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootVerdict {
    pub p: u32,
    pub root: Option<RationalFunction>,
    pub degree_divisible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Some forced identity `ε(1) = ε(1/p)^p` fails.
    Conflict { p: u32, lhs: Polynomial, rhs: Polynomial },
    /// All forced identities hold; `holds` says whether `lcm(P)` divides the degree.
    Divisibility { lcm: u64, degree: u64, holds: bool },
    Vacuous,
}

#[derive(Debug, Clone)]
pub struct AnalyzerReport {
    pub primes: Vec<u32>,
    pub names: VarNames,
    pub candidates: Vec<(GroupElement, RationalFunction)>,
    pub initial: Vec<(GroupElement, RationalFunction)>,
    pub forced: Vec<ForcedVerdict>,
    pub roots: Vec<RootVerdict>,
    pub degree: Option<u64>,
    /// The degree was computed on a representative that may still share a
    /// non-monomial factor between numerator and denominator.
    pub degree_may_drop: bool,
    pub verdict: Verdict,
}

impl AnalyzerReport {
    pub fn is_conflict(&self) -> bool {
        matches!(self.verdict, Verdict::Conflict { .. })
    }

    pub fn to_report(&self) -> Report {
        let n = &self.names;
        let mut r = Report::new();
        let plist = self.primes.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
        r.line(format!("primes: {{{plist}}}"));
        r.record("primes", &plist);
        for (g, f) in &self.candidates {
            r.line(format!("candidate eps({g}) = {}", n.rf(f)));
            r.record(format!("candidate.{g}"), n.rf(f));
        }
        for (g, f) in &self.initial {
            r.line(format!("initial eps'({g}) = {}", n.rf(f)));
            r.record(format!("initial.{g}"), n.rf(f));
        }
        for fv in &self.forced {
            let c = &fv.check;
            let rel = if c.consistent { "=" } else { "!=" };
            r.line(format!(
                "forced p={}: P^{}*Q' = {}  {rel}  Q^{}*P' = {}  [{}]",
                fv.p,
                fv.p,
                n.poly(&c.lhs),
                fv.p,
                n.poly(&c.rhs),
                if c.consistent { "consistent" } else { "inconsistent" }
            ));
            r.record(format!("forced.{}", fv.p), if c.consistent { "consistent" } else { "inconsistent" });
            r.record(format!("forced.{}.twisting_product_one", fv.p), fv.twisting_product_is_one);
        }
        if let Some(d) = self.degree {
            r.both("deg_eps1", d);
            if self.degree_may_drop {
                r.line("note: eps(1) may share a non-monomial factor; the degree is an upper bound");
            }
            r.record("deg_eps1_exact", !self.degree_may_drop);
        }
        for rv in &self.roots {
            let root = rv.root.as_ref().map_or("none".to_string(), |a| n.rf(a).to_string());
            r.line(format!("root p={}: {root}; p divides deg: {}", rv.p, rv.degree_divisible));
            r.record(format!("root.{}", rv.p), root);
            r.record(format!("divides.{}", rv.p), rv.degree_divisible);
        }
        match &self.verdict {
            Verdict::Conflict { p, lhs, rhs } => {
                r.line(format!("verdict: CONFLICT at p={p}: {} != {}", n.poly(lhs), n.poly(rhs)));
                r.record("verdict", "CONFLICT");
                r.record("conflict.p", p);
                r.record("conflict.lhs", n.poly(lhs));
                r.record("conflict.rhs", n.poly(rhs));
            }
            Verdict::Divisibility { lcm, degree, holds } => {
                r.line(format!(
                    "verdict: DIVISIBILITY lcm={lcm} deg={degree} {}",
                    if *holds { "holds" } else { "FAILS" }
                ));
                r.record("verdict", "DIVISIBILITY");
                r.record("lcm", lcm);
                r.record("divisibility_holds", holds);
            }
            Verdict::Vacuous => {
                r.line("verdict: PASS (empty prime set, nothing to check)");
                r.record("verdict", "VACUOUS");
            }
        }
        r.line(
            "narrative (not machine-checked): if the identities held for every prime at once, \
             every prime would divide deg(eps(1)), so eps(1) would be a nonzero constant of value 0 \
             instead of 1; no choice function on the whole group can then have trivial twisting.",
        );
        r
    }
}

fn gamma_for(p: u32) -> GroupElement {
    GroupElement::scalar(1, p as i64)
}

/// Runs the lemma chain on a candidate table.
///
/// The table is reduced to initial fractions, each identity
/// `ε(1) = ε(1/p)^p` is checked as a polynomial identity, and the degree of
/// `ε(1)` is tested for divisibility by every `p`.
pub fn analyze_counterexample(input: &CounterexampleInput) -> Result<AnalyzerReport, ConstructionError> {
    check_primes(&input.primes)?;
    let primes = input.primes.clone();
    let names = if primes.is_empty() { VarNames::named(Vec::<String>::new()) } else { prime_valuation(&primes)?.1 };
    let candidates: Vec<_> = input.candidates.iter().map(|(g, f)| (g.clone(), f.clone())).collect();
    if primes.is_empty() {
        return Ok(AnalyzerReport {
            primes,
            names,
            candidates,
            initial: Vec::new(),
            forced: Vec::new(),
            roots: Vec::new(),
            degree: None,
            degree_may_drop: false,
            verdict: Verdict::Vacuous,
        });
    }
    let (v, _) = prime_valuation(&primes)?;
    let one = GroupElement::scalar(1, 1);
    let mut expected: Vec<GroupElement> = primes.iter().map(|&p| gamma_for(p)).collect();
    expected.push(one.clone());
    for g in input.candidates.keys() {
        if !expected.contains(g) {
            return Err(ConstructionError::MalformedCandidate(format!("unexpected entry for {g}")));
        }
    }
    for g in &expected {
        if !input.candidates.contains_key(g) {
            return Err(ConstructionError::MalformedCandidate(format!("missing entry for {g}")));
        }
    }
    let domain = Domain { generators: primes.iter().map(|&p| gamma_for(p)).collect(), kind: DomainKind::Semigroup };
    let eps = ChoiceFunction::from_table(v.clone(), domain, input.candidates.clone()).map_err(|e| match e {
        TwistError::WrongValue { gamma, got } => {
            ConstructionError::MalformedCandidate(format!("eps({gamma}) has value {got}"))
        }
        TwistError::ZeroValue(g) => ConstructionError::MalformedCandidate(format!("eps({g}) is zero")),
        other => other.into(),
    })?;
    let init = make_initial(&eps)?;
    let initial: Vec<_> = init.table().expect("table").iter().filter(|(g, _)| !g.is_zero()).map(|(g, f)| (g.clone(), f.clone())).collect();

    let e1 = init.eval(&one)?;
    let mut forced = Vec::new();
    for &p in &primes {
        let check = forced_power_check(&init, &gamma_for(p), p)?;
        let ratio = &init.eval(&gamma_for(p))?.pow(p) / &e1;
        let twisting_product_is_one = v.residue(&ratio)?.is_one();
        forced.push(ForcedVerdict { p, check, twisting_product_is_one });
    }
    let degree = e1.total_degree()?;
    let roots = primes
        .iter()
        .map(|&p| RootVerdict { p, root: rf_nth_root(&e1, p), degree_divisible: degree % p as u64 == 0 })
        .collect();
    let verdict = match forced.iter().find(|f| !f.check.consistent) {
        Some(f) => Verdict::Conflict { p: f.p, lhs: f.check.lhs.clone(), rhs: f.check.rhs.clone() },
        None => {
            let lcm = primes.iter().fold(1u64, |acc, &p| acc.lcm(&(p as u64)));
            Verdict::Divisibility { lcm, degree, holds: degree % lcm == 0 }
        }
    };
    Ok(AnalyzerReport {
        primes,
        names,
        candidates,
        initial,
        forced,
        roots,
        degree: Some(degree),
        degree_may_drop: e1.may_have_hidden_common_factor(),
        verdict,
    })
}

/// Rational constant times monomial quotient `Π x_p^{e_p}` with value
/// `target` and degree `max(Σ e_p^+, Σ e_p^-) ≤ degree_bound`.
pub fn candidate_pool(
    primes: &[u32],
    target: &GroupElement,
    degree_bound: u32,
    constants: &[BigRational],
) -> Vec<RationalFunction> {
    let b = degree_bound as i64;
    let mut exps = vec![0i64; primes.len()];
    let mut out = Vec::new();
    fn rec(
        i: usize,
        primes: &[u32],
        b: i64,
        exps: &mut Vec<i64>,
        target: &GroupElement,
        constants: &[BigRational],
        out: &mut Vec<RationalFunction>,
    ) {
        let pos: i64 = exps[..i].iter().filter(|e| **e > 0).sum();
        let neg: i64 = -exps[..i].iter().filter(|e| **e < 0).sum::<i64>();
        if pos > b || neg > b {
            return;
        }
        if i == primes.len() {
            let value = exps
                .iter()
                .zip(primes)
                .fold(GroupElement::zero(1), |acc, (&e, &p)| &acc + &GroupElement::scalar(e, p as i64));
            if value != *target {
                return;
            }
            let num = Monomial::from_pairs(exps.iter().enumerate().filter(|(_, e)| **e > 0).map(|(j, e)| (j, *e as u32)));
            let den = Monomial::from_pairs(exps.iter().enumerate().filter(|(_, e)| **e < 0).map(|(j, e)| (j, (-*e) as u32)));
            for c in constants {
                let f = RationalFunction::new(Polynomial::term(c.clone(), num.clone()), Polynomial::term(BigRational::from_integer(1.into()), den.clone()))
                    .expect("monomial denominator");
                out.push(f);
            }
            return;
        }
        for e in -b..=b {
            exps[i] = e;
            rec(i + 1, primes, b, exps, target, constants, out);
        }
        exps[i] = 0;
    }
    rec(0, primes, b, &mut exps, target, constants, &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistentTable {
    pub entries: Vec<(GroupElement, RationalFunction)>,
    pub degree: u64,
}

#[derive(Debug, Clone)]
pub struct EnumerationReport {
    pub primes: Vec<u32>,
    pub degree_bound: u32,
    pub pool_sizes: Vec<(GroupElement, usize)>,
    /// Size of the full product of the pools.
    pub tables_covered: u128,
    pub consistent: Vec<ConsistentTable>,
    pub lcm: u64,
}

impl EnumerationReport {
    pub fn all_divisible(&self) -> bool {
        self.consistent.iter().all(|t| t.degree % self.lcm == 0)
    }

    pub fn to_report(&self, names: &VarNames) -> Report {
        let mut r = Report::new();
        r.both("enumeration.degree_bound", self.degree_bound);
        for (g, n) in &self.pool_sizes {
            r.both(&format!("enumeration.pool.{g}"), n);
        }
        r.both("enumeration.tables", self.tables_covered);
        r.both("enumeration.consistent", self.consistent.len());
        for t in &self.consistent {
            let body = t
                .entries
                .iter()
                .map(|(g, f)| format!("eps({g})={}", names.rf(f)))
                .collect::<Vec<_>>()
                .join(" ");
            r.line(format!("  consistent deg={} {body}", t.degree));
        }
        let degrees: std::collections::BTreeSet<u64> = self.consistent.iter().map(|t| t.degree).collect();
        r.both(
            "enumeration.degrees",
            degrees.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(","),
        );
        r.both("enumeration.all_divisible", self.all_divisible());
        r
    }
}

/// Every table drawn from the monomial candidate pools satisfying all
/// identities `ε(1) = ε(1/p)^p`.
///
/// Consistency splits over `p` once `ε(1)` is fixed, so the search runs over
/// `ε(1)` in parallel and matches each `ε(1/p)` pool independently; results
/// keep the pool order.
pub fn enumerate_monomial_tables(
    primes: &[u32],
    degree_bound: u32,
    constants: &[BigRational],
) -> Result<EnumerationReport, ConstructionError> {
    check_primes(primes)?;
    let one = GroupElement::scalar(1, 1);
    let top = candidate_pool(primes, &one, degree_bound, constants);
    let pools: Vec<(u32, Vec<RationalFunction>, Vec<RationalFunction>)> = primes
        .iter()
        .map(|&p| {
            let pool = candidate_pool(primes, &gamma_for(p), degree_bound, constants);
            let powers = pool.iter().map(|f| f.pow(p)).collect();
            (p, pool, powers)
        })
        .collect();
    let mut pool_sizes: Vec<(GroupElement, usize)> = pools.iter().map(|(p, pool, _)| (gamma_for(*p), pool.len())).collect();
    pool_sizes.push((one.clone(), top.len()));
    let tables_covered = pool_sizes.iter().fold(1u128, |acc, (_, n)| acc * *n as u128);

    let per_top: Vec<Vec<ConsistentTable>> = top
        .par_iter()
        .map(|e1| {
            let matches: Vec<Vec<&RationalFunction>> = pools
                .iter()
                .map(|(_, pool, powers)| pool.iter().zip(powers).filter(|(_, pw)| *pw == e1).map(|(f, _)| f).collect())
                .collect();
            let degree = e1.total_degree().expect("nonzero candidate");
            let mut tables = vec![Vec::new()];
            for (i, m) in matches.iter().enumerate() {
                let mut next = Vec::new();
                for t in &tables {
                    for f in m {
                        let mut t2: Vec<(GroupElement, RationalFunction)> = Vec::clone(t);
                        t2.push((gamma_for(pools[i].0), (*f).clone()));
                        next.push(t2);
                    }
                }
                tables = next;
            }
            tables
                .into_iter()
                .map(|mut entries| {
                    entries.push((one.clone(), e1.clone()));
                    ConsistentTable { entries, degree }
                })
                .collect()
        })
        .collect();
    let lcm = primes.iter().fold(1u64, |acc, &p| acc.lcm(&(p as u64)));
    Ok(EnumerationReport {
        primes: primes.to_vec(),
        degree_bound,
        pool_sizes,
        tables_covered,
        consistent: per_top.into_iter().flatten().collect(),
        lcm,
    })
}

/// Constants used when a setup does not list its own.
pub fn default_constants() -> Vec<BigRational> {
    [(1, 1), (-1, 1), (2, 1), (1, 2)]
        .iter()
        .map(|&(n, d)| BigRational::new(n.into(), d.into()))
        .collect()
}
