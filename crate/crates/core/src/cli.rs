//! Command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical conflict is
//! found, 2 for unreadable or invalid input, 3 when a construction fails.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::constructions::{
    analyze_counterexample, enumerate_monomial_tables, extend_chain, ConstructionError, Verdict,
};
use crate::report::Report;
use crate::setup::Setup;
use crate::suites::{self, SuiteOutcome};
use crate::twist::{ChoiceFunction, TwistedRing};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CONFLICT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CONSTRUCTION: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "gradval", version, about = "Checks graded algebras of monomial valuations against twisted semigroup rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ring axioms and cocycle identity of the twisted multiplication.
    RingAxioms(CommonArgs),
    /// Properties of the map from the graded algebra to the twisted ring.
    IsoVerify(CommonArgs),
    /// Builds a choice function from a free basis or an extension chain and dumps it.
    Build(CommonArgs),
    /// Runs the analyzer on candidate tables over sums of 1/p Z.
    Counterexample(CommonArgs),
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Setup file (TOML).
    #[arg(long)]
    setup: PathBuf,
    /// Overrides the campaign seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the enumeration height.
    #[arg(long)]
    bound: Option<u32>,
    /// Print `key=value` records instead of the human report.
    #[arg(long)]
    machine: bool,
}

enum Failure {
    Input(String),
    Construction(String),
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::RootNotFound { .. }
            | ConstructionError::NotCertified
            | ConstructionError::OrderTooLarge(_) => Failure::Construction(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn construction_failure(e: ConstructionError, setup: &Setup) -> Failure {
    match e {
        ConstructionError::RootNotFound { gamma, n0, class } => Failure::Construction(format!(
            "no root of degree {n0} found for the residue class of {} while adjoining {gamma}",
            setup.names.rf(&class)
        )),
        other => other.into(),
    }
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

/// Parses `args` (including the program name) and runs one command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let (name, common) = match &cli.command {
        Command::RingAxioms(a) => ("ring-axioms", a),
        Command::IsoVerify(a) => ("iso-verify", a),
        Command::Build(a) => ("build", a),
        Command::Counterexample(a) => ("counterexample", a),
    };
    let result = load(common).and_then(|setup| {
        let mut report = Report::new();
        report.line(format!("command: {name}"));
        report.record("command", name);
        let code = match &cli.command {
            Command::RingAxioms(_) => ring_axioms(&setup, &mut report),
            Command::IsoVerify(_) => iso_verify(&setup, &mut report),
            Command::Build(_) => build(&setup, &mut report),
            Command::Counterexample(_) => counterexample(&setup, &mut report),
        }?;
        Ok((report, code))
    });
    match result {
        Ok((report, code)) => {
            let _ = out.write_all(report.render(common.machine).as_bytes());
            code
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
        Err(Failure::Construction(msg)) => {
            let _ = writeln!(err, "construction failed: {msg}");
            if common.machine {
                let _ = writeln!(out, "command={name}\nverdict=CONSTRUCTION_FAILURE\nreason={msg}");
            } else {
                let _ = writeln!(out, "command: {name}\nverdict: CONSTRUCTION FAILURE ({msg})");
            }
            EXIT_CONSTRUCTION
        }
    }
}

fn load(args: &CommonArgs) -> Result<Setup, Failure> {
    let text = std::fs::read_to_string(&args.setup)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", args.setup.display())))?;
    let mut setup = Setup::load(&text).map_err(input)?;
    if let Some(seed) = args.seed {
        setup.seed = seed;
    }
    if let Some(bound) = args.bound {
        setup.bound = bound;
    }
    Ok(setup)
}

/// The setup's choice function, or the end of its extension chain.
fn choice_of(setup: &Setup) -> Result<ChoiceFunction, Failure> {
    if let Some(c) = &setup.choice {
        return Ok(c.clone());
    }
    let Some(base) = setup.extension_base() else {
        return Err(Failure::Input("setup has neither [choice] nor [extend]".into()));
    };
    let base = base?;
    let plan = setup.extend.as_ref().expect("extension base implies plan");
    let chain = extend_chain(&base, &plan.steps).map_err(|e| construction_failure(e, setup))?;
    Ok(chain.last().map_or(base.choice, |s| s.choice.clone()))
}

fn push_outcomes(report: &mut Report, outcomes: &[SuiteOutcome]) -> bool {
    let mut ok = true;
    for o in outcomes {
        report.line(o.line());
        report.record(format!("suite.{}", o.name), o.status());
        report.record(format!("suite.{}.checks", o.name), o.checks);
        report.record(format!("suite.{}.failures", o.name), o.failures);
        ok &= o.passed();
    }
    ok
}

fn header(setup: &Setup, choice: &ChoiceFunction, report: &mut Report) {
    report.both("choice", choice.rule().describe());
    report.both("certified_trivial", choice.is_certified_trivial());
    report.both("seed", setup.seed);
    report.both("bound", setup.bound);
    report.both("samples", setup.samples);
}

fn verdict(report: &mut Report, ok: bool) -> i32 {
    report.both("verdict", if ok { "PASS" } else { "FAIL" });
    if ok {
        EXIT_PASS
    } else {
        EXIT_CONFLICT
    }
}

fn ring_axioms(setup: &Setup, report: &mut Report) -> Result<i32, Failure> {
    let choice = choice_of(setup)?;
    header(setup, &choice, report);
    let ring = TwistedRing::new(choice);
    let mut rng = suites::rng(setup.seed);
    let mut outcomes = suites::ring_axioms(&ring, &mut rng, setup.bound, setup.samples).map_err(input)?;
    outcomes.extend(suites::cocycle(&ring, &mut rng, setup.bound, setup.samples).map_err(input)?);
    outcomes.push(suites::triviality_agreement(&ring, setup.bound).map_err(input)?);
    let ok = push_outcomes(report, &outcomes);
    Ok(verdict(report, ok))
}

fn iso_verify(setup: &Setup, report: &mut Report) -> Result<i32, Failure> {
    let choice = choice_of(setup)?;
    header(setup, &choice, report);
    report.both("subring", &setup.file.valuation.subring);
    report.both("lifting", &setup.lifting);
    if setup.lifter.is_none() {
        report.line("note: no residue lifting declared, so surjectivity is not checked");
    }
    let gr = setup.graded();
    let ring = TwistedRing::new(choice);
    let mut rng = suites::rng(setup.seed);
    let deg = (setup.bound / 2).max(1);
    let mut outcomes =
        suites::psi_suite(&gr, &ring, setup.lifter.as_deref(), &mut rng, setup.samples, deg).map_err(input)?;
    outcomes.push(suites::triviality_agreement(&ring, setup.bound).map_err(input)?);
    let ok = push_outcomes(report, &outcomes);
    Ok(verdict(report, ok))
}

fn build(setup: &Setup, report: &mut Report) -> Result<i32, Failure> {
    let names = &setup.names;
    let height = setup.bound;
    if let Some(base) = setup.extension_base() {
        let base = base?;
        let plan = setup.extend.as_ref().expect("plan");
        report.both("base", format!("<{}> with eps = {}", plan.base_generator, names.rf(&plan.base_witness)));
        let chain = extend_chain(&base, &plan.steps).map_err(|e| construction_failure(e, setup))?;
        let mut ok = true;
        let mut prev = &base;
        for (i, s) in chain.iter().enumerate() {
            let step = s.step.as_ref().expect("extension step");
            let n0 = step.n0.map_or("none".to_string(), |n| n.to_string());
            let x0 = step.x0.as_ref().map_or("-".to_string(), |f| names.rf(f).to_string());
            let root = step.root.as_ref().map_or("-".to_string(), |f| names.rf(f).to_string());
            report.line(format!(
                "step {}: gamma={} x_gamma={} n0={n0} x0={x0} root={root}",
                i + 1,
                step.gamma,
                names.rf(&step.x_gamma)
            ));
            report.record(format!("step.{}.gamma", i + 1), &step.gamma);
            report.record(format!("step.{}.n0", i + 1), &n0);
            report.record(format!("step.{}.root", i + 1), &root);
            let mut agree = true;
            for (g, _) in prev.choice.sample_domain(height) {
                agree &= prev.choice.eval(&g).ok() == s.choice.eval(&g).ok();
            }
            report.both(&format!("step.{}.restriction_agrees", i + 1), agree);
            ok &= agree;
            prev = s;
        }
        let last = chain.last().unwrap_or(&base);
        report.both("certified_trivial", last.certified_trivial);
        let trivial = TwistedRing::new(last.choice.clone()).is_trivial(height).map_err(input)?;
        report.both("trivial_up_to_bound", trivial.holds);
        ok &= trivial.holds && last.certified_trivial;
        dump(report, &last.choice, setup, height);
        return Ok(verdict(report, ok));
    }
    let Some(choice) = &setup.choice else {
        return Err(Failure::Input("build needs [choice] or [extend]".into()));
    };
    report.both("choice", choice.rule().describe());
    report.both("certified_trivial", choice.is_certified_trivial());
    dump(report, choice, setup, height);
    Ok(verdict(report, true))
}

fn dump(report: &mut Report, choice: &ChoiceFunction, setup: &Setup, height: u32) {
    for (g, _) in choice.sample_domain(height) {
        let f = choice.eval(&g).expect("sampled inside domain");
        report.line(format!("eps({g}) = {}", setup.names.rf(&f)));
        report.record(format!("eps.{g}"), setup.names.rf(&f));
    }
}

fn counterexample(setup: &Setup, report: &mut Report) -> Result<i32, Failure> {
    let Some(plan) = &setup.counterexample else {
        return Err(Failure::Input("setup has no [counterexample] section".into()));
    };
    let analysis = analyze_counterexample(&plan.input)?;
    report.append(analysis.to_report());
    let mut code = match analysis.verdict {
        Verdict::Conflict { .. } | Verdict::Divisibility { holds: false, .. } => EXIT_CONFLICT,
        _ => EXIT_PASS,
    };
    if plan.enumerate && !plan.input.primes.is_empty() {
        let e = enumerate_monomial_tables(&plan.input.primes, plan.degree_bound, &plan.constants)?;
        report.append(e.to_report(&plan.names));
        if !e.all_divisible() {
            code = EXIT_CONFLICT;
        }
    }
    Ok(code)
}
