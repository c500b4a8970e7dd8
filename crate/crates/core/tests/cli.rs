use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gradval::setup::SetupFile;

fn setup(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../setups").join(name)
}

fn run(args: &[&str], file: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gradval"))
        .args(args)
        .arg("--setup")
        .arg(file)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn record<'a>(out: &'a str, key: &str) -> Option<&'a str> {
    out.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix('='))
}

#[test]
fn passing_setups_exit_zero() {
    for (cmd, name) in [
        ("ring-axioms", "free_z2.toml"),
        ("iso-verify", "free_z2.toml"),
        ("ring-axioms", "twisted_2x.toml"),
        ("iso-verify", "twisted_2x.toml"),
        ("iso-verify", "prime_field.toml"),
        ("build", "extend_chain.toml"),
        ("ring-axioms", "extend_chain.toml"),
        ("counterexample", "counterexample_consistent.toml"),
        ("counterexample", "counterexample_enumerate.toml"),
        ("counterexample", "counterexample_empty.toml"),
    ] {
        let o = run(&[cmd, "--machine"], &setup(name));
        assert_eq!(o.status.code(), Some(0), "{cmd} {name}: {}", stdout(&o));
    }
}

#[test]
fn twisted_table_is_reported_nontrivial() {
    let o = run(&["ring-axioms", "--machine"], &setup("twisted_2x.toml"));
    let out = stdout(&o);
    assert_eq!(record(&out, "suite.twist.triviality_agreement"), Some("PASS"));
    assert_eq!(record(&out, "verdict"), Some("PASS"));
    let human = stdout(&run(&["ring-axioms"], &setup("twisted_2x.toml")));
    assert!(human.contains("trivial=false"), "{human}");
}

#[test]
fn prime_field_skips_surjectivity() {
    let out = stdout(&run(&["iso-verify", "--machine"], &setup("prime_field.toml")));
    assert_eq!(record(&out, "suite.psi.round_trip"), Some("SKIPPED"));
    assert_eq!(record(&out, "suite.psi.well_defined_injective"), Some("PASS"));
}

#[test]
fn conflict_exits_one() {
    let o = run(&["counterexample", "--machine"], &setup("counterexample_conflict.toml"));
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("verdict=CONFLICT")), "{out}");
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(run(&["ring-axioms"], &setup("bad_value.toml")).status.code(), Some(2));
    assert_eq!(run(&["ring-axioms"], Path::new("/nonexistent/setup.toml")).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("unknown_key.toml", "[valuation]\nvariables = [\"x\"]\ncolour = 1\n[valuation.weights]\nx = \"1\"\n"),
        ("bad_weight.toml", "[valuation]\nvariables = [\"x\"]\n[valuation.weights]\nx = \"1/0\"\n"),
        ("no_choice.toml", "[valuation]\nvariables = [\"x\"]\n[valuation.weights]\nx = \"1\"\n"),
        ("syntax.toml", "[valuation\n"),
    ];
    for (name, text) in cases {
        let path = dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        let o = run(&["build"], &path);
        assert_eq!(o.status.code(), Some(2), "{name}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
    let o = Command::new(env!("CARGO_BIN_EXE_gradval")).arg("no-such-command").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_root_exits_three() {
    let o = run(&["build", "--machine"], &setup("root_not_found.toml"));
    assert_eq!(o.status.code(), Some(3));
    let out = stdout(&o);
    assert_eq!(record(&out, "verdict"), Some("CONSTRUCTION_FAILURE"));
    assert!(record(&out, "reason").unwrap().contains("(x)/(y^2)"), "{out}");
}

#[test]
fn same_seed_gives_identical_output() {
    for (cmd, name) in [("ring-axioms", "twisted_2x.toml"), ("iso-verify", "free_z2.toml"), ("counterexample", "counterexample_enumerate.toml")] {
        let a = run(&[cmd, "--seed", "17"], &setup(name));
        let b = run(&[cmd, "--seed", "17"], &setup(name));
        assert_eq!(a.stdout, b.stdout, "{cmd} {name}");
        assert_eq!(a.status.code(), b.status.code());
    }
    let a = stdout(&run(&["ring-axioms", "--machine", "--seed", "1"], &setup("twisted_2x.toml")));
    assert_eq!(record(&a, "seed"), Some("1"));
}

#[test]
fn build_dumps_chain() {
    let out = stdout(&run(&["build", "--machine", "--bound", "4"], &setup("extend_chain.toml")));
    assert_eq!(record(&out, "step.1.root"), Some("(8*z^3)/(y)"));
    assert_eq!(record(&out, "step.2.n0"), Some("3"));
    assert_eq!(record(&out, "step.2.root"), Some("2"));
    assert_eq!(record(&out, "step.2.restriction_agrees"), Some("true"));
    assert_eq!(record(&out, "certified_trivial"), Some("true"));
    assert_eq!(record(&out, "eps.1/6"), Some("2*z"));
}

#[test]
fn setups_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for entry in std::fs::read_dir(setup("")).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let parsed = SetupFile::parse(&text).unwrap();
        let printed = parsed.print();
        assert_eq!(SetupFile::parse(&printed).unwrap(), parsed, "{}", path.display());
        if path.file_name().unwrap() == "counterexample_enumerate.toml" {
            let copy = dir.path().join("copy.toml");
            std::fs::write(&copy, &printed).unwrap();
            let a = run(&["counterexample"], &path);
            let b = run(&["counterexample"], &copy);
            assert_eq!(a.stdout, b.stdout);
        }
    }
}

#[test]
fn help_exits_zero() {
    let o = Command::new(env!("CARGO_BIN_EXE_gradval")).arg("--help").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("counterexample"));
}
