use std::path::{Path, PathBuf};
use std::process::Command;

use dgcat::field::Rational;
use dgcat_cli::bundle::{emit, parse_str, BundleError};
use dgcat_cli::fixtures::{a2_bundle, k1_bundle};
use dgcat_cli::format::SuiteDirective;
use dgcat_cli::report::{Report, Status};
use dgcat_cli::suites::{run_suite, SuiteError};

type Q = Rational;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn dgcat(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dgcat")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn report_of(args: &[&str], dir: &Path, name: &str) -> (i32, Report, String) {
    let path = dir.join(name);
    let mut all = vec!["--report", path.to_str().unwrap()];
    all.extend_from_slice(args);
    let (code, _, _) = dgcat(&all);
    let text = std::fs::read_to_string(&path).unwrap();
    (code, serde_json::from_str(&text).unwrap(), text)
}

/// The K1 fixture text with one substring replaced.
fn k1_text_with(from: &str, to: &str) -> String {
    let text = emit(&k1_bundle::<Q>());
    assert!(text.contains(from), "{from}");
    text.replacen(from, to, 1)
}

#[test]
fn k1_fixture_has_one_category() {
    let b = parse_str::<Q>(&std::fs::read_to_string(fixture("k1.json")).unwrap()).unwrap();
    assert_eq!(b.categories.len(), 1);
    assert_eq!(b.categories["K1"], dgcat::fixtures::k1());
}

#[test]
fn recollement_directive_is_parsed() {
    let b = parse_str::<Q>(&std::fs::read_to_string(fixture("a2.json")).unwrap()).unwrap();
    let d = &b.suites[0];
    assert_eq!(d.suite, "recollement");
    assert_eq!(d.subcategory.as_deref(), Some("B"));
    assert_eq!(b.subcategories["B"].category, "A2");
    assert_eq!(b.subcategories["B"].objects, ["b"]);
}

#[test]
fn parse_errors_are_distinct_and_located() {
    let syntax = parse_str::<Q>("{\n  \"format\": \n").unwrap_err();
    assert!(matches!(syntax, BundleError::Syntax { line: 3, .. }), "{syntax:?}");

    let degree = parse_str::<Q>(&k1_text_with("\"0\": [", "\"zero\": [")).unwrap_err();
    assert_eq!(degree.kind(), "unknown-degree");
    assert_eq!(degree.field(), "categories.K1.homs[0].basis");

    let shape = parse_str::<Q>(&k1_text_with(
        "\"★\": [\n          \"1\"\n        ]",
        "\"★\": [\"1\", \"0\"]",
    ))
    .unwrap_err();
    assert_eq!(shape.kind(), "dimension-mismatch");
    assert_eq!(shape.field(), "categories.K1.identities.★");

    let name = parse_str::<Q>(&k1_text_with("\"target\": \"★\"", "\"target\": \"☆\"")).unwrap_err();
    assert_eq!(
        name,
        BundleError::UnknownName {
            field: "categories.K1.homs[0].target".into(),
            name: "☆".into()
        }
    );

    let scalar = parse_str::<Q>(&k1_text_with(
        "\"★\": [\n          \"1\"",
        "\"★\": [\n          \"1/0\"",
    ))
    .unwrap_err();
    assert_eq!(scalar.kind(), "scalar");
    assert_eq!(scalar.field(), "categories.K1.identities.★[0]");

    let directive = parse_str::<Q>(&k1_text_with("\"category\": \"K1\"", "\"category\": \"K2\"")).unwrap_err();
    assert_eq!(directive.field(), "suites[0].category");
}

#[test]
fn invalid_module_tables_are_rejected() {
    let mut b = a2_bundle::<Q>();
    b.modules.insert(
        "half".to_string(),
        dgcat_cli::bundle::NamedModule {
            category: "A2".to_string(),
            module: dgcat::module::representable(&b.categories["A2"], 0),
        },
    );
    let text = emit(&b);
    // Drop the action of `u`, which breaks functoriality on the identity.
    let broken = text.replacen("\"morphism\": \"u\"", "\"morphism\": \"1_a\"", 1);
    let err = parse_str::<Q>(&broken).unwrap_err();
    assert!(err.field().starts_with("modules.half"), "{err}");
}

#[test]
fn unknown_suite_is_an_error() {
    let b = k1_bundle::<Q>();
    let d = SuiteDirective {
        suite: "nope".into(),
        ..SuiteDirective::default()
    };
    assert_eq!(
        run_suite(&b, &d, 0).unwrap_err(),
        SuiteError::UnknownSuite("nope".into())
    );
    let (code, _, err) = dgcat(&["suite", fixture("k1.json").to_str().unwrap(), "--name", "nope"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn exit_codes() {
    let k1 = fixture("k1.json");
    assert_eq!(dgcat(&["validate", k1.to_str().unwrap()]).0, 0);
    assert_eq!(dgcat(&["suite", k1.to_str().unwrap()]).0, 0);
    let (code, _, err) = dgcat(&["suite", fixture("d1_corrupted.json").to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("categories.D1") && err.contains("(ε, ε)"), "{err}");
    assert_eq!(dgcat(&["validate", "/no/such/file.json"]).0, 2);
    // Restriction along {a} ↪ A2 does not have a normalized unit: a check failure.
    let (code, out, _) = dgcat(&[
        "compat",
        fixture("matrix.json").to_str().unwrap(),
        "--bimodule",
        "diagA2",
        "--along",
        "incl",
    ]);
    assert_eq!(code, 1, "{out}");
}

#[test]
fn corrupted_bundle_is_refused_before_any_check() {
    let dir = tempfile::tempdir().unwrap();
    let (code, report, _) = report_of(
        &["suite", fixture("d1_corrupted.json").to_str().unwrap()],
        dir.path(),
        "r.json",
    );
    assert_eq!(code, 2);
    assert_eq!(report.status, Status::Invalid);
    assert!(report.checks.is_empty());
    let e = report.error.unwrap();
    assert_eq!((e.kind.as_str(), e.field.as_str()), ("validation", "categories.D1"));
}

#[test]
fn reports_are_deterministic_and_carry_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a2 = fixture("a2.json");
    let args = ["--seed", "9", "suite", a2.to_str().unwrap()];
    let (c1, r1, t1) = report_of(&args, dir.path(), "one.json");
    let (c2, _, t2) = report_of(&args, dir.path(), "two.json");
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(t1, t2);
    assert_eq!(r1.seed, 9);
    assert_eq!(r1.version, env!("CARGO_PKG_VERSION"));
    assert!(r1.timing_ms.is_none());
    assert!(r1.checks.iter().any(|c| c.name.contains("random(seed=9)")));
    let (_, timed, _) = report_of(&["--timing", "validate", a2.to_str().unwrap()], dir.path(), "t.json");
    assert!(timed.timing_ms.is_some());
}

#[test]
fn prime_field_runs_the_same_suites() {
    let (code, out, err) = dgcat(&[
        "--field",
        "fp:7",
        "--quiet",
        "suite",
        fixture("a2.json").to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}{err}");
    assert_eq!(
        dgcat(&["--field", "fp:9", "validate", fixture("k1.json").to_str().unwrap()]).0,
        2
    );
}

#[test]
fn subcommands_print_what_they_compute() {
    let kan = fixture("kan.json");
    let kan = kan.to_str().unwrap();
    let (code, out, _) = dgcat(&["nat", kan, "--source", "M", "--target", "M"]);
    assert_eq!(code, 0);
    assert!(out.contains("closed degree-0 transformations"));
    let (code, out, _) = dgcat(&["kan", kan, "--left", "--along", "collapse", "--module", "M"]);
    assert_eq!(code, 0);
    assert!(out.contains("Lan(★)"));
    let (code, out, _) = dgcat(&["end", fixture("d1.json").to_str().unwrap(), "--bimodule", "hom"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("end: dims"));
    let (code, _, _) = dgcat(&["recollement", fixture("a2.json").to_str().unwrap(), "--sub", "a"]);
    assert_eq!(code, 0);
    let (code, _, err) = dgcat(&["recollement", fixture("a2.json").to_str().unwrap(), "--sub", "c"]);
    assert_eq!(code, 2, "{err}");
}
