//! End-to-end acceptance run. Prints one pass/fail line per criterion and
//! exits non-zero if any fails.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::path::PathBuf;
use std::process::{exit, Command};
use std::time::{Duration, Instant};

use dgcat::field::Rational;
use dgcat::fixtures;
use dgcat::module::hom_bifunctor;
use dgcat::random::{random_bifunctor, random_category, rng_from_seed, Bounds};
use dgcat::report::CheckReport;
use dgcat_cli::bundle::{emit, parse_bundle, Bundle};
use dgcat_cli::fixtures::{a2_bundle, kan_bundle, matrix_bundle, shipped};
use dgcat_cli::format::SuiteDirective;
use dgcat_cli::suites::{run_suite, sign_laws};

type Q = Rational;
type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

/// Runs every directive of `bundle` accepted by `keep`.
fn run(bundle: &Bundle<Q>, keep: impl Fn(&SuiteDirective) -> bool) -> Result<CheckReport, String> {
    let mut all = CheckReport::new();
    let mut ran = 0;
    for (i, d) in bundle.suites.iter().enumerate().filter(|(_, d)| keep(d)) {
        let r = run_suite(bundle, d, 0).map_err(|e| e.to_string())?;
        all.absorb(&format!("{i}:{}", d.label()), r);
        ran += 1;
    }
    if ran == 0 {
        return Err("no directive selected".into());
    }
    Ok(all)
}

/// All checks pass and every required check name occurs.
fn require(report: &CheckReport, names: &[&str]) -> Outcome {
    if let Some(c) = report.checks.iter().find(|c| !c.passed) {
        return Err(format!("{} failed: {}", c.name, c.witness.clone().unwrap_or_default()));
    }
    for n in names {
        if !report.checks.iter().any(|c| c.name.contains(n)) {
            return Err(format!("no check named {n:?}"));
        }
    }
    Ok(format!("{} checks", report.checks.len()))
}

fn within(limit: Duration, start: Instant, detail: String) -> Outcome {
    let spent = start.elapsed();
    if spent > limit {
        return Err(format!("{detail}, but took {spent:?}"));
    }
    Ok(format!("{detail} in {:.2}s", spent.as_secs_f64()))
}

fn sign_law_suite() -> Outcome {
    let start = Instant::now();
    let report = sign_laws::<Q>(100, 0);
    let valid = report
        .checks
        .iter()
        .filter(|c| c.name.contains("random category valid"))
        .count();
    if valid < 100 {
        return Err(format!("only {valid} categories generated"));
    }
    let detail = require(&report, &["flip detected"])?;
    within(Duration::from_secs(60), start, detail)
}

fn yoneda_suite() -> Outcome {
    let mut all = CheckReport::new();
    for (name, c) in fixtures::all::<Q>() {
        let mut b = Bundle::default();
        b.categories.insert(name.to_string(), c);
        let d = SuiteDirective {
            suite: "yoneda".into(),
            category: Some(name.to_string()),
            ..SuiteDirective::default()
        };
        all.absorb(name, run_suite(&b, &d, 0).map_err(|e| e.to_string())?);
    }
    require(&all, &["K1/", "A2/", "D1/", "round trip"])
}

fn end_coend_oracle() -> Outcome {
    let mut cases = Vec::new();
    for (name, c) in fixtures::all::<Q>() {
        cases.push((name.to_string(), hom_bifunctor(&c)));
    }
    for seed in 0..25u64 {
        let mut rng = rng_from_seed(1000 + seed);
        let a = random_category::<Q>(&mut rng, &Bounds::default());
        cases.push((format!("random seed {seed}"), random_bifunctor(&mut rng, &a)));
    }
    for (name, t) in &cases {
        support::check_end(t).map_err(|e| format!("{name}: {e}"))?;
        support::check_coend(t).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!("{} bifunctors", cases.len()))
}

fn kan_suite() -> Outcome {
    let report = run(&kan_bundle(), |d| d.suite == "kan")?;
    require(
        &report,
        &[
            "kan(functor=id)",
            "kan(subcategory=A)",
            "kan(functor=collapse)",
            "Δ bijective",
            "Δ chain map",
            "triangle ε∘Lan",
            "triangle Ran",
            "Lan then restrict is the identity",
        ],
    )
}

fn recollement_suite() -> Outcome {
    let start = Instant::now();
    let report = run(&a2_bundle(), |d| d.suite == "recollement")?;
    let detail = require(
        &report,
        &[
            "recollement(subcategory=B)",
            "recollement(subcategory=A)",
            "triangle",
            "in Ker(j^*) ⇒ in Im(π_*)",
            "in Im(π_*) ⇒ in Ker(j^*)",
            "π_* fully faithful",
            "j_! fully faithful",
            "j_* fully faithful",
            "transfer",
        ],
    )?;
    within(Duration::from_secs(30), start, detail)
}

fn z0_suite() -> Outcome {
    let report = run(&a2_bundle(), |d| d.suite == "z0")?;
    require(&report, &["z0(subcategory=B)", "z0(subcategory=A)", "R1", "R2", "R3"])
}

fn matrix_suite() -> Outcome {
    let report = run(&matrix_bundle(), |d| d.suite == "matrix" || d.suite == "compat")?;
    let detail = require(
        &report,
        &[
            "bimodule=point",
            "bimodule=diagA2",
            "bimodule=diagD1",
            "Λ valid",
            "hom dimensions of Λ",
            "sign square",
            "G₁(η(f)) = ρ∘G₂(f)∘ξ",
            "degenerate variant Λ^! = Λ",
        ],
    )?;
    let degenerate = report.checks.iter().filter(|c| c.name.contains("Λ^! = Λ")).count();
    if degenerate != 3 {
        return Err(format!("{degenerate} degenerate variants checked"));
    }
    Ok(detail)
}

fn dgcat(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_dgcat"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    ))
}

fn io_suite() -> Outcome {
    let shipped = shipped::<Q>();
    for (file, bundle) in &shipped {
        let path = fixture(file);
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        if text != emit(bundle) {
            return Err(format!("{file} is not the canonical emission"));
        }
        if *file == "d1_corrupted.json" {
            continue;
        }
        let parsed = parse_bundle::<Q>(&path).map_err(|e| format!("{file}: {e}"))?;
        if emit(&parsed) != text {
            return Err(format!("{file} does not round-trip"));
        }
    }

    let corrupted = fixture("d1_corrupted.json");
    for cmd in ["validate", "suite"] {
        let (code, err) = dgcat(&[cmd, corrupted.to_str().unwrap()])?;
        if code != 2 || !err.contains("categories.D1") || !err.contains("Leibniz rule") {
            return Err(format!("{cmd} on the corrupted fixture: exit {code}, {err}"));
        }
    }

    let dir = std::env::temp_dir().join(format!("dgcat-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    for file in ["a2.json", "kan.json", "matrix.json"] {
        let mut texts = Vec::new();
        for run in 0..2 {
            let out = dir.join(format!("{file}.{run}"));
            let (code, err) = dgcat(&[
                "--seed",
                "11",
                "--report",
                out.to_str().unwrap(),
                "suite",
                fixture(file).to_str().unwrap(),
            ])?;
            if code != 0 {
                return Err(format!("suite on {file}: exit {code}, {err}"));
            }
            texts.push(std::fs::read(&out).map_err(|e| e.to_string())?);
        }
        if texts[0] != texts[1] {
            return Err(format!("reports for {file} differ between runs"));
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{} fixtures", shipped.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("sign laws", sign_law_suite),
        ("yoneda", yoneda_suite),
        ("end/coend oracle", end_coend_oracle),
        ("kan extensions and adjunctions", kan_suite),
        ("recollement", recollement_suite),
        ("underlying abelian recollement", z0_suite),
        ("triangular matrix categories", matrix_suite),
        ("io", io_suite),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: pass  {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        exit(1);
    }
}
