//! Argument parsing and command dispatch.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand};
use dgcat::complex::{check_chain_map, validate_complex};
use dgcat::ends::{coend_of_bifunctor, end_of_bifunctor};
use dgcat::field::{with_prime, Field, Fp, Rational};
use dgcat::kan::{lan, ran, KanExtension};
use dgcat::nat::{dgnat_complex, z0_basis};
use dgcat::report::CheckReport;

use crate::bundle::{parse_bundle, Bundle, BundleError, Subcategory};
use crate::format::SuiteDirective;
use crate::report::{ErrorRecord, Report};
use crate::suites::{run_suite, SuiteError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldChoice {
    Rationals,
    Prime(u64),
}

impl FromStr for FieldChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "q" {
            return Ok(FieldChoice::Rationals);
        }
        s.strip_prefix("fp:")
            .and_then(|p| p.parse().ok())
            .map(FieldChoice::Prime)
            .ok_or_else(|| format!("expected `q` or `fp:P`, found `{s}`"))
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "dgcat",
    version,
    about = "Verify finite dg-categories and constructions on their module categories"
)]
pub struct Cli {
    /// Coefficient field: `q` or `fp:P` for a prime P.
    #[arg(long, global = true, default_value = "q")]
    pub field: FieldChoice,
    /// Seed for every randomized battery and generator.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write a JSON report to this path.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    /// Print only failures and the summary.
    #[arg(long, global = true)]
    pub quiet: bool,
    /// Record wall-clock time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate a bundle.
    Validate { bundle: PathBuf },
    /// End of a bimodule over `A^op ⊗ A`.
    End {
        bundle: PathBuf,
        #[arg(long)]
        bimodule: String,
    },
    /// Coend of a bimodule over `A^op ⊗ A`.
    Coend {
        bundle: PathBuf,
        #[arg(long)]
        bimodule: String,
    },
    /// Complex of natural transformations between two modules.
    Nat {
        bundle: PathBuf,
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
    },
    /// Kan extension along a functor or a subcategory inclusion.
    Kan {
        bundle: PathBuf,
        #[arg(long, conflicts_with = "right", required_unless_present = "right")]
        left: bool,
        #[arg(long)]
        right: bool,
        #[arg(long)]
        along: String,
        #[arg(long)]
        module: Option<String>,
    },
    /// Recollement induced by a full subcategory.
    Recollement {
        bundle: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        sub: Vec<String>,
        #[arg(long)]
        category: Option<String>,
    },
    /// Triangular matrix category of a bimodule.
    Matrix {
        bundle: PathBuf,
        #[arg(long)]
        bimodule: String,
        #[arg(long)]
        along: Option<String>,
    },
    /// Compatibility data and the matrix variant along `Lan ⊣ restrict`.
    Compat {
        bundle: PathBuf,
        #[arg(long)]
        bimodule: String,
        #[arg(long)]
        along: Option<String>,
    },
    /// Run the bundle's suite directives, or one named suite.
    Suite {
        bundle: PathBuf,
        #[arg(long)]
        name: Option<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::End { .. } => "end",
            Command::Coend { .. } => "coend",
            Command::Nat { .. } => "nat",
            Command::Kan { .. } => "kan",
            Command::Recollement { .. } => "recollement",
            Command::Matrix { .. } => "matrix",
            Command::Compat { .. } => "compat",
            Command::Suite { .. } => "suite",
        }
    }

    fn bundle(&self) -> &Path {
        match self {
            Command::Validate { bundle }
            | Command::End { bundle, .. }
            | Command::Coend { bundle, .. }
            | Command::Nat { bundle, .. }
            | Command::Kan { bundle, .. }
            | Command::Recollement { bundle, .. }
            | Command::Matrix { bundle, .. }
            | Command::Compat { bundle, .. }
            | Command::Suite { bundle, .. } => bundle,
        }
    }
}

/// Everything a run produces: the report and informational text.
pub struct Outcome {
    pub report: Report,
    pub text: String,
}

fn unknown_arg(flag: &str, name: &str) -> ErrorRecord {
    ErrorRecord {
        kind: "unknown-name".to_string(),
        field: flag.to_string(),
        message: format!("{flag}: unknown name `{name}`"),
    }
}

fn suite_error(e: &SuiteError) -> ErrorRecord {
    let kind = match e {
        SuiteError::UnknownSuite(_) => "unknown-suite",
        SuiteError::MissingArgument { .. } => "missing-argument",
    };
    ErrorRecord {
        kind: kind.to_string(),
        field: "suite".to_string(),
        message: e.to_string(),
    }
}

/// Runs the command over the chosen field.
pub fn execute(cli: &Cli) -> Outcome {
    match cli.field {
        FieldChoice::Rationals => execute_in::<Rational>(cli),
        FieldChoice::Prime(p) => with_prime(p, || execute_in::<Fp>(cli)).unwrap_or_else(|e| {
            let mut report = Report::new(
                cli.command.name(),
                Some(&cli.command.bundle().display().to_string()),
                &format!("fp:{p}"),
                cli.seed,
            );
            report.reject(ErrorRecord {
                kind: "field".to_string(),
                field: "--field".to_string(),
                message: e.to_string(),
            });
            Outcome {
                report,
                text: String::new(),
            }
        }),
    }
}

fn execute_in<F: Field>(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let path = cli.command.bundle().display().to_string();
    let suite_name = match &cli.command {
        Command::Suite { name: Some(n), .. } => n.clone(),
        Command::Suite { .. } => "bundle".to_string(),
        other => other.name().to_string(),
    };
    let mut report = Report::new(&suite_name, Some(&path), &F::field_name(), cli.seed);
    let mut text = String::new();
    let result = parse_bundle::<F>(cli.command.bundle())
        .map_err(|e: BundleError| ErrorRecord::from(&e))
        .and_then(|bundle| dispatch(cli, &bundle, &mut text));
    match result {
        Ok(checks) => report.add_checks(&checks),
        Err(e) => report.reject(e),
    }
    if cli.timing {
        report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    Outcome { report, text }
}

fn dims_line(text: &mut String, label: &str, c: &dgcat::complex::Complex<impl Field>) {
    let _ = writeln!(
        text,
        "{label}: dims {:?}, cohomology {:?}",
        c.dims(),
        c.cohomology_dims()
    );
}

fn directive(suite: &str) -> SuiteDirective {
    SuiteDirective {
        suite: suite.to_string(),
        ..SuiteDirective::default()
    }
}

/// Resolves `--along` to a functor or a subcategory inclusion.
fn along(d: &mut SuiteDirective, bundle: &Bundle<impl Field>, name: &str) -> Result<(), ErrorRecord> {
    if bundle.functors.contains_key(name) {
        d.functor = Some(name.to_string());
    } else if bundle.subcategories.contains_key(name) {
        d.subcategory = Some(name.to_string());
    } else {
        return Err(unknown_arg("--along", name));
    }
    Ok(())
}

fn run(bundle: &Bundle<impl Field>, d: &SuiteDirective, seed: u64) -> Result<CheckReport, ErrorRecord> {
    run_suite(bundle, d, seed).map_err(|e| suite_error(&e))
}

fn dispatch<F: Field>(cli: &Cli, bundle: &Bundle<F>, text: &mut String) -> Result<CheckReport, ErrorRecord> {
    let seed = cli.seed;
    let mut checks = CheckReport::new();
    match &cli.command {
        Command::Validate { .. } => {
            for name in bundle.categories.keys() {
                checks.pass(format!("valid [categories.{name}]"));
            }
            for name in bundle.functors.keys() {
                checks.pass(format!("valid [functors.{name}]"));
            }
            for name in bundle.modules.keys() {
                checks.pass(format!("valid [modules.{name}]"));
            }
            for name in bundle.bimodules.keys() {
                checks.pass(format!("valid [bimodules.{name}]"));
            }
            for (i, d) in bundle.suites.iter().enumerate() {
                let _ = writeln!(text, "suite directive {i}: {}", d.suite);
            }
        }
        Command::End { bimodule, .. } | Command::Coend { bimodule, .. } => {
            let t = &bundle
                .bimodules
                .get(bimodule)
                .ok_or_else(|| unknown_arg("--bimodule", bimodule))?
                .bimodule;
            if matches!(cli.command, Command::End { .. }) {
                match end_of_bifunctor(t) {
                    Ok(e) => {
                        dims_line(text, "end", &e.total);
                        checks.record(
                            "end inclusion injective",
                            e.inclusion.to_matrix().is_injective(),
                            String::new,
                        );
                        checks.record(
                            "end inclusion is a chain map",
                            check_chain_map(&e.inclusion, &e.total, &e.product).is_ok(),
                            String::new,
                        );
                    }
                    Err(e) => checks.fail("end", e.to_string()),
                }
            } else {
                match coend_of_bifunctor(t) {
                    Ok(c) => {
                        dims_line(text, "coend", &c.total);
                        let v = validate_complex(&c.total);
                        checks.record("coend is a complex", v.is_valid(), || v.to_string());
                    }
                    Err(e) => checks.fail("coend", e.to_string()),
                }
            }
        }
        Command::Nat { source, target, .. } => {
            let m = &bundle
                .modules
                .get(source)
                .ok_or_else(|| unknown_arg("--source", source))?
                .module;
            let n = &bundle
                .modules
                .get(target)
                .ok_or_else(|| unknown_arg("--target", target))?
                .module;
            match dgnat_complex(m, n) {
                Ok(nc) => {
                    dims_line(text, "DgNat", nc.total());
                    let _ = writeln!(text, "closed degree-0 transformations: {}", z0_basis(&nc).len());
                    let v = validate_complex(nc.total());
                    checks.record("DgNat is a complex", v.is_valid(), || v.to_string());
                }
                Err(e) => checks.fail("DgNat", e.to_string()),
            }
        }
        Command::Kan {
            left,
            along: name,
            module,
            ..
        } => {
            let mut d = directive("kan");
            along(&mut d, bundle, name)?;
            checks = run(bundle, &d, seed)?;
            if let Some(mname) = module {
                let g = &bundle
                    .modules
                    .get(mname)
                    .ok_or_else(|| unknown_arg("--module", mname))?
                    .module;
                let f = match &d.functor {
                    Some(fname) => bundle.functors[fname].functor.clone(),
                    None => {
                        let s = &bundle.subcategories[name];
                        let labels: Vec<&str> = s.objects.iter().map(String::as_str).collect();
                        dgcat::functor::full_subcategory(&bundle.categories[&s.category], &labels)
                            .map_err(|e| ErrorRecord {
                                kind: "structure".to_string(),
                                field: "--along".to_string(),
                                message: e.to_string(),
                            })?
                            .1
                    }
                };
                if g.base() != f.source() {
                    return Err(ErrorRecord {
                        kind: "base-mismatch".to_string(),
                        field: "--module".to_string(),
                        message: format!("--module: `{mname}` is not a module over the source of `{name}`"),
                    });
                }
                let (tag, ext) = if *left {
                    ("Lan", lan(&f, g))
                } else {
                    ("Ran", ran(&f, g))
                };
                match ext {
                    Ok(k) => {
                        kan_text(text, tag, &k);
                        checks.absorb(&format!("{tag} {mname}"), k.check());
                    }
                    Err(e) => checks.fail(format!("{tag} {mname}"), e.to_string()),
                }
            }
        }
        Command::Recollement { sub, category, .. } => {
            let cname = match category {
                Some(c) if bundle.categories.contains_key(c) => c.clone(),
                Some(c) => return Err(unknown_arg("--category", c)),
                None => bundle
                    .categories
                    .iter()
                    .find(|(_, c)| sub.iter().all(|o| c.index_of(o).is_ok()))
                    .map(|(n, _)| n.clone())
                    .ok_or_else(|| unknown_arg("--sub", &sub.join(",")))?,
            };
            let c = &bundle.categories[&cname];
            if let Some(bad) = sub.iter().find(|o| c.index_of(o).is_err()) {
                return Err(unknown_arg("--sub", bad));
            }
            let mut b = bundle.clone();
            let key = format!("{{{}}}", sub.join(","));
            b.subcategories.insert(
                key.clone(),
                Subcategory {
                    category: cname,
                    objects: sub.clone(),
                },
            );
            for suite in ["recollement", "z0"] {
                let d = SuiteDirective {
                    subcategory: Some(key.clone()),
                    ..directive(suite)
                };
                checks.absorb(suite, run(&b, &d, seed)?);
            }
        }
        Command::Matrix { bimodule, along: a, .. } | Command::Compat { bimodule, along: a, .. } => {
            if !bundle.bimodules.contains_key(bimodule) {
                return Err(unknown_arg("--bimodule", bimodule));
            }
            let mut d = SuiteDirective {
                bimodule: Some(bimodule.clone()),
                ..directive(cli.command.name())
            };
            if let Some(a) = a {
                along(&mut d, bundle, a)?;
            }
            checks = run(bundle, &d, seed)?;
        }
        Command::Suite { name, .. } => {
            let mut ds: Vec<SuiteDirective> = bundle
                .suites
                .iter()
                .filter(|d| name.as_ref().is_none_or(|n| d.suite == *n))
                .cloned()
                .collect();
            if ds.is_empty() {
                match name {
                    Some(n) => ds.push(directive(n)),
                    None => {
                        return Err(ErrorRecord {
                            kind: "missing-argument".to_string(),
                            field: "suites".to_string(),
                            message: "the bundle declares no suites; pass --name".to_string(),
                        })
                    }
                }
            }
            for (i, d) in ds.iter().enumerate() {
                checks.absorb(&format!("{i}:{}", d.label()), run(bundle, d, seed)?);
            }
        }
    }
    Ok(checks)
}

fn kan_text<F: Field>(text: &mut String, tag: &str, k: &KanExtension<F>) {
    let c = k.along.target();
    for x in 0..c.object_count() {
        let v = k.output.value(x);
        let _ = writeln!(text, "{tag}({}): dims {:?}", c.label(x), v.dims());
    }
}
