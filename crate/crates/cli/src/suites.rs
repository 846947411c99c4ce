//! Named verification suites run against a validated bundle.

use dgcat::category::{validate_dg_category, DgCategory};
use dgcat::compat::{build_lambda_variant, dg_recollement_axioms, ideal_recollement, AdjunctionData, RecollementSide};
use dgcat::ends::{coend_of_bifunctor, end_of_bifunctor, weighted_colimit, weighted_limit};
use dgcat::field::Field;
use dgcat::functor::{full_subcategory, identity_functor, DgFunctor};
use dgcat::kan::{
    adjunction_check, faithfulness_transfer, fully_faithful_check, lan, ran, representable_battery, Named,
};
use dgcat::matrix::{bimodule_pushforward, matrix_category, right_factor, ModuleOp};
use dgcat::module::{representable, restrict_module, validate_dg_module, Bimodule};
use dgcat::nat::{yoneda_iso, DgNat};
use dgcat::random::{corrupt, random_category, rng_from_seed, Bounds};
use dgcat::recollement::{default_battery, recollement_report, z0_underlying};
use dgcat::report::CheckReport;
use thiserror::Error;

use crate::bundle::Bundle;
use crate::format::SuiteDirective;

pub const SUITES: &[&str] = &[
    "sign-laws",
    "yoneda",
    "ends",
    "kan",
    "recollement",
    "z0",
    "module-recollement",
    "matrix",
    "compat",
];

/// Default number of random categories for `sign-laws`.
pub const SIGN_LAW_COUNT: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuiteError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("suite `{suite}` needs `{field}`")]
    MissingArgument { suite: String, field: String },
}

/// Runs one directive. Failures of the mathematics, including computations
/// that cannot be carried out, are recorded as failed checks.
pub fn run_suite<F: Field>(bundle: &Bundle<F>, d: &SuiteDirective, seed: u64) -> Result<CheckReport, SuiteError> {
    let ctx = Ctx { bundle, d, seed };
    match d.suite.as_str() {
        "sign-laws" => Ok(sign_laws::<F>(d.count.unwrap_or(SIGN_LAW_COUNT), seed)),
        "yoneda" => Ok(yoneda(&ctx)),
        "ends" => Ok(ends(&ctx)),
        "kan" => kan(&ctx),
        "recollement" => recollement(&ctx, false),
        "z0" => recollement(&ctx, true),
        "module-recollement" => module_recollement(&ctx),
        "matrix" => matrix(&ctx),
        "compat" => compat(&ctx),
        other => Err(SuiteError::UnknownSuite(other.to_string())),
    }
}

struct Ctx<'a, F> {
    bundle: &'a Bundle<F>,
    d: &'a SuiteDirective,
    seed: u64,
}

impl<F: Field> Ctx<'_, F> {
    fn missing(&self, field: &str) -> SuiteError {
        SuiteError::MissingArgument {
            suite: self.d.suite.clone(),
            field: field.to_string(),
        }
    }

    /// The directive's category, or every category in the bundle.
    fn categories(&self) -> Vec<(String, DgCategory<F>)> {
        let all = self.bundle.categories.iter();
        match &self.d.category {
            Some(name) => all
                .filter(|(n, _)| *n == name)
                .map(|(n, c)| (n.clone(), c.clone()))
                .collect(),
            None => all.map(|(n, c)| (n.clone(), c.clone())).collect(),
        }
    }

    /// Representables, zero, a seeded random module and the bundle's own
    /// modules over the named category.
    fn battery(&self, name: &str, c: &DgCategory<F>) -> Vec<Named<F>> {
        let mut b = default_battery(c, self.seed);
        for (n, m) in &self.bundle.modules {
            if m.category == name {
                b.push((n.clone(), m.module.clone()));
            }
        }
        b
    }

    /// `(C, subset)` from `subcategory`, else from `category` plus nothing.
    fn subcategory(&self) -> Result<(String, DgCategory<F>, Vec<String>), SuiteError> {
        let name = self.d.subcategory.as_ref().ok_or_else(|| self.missing("subcategory"))?;
        let s = &self.bundle.subcategories[name];
        Ok((
            s.category.clone(),
            self.bundle.categories[&s.category].clone(),
            s.objects.clone(),
        ))
    }

    /// The directive's functor: a named functor, the inclusion of a named
    /// subcategory, or the identity of a named category.
    fn functor(&self) -> Option<DgFunctor<F>> {
        if let Some(f) = &self.d.functor {
            return Some(self.bundle.functors[f].functor.clone());
        }
        if let Ok((_, c, objects)) = self.subcategory() {
            let labels: Vec<&str> = objects.iter().map(String::as_str).collect();
            return full_subcategory(&c, &labels).ok().map(|(_, j)| j);
        }
        let c = self.bundle.categories.get(self.d.category.as_ref()?)?;
        Some(identity_functor(c))
    }

    fn bimodule(&self) -> Result<&Bimodule<F>, SuiteError> {
        let name = self.d.bimodule.as_ref().ok_or_else(|| self.missing("bimodule"))?;
        Ok(&self.bundle.bimodules[name].bimodule)
    }
}

/// Random categories from consecutive seeds must validate, and a single
/// sign flip in each must be reported under the law it breaks.
pub fn sign_laws<F: Field>(count: usize, seed: u64) -> CheckReport {
    let mut r = CheckReport::new();
    let bounds = Bounds::default();
    for s in seed..seed + count as u64 {
        let mut rng = rng_from_seed(s);
        let c: DgCategory<F> = random_category(&mut rng, &bounds);
        let v = validate_dg_category(&c);
        r.record(format!("random category valid [seed {s}]"), v.is_valid(), || {
            v.to_string()
        });
        let (bad, flip) = corrupt(&mut rng, &c);
        let v = validate_dg_category(&bad);
        r.record(
            format!("flip detected as {} [seed {s}]", flip.law()),
            v.has(flip.law()),
            || format!("{flip:?}"),
        );
    }
    r
}

fn yoneda<F: Field>(ctx: &Ctx<'_, F>) -> CheckReport {
    let mut r = CheckReport::new();
    for (name, c) in ctx.categories() {
        for (mname, m) in ctx.battery(&name, &c) {
            for a in c.objects() {
                let tag = format!("[{name}, {a}, {mname}]");
                match yoneda_iso(&c, a, &m) {
                    Ok(iso) => {
                        r.record(format!("round trip {tag}"), iso.round_trips(), String::new);
                        r.record(format!("chain isomorphism {tag}"), iso.is_chain_iso(), String::new);
                    }
                    Err(e) => r.fail(format!("Yoneda map {tag}"), e.to_string()),
                }
            }
        }
    }
    r
}

fn ends<F: Field>(ctx: &Ctx<'_, F>) -> CheckReport {
    let mut r = CheckReport::new();
    for (name, c) in ctx.categories() {
        let op = c.opposite();
        for (mname, m) in ctx.battery(&name, &c) {
            for x in 0..c.object_count() {
                let tag = format!("[{name}, {}, {mname}]", c.label(x));
                match weighted_limit(&representable(&c, x), &m) {
                    Ok(l) => r.record(
                        format!("limit weighted by Hom({}, −) {tag}", c.label(x)),
                        l.dims() == m.value(x).dims(),
                        || format!("{:?} vs {:?}", l.dims(), m.value(x).dims()),
                    ),
                    Err(e) => r.fail(format!("weighted limit {tag}"), e.to_string()),
                }
                match weighted_colimit(&representable(&op, x), &m) {
                    Ok(l) => r.record(
                        format!("colimit weighted by Hom(−, {}) {tag}", c.label(x)),
                        l.dims() == m.value(x).dims(),
                        || format!("{:?} vs {:?}", l.dims(), m.value(x).dims()),
                    ),
                    Err(e) => r.fail(format!("weighted colimit {tag}"), e.to_string()),
                }
            }
        }
    }
    let bimodules: Vec<_> = match &ctx.d.bimodule {
        Some(n) => ctx.bundle.bimodules.iter().filter(|(k, _)| *k == n).collect(),
        None => ctx.bundle.bimodules.iter().collect(),
    };
    for (name, t) in bimodules {
        let t = &t.bimodule;
        if *t.first() != t.second().opposite() {
            continue;
        }
        match end_of_bifunctor(t) {
            Ok(e) => {
                r.record(
                    format!("end inclusion injective [{name}]"),
                    e.inclusion.to_matrix().is_injective(),
                    String::new,
                );
                let closed = dgcat::complex::check_chain_map(&e.inclusion, &e.total, &e.product).is_ok();
                r.record(format!("end inclusion is a chain map [{name}]"), closed, String::new);
            }
            Err(e) => r.fail(format!("end [{name}]"), e.to_string()),
        }
        match coend_of_bifunctor(t) {
            Ok(c) => {
                let v = dgcat::complex::validate_complex(&c.total);
                r.record(format!("coend is a complex [{name}]"), v.is_valid(), || v.to_string());
            }
            Err(e) => r.fail(format!("coend [{name}]"), e.to_string()),
        }
    }
    r
}

fn kan<F: Field>(ctx: &Ctx<'_, F>) -> Result<CheckReport, SuiteError> {
    let f = ctx.functor().ok_or_else(|| ctx.missing("functor"))?;
    let (s, t) = (f.source(), f.target());
    let xs = default_battery(s, ctx.seed);
    let ys = default_battery(t, ctx.seed + 1);
    let mut r = CheckReport::new();
    r.absorb("adjunctions", adjunction_check(&f, &xs, &ys));
    let ff = fully_faithful_check(&f);
    let faithful = ff.all_passed();
    match faithfulness_transfer(&f, &representable_battery(s)) {
        Ok((_, report)) => r.absorb("transfer", report),
        Err(e) => r.fail("transfer", e.to_string()),
    }
    if faithful {
        for (name, g) in &xs {
            match lan(&f, g) {
                Ok(l) => {
                    let l = l.normalized();
                    let back = restrict_module(&f, &l.output).map(|b| b == *g).unwrap_or(false);
                    r.record(format!("Lan then restrict is the identity [{name}]"), back, String::new);
                    r.record(
                        format!("unit is the identity [{name}]"),
                        l.structure == DgNat::identity(g),
                        String::new,
                    );
                }
                Err(e) => r.fail(format!("Lan [{name}]"), e.to_string()),
            }
            match ran(&f, g) {
                Ok(rr) => r.record(
                    format!("Ran counit invertible [{name}]"),
                    rr.structure.is_iso(),
                    String::new,
                ),
                Err(e) => r.fail(format!("Ran [{name}]"), e.to_string()),
            }
        }
    }
    Ok(r)
}

fn recollement<F: Field>(ctx: &Ctx<'_, F>, underlying: bool) -> Result<CheckReport, SuiteError> {
    let (name, c, objects) = ctx.subcategory()?;
    let labels: Vec<&str> = objects.iter().map(String::as_str).collect();
    let mut r = CheckReport::new();
    match recollement_report(&c, &labels, &ctx.battery(&name, &c)) {
        Ok(rep) if underlying => r = z0_underlying(&rep),
        Ok(rep) => r = rep.checks,
        Err(e) => r.fail("recollement data", e.to_string()),
    }
    Ok(r)
}

fn module_recollement<F: Field>(ctx: &Ctx<'_, F>) -> Result<CheckReport, SuiteError> {
    let (name, c, objects) = ctx.subcategory()?;
    let labels: Vec<&str> = objects.iter().map(String::as_str).collect();
    let mut r = CheckReport::new();
    match ideal_recollement(&c, &labels) {
        Ok((rec, quotient, sub)) => {
            let outer = default_battery(&quotient, ctx.seed);
            let middle = ctx.battery(&name, &c);
            let inner = default_battery(&sub, ctx.seed + 1);
            for (tag, side) in [("left", RecollementSide::Left), ("right", RecollementSide::Right)] {
                r.absorb(tag, dg_recollement_axioms(&rec, side, &outer, &middle, &inner));
            }
        }
        Err(e) => r.fail("recollement data", e.to_string()),
    }
    Ok(r)
}

/// `Λ = [T 0; M R]` for `M` over `R ⊗ T^op`, and the sign square of every
/// pushforward of `M` that applies.
fn matrix<F: Field>(ctx: &Ctx<'_, F>) -> Result<CheckReport, SuiteError> {
    let m = ctx.bimodule()?;
    let (t, rr) = (right_factor(m), m.first().clone());
    let mut r = CheckReport::new();
    match matrix_category(&t, m, &rr) {
        Ok(lam) => {
            let v = validate_dg_category(&lam.lambda);
            r.record("Λ valid", v.is_valid(), || v.to_string());
            r.record("hom dimensions of Λ", lam.hom_formula_holds(), String::new);
        }
        Err(e) => r.fail("Λ", e.to_string()),
    }
    let mut ops = vec![ModuleOp::Identity(rr.clone()), ModuleOp::G(m.clone())];
    if let Some(f) = ctx.functor() {
        if *f.source() == rr {
            ops.push(ModuleOp::Lan(f.clone()));
            ops.push(ModuleOp::Ran(f.clone()));
        }
        if *f.target() == rr {
            ops.push(ModuleOp::Restrict(f));
        }
    }
    for op in ops {
        let name = op.name();
        match bimodule_pushforward(&op, m) {
            Ok(n) => {
                r.pass(format!("sign square [{name}]"));
                let v = validate_dg_module(n.module());
                r.record(format!("pushforward valid [{name}]"), v.is_valid(), || v.to_string());
            }
            Err(e) => r.fail(format!("sign square [{name}]"), e.to_string()),
        }
    }
    Ok(r)
}

/// `Λ^!` along `Lan_f ⊣ f^*` for the directive's functor, or along the
/// identity adjunction when none is given.
fn compat<F: Field>(ctx: &Ctx<'_, F>) -> Result<CheckReport, SuiteError> {
    let m = ctx.bimodule()?;
    let rr = m.first().clone();
    let explicit = ctx.d.functor.is_some() || ctx.d.subcategory.is_some();
    let adj = if explicit {
        let f = ctx.functor().ok_or_else(|| ctx.missing("functor"))?;
        AdjunctionData::new(ModuleOp::Lan(f.clone()), ModuleOp::Restrict(f))
    } else {
        AdjunctionData::new(ModuleOp::Identity(rr.clone()), ModuleOp::Identity(rr.clone()))
    };
    let mut r = CheckReport::new();
    let adj = match adj {
        Ok(a) => a,
        Err(e) => {
            r.fail("adjunction", e.to_string());
            return Ok(r);
        }
    };
    let s = adj.left.target();
    let xs = default_battery(&rr, ctx.seed);
    let ys = default_battery(&s, ctx.seed + 1);
    match build_lambda_variant(&adj, m, &xs, &ys) {
        Ok(v) => {
            r.absorb("variant", v.checks.clone());
            let flags = v.compatibility.verified;
            r.record("compatibility", flags.all(), || format!("{flags:?}"));
            if !explicit {
                r.record(
                    "degenerate variant Λ^! = Λ",
                    v.lambda_shriek.lambda == v.lambda.lambda,
                    String::new,
                );
            }
        }
        Err(e) => r.fail("variant", e.to_string()),
    }
    Ok(r)
}
