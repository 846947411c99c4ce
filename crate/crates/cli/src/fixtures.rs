//! The bundles shipped in `fixtures/`, built from the library's own
//! constructions. The files on disk are the canonical emission of these.

use dgcat::category::DgCategory;
use dgcat::field::Field;
use dgcat::fixtures::{a2, collapse_a2, d1, d1_corrupted, k1};
use dgcat::functor::{full_subcategory, identity_functor};
use dgcat::module::hom_bifunctor;
use dgcat::random::{random_bifunctor, random_module, rng_from_seed};

use crate::bundle::{Bundle, CategoryRef, NamedBimodule, NamedFunctor, NamedModule, Subcategory};
use crate::format::SuiteDirective;

fn suite(name: &str) -> SuiteDirective {
    SuiteDirective {
        suite: name.to_string(),
        ..SuiteDirective::default()
    }
}

fn on_category(name: &str, category: &str) -> SuiteDirective {
    SuiteDirective {
        category: Some(category.to_string()),
        ..suite(name)
    }
}

fn on_sub(name: &str, sub: &str) -> SuiteDirective {
    SuiteDirective {
        subcategory: Some(sub.to_string()),
        ..suite(name)
    }
}

fn on_bimodule(name: &str, bimodule: &str, functor: Option<&str>) -> SuiteDirective {
    SuiteDirective {
        bimodule: Some(bimodule.to_string()),
        functor: functor.map(str::to_string),
        ..suite(name)
    }
}

fn cref(text: &str) -> CategoryRef {
    CategoryRef::parse(text)
}

/// `M(x, y) = C(y, x)` over `C ⊗ C^op`.
fn diagonal<F: Field>(c: &DgCategory<F>, name: &str) -> NamedBimodule<F> {
    NamedBimodule {
        first: cref(name),
        second: cref(&format!("{name}^op")),
        bimodule: hom_bifunctor(&c.opposite()),
    }
}

fn sub(category: &str, objects: &[&str]) -> Subcategory {
    Subcategory {
        category: category.to_string(),
        objects: objects.iter().map(|s| s.to_string()).collect(),
    }
}

pub fn k1_bundle<F: Field>() -> Bundle<F> {
    let mut b = Bundle::default();
    b.categories.insert("K1".to_string(), k1());
    b.suites = vec![
        on_category("yoneda", "K1"),
        on_category("ends", "K1"),
        SuiteDirective {
            count: Some(100),
            ..suite("sign-laws")
        },
    ];
    b
}

pub fn a2_bundle<F: Field>() -> Bundle<F> {
    let c = a2::<F>();
    let mut b = Bundle::default();
    b.categories.insert("A2".to_string(), c.clone());
    b.subcategories.insert("B".to_string(), sub("A2", &["b"]));
    b.subcategories.insert("A".to_string(), sub("A2", &["a"]));
    b.bimodules.insert(
        "hom".to_string(),
        NamedBimodule {
            first: cref("A2^op"),
            second: cref("A2"),
            bimodule: hom_bifunctor(&c),
        },
    );
    b.suites = vec![
        on_sub("recollement", "B"),
        on_sub("recollement", "A"),
        on_sub("z0", "B"),
        on_sub("z0", "A"),
        on_sub("module-recollement", "B"),
        on_category("yoneda", "A2"),
        on_category("ends", "A2"),
    ];
    b
}

pub fn d1_bundle<F: Field>() -> Bundle<F> {
    let c = d1::<F>();
    let mut b = Bundle::default();
    b.categories.insert("D1".to_string(), c.clone());
    b.bimodules.insert(
        "hom".to_string(),
        NamedBimodule {
            first: cref("D1^op"),
            second: cref("D1"),
            bimodule: hom_bifunctor(&c),
        },
    );
    b.bimodules.insert(
        "random".to_string(),
        NamedBimodule {
            first: cref("D1^op"),
            second: cref("D1"),
            bimodule: random_bifunctor(&mut rng_from_seed(7), &c),
        },
    );
    b.suites = vec![on_category("yoneda", "D1"), on_category("ends", "D1")];
    b
}

/// D1 with `ε ∘ ε = ε`, which breaks the Leibniz rule at `(ε, ε)`.
pub fn d1_corrupted_bundle<F: Field>() -> Bundle<F> {
    let mut b = Bundle::default();
    b.categories.insert("D1".to_string(), d1_corrupted());
    b.suites = vec![on_category("yoneda", "D1")];
    b
}

pub fn kan_bundle<F: Field>() -> Bundle<F> {
    let (a, k) = (a2::<F>(), k1::<F>());
    let mut b = Bundle::default();
    b.categories.insert("A2".to_string(), a.clone());
    b.categories.insert("K1".to_string(), k);
    b.functors.insert(
        "collapse".to_string(),
        NamedFunctor {
            source: "A2".to_string(),
            target: "K1".to_string(),
            functor: collapse_a2(),
        },
    );
    b.functors.insert(
        "id".to_string(),
        NamedFunctor {
            source: "A2".to_string(),
            target: "A2".to_string(),
            functor: identity_functor(&a),
        },
    );
    b.subcategories.insert("A".to_string(), sub("A2", &["a"]));
    let mut rng = rng_from_seed(3);
    for name in ["M", "N"] {
        b.modules.insert(
            name.to_string(),
            NamedModule {
                category: "A2".to_string(),
                module: random_module(&mut rng, &a),
            },
        );
    }
    b.suites = vec![
        SuiteDirective {
            functor: Some("id".to_string()),
            ..suite("kan")
        },
        on_sub("kan", "A"),
        SuiteDirective {
            functor: Some("collapse".to_string()),
            ..suite("kan")
        },
    ];
    b
}

/// Three bimodules: the one-point bimodule on `{a}` extended along
/// `{a} ↪ A2`, and the diagonal bimodules of A2 and D1 along identities.
pub fn matrix_bundle<F: Field>() -> Bundle<F> {
    let (a, d) = (a2::<F>(), d1::<F>());
    let (point, inclusion) = full_subcategory(&a, &["a"]).expect("object exists");
    let mut b = Bundle::default();
    b.categories.insert("A2".to_string(), a.clone());
    b.categories.insert("D1".to_string(), d.clone());
    b.categories.insert("P".to_string(), point.clone());
    b.functors.insert(
        "incl".to_string(),
        NamedFunctor {
            source: "P".to_string(),
            target: "A2".to_string(),
            functor: inclusion,
        },
    );
    for (name, c) in [("idA2", &a), ("idD1", &d)] {
        let cat = &name[2..];
        b.functors.insert(
            name.to_string(),
            NamedFunctor {
                source: cat.to_string(),
                target: cat.to_string(),
                functor: identity_functor(c),
            },
        );
    }
    b.bimodules.insert("point".to_string(), diagonal(&point, "P"));
    b.bimodules.insert("diagA2".to_string(), diagonal(&a, "A2"));
    b.bimodules.insert("diagD1".to_string(), diagonal(&d, "D1"));
    b.suites = vec![
        on_bimodule("matrix", "point", Some("incl")),
        on_bimodule("matrix", "diagA2", None),
        on_bimodule("matrix", "diagD1", None),
        on_bimodule("compat", "point", Some("incl")),
        on_bimodule("compat", "diagA2", Some("idA2")),
        on_bimodule("compat", "diagD1", Some("idD1")),
        on_bimodule("compat", "point", None),
        on_bimodule("compat", "diagA2", None),
        on_bimodule("compat", "diagD1", None),
    ];
    b
}

/// File name and bundle for every shipped fixture.
pub fn shipped<F: Field>() -> Vec<(&'static str, Bundle<F>)> {
    vec![
        ("k1.json", k1_bundle()),
        ("a2.json", a2_bundle()),
        ("d1.json", d1_bundle()),
        ("d1_corrupted.json", d1_corrupted_bundle()),
        ("kan.json", kan_bundle()),
        ("matrix.json", matrix_bundle()),
    ]
}
