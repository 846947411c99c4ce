mod support;

use dgcat::category::tensor_category;
use dgcat::complex::{hom_complex, hom_map, TensorLayout};
use dgcat::ends::end_of_bifunctor;
use dgcat::field::{Field, Rational};
use dgcat::fixtures;
use dgcat::linalg::span_basis;
use dgcat::module::hom_bifunctor;
use dgcat::nat::{dgnat_complex, hom_modules_bifunctor};
use dgcat::random::{random_bifunctor, random_category, random_module, rng_from_seed, Bounds};
use rand::Rng;
use support::{basis_arrows, check_coend, check_end, end_subspace, Arrow};

type Q = Rational;

#[test]
fn hom_bifunctors_of_fixtures_match_the_oracle() {
    for (name, c) in fixtures::all::<Q>() {
        let t = hom_bifunctor(&c);
        check_end(&t).unwrap_or_else(|e| panic!("{name}: {e}"));
        check_coend(&t).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn random_bifunctors_match_the_oracle() {
    for seed in 0..25 {
        let mut rng = rng_from_seed(1000 + seed);
        let a = random_category::<Q>(&mut rng, &Bounds::default());
        let t = random_bifunctor(&mut rng, &a);
        check_end(&t).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        check_coend(&t).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
    }
}

#[test]
fn dgnat_complex_is_the_end_of_the_hom_bifunctor() {
    for seed in 0..6 {
        let mut rng = rng_from_seed(seed);
        let a = random_category::<Q>(&mut rng, &Bounds::default());
        let (f, g) = (random_module(&mut rng, &a), random_module(&mut rng, &a));
        let nc = dgnat_complex(&f, &g).unwrap();
        let end = end_of_bifunctor(&hom_modules_bifunctor(&f, &g).unwrap()).unwrap();
        assert_eq!(nc.total(), &end.total);
    }
}

/// Ends over `A ⊗ B` only need the arrows `f ⊗ 1` and `1 ⊗ g`.
#[test]
fn fubini_for_a_random_two_variable_bifunctor() {
    let bounds = Bounds {
        max_objects: 2,
        ..Bounds::default()
    };
    let mut rng = rng_from_seed(50);
    let (a, b) = (
        random_category::<Q>(&mut rng, &bounds),
        random_category::<Q>(&mut rng, &bounds),
    );
    let ab = tensor_category(&a, &b);
    let t = random_bifunctor(&mut rng, &ab);
    let nb = b.object_count();
    let mut generators = Vec::new();
    for x in 0..a.object_count() {
        for y in 0..nb {
            for f in basis_arrows(&a).into_iter().filter(|f| f.from == x) {
                let layout = TensorLayout::new(a.hom(x, f.to).space(), b.hom(y, y).space());
                generators.push(Arrow {
                    from: x * nb + y,
                    to: f.to * nb + y,
                    vector: layout.tensor(&f.vector, b.identity(y)),
                    degree: f.degree,
                });
            }
            for g in basis_arrows(&b).into_iter().filter(|g| g.from == y) {
                let layout = TensorLayout::new(a.hom(x, x).space(), b.hom(y, g.to).space());
                generators.push(Arrow {
                    from: x * nb + y,
                    to: x * nb + g.to,
                    vector: layout.tensor(a.identity(x), &g.vector),
                    degree: g.degree,
                });
            }
        }
    }
    let iterated = end_subspace(&t, &generators);
    let full = end_subspace(&t, &basis_arrows(&ab));
    assert_eq!(iterated, full);
    check_end(&t).unwrap();
}

/// A random chain map `u: Y → ∫T` gives the wedge `λ ∘ u`; factoring it
/// through the end returns `u`, and the factorization is unique because
/// the projections are jointly injective.
#[test]
fn end_universal_property_for_random_cones() {
    for seed in 0..10 {
        let mut rng = rng_from_seed(300 + seed);
        let a = random_category::<Q>(&mut rng, &Bounds::default());
        let t = random_bifunctor(&mut rng, &a);
        let end = end_of_bifunctor(&t).unwrap();
        let y = random_module(&mut rng, &a).value(0).clone();
        let h = hom_complex(&y, &end.total);
        let z0 = h.d_block(0).kernel();
        let mut coords = vec![Q::zero(); h.dim(0)];
        for col in z0.columns() {
            let c = Q::from_int(rng.gen_range(-2..=2));
            for (a, b) in coords.iter_mut().zip(col) {
                *a = a.plus(&c.times(&b));
            }
        }
        let u = hom_map(y.space(), end.total.space(), 0, &coords);
        let cone: Vec<_> = end.projections.iter().map(|p| p.compose(&u)).collect();
        assert_eq!(end.factor(&t, &y, &cone).unwrap(), u, "seed {seed}");
        for d in end.total.space().support() {
            let joint = end.inclusion.block_or_zero(d);
            assert_eq!(joint.rank(), joint.cols());
        }
    }
}

#[test]
fn oracle_detects_a_wrong_subspace() {
    let c = fixtures::a2::<Q>();
    let t = hom_bifunctor(&c);
    let all = end_subspace(&t, &basis_arrows(&c));
    let none = end_subspace(&t, &[]);
    assert_ne!(all, none);
    assert_eq!(all[&0], span_basis(&all[&0]));
}
