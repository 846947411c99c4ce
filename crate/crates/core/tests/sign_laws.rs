use std::time::{Duration, Instant};

use dgcat::category::{opposite_category, tensor_category, validate_dg_category, DgCategory};
use dgcat::field::Rational;
use dgcat::random::{corrupt, random_category, rng_from_seed, Bounds, Corruption};

type Q = Rational;

#[test]
fn random_categories_pass_and_single_flips_are_caught() {
    let start = Instant::now();
    let bounds = Bounds::default();
    let (mut differential, mut composition) = (0, 0);
    for seed in 0..120 {
        let mut rng = rng_from_seed(seed);
        let c: DgCategory<Q> = random_category(&mut rng, &bounds);
        let report = validate_dg_category(&c);
        assert!(report.is_valid(), "seed {seed}: {report}");

        let (bad, flip) = corrupt(&mut rng, &c);
        let report = validate_dg_category(&bad);
        assert!(report.has(flip.law()), "seed {seed}: {flip:?} not detected:\n{report}");
        match flip {
            Corruption::Differential { .. } => differential += 1,
            Corruption::Composition { .. } => composition += 1,
        }
    }
    assert!(differential > 0 && composition > 0, "{differential} / {composition}");
    assert!(start.elapsed() < Duration::from_secs(60), "{:?}", start.elapsed());
}

#[test]
fn opposites_and_tensors_of_random_categories_are_valid() {
    let small = Bounds {
        max_objects: 2,
        max_dim: 1,
        ..Bounds::default()
    };
    for seed in 0..12 {
        let mut rng = rng_from_seed(500 + seed);
        let a: DgCategory<Q> = random_category(&mut rng, &small);
        let b: DgCategory<Q> = random_category(&mut rng, &small);
        let op = opposite_category(&a);
        assert!(validate_dg_category(&op).is_valid(), "seed {seed}");
        assert_eq!(opposite_category(&op), a);
        let ab = tensor_category(&a, &b);
        let r = validate_dg_category(&ab);
        assert!(r.is_valid(), "seed {seed}: {r}");
    }
}
