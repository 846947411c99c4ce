use proptest::prelude::*;

use dgcat::category::{opposite_category, DgCategory};
use dgcat::complex::{hom_complex, tensor_complex, validate_complex, Complex};
use dgcat::field::{Field, Rational};
use dgcat::module::validate_dg_module;
use dgcat::nat::{dgnat_complex, yoneda_iso};
use dgcat::random::{gauge_module, random_category, random_module, rng_from_seed, Bounds};
use dgcat::sign::Sign;

type Q = Rational;

fn small_bounds() -> Bounds {
    Bounds {
        max_objects: 2,
        ..Bounds::default()
    }
}

fn some_hom(c: &DgCategory<Q>) -> &Complex<Q> {
    let n = c.object_count();
    c.hom(0, n - 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn koszul_sign_is_symmetric_and_multiplicative(a in -6i32..6, b in -6i32..6, c in -6i32..6) {
        prop_assert_eq!(Sign::koszul(a, b), Sign::koszul(b, a));
        prop_assert_eq!(Sign::koszul(a, b + c), Sign::koszul(a, b) * Sign::koszul(a, c));
        prop_assert_eq!(Sign::parity(a as i64 + b as i64), Sign::parity(a as i64) * Sign::parity(b as i64));
    }

    #[test]
    fn rationals_print_and_parse_back(n in -1000i64..1000, d in 1i64..1000) {
        let q = Rational::new(n, d);
        prop_assert_eq!(Q::parse_scalar(&q.to_string()).unwrap(), q);
    }

    #[test]
    fn opposite_is_an_involution(seed in 0u64..10_000) {
        let c: DgCategory<Q> = random_category(&mut rng_from_seed(seed), &Bounds::default());
        prop_assert_eq!(opposite_category(&opposite_category(&c)), c);
    }

    #[test]
    fn hom_and_tensor_of_homs_are_complexes(seed in 0u64..10_000) {
        let mut rng = rng_from_seed(seed);
        let a: DgCategory<Q> = random_category(&mut rng, &small_bounds());
        let b: DgCategory<Q> = random_category(&mut rng, &small_bounds());
        let (x, y) = (some_hom(&a), some_hom(&b));
        prop_assert!(validate_complex(&hom_complex(x, y)).is_valid());
        prop_assert!(validate_complex(&tensor_complex(x, y)).is_valid());
    }

    #[test]
    fn yoneda_round_trips_for_random_modules(seed in 0u64..10_000) {
        let mut rng = rng_from_seed(seed);
        let c: DgCategory<Q> = random_category(&mut rng, &small_bounds());
        let m = random_module(&mut rng, &c);
        prop_assert!(validate_dg_module(&m).is_valid());
        for a in c.objects() {
            let iso = yoneda_iso(&c, a, &m).unwrap();
            prop_assert!(iso.round_trips());
            prop_assert!(iso.is_chain_iso());
        }
    }

    #[test]
    fn change_of_basis_preserves_nat_dimensions(seed in 0u64..10_000) {
        let mut rng = rng_from_seed(seed);
        let c: DgCategory<Q> = random_category(&mut rng, &small_bounds());
        let m = random_module(&mut rng, &c);
        let n = random_module(&mut rng, &c);
        let m2 = gauge_module(&mut rng, &m);
        prop_assert!(validate_dg_module(&m2).is_valid());
        let before = dgnat_complex(&m, &n).unwrap().total().dims();
        let after = dgnat_complex(&m2, &n).unwrap().total().dims();
        prop_assert_eq!(before, after);
    }
}
