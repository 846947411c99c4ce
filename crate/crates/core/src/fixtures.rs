//! The canonical small dg-categories used throughout the tests.

use std::collections::BTreeMap;

use crate::category::{CategoryBuilder, DgCategory};
use crate::complex::Complex;
use crate::field::Field;
use crate::graded::{GradedMap, GradedSpace};
use crate::linalg::Matrix;

/// One object `★` with `hom = K·1` in degree 0.
pub fn k1<F: Field>() -> DgCategory<F> {
    let mut b = CategoryBuilder::new();
    let star = b.object("★").expect("fresh");
    b.hom(star, star, Complex::line(0, "1"));
    b.identity(star, vec![F::one()]);
    b.unit_entries();
    b.build().expect("well formed")
}

/// Two objects `a`, `b` and one arrow `u: a → b`, all in degree 0.
pub fn a2<F: Field>() -> DgCategory<F> {
    let mut b = CategoryBuilder::new();
    let x = b.object("a").expect("fresh");
    let y = b.object("b").expect("fresh");
    b.hom(x, x, Complex::line(0, "1_a"));
    b.hom(y, y, Complex::line(0, "1_b"));
    b.hom(x, y, Complex::line(0, "u"));
    b.identity(x, vec![F::one()]);
    b.identity(y, vec![F::one()]);
    b.unit_entries();
    b.build().expect("well formed")
}

fn d1_builder<F: Field>(eps_squared: Vec<F>) -> CategoryBuilder<F> {
    let space = GradedSpace::new(BTreeMap::from([
        (-1, vec!["ε".to_string()]),
        (0, vec!["1".to_string()]),
    ]))
    .expect("distinct labels");
    let d = GradedMap::from_fn(&space, &space, 1, |_| Some(Matrix::identity(1)));
    let hom = Complex::new(space, d).expect("degree one endomorphism");
    let mut b = CategoryBuilder::new();
    let star = b.object("★").expect("fresh");
    b.hom(star, star, hom);
    // Basis order: ε (degree −1) then 1 (degree 0).
    b.identity(star, vec![F::zero(), F::one()]);
    b.compose(star, star, star, 0, 0, eps_squared);
    b.unit_entries();
    b
}

/// Dual numbers with `|ε| = −1`, `d(ε) = 1` and `ε² = 0`.
pub fn d1<F: Field>() -> DgCategory<F> {
    d1_builder(vec![F::zero(), F::zero()]).build().expect("well formed")
}

/// [`d1`] with the wrong product `ε ∘ ε = ε`.
pub fn d1_corrupted<F: Field>() -> DgCategory<F> {
    d1_builder(vec![F::one(), F::zero()]).build().expect("well formed")
}

/// All three valid fixtures with their names.
pub fn all<F: Field>() -> Vec<(&'static str, DgCategory<F>)> {
    vec![("K1", k1()), ("A2", a2()), ("D1", d1())]
}

/// `A2 → K1`: both objects to `★`, `u` to `1`.
pub fn collapse_a2<F: Field>() -> crate::functor::DgFunctor<F> {
    let (a2, k1) = (a2::<F>(), k1::<F>());
    crate::functor::DgFunctor::new(&a2, &k1, vec![0, 0], |x, y| {
        if a2.hom_dim(x, y) == 0 {
            Matrix::zeros(1, 0)
        } else {
            Matrix::identity(1)
        }
    })
    .expect("well formed")
}
