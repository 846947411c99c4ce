//! Ends and coends of bifunctors `op(A) ⊗ A → complexes`, the two actions,
//! tensor products over a category and weighted (co)limits.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::category::{DgCategory, Morphism};
use crate::complex::{
    direct_sum, hom_complex, hom_coords, hom_map, quotient_complex, subcomplex, tensor_maps, Complex, ComplexError,
};
use crate::field::Field;
use crate::graded::GradedMap;
use crate::linalg::Matrix;
use crate::module::{Bimodule, DgModule, ModuleError};
use crate::nat::{dgnat_complex, NatError};
use crate::sign::Sign;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EndError {
    #[error("bifunctor is not defined on op(A) ⊗ A")]
    NotEnvelope,
    #[error("objects do not match the action")]
    ObjectMismatch,
    #[error("element or morphism is not homogeneous")]
    NotHomogeneous,
    #[error("the family does not factor through the end (degree {0})")]
    NotAWedge(i32),
    #[error("modules live over mismatched categories")]
    BaseMismatch,
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

/// The category `A` of a bifunctor over `op(A) ⊗ A`.
pub fn envelope_base<F: Field>(t: &Bimodule<F>) -> Result<&DgCategory<F>, EndError> {
    if *t.first() != t.second().opposite() {
        return Err(EndError::NotEnvelope);
    }
    Ok(t.second())
}

/// An element of `T(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiElement<F> {
    pub first: usize,
    pub second: usize,
    pub coeffs: Vec<F>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `g · y = T(1 ⊗ g)(y)`.
    Left,
    /// `x · f = (−1)^{|x||f|} T(f^op ⊗ 1)(x)`.
    Right,
}

pub fn act<F: Field>(t: &Bimodule<F>, f: &Morphism<F>, x: &BiElement<F>, side: Side) -> Result<BiElement<F>, EndError> {
    let a = envelope_base(t)?;
    let fdeg = f.degree(a).ok_or(EndError::NotHomogeneous)?;
    let xdeg = t
        .value(x.first, x.second)
        .space()
        .homogeneous_degree(&x.coeffs)
        .ok_or(EndError::NotHomogeneous)?;
    match side {
        Side::Left => {
            if f.source != x.second {
                return Err(EndError::ObjectMismatch);
            }
            let m = t.act_second(x.first, f.source, f.target, &f.coeffs, fdeg);
            Ok(BiElement {
                first: x.first,
                second: f.target,
                coeffs: m.apply_flat(&x.coeffs),
            })
        }
        Side::Right => {
            if f.target != x.first {
                return Err(EndError::ObjectMismatch);
            }
            // f: A → A′ is f^op: A′ → A in op(A).
            let m = t.act_first(f.target, f.source, x.second, &f.coeffs, fdeg);
            let sign = Sign::koszul(xdeg, fdeg);
            Ok(BiElement {
                first: f.source,
                second: x.second,
                coeffs: m.apply_flat(&x.coeffs).iter().map(|c| sign.apply(c)).collect(),
            })
        }
    }
}

/// `⊕_A T(A, A)` with basis labels prefixed by object labels.
pub fn diagonal_sum<F: Field>(t: &Bimodule<F>, a: &DgCategory<F>) -> Complex<F> {
    let parts: Vec<(&str, &Complex<F>)> = (0..a.object_count()).map(|x| (a.label(x), t.value(x, x))).collect();
    direct_sum(&parts)
}

/// Coordinate block of `T(x, x)` inside degree `degree` of [`diagonal_sum`].
pub fn diagonal_offset<F: Field>(t: &Bimodule<F>, x: usize, degree: i32) -> usize {
    (0..x).map(|y| t.value(y, y).dim(degree)).sum()
}

pub fn diagonal_inclusion<F: Field>(t: &Bimodule<F>, product: &Complex<F>, x: usize) -> GradedMap<F> {
    GradedMap::from_fn(t.value(x, x).space(), product.space(), 0, |d| {
        let mut m = Matrix::zeros(product.dim(d), t.value(x, x).dim(d));
        m.set_block(diagonal_offset(t, x, d), 0, &Matrix::identity(t.value(x, x).dim(d)));
        Some(m)
    })
}

pub fn diagonal_projection<F: Field>(t: &Bimodule<F>, product: &Complex<F>, x: usize) -> GradedMap<F> {
    GradedMap::from_fn(product.space(), t.value(x, x).space(), 0, |d| {
        let mut m = Matrix::zeros(t.value(x, x).dim(d), product.dim(d));
        m.set_block(0, diagonal_offset(t, x, d), &Matrix::identity(t.value(x, x).dim(d)));
        Some(m)
    })
}

#[derive(Clone, Debug)]
pub struct EndResult<F> {
    pub total: Complex<F>,
    pub product: Complex<F>,
    /// `total → ⊕_A T(A, A)`.
    pub inclusion: GradedMap<F>,
    /// `λ_A: total → T(A, A)`.
    pub projections: Vec<GradedMap<F>>,
}

/// Families `(x_A)` with `T(1 ⊗ f)(x_A) = T(f^op ⊗ 1)(x_B)` for every basis
/// morphism `f: A → B`; this is `f · x_A = (−1)^{ij} x_B · f` with the sign
/// of the right action cancelled.
pub fn end_constraints<F: Field>(t: &Bimodule<F>, a: &DgCategory<F>, product: &Complex<F>, j: i32) -> Matrix<F> {
    let n = a.object_count();
    let mut rows = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for f in 0..a.hom_dim(x, y) {
                let i = a.basis_degree(x, y, f);
                let height = t.value(x, y).dim(i + j);
                if height == 0 {
                    continue;
                }
                let e = a.basis_vector(x, y, f);
                let mut block = Matrix::zeros(height, product.dim(j));
                let left = t.act_second(x, x, y, &e, i).block_or_zero(j);
                block.add_block(0, diagonal_offset(t, x, j), &left);
                let right = t.act_first(y, x, y, &e, i).block_or_zero(j);
                block.add_block(0, diagonal_offset(t, y, j), &right.negated());
                rows.push(block);
            }
        }
    }
    Matrix::vstack(product.dim(j), &rows)
}

pub fn end_of_bifunctor<F: Field>(t: &Bimodule<F>) -> Result<EndResult<F>, EndError> {
    let a = envelope_base(t)?;
    let product = diagonal_sum(t, a);
    let mut basis = BTreeMap::new();
    for j in product.space().support() {
        let k = end_constraints(t, a, &product, j).kernel();
        if k.cols() > 0 {
            basis.insert(j, k);
        }
    }
    let (total, inclusion) = subcomplex(&product, &basis, "e")?;
    let projections = (0..a.object_count())
        .map(|x| {
            GradedMap::from_fn(total.space(), t.value(x, x).space(), 0, |d| {
                let block = inclusion.block_or_zero(d);
                Some(block.submatrix(diagonal_offset(t, x, d), 0, t.value(x, x).dim(d), block.cols()))
            })
        })
        .collect();
    Ok(EndResult {
        total,
        product,
        inclusion,
        projections,
    })
}

impl<F: Field> EndResult<F> {
    /// The unique `u: Y → end` with `λ_A ∘ u = α_A`, for a wedge `α`.
    pub fn factor(&self, t: &Bimodule<F>, y: &Complex<F>, cone: &[GradedMap<F>]) -> Result<GradedMap<F>, EndError> {
        envelope_base(t)?;
        let mut stacked = GradedMap::zero(y.space(), self.product.space(), 0);
        for (x, alpha) in cone.iter().enumerate() {
            stacked = stacked.plus(&diagonal_inclusion(t, &self.product, x).compose(alpha));
        }
        let mut blocks = BTreeMap::new();
        for d in y.space().support() {
            let target = self.inclusion.block_or_zero(d);
            let solved = target
                .solve_matrix(&stacked.block_or_zero(d))
                .ok_or(EndError::NotAWedge(d))?;
            blocks.insert(d, solved);
        }
        Ok(GradedMap::from_fn(y.space(), self.total.space(), 0, |d| {
            blocks.get(&d).cloned()
        }))
    }
}

#[derive(Clone, Debug)]
pub struct CoendResult<F> {
    pub total: Complex<F>,
    pub product: Complex<F>,
    /// `⊕_A T(A, A) → total`.
    pub projection: GradedMap<F>,
    /// Graded section of the projection.
    pub lift: GradedMap<F>,
    /// `μ_A: T(A, A) → total`.
    pub injections: Vec<GradedMap<F>>,
}

/// Columns `θ(f ⊗ x) = f·x − (−1)^{|f||x|} x·f = T(1⊗f)(x) − T(f^op⊗1)(x)`
/// for basis `f: A → B` and basis `x ∈ T(B, A)`, grouped by degree.
pub fn coend_relations<F: Field>(t: &Bimodule<F>, a: &DgCategory<F>, product: &Complex<F>) -> BTreeMap<i32, Matrix<F>> {
    let n = a.object_count();
    let mut cols: BTreeMap<i32, Vec<Vec<F>>> = BTreeMap::new();
    for x in 0..n {
        for y in 0..n {
            for f in 0..a.hom_dim(x, y) {
                let i = a.basis_degree(x, y, f);
                let e = a.basis_vector(x, y, f);
                let left = t.act_second(y, x, y, &e, i);
                let right = t.act_first(y, x, x, &e, i);
                let value = t.value(y, x);
                for j in value.space().support() {
                    for k in 0..value.dim(j) {
                        let mut col = vec![F::zero(); product.dim(i + j)];
                        let mut v = vec![F::zero(); value.dim(j)];
                        v[k] = F::one();
                        for (r, c) in left.apply(j, &v).into_iter().enumerate() {
                            let o = diagonal_offset(t, y, i + j) + r;
                            col[o] = col[o].plus(&c);
                        }
                        for (r, c) in right.apply(j, &v).into_iter().enumerate() {
                            let o = diagonal_offset(t, x, i + j) + r;
                            col[o] = col[o].minus(&c);
                        }
                        if col.iter().any(|c| !c.is_zero()) {
                            cols.entry(i + j).or_default().push(col);
                        }
                    }
                }
            }
        }
    }
    cols.into_iter()
        .map(|(d, cs)| (d, Matrix::from_columns(product.dim(d), &cs)))
        .collect()
}

pub fn coend_of_bifunctor<F: Field>(t: &Bimodule<F>) -> Result<CoendResult<F>, EndError> {
    let a = envelope_base(t)?;
    let product = diagonal_sum(t, a);
    let relations = coend_relations(t, a, &product);
    let q = quotient_complex(&product, &relations)?;
    let injections = (0..a.object_count())
        .map(|x| q.projection.compose(&diagonal_inclusion(t, &product, x)))
        .collect();
    Ok(CoendResult {
        total: q.complex,
        product,
        projection: q.projection,
        lift: q.lift,
        injections,
    })
}

/// `(A, A′) ↦ F(A) ⊗ G(A′)` with `F` over `op(A)` and `G` over `A`; the
/// actions are `F(α) ⊗ 1` and `1 ⊗ G(β)` with the Koszul rule.
pub fn tensor_bifunctor<F: Field>(f: &DgModule<F>, g: &DgModule<F>) -> Result<Bimodule<F>, EndError> {
    if *f.base() != g.base().opposite() {
        return Err(EndError::BaseMismatch);
    }
    let (op, a) = (f.base(), g.base());
    let values = |x: usize, y: usize| crate::complex::tensor_complex(f.value(x), g.value(y));
    Ok(Bimodule::from_actions(
        op,
        a,
        values,
        |alpha, x, x2, y| {
            let id = GradedMap::identity(g.value(y).space());
            relabel_tensor(
                tensor_maps(f.action_basis(x, x2, alpha), &id),
                &values(x, y),
                &values(x2, y),
            )
        },
        |beta, x, y, y2| {
            let id = GradedMap::identity(f.value(x).space());
            relabel_tensor(
                tensor_maps(&id, g.action_basis(y, y2, beta)),
                &values(x, y),
                &values(x, y2),
            )
        },
    )?)
}

fn relabel_tensor<F: Field>(m: GradedMap<F>, src: &Complex<F>, tgt: &Complex<F>) -> GradedMap<F> {
    m.relabel(src.space(), tgt.space())
}

/// `F ⊗_A G`: the coend of [`tensor_bifunctor`].
pub fn tensor_over_category<F: Field>(f: &DgModule<F>, g: &DgModule<F>) -> Result<CoendResult<F>, EndError> {
    coend_of_bifunctor(&tensor_bifunctor(f, g)?)
}

/// `{W, F} = DgNat(W, F)`.
pub fn weighted_limit<F: Field>(w: &DgModule<F>, f: &DgModule<F>) -> Result<Complex<F>, NatError> {
    Ok(dgnat_complex(w, f)?.total().clone())
}

/// `colim^W F = W ⊗_A F` for a weight over `op(A)`.
pub fn weighted_colimit<F: Field>(w: &DgModule<F>, f: &DgModule<F>) -> Result<Complex<F>, EndError> {
    Ok(tensor_over_category(w, f)?.total)
}

/// `S(A, A′) = T(A′, A)^∨` with actions dual to those of `T`; the end of
/// `S` is dual to the coend of `T`.
pub fn dual_bifunctor<F: Field>(t: &Bimodule<F>) -> Result<Bimodule<F>, EndError> {
    let a = envelope_base(t)?.clone();
    let k = Complex::line(0, "1");
    let values = |x: usize, y: usize| hom_complex(t.value(y, x), &k);
    let precompose = |src: &Complex<F>, tgt: &Complex<F>, under: &Complex<F>, map: GradedMap<F>, deg: i32| {
        // φ ↦ (−1)^{|α||φ|} φ ∘ map, for φ: under → K with map: tgt-side → under.
        GradedMap::from_columns_fn(src.space(), tgt.space(), deg, |p| {
            let pdeg = src.space().degree_of(p);
            let mut e = vec![F::zero(); src.dim(pdeg)];
            e[p - src.space().offset(pdeg)] = F::one();
            let phi = hom_map(under.space(), k.space(), pdeg, &e);
            let composed = phi.compose(&map).scaled(&Sign::koszul(deg, pdeg).scalar());
            tgt.space().embed(pdeg + deg, &hom_coords(&composed))
        })
    };
    Ok(Bimodule::from_actions(
        &a.opposite(),
        &a,
        values,
        |alpha, x, x2, y| {
            // α ∈ hom(x2, x); T(1 ⊗ α): T(y, x2) → T(y, x).
            let deg = a.basis_degree(x2, x, alpha);
            let map = t.act_second(y, x2, x, &a.basis_vector(x2, x, alpha), deg);
            precompose(&values(x, y), &values(x2, y), t.value(y, x), map, deg)
        },
        |beta, x, y, y2| {
            // β ∈ hom(y, y2); T(β^op ⊗ 1): T(y2, x) → T(y, x).
            let deg = a.basis_degree(y, y2, beta);
            let map = t.act_first(y2, y, x, &a.basis_vector(y, y2, beta), deg);
            precompose(&values(x, y), &values(x, y2), t.value(y, x), map, deg)
        },
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::fixtures;
    use crate::module::{hom_bifunctor, representable, validate_dg_module, yoneda_module, zero_module};

    type Q = Rational;

    fn dims(c: &Complex<Q>) -> BTreeMap<i32, usize> {
        c.dims()
    }

    #[test]
    fn actions_on_hom_bifunctors() {
        let k1 = fixtures::k1::<Q>();
        let t = hom_bifunctor(&k1);
        let one = Morphism::basis(&k1, 0, 0, 0);
        let x = BiElement {
            first: 0,
            second: 0,
            coeffs: vec![Q::one()],
        };
        assert_eq!(act(&t, &one, &x, Side::Left).unwrap(), x);

        let d1 = fixtures::d1::<Q>();
        let t = hom_bifunctor(&d1);
        let eps = Morphism::basis(&d1, 0, 0, 0);
        let unit = BiElement {
            first: 0,
            second: 0,
            coeffs: d1.identity(0).to_vec(),
        };
        let eps_el = BiElement {
            first: 0,
            second: 0,
            coeffs: eps.coeffs.clone(),
        };
        assert_eq!(act(&t, &eps, &unit, Side::Right).unwrap(), eps_el);
        assert!(act(&t, &eps, &eps_el, Side::Left)
            .unwrap()
            .coeffs
            .iter()
            .all(|c| c.is_zero()));
    }

    #[test]
    fn ends_of_hom_bifunctors() {
        let e = end_of_bifunctor(&hom_bifunctor(&fixtures::k1::<Q>())).unwrap();
        assert_eq!(dims(&e.total), BTreeMap::from([(0, 1)]));
        let e = end_of_bifunctor(&hom_bifunctor(&fixtures::a2::<Q>())).unwrap();
        assert_eq!(dims(&e.total), BTreeMap::from([(0, 1)]));
        let e = end_of_bifunctor(&hom_bifunctor(&fixtures::d1::<Q>())).unwrap();
        assert_eq!(dims(&e.total), BTreeMap::from([(-1, 1), (0, 1)]));
        assert!(e.total.is_acyclic());
    }

    #[test]
    fn coends_of_hom_bifunctors() {
        let c = coend_of_bifunctor(&hom_bifunctor(&fixtures::k1::<Q>())).unwrap();
        assert_eq!(dims(&c.total), BTreeMap::from([(0, 1)]));
        let c = coend_of_bifunctor(&hom_bifunctor(&fixtures::a2::<Q>())).unwrap();
        assert_eq!(dims(&c.total), BTreeMap::from([(0, 2)]));
        let c = coend_of_bifunctor(&hom_bifunctor(&fixtures::d1::<Q>())).unwrap();
        assert_eq!(dims(&c.total), BTreeMap::from([(-1, 1), (0, 1)]));
        assert!(crate::complex::validate_complex(&c.total).is_valid());
    }

    /// Relations with an extra Koszul sign on the second term, i.e.
    /// `T(1⊗f)(x) − (−1)^{|f||x|} T(f^op⊗1)(x)`.
    fn twisted_relations(t: &Bimodule<Q>) -> BTreeMap<i32, Matrix<Q>> {
        let a = envelope_base(t).unwrap();
        let product = diagonal_sum(t, a);
        let mut cols: BTreeMap<i32, Vec<Vec<Q>>> = BTreeMap::new();
        for x in 0..a.object_count() {
            for y in 0..a.object_count() {
                for f in 0..a.hom_dim(x, y) {
                    let i = a.basis_degree(x, y, f);
                    let e = a.basis_vector(x, y, f);
                    let left = t.act_second(y, x, y, &e, i);
                    let right = t.act_first(y, x, x, &e, i);
                    let value = t.value(y, x);
                    for j in value.space().support() {
                        let sign: Q = Sign::koszul(i, j).scalar();
                        for k in 0..value.dim(j) {
                            let mut v = vec![Q::zero(); value.dim(j)];
                            v[k] = Q::one();
                            let mut col = vec![Q::zero(); product.dim(i + j)];
                            for (r, c) in left.apply(j, &v).into_iter().enumerate() {
                                let o = diagonal_offset(t, y, i + j) + r;
                                col[o] = col[o].plus(&c);
                            }
                            for (r, c) in right.apply(j, &v).into_iter().enumerate() {
                                let o = diagonal_offset(t, x, i + j) + r;
                                col[o] = col[o].minus(&c.times(&sign));
                            }
                            cols.entry(i + j).or_default().push(col);
                        }
                    }
                }
            }
        }
        cols.into_iter()
            .map(|(d, cs)| (d, Matrix::from_columns(product.dim(d), &cs)))
            .collect()
    }

    #[test]
    fn koszul_twisted_coend_relations_are_not_subcomplexes() {
        let d1 = fixtures::d1::<Q>();
        let dd = crate::category::tensor_category(&d1, &d1);
        for t in [
            hom_bifunctor(&dd),
            tensor_bifunctor(&yoneda_module(&dd, 0), &representable(&dd, 0)).unwrap(),
        ] {
            let product = diagonal_sum(&t, &dd);
            let q = quotient_complex(&product, &coend_relations(&t, &dd, &product)).unwrap();
            assert_eq!(dims(&q.complex), BTreeMap::from([(-2, 1), (-1, 2), (0, 1)]));
            assert!(matches!(
                quotient_complex(&product, &twisted_relations(&t)),
                Err(ComplexError::NotStable { .. })
            ));
        }
    }

    #[test]
    fn tensor_over_category_examples() {
        let a2 = fixtures::a2::<Q>();
        for a in 0..2 {
            for g in [representable(&a2, 0), representable(&a2, 1)] {
                let t = tensor_over_category(&yoneda_module(&a2, a), &g).unwrap();
                assert_eq!(dims(&t.total), dims(g.value(a)));
            }
        }
        let t = tensor_over_category(&yoneda_module(&a2, 1), &representable(&a2, 0)).unwrap();
        assert_eq!(dims(&t.total), BTreeMap::from([(0, 1)]));
        let k1 = fixtures::k1::<Q>();
        let t = tensor_over_category(&yoneda_module(&k1, 0), &representable(&k1, 0)).unwrap();
        assert_eq!(dims(&t.total), BTreeMap::from([(0, 1)]));
        let d1 = fixtures::d1::<Q>();
        let t = tensor_over_category(&yoneda_module(&d1, 0), &representable(&d1, 0)).unwrap();
        assert_eq!(dims(&t.total), BTreeMap::from([(-1, 1), (0, 1)]));
        assert_eq!(t.total.differential().to_matrix().rank(), 1);
    }

    #[test]
    fn weighted_limits_and_colimits() {
        let a2 = fixtures::a2::<Q>();
        for f in [representable(&a2, 0), representable(&a2, 1)] {
            let l = weighted_limit(&representable(&a2, 0), &f).unwrap();
            assert_eq!(dims(&l), dims(f.value(0)));
            assert!(weighted_limit(&zero_module(&a2), &f).unwrap().is_zero());
            let c = weighted_colimit(&yoneda_module(&a2, 0), &f).unwrap();
            assert_eq!(dims(&c), dims(f.value(0)));
            assert!(weighted_colimit(&zero_module(&a2.opposite()), &f).unwrap().is_zero());
        }
        let c = weighted_colimit(&yoneda_module(&a2, 1), &representable(&a2, 0)).unwrap();
        assert_eq!(dims(&c), BTreeMap::from([(0, 1)]));
        let k1 = fixtures::k1::<Q>();
        for n in [-2, 0, 3] {
            let f = representable(&k1, 0).regraded(-n);
            let l = weighted_limit(&representable(&k1, 0), &f).unwrap();
            assert_eq!(dims(&l), BTreeMap::from([(n, 1)]));
        }
    }

    #[test]
    fn end_universal_property_on_its_own_cone() {
        let d1 = fixtures::d1::<Q>();
        let t = hom_bifunctor(&d1);
        let e = end_of_bifunctor(&t).unwrap();
        let u = e.factor(&t, &e.total, &e.projections).unwrap();
        assert_eq!(u, GradedMap::identity(e.total.space()));
        // On A2, (1_a, 0) is not a wedge because of u.
        let a2 = fixtures::a2::<Q>();
        let t = hom_bifunctor(&a2);
        let e = end_of_bifunctor(&t).unwrap();
        let y = Complex::line(0, "y");
        let one = |x: usize| GradedMap::from_fn(y.space(), t.value(x, x).space(), 0, |_| Some(Matrix::identity(1)));
        let cone = vec![one(0), one(1)];
        assert_eq!(e.factor(&t, &y, &cone).unwrap().block_or_zero(0), Matrix::identity(1));
        let broken = vec![one(0), GradedMap::zero(y.space(), t.value(1, 1).space(), 0)];
        assert!(e.factor(&t, &y, &broken).is_err());
    }

    #[test]
    fn end_coend_duality_on_fixtures() {
        for (_, c) in fixtures::all::<Q>() {
            let t = hom_bifunctor(&c);
            let s = dual_bifunctor(&t).unwrap();
            assert!(validate_dg_module(s.module()).is_valid());
            let e = end_of_bifunctor(&s).unwrap();
            let co = coend_of_bifunctor(&t).unwrap();
            let flipped: BTreeMap<i32, usize> = co.total.dims().into_iter().map(|(d, n)| (-d, n)).collect();
            assert_eq!(e.total.dims(), flipped);
        }
    }
}
