//! Dg-modules (dg-functors into complexes), representables, the Hom
//! bifunctor, bimodules and restriction of scalars.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::category::{densify, tensor_category, CategoryError, DgCategory};
use crate::complex::{direct_sum, hom_complex, hom_differential, hom_map, Complex, TensorLayout};
use crate::field::Field;
use crate::functor::DgFunctor;
use crate::graded::GradedMap;
use crate::linalg::Matrix;
use crate::report::{Law, ValidationReport, Violation};
use crate::sign::Sign;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("{found} values given for {expected} objects")]
    ValueCount { expected: usize, found: usize },
    #[error("action of basis element {index} of hom({from}, {to}) has the wrong shape or degree")]
    ActionShape { from: String, to: String, index: usize },
    #[error("modules live over different categories")]
    BaseMismatch,
    #[error(transparent)]
    Category(#[from] CategoryError),
}

/// A left dg-module over `base`: a complex per object and, for every basis
/// morphism `f: x → y`, a graded map `M(x) → M(y)` of degree `|f|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgModule<F> {
    base: DgCategory<F>,
    values: Vec<Complex<F>>,
    actions: Vec<Vec<GradedMap<F>>>,
}

impl<F: Field> DgModule<F> {
    pub fn new(
        base: &DgCategory<F>,
        values: Vec<Complex<F>>,
        mut action: impl FnMut(usize, usize, usize) -> GradedMap<F>,
    ) -> Result<Self, ModuleError> {
        let n = base.object_count();
        if values.len() != n {
            return Err(ModuleError::ValueCount {
                expected: n,
                found: values.len(),
            });
        }
        let mut actions = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let mut per = Vec::with_capacity(base.hom_dim(x, y));
                for i in 0..base.hom_dim(x, y) {
                    let g = action(x, y, i);
                    if *g.source() != *values[x].space()
                        || *g.target() != *values[y].space()
                        || g.degree() != base.basis_degree(x, y, i)
                    {
                        return Err(ModuleError::ActionShape {
                            from: base.label(x).to_string(),
                            to: base.label(y).to_string(),
                            index: i,
                        });
                    }
                    per.push(g);
                }
                actions.push(per);
            }
        }
        Ok(DgModule {
            base: base.clone(),
            values,
            actions,
        })
    }

    /// Actions given column by column: `image(x, y, i, p)` is the flat image
    /// of basis vector `p` of `M(x)` under basis morphism `i`.
    pub fn from_images(
        base: &DgCategory<F>,
        values: Vec<Complex<F>>,
        mut image: impl FnMut(usize, usize, usize, usize) -> Vec<F>,
    ) -> Result<Self, ModuleError> {
        let spaces: Vec<_> = values.iter().map(|v| v.space().clone()).collect();
        Self::new(base, values, |x, y, i| {
            GradedMap::from_columns_fn(&spaces[x], &spaces[y], base.basis_degree(x, y, i), |p| {
                image(x, y, i, p)
            })
        })
    }

    pub fn base(&self) -> &DgCategory<F> {
        &self.base
    }

    pub fn value(&self, x: usize) -> &Complex<F> {
        &self.values[x]
    }

    pub fn values(&self) -> &[Complex<F>] {
        &self.values
    }

    pub fn action_basis(&self, x: usize, y: usize, i: usize) -> &GradedMap<F> {
        &self.actions[x * self.base.object_count() + y][i]
    }

    /// `M(v)` for a homogeneous morphism `v ∈ hom(x, y)` of the given degree.
    pub fn act(&self, x: usize, y: usize, v: &[F], degree: i32) -> GradedMap<F> {
        let mut out = GradedMap::zero(self.values[x].space(), self.values[y].space(), degree);
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let a = self.action_basis(x, y, i);
            assert_eq!(a.degree(), degree, "morphism is not homogeneous of degree {degree}");
            out = out.plus(&a.scaled(c));
        }
        out
    }

    /// `M(v)(m)` for arbitrary flat vectors `v ∈ hom(x, y)` and `m ∈ M(x)`.
    pub fn act_on(&self, x: usize, y: usize, v: &[F], m: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.values[y].total_dim()];
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, val) in self.action_basis(x, y, i).apply_flat(m).into_iter().enumerate() {
                out[k] = out[k].plus(&c.times(&val));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Complex::is_zero)
    }

    pub fn total_dim(&self) -> usize {
        self.values.iter().map(Complex::total_dim).sum()
    }

    /// Degree `n` of the result is degree `n + k` here; actions keep their
    /// matrices.
    pub fn regraded(&self, k: i32) -> DgModule<F> {
        let values: Vec<Complex<F>> = self.values.iter().map(|v| v.regraded(k)).collect();
        let spaces: Vec<_> = values.iter().map(|v| v.space().clone()).collect();
        DgModule::new(&self.base, values, |x, y, i| {
            self.action_basis(x, y, i).regraded(k, &spaces[x], &spaces[y])
        })
        .expect("regrading keeps shapes")
    }

    /// Change of basis in every value: `gauge[x][n]` is invertible and its
    /// columns are the new basis of degree `n` at `x`.
    pub fn conjugated(&self, gauge: &[BTreeMap<i32, Matrix<F>>]) -> DgModule<F> {
        let values: Vec<Complex<F>> = self.values.iter().zip(gauge).map(|(v, g)| v.conjugated(g)).collect();
        DgModule::new(&self.base, values.clone(), |x, y, i| {
            let a = self.action_basis(x, y, i);
            GradedMap::from_fn(values[x].space(), values[y].space(), a.degree(), |n| {
                let inv = gauge[y][&(n + a.degree())].inverse().expect("invertible gauge");
                Some(inv.mul(&a.block_or_zero(n)).mul(&gauge[x][&n]))
            })
        })
        .expect("conjugation keeps shapes")
    }
}

/// Checks each value, identities, composition on basis pairs and
/// `d(M(f)) = M(d f)` with the Hom-complex differential on the left.
pub fn validate_dg_module<F: Field>(m: &DgModule<F>) -> ValidationReport {
    let mut report = ValidationReport::default();
    let c = &m.base;
    let n = c.object_count();
    for x in 0..n {
        report.extend(crate::complex::validate_complex(m.value(x)).in_context(c.label(x)));
        if m.act(x, x, c.identity(x), 0) != GradedMap::identity(m.value(x).space()) {
            report.push(Violation::new(Law::PreservesIdentity).objects(&[c.label(x)]));
        }
    }
    for x in 0..n {
        for y in 0..n {
            for i in 0..c.hom_dim(x, y) {
                let deg = c.basis_degree(x, y, i);
                let a = m.action_basis(x, y, i);
                let lhs = hom_differential(m.value(x), m.value(y), a);
                let rhs = m.act(x, y, &c.d(x, y, &c.basis_vector(x, y, i)), deg + 1);
                if lhs != rhs {
                    report.push(
                        Violation::new(Law::CommutesWithDifferential)
                            .objects(&[c.label(x), c.label(y)])
                            .items(&[c.basis_label(x, y, i)]),
                    );
                }
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for g in 0..c.hom_dim(y, z) {
                    let ag = m.action_basis(y, z, g);
                    for f in 0..c.hom_dim(x, y) {
                        let af = m.action_basis(x, y, f);
                        let deg = ag.degree() + af.degree();
                        let gf = densify(c.compose_basis(x, y, z, g, f), c.hom_dim(x, z));
                        if m.act(x, z, &gf, deg) != ag.compose(af) {
                            report.push(
                                Violation::new(Law::PreservesComposition)
                                    .objects(&[c.label(x), c.label(y), c.label(z)])
                                    .items(&[c.basis_label(y, z, g), c.basis_label(x, y, f)]),
                            );
                        }
                    }
                }
            }
        }
    }
    report
}

pub fn zero_module<F: Field>(base: &DgCategory<F>) -> DgModule<F> {
    let n = base.object_count();
    DgModule::from_images(base, vec![Complex::zero(); n], |_, _, _, _| Vec::new()).expect("zero module")
}

/// The covariant representable `Hom(a, −)`: `f` acts by `j ↦ f ∘ j`.
pub fn representable<F: Field>(c: &DgCategory<F>, a: usize) -> DgModule<F> {
    let values = (0..c.object_count()).map(|x| c.hom(a, x).clone()).collect();
    DgModule::from_images(c, values, |x, y, i, p| {
        densify(c.compose_basis(a, x, y, i, p), c.hom_dim(a, y))
    })
    .expect("representable is well formed")
}

/// The contravariant representable `Hom(−, a)` as a module over the
/// opposite category: `Hom(f, a)(j) = (−1)^{|f||j|} j ∘ f`.
pub fn yoneda_module<F: Field>(c: &DgCategory<F>, a: usize) -> DgModule<F> {
    let op = c.opposite();
    let values = (0..c.object_count()).map(|x| c.hom(x, a).clone()).collect();
    // f ∈ op(x, y) = hom(y, x); j ∈ hom(x, a).
    DgModule::from_images(&op, values, |x, y, f, j| {
        let sign = Sign::koszul(c.basis_degree(y, x, f), c.basis_degree(x, a, j));
        c.compose_basis(y, x, a, j, f)
            .iter()
            .fold(vec![F::zero(); c.hom_dim(y, a)], |mut acc, (k, v)| {
                acc[*k] = sign.apply(v);
                acc
            })
    })
    .expect("representable is well formed")
}

/// `F_*(S) = S ∘ F`.
pub fn restrict_module<F: Field>(f: &DgFunctor<F>, s: &DgModule<F>) -> Result<DgModule<F>, ModuleError> {
    if *f.target() != s.base {
        return Err(ModuleError::BaseMismatch);
    }
    let src = f.source();
    let values = (0..src.object_count()).map(|x| s.value(f.object(x)).clone()).collect();
    DgModule::new(src, values, |x, y, i| {
        let image = f.apply(x, y, &src.basis_vector(x, y, i));
        s.act(f.object(x), f.object(y), &image, src.basis_degree(x, y, i))
    })
}

/// Objectwise direct sum, basis labels prefixed per summand.
pub fn direct_sum_modules<F: Field>(
    base: &DgCategory<F>,
    parts: &[(&str, &DgModule<F>)],
) -> Result<DgModule<F>, ModuleError> {
    if parts.iter().any(|(_, m)| m.base != *base) {
        return Err(ModuleError::BaseMismatch);
    }
    let n = base.object_count();
    let values: Vec<Complex<F>> = (0..n)
        .map(|x| {
            let summands: Vec<(&str, &Complex<F>)> = parts.iter().map(|(p, m)| (*p, m.value(x))).collect();
            direct_sum(&summands)
        })
        .collect();
    DgModule::new(base, values.clone(), |x, y, i| {
        let deg = base.basis_degree(x, y, i);
        GradedMap::from_fn(values[x].space(), values[y].space(), deg, |d| {
            let mut block = Matrix::zeros(values[y].dim(d + deg), values[x].dim(d));
            let (mut r, mut c0) = (0, 0);
            for (_, m) in parts {
                block.set_block(r, c0, &m.action_basis(x, y, i).block_or_zero(d));
                r += m.value(y).dim(d + deg);
                c0 += m.value(x).dim(d);
            }
            Some(block)
        })
    })
}

/// `M^∨(x) = Hom(M(x), K)` over the opposite category, with
/// `M^∨(f^op)(φ) = (−1)^{|f||φ|} φ ∘ M(f)`.
pub fn dual_module<F: Field>(m: &DgModule<F>) -> DgModule<F> {
    let c = &m.base;
    let op = c.opposite();
    let k = Complex::line(0, "1");
    let values: Vec<Complex<F>> = m.values.iter().map(|v| hom_complex(v, &k)).collect();
    DgModule::from_images(&op, values.clone(), |x, y, f, p| {
        // f ∈ op(x, y) = hom(y, x); φ ∈ Hom(M(x), K).
        let fdeg = c.basis_degree(y, x, f);
        let space = values[x].space();
        let pdeg = space.degree_of(p);
        let mut e = vec![F::zero(); space.dim(pdeg)];
        e[p - space.offset(pdeg)] = F::one();
        let phi = hom_map(m.value(x).space(), k.space(), pdeg, &e);
        let composed = phi
            .compose(m.action_basis(y, x, f))
            .scaled(&Sign::koszul(fdeg, pdeg).scalar());
        values[y]
            .space()
            .embed(pdeg + fdeg, &crate::complex::hom_coords(&composed))
    })
    .expect("dual is well formed")
}

/// A module over `first ⊗ second`, kept together with its two factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule<F> {
    first: DgCategory<F>,
    second: DgCategory<F>,
    module: DgModule<F>,
}

impl<F: Field> Bimodule<F> {
    /// Wrap a module whose base is `tensor_category(first, second)`.
    pub fn from_module(
        first: &DgCategory<F>,
        second: &DgCategory<F>,
        module: DgModule<F>,
    ) -> Result<Self, ModuleError> {
        if module.base != tensor_category(first, second) {
            return Err(ModuleError::BaseMismatch);
        }
        Ok(Bimodule {
            first: first.clone(),
            second: second.clone(),
            module,
        })
    }

    /// Assemble from the two partial actions: `T(α ⊗ β) = T(α ⊗ 1) ∘ T(1 ⊗ β)`.
    /// `first_action(α, x, x', y)` acts on `T(x, y)` and lands in `T(x', y)`;
    /// `second_action(β, x, y, y')` lands in `T(x, y')`.
    pub fn from_actions(
        first: &DgCategory<F>,
        second: &DgCategory<F>,
        values: impl Fn(usize, usize) -> Complex<F>,
        first_action: impl Fn(usize, usize, usize, usize) -> GradedMap<F>,
        second_action: impl Fn(usize, usize, usize, usize) -> GradedMap<F>,
    ) -> Result<Self, ModuleError> {
        let base = tensor_category(first, second);
        let nb = second.object_count();
        let split = |p: usize| (p / nb, p % nb);
        let vals: Vec<Complex<F>> = (0..base.object_count())
            .map(|p| {
                let (x, y) = split(p);
                values(x, y)
            })
            .collect();
        // Each partial action is shared by many tensor basis elements.
        let mut firsts = BTreeMap::new();
        let mut seconds = BTreeMap::new();
        let module = DgModule::new(&base, vals, |p, q, i| {
            let ((x, y), (x2, y2)) = (split(p), split(q));
            let layout = TensorLayout::new(first.hom(x, x2).space(), second.hom(y, y2).space());
            let (alpha, beta) = layout.split(i);
            let a = firsts
                .entry((alpha, x, x2, y2))
                .or_insert_with(|| first_action(alpha, x, x2, y2));
            let b = seconds
                .entry((beta, x, y, y2))
                .or_insert_with(|| second_action(beta, x, y, y2));
            a.compose(b)
        })?;
        Ok(Bimodule {
            first: first.clone(),
            second: second.clone(),
            module,
        })
    }

    pub fn first(&self) -> &DgCategory<F> {
        &self.first
    }

    pub fn second(&self) -> &DgCategory<F> {
        &self.second
    }

    pub fn module(&self) -> &DgModule<F> {
        &self.module
    }

    pub fn pair(&self, x: usize, y: usize) -> usize {
        x * self.second.object_count() + y
    }

    pub fn value(&self, x: usize, y: usize) -> &Complex<F> {
        self.module.value(self.pair(x, y))
    }

    /// `T(α ⊗ 1_y)` for a homogeneous `α ∈ first(x, x')`.
    pub fn act_first(&self, x: usize, x2: usize, y: usize, alpha: &[F], degree: i32) -> GradedMap<F> {
        let layout = TensorLayout::new(self.first.hom(x, x2).space(), self.second.hom(y, y).space());
        let v = layout.tensor(alpha, self.second.identity(y));
        self.module.act(self.pair(x, y), self.pair(x2, y), &v, degree)
    }

    /// `T(1_x ⊗ β)` for a homogeneous `β ∈ second(y, y')`.
    pub fn act_second(&self, x: usize, y: usize, y2: usize, beta: &[F], degree: i32) -> GradedMap<F> {
        let layout = TensorLayout::new(self.first.hom(x, x).space(), self.second.hom(y, y2).space());
        let v = layout.tensor(self.first.identity(x), beta);
        self.module.act(self.pair(x, y), self.pair(x, y2), &v, degree)
    }
}

/// `Hom(−, −)` over `op(c) ⊗ c`:
/// `(α^op ⊗ α′)(f) = (−1)^{|α|(|α′|+|f|)} α′ ∘ f ∘ α`.
pub fn hom_bifunctor<F: Field>(c: &DgCategory<F>) -> Bimodule<F> {
    let op = c.opposite();
    let spaces = |x: usize, y: usize| c.hom(x, y).space().clone();
    Bimodule::from_actions(
        &op,
        c,
        |x, y| c.hom(x, y).clone(),
        // α ∈ op(x, x') = hom(x', x) acting on f ∈ hom(x, y): (−1)^{|α||f|} f ∘ α.
        |alpha, x, x2, y| {
            let adeg = c.basis_degree(x2, x, alpha);
            GradedMap::from_columns_fn(&spaces(x, y), &spaces(x2, y), adeg, |f| {
                let sign = Sign::koszul(adeg, c.basis_degree(x, y, f));
                signed(c.compose_basis(x2, x, y, f, alpha), sign, c.hom_dim(x2, y))
            })
        },
        |beta, x, y, y2| {
            GradedMap::from_columns_fn(&spaces(x, y), &spaces(x, y2), c.basis_degree(y, y2, beta), |f| {
                densify(c.compose_basis(x, y, y2, beta, f), c.hom_dim(x, y2))
            })
        },
    )
    .expect("hom bifunctor is well formed")
}

fn signed<F: Field>(v: &crate::category::Sparse<F>, sign: Sign, dim: usize) -> Vec<F> {
    let mut out = vec![F::zero(); dim];
    for (k, c) in v {
        out[*k] = sign.apply(c);
    }
    out
}

/// Restrict a bimodule along functors on each factor.
pub fn restrict_bimodule<F: Field>(
    t: &Bimodule<F>,
    f1: &DgFunctor<F>,
    f2: &DgFunctor<F>,
) -> Result<Bimodule<F>, ModuleError> {
    if *f1.target() != t.first || *f2.target() != t.second {
        return Err(ModuleError::BaseMismatch);
    }
    let (a, b) = (f1.source(), f2.source());
    Bimodule::from_actions(
        a,
        b,
        |x, y| t.value(f1.object(x), f2.object(y)).clone(),
        |alpha, x, x2, y| {
            let v = f1.apply(x, x2, &a.basis_vector(x, x2, alpha));
            t.act_first(
                f1.object(x),
                f1.object(x2),
                f2.object(y),
                &v,
                a.basis_degree(x, x2, alpha),
            )
        },
        |beta, x, y, y2| {
            let v = f2.apply(y, y2, &b.basis_vector(y, y2, beta));
            t.act_second(
                f1.object(x),
                f2.object(y),
                f2.object(y2),
                &v,
                b.basis_degree(y, y2, beta),
            )
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::opposite_category;
    use crate::field::Rational;
    use crate::fixtures;
    use crate::functor::{full_subcategory, identity_functor};

    type Q = Rational;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    #[test]
    fn representables_and_yoneda_modules_are_valid() {
        for (_, c) in fixtures::all::<Q>() {
            for a in 0..c.object_count() {
                let r = validate_dg_module(&representable(&c, a));
                assert!(r.is_valid(), "{r}");
                let r = validate_dg_module(&yoneda_module(&c, a));
                assert!(r.is_valid(), "{r}");
                let r = validate_dg_module(&dual_module(&representable(&c, a)));
                assert!(r.is_valid(), "{r}");
            }
            assert!(validate_dg_module(&zero_module(&c)).is_valid());
        }
    }

    #[test]
    fn yoneda_module_values_on_a2() {
        let a2 = fixtures::a2::<Q>();
        let m = yoneda_module(&a2, 1);
        assert_eq!(m.value(0).space().labels(0), ["u".to_string()]);
        assert_eq!(m.value(1).space().labels(0), ["1_b".to_string()]);
        let m = yoneda_module(&a2, 0);
        assert_eq!(m.value(0).dims(), BTreeMap::from([(0, 1)]));
        assert!(m.value(1).is_zero());
        let k1 = fixtures::k1::<Q>();
        assert_eq!(yoneda_module(&k1, 0).value(0).dims(), BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn k1_module_with_identity_action() {
        let k1 = fixtures::k1::<Q>();
        let m = DgModule::from_images(&k1, vec![Complex::line(0, "v")], |_, _, _, _| vec![q(1)]).unwrap();
        assert!(validate_dg_module(&m).is_valid());
        assert_eq!(m.action_basis(0, 0, 0), &GradedMap::identity(m.value(0).space()));
    }

    /// The D1-module `K@(−1) → K@0` with `ε` hitting the generator.
    fn two_term_d1_module() -> DgModule<Q> {
        let d1 = fixtures::d1::<Q>();
        let rep = representable(&d1, 0);
        // ε ∘ 1 = ε and ε ∘ ε = 0, so ε sends 1 to ε: the degree −1 map
        // hitting the generator of degree −1.
        assert!(validate_dg_module(&rep).is_valid());
        rep
    }

    #[test]
    fn two_term_module_relation() {
        let m = two_term_d1_module();
        let d1 = m.base().clone();
        let eps = d1.hom(0, 0).space().find("ε").unwrap();
        let a_eps = m.action_basis(0, 0, eps);
        let d = m.value(0).differential();
        let lhs = d.compose(a_eps).plus(&a_eps.compose(d));
        assert_eq!(lhs, GradedMap::identity(m.value(0).space()));
    }

    #[test]
    fn hom_bifunctor_signs_on_d1() {
        let d1 = fixtures::d1::<Q>();
        let t = hom_bifunctor(&d1);
        assert!(validate_dg_module(t.module()).is_valid());
        let eps = d1.hom(0, 0).space().find("ε").unwrap();
        let one = d1.hom(0, 0).space().find("1").unwrap();
        let e_eps = d1.basis_vector(0, 0, eps);
        let e_one = d1.basis_vector(0, 0, one);
        // (1^op ⊗ ε)(1) = ε
        let a = t.act_second(0, 0, 0, &e_eps, -1).apply_flat(&e_one);
        assert_eq!(a, e_eps);
        // (ε^op ⊗ 1)(ε) = −(ε ∘ ε) = 0
        let b = t.act_first(0, 0, 0, &e_eps, -1).apply_flat(&e_eps);
        assert!(b.iter().all(|x| x.is_zero()));
        // (ε^op ⊗ 1)(1) = (−1)^{(−1)·0} 1 ∘ ε = ε
        let c = t.act_first(0, 0, 0, &e_eps, -1).apply_flat(&e_one);
        assert_eq!(c, e_eps);
    }

    #[test]
    fn hom_bifunctor_k1() {
        let t = hom_bifunctor(&fixtures::k1::<Q>());
        assert_eq!(t.value(0, 0).dims(), BTreeMap::from([(0, 1)]));
        assert!(validate_dg_module(t.module()).is_valid());
    }

    #[test]
    fn restriction_examples() {
        let a2 = fixtures::a2::<Q>();
        let m = representable(&a2, 0);
        assert_eq!(restrict_module(&identity_functor(&a2), &m).unwrap(), m);
        let (_, j) = full_subcategory(&a2, &["a"]).unwrap();
        let r = restrict_module(&j, &m).unwrap();
        assert!(validate_dg_module(&r).is_valid());
        assert_eq!(r.value(0).dims(), BTreeMap::from([(0, 1)]));
        assert!(restrict_module(&j, &representable(&fixtures::k1::<Q>(), 0)).is_err());
    }

    #[test]
    fn restriction_is_functorial() {
        let a2 = fixtures::a2::<Q>();
        let (sub, j) = full_subcategory(&a2, &["b"]).unwrap();
        let (_, i) = full_subcategory(&sub, &["b"]).unwrap();
        for a in 0..2 {
            let m = representable(&a2, a);
            let composite = restrict_module(&i.then(&j), &m).unwrap();
            let stepwise = restrict_module(&i, &restrict_module(&j, &m).unwrap()).unwrap();
            assert_eq!(composite, stepwise);
        }
        let collapse = fixtures::collapse_a2::<Q>();
        let k = representable(&fixtures::k1::<Q>(), 0).regraded(-1);
        let r = restrict_module(&collapse, &k).unwrap();
        assert!(validate_dg_module(&r).is_valid());
        assert_eq!(r.value(1).dims(), BTreeMap::from([(1, 1)]));
    }

    #[test]
    fn broken_action_is_reported() {
        let a2 = fixtures::a2::<Q>();
        let m = DgModule::from_images(&a2, vec![Complex::line(0, "x"), Complex::line(0, "y")], |_, _, _, _| {
            vec![q(1)]
        })
        .unwrap();
        assert!(validate_dg_module(&m).is_valid());
        let m = DgModule::from_images(&a2, vec![Complex::line(0, "x"), Complex::line(0, "y")], |x, y, _, _| {
            if x == y && x == 1 {
                vec![q(2)]
            } else {
                vec![q(1)]
            }
        })
        .unwrap();
        let report = validate_dg_module(&m);
        assert!(report.has(Law::PreservesIdentity));
    }

    #[test]
    fn sums_regrading_and_bimodule_restriction() {
        let d1 = fixtures::d1::<Q>();
        let m = representable(&d1, 0);
        let s = direct_sum_modules(&d1, &[("p", &m), ("q", &m.regraded(1))]).unwrap();
        assert!(validate_dg_module(&s).is_valid());
        assert_eq!(s.value(0).dims(), BTreeMap::from([(-2, 1), (-1, 2), (0, 1)]));
        let t = hom_bifunctor(&d1);
        let id = identity_functor(&d1);
        let r = restrict_bimodule(&t, &id.opposite(), &id).unwrap();
        assert_eq!(r, t);
        assert_eq!(opposite_category(&d1), *t.first());
    }
}
