//! Dg-ideals, the factorization ideal of a set of objects and quotient
//! dg-categories.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::category::{CategoryBuilder, CategoryError, DgCategory};
use crate::complex::{quotient_complex, QuotientComplex};
use crate::field::Field;
use crate::functor::{DgFunctor, FunctorError};
use crate::linalg::{span_basis, Matrix};
use crate::module::{DgModule, ModuleError};
use crate::report::{Law, ValidationReport, Violation};

/// Homogeneous spanning vectors of one hom complex.
type Spanning<F> = Vec<(i32, Vec<F>)>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("ideal and category differ")]
    BaseMismatch,
    #[error("the set of objects is empty")]
    EmptySubset,
    #[error("subspace for ({from}, {to}) has the wrong shape")]
    Shape { from: String, to: String },
    #[error("not a dg-ideal: {0}")]
    NotAnIdeal(ValidationReport),
    #[error("module does not vanish on the ideal at ({from}, {to})")]
    NotVanishing { from: String, to: String },
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

/// A graded subspace of every hom complex, closed under the differential
/// and under composition with arbitrary morphisms on both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal<F> {
    base: DgCategory<F>,
    /// Per pair `(x, y)`, a canonical column basis of each nonzero degree
    /// (coordinates within that degree of `hom(x, y)`).
    subspaces: Vec<BTreeMap<i32, Matrix<F>>>,
}

fn canonical<F: Field>(span: BTreeMap<i32, Vec<Vec<F>>>, dims: impl Fn(i32) -> usize) -> BTreeMap<i32, Matrix<F>> {
    span.into_iter()
        .map(|(k, cols)| (k, span_basis(&Matrix::from_columns(dims(k), &cols))))
        .filter(|(_, m)| m.cols() > 0)
        .collect()
}

impl<F: Field> Ideal<F> {
    /// `span[x * n + y]` lists homogeneous generators of the subspace of
    /// `hom(x, y)` by degree. The result is checked against both closure laws.
    pub fn new(base: &DgCategory<F>, span: Vec<BTreeMap<i32, Vec<Vec<F>>>>) -> Result<Self, IdealError> {
        let n = base.object_count();
        let mut subspaces = Vec::with_capacity(n * n);
        for (p, per) in span.into_iter().enumerate() {
            let (x, y) = (p / n, p % n);
            let space = base.hom(x, y).space();
            if per
                .iter()
                .any(|(k, cols)| cols.iter().any(|v| v.len() != space.dim(*k)))
            {
                return Err(IdealError::Shape {
                    from: base.label(x).to_string(),
                    to: base.label(y).to_string(),
                });
            }
            subspaces.push(canonical(per, |k| space.dim(k)));
        }
        if subspaces.len() != n * n {
            return Err(IdealError::Shape {
                from: String::new(),
                to: String::new(),
            });
        }
        let ideal = Ideal {
            base: base.clone(),
            subspaces,
        };
        let report = validate_ideal(&ideal);
        if report.is_valid() {
            Ok(ideal)
        } else {
            Err(IdealError::NotAnIdeal(report))
        }
    }

    pub fn zero(base: &DgCategory<F>) -> Self {
        let n = base.object_count();
        Ideal {
            base: base.clone(),
            subspaces: vec![BTreeMap::new(); n * n],
        }
    }

    /// Every morphism.
    pub fn improper(base: &DgCategory<F>) -> Self {
        let n = base.object_count();
        let subspaces = (0..n * n)
            .map(|p| {
                let space = base.hom(p / n, p % n).space();
                space.support().map(|k| (k, Matrix::identity(space.dim(k)))).collect()
            })
            .collect();
        Ideal {
            base: base.clone(),
            subspaces,
        }
    }

    pub fn base(&self) -> &DgCategory<F> {
        &self.base
    }

    /// Column basis of the degree-`k` part of `I(x, y)`.
    pub fn basis(&self, x: usize, y: usize, k: i32) -> Matrix<F> {
        let n = self.base.object_count();
        self.subspaces[x * n + y]
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.base.hom(x, y).dim(k), 0))
    }

    pub fn dims(&self, x: usize, y: usize) -> BTreeMap<i32, usize> {
        let n = self.base.object_count();
        self.subspaces[x * n + y].iter().map(|(&k, m)| (k, m.cols())).collect()
    }

    /// Basis of `I(x, y)` as flat vectors of `hom(x, y)`, by degree.
    pub fn flat_basis(&self, x: usize, y: usize) -> Vec<(i32, Vec<F>)> {
        let n = self.base.object_count();
        let space = self.base.hom(x, y).space();
        self.subspaces[x * n + y]
            .iter()
            .flat_map(|(&k, m)| m.columns().into_iter().map(move |c| (k, space.embed(k, &c))))
            .collect()
    }

    /// Whether a flat vector of `hom(x, y)` lies in `I(x, y)`.
    pub fn contains(&self, x: usize, y: usize, v: &[F]) -> bool {
        let space = self.base.hom(x, y).space();
        space
            .support()
            .all(|k| self.basis(x, y, k).solve(&space.restrict(k, v)).is_some())
    }
}

/// Differential closure and closure under composition with basis morphisms
/// on either side.
pub fn validate_ideal<F: Field>(i: &Ideal<F>) -> ValidationReport {
    let c = &i.base;
    let n = c.object_count();
    let mut report = ValidationReport::default();
    for x in 0..n {
        for y in 0..n {
            for (k, v) in i.flat_basis(x, y) {
                if !i.contains(x, y, &c.d(x, y, &v)) {
                    report.push(
                        Violation::new(Law::IdealDifferential)
                            .objects(&[c.label(x), c.label(y)])
                            .degree(k),
                    );
                }
                for z in 0..n {
                    for h in 0..c.hom_dim(y, z) {
                        let hv = c.compose(x, y, z, &c.basis_vector(y, z, h), &v);
                        if !i.contains(x, z, &hv) {
                            report.push(
                                Violation::new(Law::IdealComposition)
                                    .objects(&[c.label(x), c.label(y), c.label(z)])
                                    .items(&[c.basis_label(y, z, h)])
                                    .degree(k),
                            );
                        }
                    }
                    for g in 0..c.hom_dim(z, x) {
                        let vg = c.compose(z, x, y, &v, &c.basis_vector(z, x, g));
                        if !i.contains(z, y, &vg) {
                            report.push(
                                Violation::new(Law::IdealComposition)
                                    .objects(&[c.label(z), c.label(x), c.label(y)])
                                    .items(&[c.basis_label(z, x, g)])
                                    .degree(k),
                            );
                        }
                    }
                }
            }
        }
    }
    report
}

/// Homogeneous components of a flat vector of `hom(x, y)`.
fn components<F: Field>(c: &DgCategory<F>, x: usize, y: usize, v: &[F]) -> Vec<(i32, Vec<F>)> {
    let space = c.hom(x, y).space();
    space
        .support()
        .map(|k| (k, space.restrict(k, v)))
        .filter(|(_, w)| w.iter().any(|e| !e.is_zero()))
        .collect()
}

/// `I_B(x, y)`: the span of all composites `g ∘ f` with `f: x → b`,
/// `g: b → y` basis morphisms and `b` in the given set.
pub fn ideal_from_subcategory<F: Field>(c: &DgCategory<F>, labels: &[&str]) -> Result<Ideal<F>, IdealError> {
    if labels.is_empty() {
        return Err(IdealError::EmptySubset);
    }
    let through = labels.iter().map(|l| c.index_of(l)).collect::<Result<Vec<_>, _>>()?;
    let n = c.object_count();
    let mut span = vec![BTreeMap::<i32, Vec<Vec<F>>>::new(); n * n];
    for x in 0..n {
        for y in 0..n {
            for &b in &through {
                for g in 0..c.hom_dim(b, y) {
                    for f in 0..c.hom_dim(x, b) {
                        let gf = c.compose(x, b, y, &c.basis_vector(b, y, g), &c.basis_vector(x, b, f));
                        for (k, w) in components(c, x, y, &gf) {
                            span[x * n + y].entry(k).or_default().push(w);
                        }
                    }
                }
            }
        }
    }
    Ideal::new(c, span)
}

/// The smallest dg-ideal containing the given morphisms, by iterating the
/// closure operations to a fixpoint.
pub fn generated_ideal<F: Field>(c: &DgCategory<F>, generators: &[(usize, usize, Vec<F>)]) -> Ideal<F> {
    let n = c.object_count();
    let mut current: Vec<Spanning<F>> = vec![Vec::new(); n * n];
    for (x, y, v) in generators {
        current[x * n + y].extend(components(c, *x, *y, v));
    }
    let size = |cur: &[Spanning<F>]| -> (Vec<Spanning<F>>, usize) {
        let mut out = Vec::with_capacity(n * n);
        let mut total = 0;
        for (p, list) in cur.iter().enumerate() {
            let space = c.hom(p / n, p % n).space();
            let mut per: BTreeMap<i32, Vec<Vec<F>>> = BTreeMap::new();
            for (k, w) in list {
                per.entry(*k).or_default().push(w.clone());
            }
            let basis = canonical(per, |k| space.dim(k));
            let flat: Vec<(i32, Vec<F>)> = basis
                .iter()
                .flat_map(|(&k, m)| m.columns().into_iter().map(move |col| (k, col)))
                .collect();
            total += flat.len();
            out.push(flat);
        }
        (out, total)
    };
    let (mut current, mut count) = size(&current);
    loop {
        let mut next = current.clone();
        for x in 0..n {
            for y in 0..n {
                let space = c.hom(x, y).space();
                for (k, w) in &current[x * n + y] {
                    let v = space.embed(*k, w);
                    next[x * n + y].extend(components(c, x, y, &c.d(x, y, &v)));
                    for z in 0..n {
                        for h in 0..c.hom_dim(y, z) {
                            let hv = c.compose(x, y, z, &c.basis_vector(y, z, h), &v);
                            next[x * n + z].extend(components(c, x, z, &hv));
                        }
                        for g in 0..c.hom_dim(z, x) {
                            let vg = c.compose(z, x, y, &v, &c.basis_vector(z, x, g));
                            next[z * n + y].extend(components(c, z, y, &vg));
                        }
                    }
                }
            }
        }
        let (reduced, grown) = size(&next);
        current = reduced;
        if grown == count {
            break;
        }
        count = grown;
    }
    let span = current
        .into_iter()
        .map(|list| {
            let mut per: BTreeMap<i32, Vec<Vec<F>>> = BTreeMap::new();
            for (k, w) in list {
                per.entry(k).or_default().push(w);
            }
            per
        })
        .collect();
    Ideal::new(c, span).expect("closed by construction")
}

/// `C/I` with the projection `π: C → C/I`.
#[derive(Clone, Debug)]
pub struct QuotientCategory<F> {
    pub quotient: DgCategory<F>,
    pub projection: DgFunctor<F>,
    homs: Vec<QuotientComplex<F>>,
}

impl<F: Field> QuotientCategory<F> {
    /// A representative in `hom(x, y)` of a flat vector of `(C/I)(x, y)`.
    pub fn lift(&self, x: usize, y: usize, v: &[F]) -> Vec<F> {
        self.homs[x * self.quotient.object_count() + y].lift.apply_flat(v)
    }
}

pub fn quotient_category<F: Field>(c: &DgCategory<F>, i: &Ideal<F>) -> Result<QuotientCategory<F>, IdealError> {
    if i.base != *c {
        return Err(IdealError::BaseMismatch);
    }
    let report = validate_ideal(i);
    if !report.is_valid() {
        return Err(IdealError::NotAnIdeal(report));
    }
    let n = c.object_count();
    let mut homs = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let relations = i.subspaces[x * n + y].clone();
            let qc = quotient_complex(c.hom(x, y), &relations).map_err(|_| {
                let mut r = ValidationReport::default();
                r.push(Violation::new(Law::IdealDifferential).objects(&[c.label(x), c.label(y)]));
                IdealError::NotAnIdeal(r)
            })?;
            homs.push(qc);
        }
    }
    let mut b = CategoryBuilder::new();
    for x in 0..n {
        b.object(c.label(x))?;
    }
    for x in 0..n {
        for y in 0..n {
            let q = &homs[x * n + y];
            if !q.complex.is_zero() {
                b.hom(x, y, q.complex.clone());
            }
        }
        b.identity(x, homs[x * n + x].projection.apply_flat(c.identity(x)));
    }
    for x in 0..n {
        for y in 0..n {
            let qf = &homs[x * n + y];
            for z in 0..n {
                let qg = &homs[y * n + z];
                let qgf = &homs[x * n + z];
                for g in 0..qg.complex.total_dim() {
                    let lg = qg.lift.apply_flat(&unit(qg.complex.total_dim(), g));
                    for f in 0..qf.complex.total_dim() {
                        let lf = qf.lift.apply_flat(&unit(qf.complex.total_dim(), f));
                        let r = qgf.projection.apply_flat(&c.compose(x, y, z, &lg, &lf));
                        if r.iter().any(|e| !e.is_zero()) {
                            b.compose(x, y, z, g, f, r);
                        }
                    }
                }
            }
        }
    }
    let quotient = b.build()?;
    let projection = DgFunctor::new(c, &quotient, (0..n).collect(), |x, y| {
        homs[x * n + y].projection.to_matrix()
    })?;
    Ok(QuotientCategory {
        quotient,
        projection,
        homs,
    })
}

fn unit<F: Field>(len: usize, i: usize) -> Vec<F> {
    let mut v = vec![F::zero(); len];
    v[i] = F::one();
    v
}

/// The module over `C/I` whose restriction along `π` is `m`; exists exactly
/// when `m` kills the ideal.
pub fn descend<F: Field>(q: &QuotientCategory<F>, i: &Ideal<F>, m: &DgModule<F>) -> Result<DgModule<F>, IdealError> {
    let c = q.projection.source();
    if m.base() != c || i.base() != c {
        return Err(IdealError::BaseMismatch);
    }
    let n = c.object_count();
    for x in 0..n {
        for y in 0..n {
            for (k, v) in i.flat_basis(x, y) {
                if !m.act(x, y, &v, k).is_zero() {
                    return Err(IdealError::NotVanishing {
                        from: c.label(x).to_string(),
                        to: c.label(y).to_string(),
                    });
                }
            }
        }
    }
    let qc = &q.quotient;
    Ok(DgModule::new(qc, m.values().to_vec(), |x, y, p| {
        let lifted = q.lift(x, y, &qc.basis_vector(x, y, p));
        m.act(x, y, &lifted, qc.basis_degree(x, y, p))
    })?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::validate_dg_category;
    use crate::field::Rational;
    use crate::fixtures;
    use crate::functor::validate_dg_functor;
    use crate::module::{representable, restrict_module, validate_dg_module};

    type Q = Rational;

    fn dims(i: &Ideal<Q>, x: usize, y: usize) -> usize {
        i.dims(x, y).values().sum()
    }

    #[test]
    fn factorization_ideal_of_a2() {
        let c = fixtures::a2::<Q>();
        let i = ideal_from_subcategory(&c, &["b"]).unwrap();
        assert_eq!(
            [dims(&i, 0, 0), dims(&i, 0, 1), dims(&i, 1, 1), dims(&i, 1, 0)],
            [0, 1, 1, 0]
        );
        let i = ideal_from_subcategory(&c, &["a"]).unwrap();
        assert_eq!([dims(&i, 0, 0), dims(&i, 0, 1), dims(&i, 1, 1)], [1, 1, 0]);
        assert_eq!(ideal_from_subcategory(&c, &["a", "b"]).unwrap(), Ideal::improper(&c));
        assert_eq!(
            ideal_from_subcategory(&fixtures::k1::<Q>(), &["★"]).unwrap(),
            Ideal::improper(&fixtures::k1())
        );
        assert_eq!(ideal_from_subcategory(&c, &[]), Err(IdealError::EmptySubset));
        assert!(matches!(
            ideal_from_subcategory(&c, &["z"]),
            Err(IdealError::Category(_))
        ));
    }

    #[test]
    fn factorization_ideal_matches_fixpoint_closure() {
        for (_, c) in fixtures::all::<Q>() {
            for x in 0..c.object_count() {
                let label = c.label(x).to_string();
                let spanned = ideal_from_subcategory(&c, &[&label]).unwrap();
                let closure = generated_ideal(&c, &[(x, x, c.identity(x).to_vec())]);
                assert_eq!(spanned, closure, "{label}");
            }
        }
        let mut rng = crate::random::rng_from_seed(2);
        for _ in 0..10 {
            let c: DgCategory<Q> = crate::random::random_category(&mut rng, &Default::default());
            let spanned = ideal_from_subcategory(&c, &[c.label(0)]).unwrap();
            assert_eq!(spanned, generated_ideal(&c, &[(0, 0, c.identity(0).to_vec())]));
        }
    }

    #[test]
    fn invalid_ideals_are_rejected() {
        let d1 = fixtures::d1::<Q>();
        // K·ε is not closed under d.
        let span = vec![BTreeMap::from([(-1, vec![vec![Q::from_int(1)]])])];
        match Ideal::new(&d1, span) {
            Err(IdealError::NotAnIdeal(r)) => assert!(r.has(Law::IdealDifferential)),
            other => panic!("{other:?}"),
        }
        // K·1_a alone misses u ∘ 1_a.
        let a2 = fixtures::a2::<Q>();
        let mut span = vec![BTreeMap::new(); 4];
        span[0] = BTreeMap::from([(0, vec![vec![Q::from_int(1)]])]);
        match Ideal::new(&a2, span) {
            Err(IdealError::NotAnIdeal(r)) => assert!(r.has(Law::IdealComposition)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn quotients_of_fixtures() {
        let c = fixtures::a2::<Q>();
        let q = quotient_category(&c, &ideal_from_subcategory(&c, &["b"]).unwrap()).unwrap();
        assert!(validate_dg_category(&q.quotient).is_valid());
        assert!(validate_dg_functor(&q.projection).is_valid());
        let qd = |x, y| q.quotient.hom_dim(x, y);
        assert_eq!([qd(0, 0), qd(0, 1), qd(1, 0), qd(1, 1)], [1, 0, 0, 0]);
        assert_eq!(q.quotient.identity(1), &[] as &[Q]);

        let same = quotient_category(&c, &Ideal::zero(&c)).unwrap();
        assert_eq!(same.quotient, c);
        let none = quotient_category(&c, &Ideal::improper(&c)).unwrap();
        assert!((0..2).all(|x| (0..2).all(|y| none.quotient.hom_dim(x, y) == 0)));

        let d1 = fixtures::d1::<Q>();
        let q = quotient_category(&d1, &Ideal::improper(&d1)).unwrap();
        assert!(validate_dg_category(&q.quotient).is_valid());
    }

    #[test]
    fn quotients_of_random_categories_are_valid() {
        let mut rng = crate::random::rng_from_seed(9);
        for _ in 0..10 {
            let c: DgCategory<Q> = crate::random::random_category(&mut rng, &Default::default());
            let last = c.label(c.object_count() - 1).to_string();
            let q = quotient_category(&c, &ideal_from_subcategory(&c, &[&last]).unwrap()).unwrap();
            assert!(validate_dg_category(&q.quotient).is_valid());
            assert!(validate_dg_functor(&q.projection).is_valid());
        }
    }

    #[test]
    fn descent_along_the_projection() {
        let c = fixtures::a2::<Q>();
        let i = ideal_from_subcategory(&c, &["b"]).unwrap();
        let q = quotient_category(&c, &i).unwrap();
        // Hom(b, −) vanishes at a but not on the ideal: 1_b acts as 1.
        assert!(matches!(
            descend(&q, &i, &representable(&c, 1)),
            Err(IdealError::NotVanishing { .. })
        ));
        // A module over C/I restricts to one that descends back to it.
        let m = representable(&q.quotient, 0);
        let inflated = restrict_module(&q.projection, &m).unwrap();
        let back = descend(&q, &i, &inflated).unwrap();
        assert_eq!(back, m);
        assert_eq!(restrict_module(&q.projection, &back).unwrap(), inflated);
        assert!(validate_dg_module(&back).is_valid());
    }
}
