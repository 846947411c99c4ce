//! Dg-functors between finite dg-categories.

use thiserror::Error;

use crate::category::{densify, CategoryBuilder, CategoryError, DgCategory};
use crate::field::Field;
use crate::graded::GradedMap;
use crate::linalg::Matrix;
use crate::report::{Law, ValidationReport, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctorError {
    #[error("object map has {found} entries for {expected} objects")]
    ObjectMapLength { expected: usize, found: usize },
    #[error("object index {0} is out of range in the target")]
    ObjectOutOfRange(usize),
    #[error("hom map for ({from}, {to}) does not preserve degrees")]
    NotDegreePreserving { from: String, to: String },
    #[error("hom map for ({from}, {to}) has the wrong shape")]
    HomMapShape { from: String, to: String },
    #[error(transparent)]
    Category(#[from] CategoryError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgFunctor<F> {
    source: DgCategory<F>,
    target: DgCategory<F>,
    object_map: Vec<usize>,
    hom_maps: Vec<GradedMap<F>>,
}

impl<F: Field> DgFunctor<F> {
    /// `hom_map(x, y)` gives the matrix `hom(x, y) → hom(Fx, Fy)` in flat
    /// coordinates; it must respect degrees.
    pub fn new(
        source: &DgCategory<F>,
        target: &DgCategory<F>,
        object_map: Vec<usize>,
        mut hom_map: impl FnMut(usize, usize) -> Matrix<F>,
    ) -> Result<Self, FunctorError> {
        let n = source.object_count();
        if object_map.len() != n {
            return Err(FunctorError::ObjectMapLength {
                expected: n,
                found: object_map.len(),
            });
        }
        if let Some(&bad) = object_map.iter().find(|&&o| o >= target.object_count()) {
            return Err(FunctorError::ObjectOutOfRange(bad));
        }
        let mut hom_maps = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let (src, tgt) = (
                    source.hom(x, y).space(),
                    target.hom(object_map[x], object_map[y]).space(),
                );
                let m = hom_map(x, y);
                let names = || (source.label(x).to_string(), source.label(y).to_string());
                if (m.rows(), m.cols()) != (tgt.total_dim(), src.total_dim()) {
                    let (from, to) = names();
                    return Err(FunctorError::HomMapShape { from, to });
                }
                let g = GradedMap::from_matrix(src, tgt, 0, &m).map_err(|_| {
                    let (from, to) = names();
                    FunctorError::NotDegreePreserving { from, to }
                })?;
                hom_maps.push(g);
            }
        }
        Ok(DgFunctor {
            source: source.clone(),
            target: target.clone(),
            object_map,
            hom_maps,
        })
    }

    pub fn source(&self) -> &DgCategory<F> {
        &self.source
    }

    pub fn target(&self) -> &DgCategory<F> {
        &self.target
    }

    pub fn object(&self, x: usize) -> usize {
        self.object_map[x]
    }

    pub fn object_map(&self) -> &[usize] {
        &self.object_map
    }

    pub fn hom_map(&self, x: usize, y: usize) -> &GradedMap<F> {
        &self.hom_maps[x * self.source.object_count() + y]
    }

    /// `F(v)` for a flat vector `v ∈ hom(x, y)`.
    pub fn apply(&self, x: usize, y: usize, v: &[F]) -> Vec<F> {
        self.hom_map(x, y).apply_flat(v)
    }

    /// `G ∘ F` for `F = self`.
    pub fn then(&self, g: &DgFunctor<F>) -> DgFunctor<F> {
        let n = self.source.object_count();
        let object_map: Vec<usize> = self.object_map.iter().map(|&o| g.object(o)).collect();
        let mut hom_maps = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                hom_maps.push(g.hom_map(self.object(x), self.object(y)).compose(self.hom_map(x, y)));
            }
        }
        DgFunctor {
            source: self.source.clone(),
            target: g.target.clone(),
            object_map,
            hom_maps,
        }
    }

    /// The same functor between opposite categories.
    pub fn opposite(&self) -> DgFunctor<F> {
        let n = self.source.object_count();
        let (source, target) = (self.source.opposite(), self.target.opposite());
        let mut hom_maps = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let m = self.hom_map(y, x);
                hom_maps.push(m.relabel(
                    source.hom(x, y).space(),
                    target.hom(self.object(x), self.object(y)).space(),
                ));
            }
        }
        DgFunctor {
            source,
            target,
            object_map: self.object_map.clone(),
            hom_maps,
        }
    }
}

pub fn identity_functor<F: Field>(c: &DgCategory<F>) -> DgFunctor<F> {
    let n = c.object_count();
    DgFunctor::new(c, c, (0..n).collect(), |x, y| Matrix::identity(c.hom_dim(x, y))).expect("identity is well formed")
}

/// Checks degree preservation, identities, composition on basis pairs and
/// commutation with the differentials.
pub fn validate_dg_functor<F: Field>(f: &DgFunctor<F>) -> ValidationReport {
    let mut report = ValidationReport::default();
    let (s, t) = (&f.source, &f.target);
    let n = s.object_count();
    for x in 0..n {
        for y in 0..n {
            let objects = [s.label(x), s.label(y)];
            let m = f.hom_map(x, y);
            if m.degree() != 0 {
                report.push(Violation::new(Law::PreservesDegree).objects(&objects));
                continue;
            }
            let lhs = m.compose(s.hom(x, y).differential());
            let rhs = t.hom(f.object(x), f.object(y)).differential().compose(m);
            if lhs != rhs {
                report.push(Violation::new(Law::CommutesWithDifferential).objects(&objects));
            }
        }
        if f.apply(x, x, s.identity(x)) != t.identity(f.object(x)) {
            report.push(Violation::new(Law::PreservesIdentity).objects(&[s.label(x)]));
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for g in 0..s.hom_dim(y, z) {
                    let fg = f.apply(y, z, &s.basis_vector(y, z, g));
                    for h in 0..s.hom_dim(x, y) {
                        let gh = densify(s.compose_basis(x, y, z, g, h), s.hom_dim(x, z));
                        let lhs = f.apply(x, z, &gh);
                        let fh = f.apply(x, y, &s.basis_vector(x, y, h));
                        let rhs = t.compose(f.object(x), f.object(y), f.object(z), &fg, &fh);
                        if lhs != rhs {
                            report.push(
                                Violation::new(Law::PreservesComposition)
                                    .objects(&[s.label(x), s.label(y), s.label(z)])
                                    .items(&[s.basis_label(y, z, g), s.basis_label(x, y, h)]),
                            );
                        }
                    }
                }
            }
        }
    }
    report
}

/// The full subcategory on the given objects (kept in the order of `c`) and
/// its inclusion functor.
pub fn full_subcategory<F: Field>(
    c: &DgCategory<F>,
    labels: &[&str],
) -> Result<(DgCategory<F>, DgFunctor<F>), FunctorError> {
    let mut keep = Vec::new();
    for l in labels {
        keep.push(c.index_of(l)?);
    }
    keep.sort_unstable();
    keep.dedup();
    let mut b = CategoryBuilder::new();
    for &x in &keep {
        b.object(c.label(x))?;
    }
    for (i, &x) in keep.iter().enumerate() {
        b.identity(i, c.identity(x).to_vec());
        for (j, &y) in keep.iter().enumerate() {
            if !c.hom(x, y).is_zero() {
                b.hom(i, j, c.hom(x, y).clone());
            }
            for (k, &z) in keep.iter().enumerate() {
                for g in 0..c.hom_dim(y, z) {
                    for f in 0..c.hom_dim(x, y) {
                        let r = c.compose_basis(x, y, z, g, f);
                        if !r.is_empty() {
                            b.compose(i, j, k, g, f, densify(r, c.hom_dim(x, z)));
                        }
                    }
                }
            }
        }
    }
    let sub = b.build()?;
    let inclusion = DgFunctor::new(&sub, c, keep.clone(), |i, j| {
        Matrix::identity(c.hom_dim(keep[i], keep[j]))
    })?;
    Ok((sub, inclusion))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::validate_dg_category;
    use crate::field::Rational;
    use crate::fixtures;

    type Q = Rational;

    #[test]
    fn identity_functor_is_valid() {
        for (_, c) in fixtures::all::<Q>() {
            assert!(validate_dg_functor(&identity_functor(&c)).is_valid());
        }
    }

    #[test]
    fn subcategory_inclusion() {
        let a2 = fixtures::a2::<Q>();
        let (sub, j) = full_subcategory(&a2, &["a"]).unwrap();
        assert_eq!(sub.objects(), ["a"]);
        assert!(validate_dg_category(&sub).is_valid());
        assert!(validate_dg_functor(&j).is_valid());
        assert_eq!(j.object(0), 0);
    }

    #[test]
    fn collapse_is_valid_and_composes() {
        let c = fixtures::collapse_a2::<Q>();
        assert!(validate_dg_functor(&c).is_valid());
        let (_, j) = full_subcategory(&fixtures::a2::<Q>(), &["b"]).unwrap();
        let jc = j.then(&c);
        assert!(validate_dg_functor(&jc).is_valid());
        assert_eq!(jc.object(0), 0);
    }

    #[test]
    fn broken_functor_is_reported() {
        let a2 = fixtures::a2::<Q>();
        let k1 = fixtures::k1::<Q>();
        // Sends u to 2 instead of 1.
        let bad = DgFunctor::new(&a2, &k1, vec![0, 0], |x, y| match (x, y) {
            (0, 1) => Matrix::from_rows(vec![vec![Q::from_int(2)]], 1),
            (1, 0) => Matrix::zeros(1, 0),
            _ => Matrix::identity(1),
        })
        .unwrap();
        assert!(validate_dg_functor(&bad).is_valid());
        let bad = DgFunctor::new(&a2, &k1, vec![0, 0], |x, y| match (x, y) {
            (1, 1) => Matrix::from_rows(vec![vec![Q::from_int(2)]], 1),
            (1, 0) => Matrix::zeros(1, 0),
            _ => Matrix::identity(1),
        })
        .unwrap();
        let report = validate_dg_functor(&bad);
        assert!(report.has(Law::PreservesIdentity));
        assert!(report.has(Law::PreservesComposition));
    }

    #[test]
    fn opposite_functor_is_valid() {
        let c = fixtures::collapse_a2::<Q>();
        let op = c.opposite();
        assert!(validate_dg_functor(&op).is_valid());
        assert_eq!(op.opposite(), c);
    }
}
