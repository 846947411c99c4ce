//! Finitely supported graded vector spaces and graded linear maps.
//!
//! Elements of a graded space are stored in flat coordinates: degrees in
//! ascending order, basis order inside each degree.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::field::Field;
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error("duplicate basis label {label:?} in degree {degree}")]
    DuplicateLabel { degree: i32, label: String },
    #[error("block at source degree {degree} has shape {found:?}, expected {expected:?}")]
    BlockShape {
        degree: i32,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("map of degree {degree} has a nonzero entry outside its degree pattern")]
    NotHomogeneous { degree: i32 },
}

#[derive(Debug, PartialEq, Eq)]
struct SpaceInner {
    parts: BTreeMap<i32, Vec<String>>,
    offsets: BTreeMap<i32, usize>,
    total: usize,
}

/// A graded vector space with labelled bases; cheap to clone.
#[derive(Clone)]
pub struct GradedSpace(Arc<SpaceInner>);

impl PartialEq for GradedSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.parts == other.0.parts
    }
}

impl Eq for GradedSpace {}

impl fmt::Debug for GradedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedSpace{:?}", self.0.parts)
    }
}

impl GradedSpace {
    /// Empty degrees are dropped; labels must be unique within a degree.
    pub fn new(parts: BTreeMap<i32, Vec<String>>) -> Result<Self, GradedError> {
        for (&degree, labels) in &parts {
            let mut seen = std::collections::BTreeSet::new();
            for l in labels {
                if !seen.insert(l) {
                    return Err(GradedError::DuplicateLabel {
                        degree,
                        label: l.clone(),
                    });
                }
            }
        }
        let parts: BTreeMap<i32, Vec<String>> = parts.into_iter().filter(|(_, l)| !l.is_empty()).collect();
        let mut offsets = BTreeMap::new();
        let mut total = 0;
        for (&d, labels) in &parts {
            offsets.insert(d, total);
            total += labels.len();
        }
        Ok(GradedSpace(Arc::new(SpaceInner { parts, offsets, total })))
    }

    pub fn zero() -> Self {
        GradedSpace::new(BTreeMap::new()).expect("empty space")
    }

    /// One basis vector in the given degree.
    pub fn line(degree: i32, label: &str) -> Self {
        GradedSpace::new(BTreeMap::from([(degree, vec![label.to_string()])])).expect("one label")
    }

    /// Labels `prefix0, prefix1, ...` in each degree.
    pub fn from_dims(dims: &[(i32, usize)], prefix: &str) -> Self {
        let mut parts = BTreeMap::new();
        for &(d, n) in dims {
            let labels: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
            parts.insert(d, labels);
        }
        GradedSpace::new(parts).expect("generated labels are unique")
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.0.parts.get(&degree).map_or(0, Vec::len)
    }

    pub fn total_dim(&self) -> usize {
        self.0.total
    }

    pub fn is_zero(&self) -> bool {
        self.0.total == 0
    }

    /// Degrees with positive dimension, ascending.
    pub fn support(&self) -> impl Iterator<Item = i32> + '_ {
        self.0.parts.keys().copied()
    }

    pub fn labels(&self, degree: i32) -> &[String] {
        self.0.parts.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn parts(&self) -> &BTreeMap<i32, Vec<String>> {
        &self.0.parts
    }

    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.0.parts.iter().map(|(&d, l)| (d, l.len())).collect()
    }

    /// Flat index of the first basis vector of `degree`.
    pub fn offset(&self, degree: i32) -> usize {
        match self.0.offsets.get(&degree) {
            Some(&o) => o,
            None => self
                .0
                .offsets
                .range(..degree)
                .next_back()
                .map_or(0, |(&d, &o)| o + self.dim(d)),
        }
    }

    /// Degree and in-degree index of a flat index.
    pub fn locate(&self, flat: usize) -> (i32, usize) {
        let (&d, &o) = self
            .0
            .offsets
            .range(..)
            .rev()
            .find(|(_, &o)| o <= flat)
            .expect("flat index in range");
        assert!(flat < self.0.total, "flat index out of range");
        (d, flat - o)
    }

    pub fn degree_of(&self, flat: usize) -> i32 {
        self.locate(flat).0
    }

    /// `label@degree`, unique within the space.
    pub fn basis_name(&self, flat: usize) -> String {
        let (d, i) = self.locate(flat);
        format!("{}@{}", self.labels(d)[i], d)
    }

    /// Flat index of a label given as `label` or `label@degree`.
    pub fn find(&self, name: &str) -> Option<usize> {
        if let Some((label, deg)) = name.rsplit_once('@') {
            if let Ok(d) = deg.parse::<i32>() {
                return self
                    .labels(d)
                    .iter()
                    .position(|l| l == label)
                    .map(|i| self.offset(d) + i);
            }
        }
        let mut hits = self
            .0
            .parts
            .iter()
            .filter_map(|(&d, labels)| labels.iter().position(|l| l == name).map(|i| self.offset(d) + i));
        let first = hits.next()?;
        if hits.next().is_some() {
            None
        } else {
            Some(first)
        }
    }

    /// The shifted space: degree `n` of the result is degree `n + k` here.
    pub fn shifted(&self, k: i32) -> Self {
        GradedSpace::new(self.0.parts.iter().map(|(&d, l)| (d - k, l.clone())).collect()).expect("labels unchanged")
    }

    /// Zero vector of the given degree.
    pub fn zero_vector<F: Field>(&self, degree: i32) -> Vec<F> {
        vec![F::zero(); self.dim(degree)]
    }

    /// Flat vector from a homogeneous vector in `degree`.
    pub fn embed<F: Field>(&self, degree: i32, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.dim(degree));
        let mut out = vec![F::zero(); self.total_dim()];
        let o = self.offset(degree);
        out[o..o + v.len()].clone_from_slice(v);
        out
    }

    /// The degree-`degree` slice of a flat vector.
    pub fn restrict<F: Field>(&self, degree: i32, flat: &[F]) -> Vec<F> {
        let o = self.offset(degree);
        flat[o..o + self.dim(degree)].to_vec()
    }

    /// The unique degree carrying nonzero coefficients; `None` for zero or
    /// inhomogeneous vectors.
    pub fn homogeneous_degree<F: Field>(&self, flat: &[F]) -> Option<i32> {
        let mut found = None;
        for d in self.support() {
            if self.restrict(d, flat).iter().any(|x| !x.is_zero()) {
                if found.is_some() {
                    return None;
                }
                found = Some(d);
            }
        }
        found
    }
}

/// Deterministic labels for a family of basis vectors: the plain label when
/// it is unique in its degree, the annotated fallback otherwise.
pub fn disambiguate(entries: Vec<(i32, String, String)>) -> BTreeMap<i32, Vec<String>> {
    let mut counts: BTreeMap<(i32, &str), usize> = BTreeMap::new();
    for (d, plain, _) in &entries {
        *counts.entry((*d, plain.as_str())).or_default() += 1;
    }
    let chosen: Vec<(i32, String)> = entries
        .iter()
        .map(|(d, plain, fallback)| {
            let label = if counts[&(*d, plain.as_str())] > 1 {
                fallback.clone()
            } else {
                plain.clone()
            };
            (*d, label)
        })
        .collect();
    let mut parts: BTreeMap<i32, Vec<String>> = BTreeMap::new();
    for (d, l) in chosen {
        parts.entry(d).or_default().push(l);
    }
    parts
}

/// A graded linear map of fixed degree, stored as one dense block per
/// source degree.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedMap<F> {
    source: GradedSpace,
    target: GradedSpace,
    degree: i32,
    blocks: BTreeMap<i32, Matrix<F>>,
}

impl<F: fmt::Debug> fmt::Debug for GradedMap<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedMap(deg {}) {:?}", self.degree, self.blocks)
    }
}

impl<F: Field> GradedMap<F> {
    pub fn zero(source: &GradedSpace, target: &GradedSpace, degree: i32) -> Self {
        Self::from_fn(source, target, degree, |_| None)
    }

    /// Build block by block; `None` means a zero block.
    pub fn from_fn(
        source: &GradedSpace,
        target: &GradedSpace,
        degree: i32,
        mut block: impl FnMut(i32) -> Option<Matrix<F>>,
    ) -> Self {
        let mut blocks = BTreeMap::new();
        for i in source.support() {
            let rows = target.dim(i + degree);
            if rows == 0 {
                continue;
            }
            let cols = source.dim(i);
            let m = block(i).unwrap_or_else(|| Matrix::zeros(rows, cols));
            assert_eq!((m.rows(), m.cols()), (rows, cols), "block shape at degree {i}");
            blocks.insert(i, m);
        }
        GradedMap {
            source: source.clone(),
            target: target.clone(),
            degree,
            blocks,
        }
    }

    /// Checked constructor; missing blocks are zero.
    pub fn from_blocks(
        source: &GradedSpace,
        target: &GradedSpace,
        degree: i32,
        blocks: BTreeMap<i32, Matrix<F>>,
    ) -> Result<Self, GradedError> {
        for (&i, m) in &blocks {
            let expected = (target.dim(i + degree), source.dim(i));
            let found = (m.rows(), m.cols());
            if expected.0 * expected.1 == 0 {
                if !m.is_zero() {
                    return Err(GradedError::BlockShape {
                        degree: i,
                        expected,
                        found,
                    });
                }
                continue;
            }
            if expected != found {
                return Err(GradedError::BlockShape {
                    degree: i,
                    expected,
                    found,
                });
            }
        }
        Ok(Self::from_fn(source, target, degree, |i| blocks.get(&i).cloned()))
    }

    pub fn identity(space: &GradedSpace) -> Self {
        Self::from_fn(space, space, 0, |i| Some(Matrix::identity(space.dim(i))))
    }

    /// Read a total matrix back into blocks, rejecting entries that do not
    /// respect the degree.
    pub fn from_matrix(
        source: &GradedSpace,
        target: &GradedSpace,
        degree: i32,
        m: &Matrix<F>,
    ) -> Result<Self, GradedError> {
        assert_eq!((m.rows(), m.cols()), (target.total_dim(), source.total_dim()));
        let map = Self::from_fn(source, target, degree, |i| {
            Some(m.submatrix(
                target.offset(i + degree),
                source.offset(i),
                target.dim(i + degree),
                source.dim(i),
            ))
        });
        if map.to_matrix() != *m {
            return Err(GradedError::NotHomogeneous { degree });
        }
        Ok(map)
    }

    pub fn source(&self) -> &GradedSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedSpace {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn blocks(&self) -> &BTreeMap<i32, Matrix<F>> {
        &self.blocks
    }

    pub fn block(&self, source_degree: i32) -> Option<&Matrix<F>> {
        self.blocks.get(&source_degree)
    }

    /// The block at `source_degree`, or a correctly shaped zero matrix.
    pub fn block_or_zero(&self, source_degree: i32) -> Matrix<F> {
        self.blocks.get(&source_degree).cloned().unwrap_or_else(|| {
            Matrix::zeros(
                self.target.dim(source_degree + self.degree),
                self.source.dim(source_degree),
            )
        })
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(Matrix::is_zero)
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &GradedMap<F>) -> GradedMap<F> {
        assert!(rhs.target == self.source, "composing maps with mismatched spaces");
        let degree = self.degree + rhs.degree;
        GradedMap::from_fn(&rhs.source, &self.target, degree, |i| {
            let inner = rhs.blocks.get(&i)?;
            let outer = self.blocks.get(&(i + rhs.degree))?;
            Some(outer.mul(inner))
        })
    }

    fn zip(&self, rhs: &GradedMap<F>, op: impl Fn(&Matrix<F>, &Matrix<F>) -> Matrix<F>) -> GradedMap<F> {
        assert!(
            self.source == rhs.source && self.target == rhs.target && self.degree == rhs.degree,
            "adding maps of different shapes"
        );
        GradedMap::from_fn(&self.source, &self.target, self.degree, |i| {
            Some(op(&self.blocks[&i], &rhs.blocks[&i]))
        })
    }

    pub fn plus(&self, rhs: &GradedMap<F>) -> GradedMap<F> {
        self.zip(rhs, Matrix::plus)
    }

    pub fn minus(&self, rhs: &GradedMap<F>) -> GradedMap<F> {
        self.zip(rhs, Matrix::minus)
    }

    pub fn scaled(&self, c: &F) -> GradedMap<F> {
        GradedMap::from_fn(&self.source, &self.target, self.degree, |i| {
            Some(self.blocks[&i].scaled(c))
        })
    }

    pub fn negated(&self) -> GradedMap<F> {
        GradedMap::from_fn(&self.source, &self.target, self.degree, |i| {
            Some(self.blocks[&i].negated())
        })
    }

    /// Image of a homogeneous vector of source degree `degree`.
    pub fn apply(&self, degree: i32, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.source.dim(degree));
        match self.blocks.get(&degree) {
            Some(m) => m.apply(v),
            None => self.target.zero_vector(degree + self.degree),
        }
    }

    pub fn apply_flat(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.source.total_dim());
        let mut out = vec![F::zero(); self.target.total_dim()];
        for (&i, b) in &self.blocks {
            let (so, to) = (self.source.offset(i), self.target.offset(i + self.degree));
            let part = &v[so..so + b.cols()];
            if part.iter().all(|x| x.is_zero()) {
                continue;
            }
            for (r, y) in b.apply(part).into_iter().enumerate() {
                out[to + r] = out[to + r].plus(&y);
            }
        }
        out
    }

    pub fn to_matrix(&self) -> Matrix<F> {
        let mut m = Matrix::zeros(self.target.total_dim(), self.source.total_dim());
        for (&i, b) in &self.blocks {
            m.set_block(self.target.offset(i + self.degree), self.source.offset(i), b);
        }
        m
    }

    /// Built column by column: `column(p)` is the flat image of the basis
    /// vector `p`. Panics if the result does not have the given degree.
    pub fn from_columns_fn(
        source: &GradedSpace,
        target: &GradedSpace,
        degree: i32,
        mut column: impl FnMut(usize) -> Vec<F>,
    ) -> Self {
        let mut blocks = BTreeMap::new();
        for i in source.support() {
            let rows = target.dim(i + degree);
            if rows == 0 {
                continue;
            }
            let (so, to) = (source.offset(i), target.offset(i + degree));
            let mut m = Matrix::zeros(rows, source.dim(i));
            for c in 0..source.dim(i) {
                let v = column(so + c);
                for (r, x) in v.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    assert!(r >= to && r < to + rows, "column {c} leaves degree {}", i + degree);
                    m.set(r - to, c, x.clone());
                }
            }
            blocks.insert(i, m);
        }
        GradedMap {
            source: source.clone(),
            target: target.clone(),
            degree,
            blocks,
        }
    }

    /// The same map between regraded spaces (degree `n` of the new spaces is
    /// degree `n + k` of the old ones).
    pub fn regraded(&self, k: i32, source: &GradedSpace, target: &GradedSpace) -> GradedMap<F> {
        GradedMap::from_fn(source, target, self.degree, |n| self.blocks.get(&(n + k)).cloned())
    }

    /// Blockwise inverse of a degreewise bijection.
    pub fn inverse(&self) -> Option<GradedMap<F>> {
        if self.source.total_dim() != self.target.total_dim() {
            return None;
        }
        let mut blocks = BTreeMap::new();
        for i in self.source.support() {
            blocks.insert(i + self.degree, self.block_or_zero(i).inverse()?);
        }
        Some(GradedMap::from_fn(&self.target, &self.source, -self.degree, |j| {
            blocks.get(&j).cloned()
        }))
    }

    /// The same blocks regarded between different (equal-dimension) spaces.
    pub fn relabel(&self, source: &GradedSpace, target: &GradedSpace) -> GradedMap<F> {
        GradedMap::from_fn(source, target, self.degree, |i| self.blocks.get(&i).cloned())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    #[test]
    fn offsets_and_lookup() {
        let s = GradedSpace::from_dims(&[(-1, 2), (1, 1)], "v");
        assert_eq!(s.total_dim(), 3);
        assert_eq!(s.offset(-1), 0);
        assert_eq!(s.offset(0), 2);
        assert_eq!(s.offset(1), 2);
        assert_eq!(s.offset(5), 3);
        assert_eq!(s.locate(2), (1, 0));
        assert_eq!(s.find("v0@1"), Some(2));
        assert_eq!(s.find("v0"), None);
        assert_eq!(s.find("v1"), Some(1));
    }

    #[test]
    fn duplicate_labels_rejected() {
        let parts = BTreeMap::from([(0, vec!["x".to_string(), "x".to_string()])]);
        assert!(GradedSpace::new(parts).is_err());
    }

    #[test]
    fn composition_adds_degrees() {
        let s = GradedSpace::from_dims(&[(0, 1), (1, 1), (2, 1)], "e");
        let up: GradedMap<Rational> = GradedMap::from_fn(&s, &s, 1, |_| Some(Matrix::identity(1)));
        let twice = up.compose(&up);
        assert_eq!(twice.degree(), 2);
        assert_eq!(twice.blocks().len(), 1);
        assert_eq!(twice.apply(0, &[Rational::one()]), vec![Rational::one()]);
        let back = GradedMap::from_matrix(&s, &s, 1, &up.to_matrix()).unwrap();
        assert_eq!(back, up);
        assert!(GradedMap::from_matrix(&s, &s, 0, &up.to_matrix()).is_err());
    }
}
