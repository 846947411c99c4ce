//! Cochain complexes, the Hom and tensor complexes, kernels and cokernels.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::Field;
use crate::graded::{disambiguate, GradedMap, GradedSpace};
use crate::linalg::{Matrix, Quotient};
use crate::report::{Law, ValidationReport, Violation};
use crate::sign::Sign;

/// A graded space with a degree +1 differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex<F> {
    space: GradedSpace,
    differential: GradedMap<F>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("differential must be a degree 1 endomorphism of the space")]
    BadDifferential,
    #[error("map does not commute with the differentials (source degree {degree})")]
    NotChainMap { degree: i32 },
    #[error("map must have degree 0, found {0}")]
    NotDegreeZero(i32),
    #[error("map spaces do not match the given complexes")]
    SpaceMismatch,
    #[error("subspace is not closed under the differential (degree {degree})")]
    NotStable { degree: i32 },
}

impl<F: Field> Complex<F> {
    pub fn new(space: GradedSpace, differential: GradedMap<F>) -> Result<Self, ComplexError> {
        if differential.degree() != 1 || *differential.source() != space || *differential.target() != space {
            return Err(ComplexError::BadDifferential);
        }
        Ok(Complex { space, differential })
    }

    /// The space with zero differential.
    pub fn with_zero_differential(space: GradedSpace) -> Self {
        let differential = GradedMap::zero(&space, &space, 1);
        Complex { space, differential }
    }

    pub fn zero() -> Self {
        Self::with_zero_differential(GradedSpace::zero())
    }

    /// `K` concentrated in one degree.
    pub fn line(degree: i32, label: &str) -> Self {
        Self::with_zero_differential(GradedSpace::line(degree, label))
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn differential(&self) -> &GradedMap<F> {
        &self.differential
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.space.dim(degree)
    }

    pub fn total_dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.space.dims()
    }

    pub fn is_zero(&self) -> bool {
        self.space.is_zero()
    }

    /// Differential block from degree `degree` to `degree + 1`.
    pub fn d_block(&self, degree: i32) -> Matrix<F> {
        self.differential.block_or_zero(degree)
    }

    /// Apply d to a homogeneous vector of the given degree.
    pub fn d(&self, degree: i32, v: &[F]) -> Vec<F> {
        self.differential.apply(degree, v)
    }

    /// Dimensions of cohomology.
    pub fn cohomology_dims(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for n in self.space.support() {
            let cycles = self.dim(n) - self.d_block(n).rank();
            let boundaries = self.d_block(n - 1).rank();
            let h = cycles - boundaries;
            if h > 0 {
                out.insert(n, h);
            }
        }
        out
    }

    pub fn is_acyclic(&self) -> bool {
        self.cohomology_dims().is_empty()
    }

    /// The same differential with degrees moved: degree `n` of the result is
    /// degree `n + k` here.
    pub fn regraded(&self, k: i32) -> Self {
        let space = self.space.shifted(k);
        let differential = GradedMap::from_fn(&space, &space, 1, |n| self.differential.block(n + k).cloned());
        Complex { space, differential }
    }

    /// Change of basis: the new basis of degree `n` is given by the columns
    /// of `gauge[n]` (invertible), and the differential is conjugated.
    pub fn conjugated(&self, gauge: &BTreeMap<i32, Matrix<F>>) -> Self {
        let d = GradedMap::from_fn(&self.space, &self.space, 1, |i| {
            let inv = gauge[&(i + 1)].inverse().expect("gauge is invertible");
            Some(inv.mul(&self.d_block(i)).mul(&gauge[&i]))
        });
        Complex {
            space: self.space.clone(),
            differential: d,
        }
    }
}

/// Checks block shapes and `d ∘ d = 0`, reporting each failing degree by the
/// source degree of the composite.
pub fn validate_complex<F: Field>(c: &Complex<F>) -> ValidationReport {
    let mut report = ValidationReport::default();
    let d = &c.differential;
    if d.degree() != 1 || *d.source() != c.space || *d.target() != c.space {
        report.push(Violation::new(Law::BlockShape));
        return report;
    }
    for i in c.space.support() {
        let (Some(first), Some(second)) = (d.block(i), d.block(i + 1)) else {
            continue;
        };
        if !second.mul(first).is_zero() {
            report.push(Violation::new(Law::DifferentialSquare).degree(i));
        }
    }
    report
}

/// Direct sum with basis labels prefixed by `prefix:`.
pub fn direct_sum<F: Field>(parts: &[(&str, &Complex<F>)]) -> Complex<F> {
    let mut labels: BTreeMap<i32, Vec<String>> = BTreeMap::new();
    for (prefix, c) in parts {
        for (&d, ls) in c.space.parts() {
            labels
                .entry(d)
                .or_default()
                .extend(ls.iter().map(|l| format!("{prefix}:{l}")));
        }
    }
    let space = GradedSpace::new(labels).expect("prefixes keep labels distinct");
    let differential = GradedMap::from_fn(&space, &space, 1, |i| {
        let mut m = Matrix::zeros(space.dim(i + 1), space.dim(i));
        let (mut r, mut c0) = (0, 0);
        for (_, part) in parts {
            m.set_block(r, c0, &part.d_block(i));
            r += part.dim(i + 1);
            c0 += part.dim(i);
        }
        Some(m)
    });
    Complex { space, differential }
}

/// Basis of the degree-`k` part of the Hom space: for each source degree `i`
/// (ascending) with `n.dim(i+k) > 0`, the matrix units `E_{r,c}` in
/// row-major order.
pub fn hom_space(m: &GradedSpace, n: &GradedSpace) -> GradedSpace {
    let mut entries = Vec::new();
    let (lo, hi) = degree_range(m, n);
    for k in lo..=hi {
        for i in m.support() {
            let j = i + k;
            for b in n.labels(j) {
                for a in m.labels(i) {
                    entries.push((k, format!("{a}↦{b}"), format!("{a}@{i}↦{b}@{j}")));
                }
            }
        }
    }
    GradedSpace::new(disambiguate(entries)).expect("disambiguated labels")
}

fn degree_range(m: &GradedSpace, n: &GradedSpace) -> (i32, i32) {
    let (Some(m_lo), Some(m_hi)) = (m.support().next(), m.support().last()) else {
        return (0, -1);
    };
    let (Some(n_lo), Some(n_hi)) = (n.support().next(), n.support().last()) else {
        return (0, -1);
    };
    (n_lo - m_hi, n_hi - m_lo)
}

/// Coordinates of a graded map in the basis of [`hom_space`].
pub fn hom_coords<F: Field>(map: &GradedMap<F>) -> Vec<F> {
    let mut out = Vec::new();
    for i in map.source().support() {
        if let Some(b) = map.block(i) {
            out.extend(b.entries().iter().cloned());
        }
    }
    out
}

/// The graded map of degree `k` with the given Hom coordinates.
pub fn hom_map<F: Field>(m: &GradedSpace, n: &GradedSpace, k: i32, coords: &[F]) -> GradedMap<F> {
    let mut pos = 0;
    let map = GradedMap::from_fn(m, n, k, |i| {
        let rows = n.dim(i + k);
        let cols = m.dim(i);
        let block = Matrix::from_fn(rows, cols, |r, c| coords[pos + r * cols + c].clone());
        pos += rows * cols;
        Some(block)
    });
    assert_eq!(pos, coords.len(), "hom coordinate vector has wrong length");
    map
}

/// The Hom differential `d(α) = d_N ∘ α − (−1)^{|α|} α ∘ d_M`.
pub fn hom_differential<F: Field>(m: &Complex<F>, n: &Complex<F>, alpha: &GradedMap<F>) -> GradedMap<F> {
    let sign = Sign::parity(alpha.degree() as i64);
    let left = n.differential.compose(alpha);
    let right = alpha.compose(&m.differential);
    left.minus(&right.scaled(&sign.scalar()))
}

/// The complex of graded maps `m → n`.
pub fn hom_complex<F: Field>(m: &Complex<F>, n: &Complex<F>) -> Complex<F> {
    let space = hom_space(&m.space, &n.space);
    let differential = GradedMap::from_fn(&space, &space, 1, |k| {
        let cols: Vec<Vec<F>> = (0..space.dim(k))
            .map(|b| {
                let mut e = vec![F::zero(); space.dim(k)];
                e[b] = F::one();
                let alpha = hom_map(&m.space, &n.space, k, &e);
                hom_coords(&hom_differential(m, n, &alpha))
            })
            .collect();
        Some(Matrix::from_columns(space.dim(k + 1), &cols))
    });
    Complex { space, differential }
}

/// Layout of `M ⊗ N`: degree `k` holds the blocks `M^i ⊗ N^{k-i}` for `i`
/// ascending, each in lexicographic order of basis pairs.
#[derive(Clone, Debug)]
pub struct TensorLayout {
    m: GradedSpace,
    n: GradedSpace,
    space: GradedSpace,
    block_offset: BTreeMap<(i32, i32), usize>,
}

impl TensorLayout {
    pub fn new(m: &GradedSpace, n: &GradedSpace) -> Self {
        let mut entries = Vec::new();
        let mut sizes: BTreeMap<i32, usize> = BTreeMap::new();
        let mut block_offset = BTreeMap::new();
        let mut keys: Vec<(i32, i32)> = Vec::new();
        for i in m.support() {
            for j in n.support() {
                keys.push((i + j, i));
            }
        }
        keys.sort();
        for (k, i) in keys {
            let j = k - i;
            let size = sizes.entry(k).or_default();
            block_offset.insert((i, j), *size);
            *size += m.dim(i) * n.dim(j);
            for a in m.labels(i) {
                for b in n.labels(j) {
                    entries.push((k, format!("{a}⊗{b}"), format!("{a}@{i}⊗{b}@{j}")));
                }
            }
        }
        let space = GradedSpace::new(disambiguate(entries)).expect("disambiguated labels");
        TensorLayout {
            m: m.clone(),
            n: n.clone(),
            space,
            block_offset,
        }
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    /// Flat index of `m_{i,a} ⊗ n_{j,b}`.
    pub fn index(&self, i: i32, a: usize, j: i32, b: usize) -> usize {
        self.space.offset(i + j) + self.block_offset[&(i, j)] + a * self.n.dim(j) + b
    }

    /// Flat coordinates of `x ⊗ y` for flat vectors `x`, `y`.
    pub fn tensor<F: Field>(&self, x: &[F], y: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.space.total_dim()];
        for (p, xv) in x.iter().enumerate() {
            if xv.is_zero() {
                continue;
            }
            let (i, a) = self.m.locate(p);
            for (q, yv) in y.iter().enumerate() {
                if yv.is_zero() {
                    continue;
                }
                let (j, b) = self.n.locate(q);
                out[self.index(i, a, j, b)] = xv.times(yv);
            }
        }
        out
    }

    /// Inverse of [`TensorLayout::index`].
    pub fn split(&self, flat: usize) -> (usize, usize) {
        let (k, mut rest) = self.space.locate(flat);
        for i in self.m.support() {
            let j = k - i;
            let size = self.m.dim(i) * self.n.dim(j);
            if size == 0 {
                continue;
            }
            if rest < size {
                let a = rest / self.n.dim(j);
                let b = rest % self.n.dim(j);
                return (self.m.offset(i) + a, self.n.offset(j) + b);
            }
            rest -= size;
        }
        unreachable!("flat index inside the tensor space")
    }
}

/// `f ⊗ g` with the Koszul rule `(f⊗g)(x⊗y) = (−1)^{|g||x|} f(x) ⊗ g(y)`.
pub fn tensor_maps<F: Field>(f: &GradedMap<F>, g: &GradedMap<F>) -> GradedMap<F> {
    let src = TensorLayout::new(f.source(), g.source());
    let tgt = TensorLayout::new(f.target(), g.target());
    tensor_maps_in(&src, &tgt, f, g)
}

/// [`tensor_maps`] with precomputed layouts.
pub fn tensor_maps_in<F: Field>(
    src: &TensorLayout,
    tgt: &TensorLayout,
    f: &GradedMap<F>,
    g: &GradedMap<F>,
) -> GradedMap<F> {
    let degree = f.degree() + g.degree();
    let mut total = Matrix::zeros(tgt.space.total_dim(), src.space.total_dim());
    for (&i, fb) in f.blocks() {
        for (&j, gb) in g.blocks() {
            let sign: F = Sign::koszul(g.degree(), i).scalar();
            for a in 0..fb.cols() {
                for b in 0..gb.cols() {
                    let col = src.index(i, a, j, b);
                    for a2 in 0..fb.rows() {
                        let fa = fb.get(a2, a);
                        if fa.is_zero() {
                            continue;
                        }
                        for b2 in 0..gb.rows() {
                            let gv = gb.get(b2, b);
                            if gv.is_zero() {
                                continue;
                            }
                            let row = tgt.index(i + f.degree(), a2, j + g.degree(), b2);
                            total.add_to(row, col, &sign.times(&fa.times(gv)));
                        }
                    }
                }
            }
        }
    }
    GradedMap::from_matrix(&src.space, &tgt.space, degree, &total).expect("tensor map is homogeneous")
}

/// `M ⊗ N` with `d(m⊗n) = d m ⊗ n + (−1)^{|m|} m ⊗ d n`.
pub fn tensor_complex<F: Field>(m: &Complex<F>, n: &Complex<F>) -> Complex<F> {
    let layout = TensorLayout::new(&m.space, &n.space);
    let id_m = GradedMap::identity(&m.space);
    let id_n = GradedMap::identity(&n.space);
    // The Koszul rule in tensor_maps supplies (−1)^{|m|} for 1 ⊗ d.
    let left = tensor_maps_in(&layout, &layout, &m.differential, &id_n);
    let right = tensor_maps_in(&layout, &layout, &id_m, &n.differential);
    Complex {
        space: layout.space.clone(),
        differential: left.plus(&right),
    }
}

/// Kernel and cokernel of a closed degree-0 chain map.
#[derive(Clone, Debug)]
pub struct Subquotient<F> {
    pub kernel: Complex<F>,
    pub inclusion: GradedMap<F>,
    pub cokernel: Complex<F>,
    pub projection: GradedMap<F>,
    /// Graded (not chain) section of the projection.
    pub lift: GradedMap<F>,
}

/// Checks that `f` is a degree-0 chain map `source → target`.
pub fn check_chain_map<F: Field>(
    f: &GradedMap<F>,
    source: &Complex<F>,
    target: &Complex<F>,
) -> Result<(), ComplexError> {
    if *f.source() != source.space || *f.target() != target.space {
        return Err(ComplexError::SpaceMismatch);
    }
    let lhs = target.differential.compose(f);
    let rhs = f.compose(&source.differential);
    let sign: F = Sign::parity(f.degree() as i64).scalar();
    let diff = lhs.minus(&rhs.scaled(&sign));
    if let Some((&degree, _)) = diff.blocks().iter().find(|(_, b)| !b.is_zero()) {
        return Err(ComplexError::NotChainMap { degree });
    }
    Ok(())
}

pub fn subquotient_complex<F: Field>(
    f: &GradedMap<F>,
    source: &Complex<F>,
    target: &Complex<F>,
) -> Result<Subquotient<F>, ComplexError> {
    if f.degree() != 0 {
        return Err(ComplexError::NotDegreeZero(f.degree()));
    }
    check_chain_map(f, source, target)?;

    let mut kernel_bases = BTreeMap::new();
    let mut kernel_labels = BTreeMap::new();
    for i in source.space.support() {
        let k = f.block_or_zero(i).kernel();
        kernel_labels.insert(i, column_labels(&source.space, i, &k, "ker"));
        kernel_bases.insert(i, k);
    }
    let ker_space = GradedSpace::new(kernel_labels).expect("kernel labels are distinct");
    let inclusion = GradedMap::from_fn(&ker_space, &source.space, 0, |i| kernel_bases.get(&i).cloned());
    let ker_d = GradedMap::from_fn(&ker_space, &ker_space, 1, |i| {
        let image = source.d_block(i).mul(&kernel_bases[&i]);
        Some(kernel_bases[&(i + 1)].solve_matrix(&image).expect("kernel is d-stable"))
    });

    let mut quotients = BTreeMap::new();
    let mut coker_labels = BTreeMap::new();
    for j in target.space.support() {
        let q = Quotient::new(target.dim(j), &f.block_or_zero(j));
        coker_labels.insert(
            j,
            q.kept
                .iter()
                .map(|&k| target.space.labels(j)[k].clone())
                .collect::<Vec<_>>(),
        );
        quotients.insert(j, q);
    }
    let coker_space = GradedSpace::new(coker_labels).expect("subset of target labels");
    let projection = GradedMap::from_fn(&target.space, &coker_space, 0, |j| {
        Some(quotients[&j].projection.clone())
    });
    let lift = GradedMap::from_fn(&coker_space, &target.space, 0, |j| Some(quotients[&j].lift.clone()));
    let coker_d = GradedMap::from_fn(&coker_space, &coker_space, 1, |j| {
        Some(
            quotients[&(j + 1)]
                .projection
                .mul(&target.d_block(j))
                .mul(&quotients[&j].lift),
        )
    });

    Ok(Subquotient {
        kernel: Complex {
            space: ker_space,
            differential: ker_d,
        },
        inclusion,
        cokernel: Complex {
            space: coker_space,
            differential: coker_d,
        },
        projection,
        lift,
    })
}

/// A subcomplex given by a column basis per degree, with its inclusion.
pub fn subcomplex<F: Field>(
    ambient: &Complex<F>,
    basis: &BTreeMap<i32, Matrix<F>>,
    prefix: &str,
) -> Result<(Complex<F>, GradedMap<F>), ComplexError> {
    let labels = basis
        .iter()
        .map(|(&d, b)| (d, column_labels(&ambient.space, d, b, prefix)))
        .collect();
    let space = GradedSpace::new(labels).expect("column labels are distinct");
    let inclusion = GradedMap::from_fn(&space, &ambient.space, 0, |d| basis.get(&d).cloned());
    let mut blocks = BTreeMap::new();
    for d in space.support() {
        let image = ambient.d_block(d).mul(&basis[&d]);
        let target = basis
            .get(&(d + 1))
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(ambient.dim(d + 1), 0));
        let solved = target
            .solve_matrix(&image)
            .ok_or(ComplexError::NotStable { degree: d })?;
        blocks.insert(d, solved);
    }
    let differential = GradedMap::from_fn(&space, &space, 1, |d| blocks.get(&d).cloned());
    Ok((Complex { space, differential }, inclusion))
}

/// Quotient of a complex by the span of the given columns per degree.
#[derive(Clone, Debug)]
pub struct QuotientComplex<F> {
    pub complex: Complex<F>,
    pub projection: GradedMap<F>,
    /// Graded section of the projection.
    pub lift: GradedMap<F>,
}

pub fn quotient_complex<F: Field>(
    ambient: &Complex<F>,
    relations: &BTreeMap<i32, Matrix<F>>,
) -> Result<QuotientComplex<F>, ComplexError> {
    let mut quotients = BTreeMap::new();
    let mut labels = BTreeMap::new();
    for d in ambient.space.support() {
        let span = relations
            .get(&d)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(ambient.dim(d), 0));
        let q = Quotient::new(ambient.dim(d), &span);
        labels.insert(
            d,
            q.kept
                .iter()
                .map(|&k| ambient.space.labels(d)[k].clone())
                .collect::<Vec<_>>(),
        );
        quotients.insert(d, q);
    }
    for (&d, span) in relations {
        if span.cols() == 0 {
            continue;
        }
        let image = ambient.d_block(d).mul(span);
        if let Some(q) = quotients.get(&(d + 1)) {
            if !q.projection.mul(&image).is_zero() {
                return Err(ComplexError::NotStable { degree: d });
            }
        }
    }
    let space = GradedSpace::new(labels).expect("subset of ambient labels");
    let projection = GradedMap::from_fn(&ambient.space, &space, 0, |d| Some(quotients[&d].projection.clone()));
    let lift = GradedMap::from_fn(&space, &ambient.space, 0, |d| Some(quotients[&d].lift.clone()));
    let differential = GradedMap::from_fn(&space, &space, 1, |d| {
        Some(
            quotients[&(d + 1)]
                .projection
                .mul(&ambient.d_block(d))
                .mul(&quotients[&d].lift),
        )
    });
    Ok(QuotientComplex {
        complex: Complex { space, differential },
        projection,
        lift,
    })
}

/// Labels for basis vectors given as columns: reuse the ambient label when a
/// column is a standard basis vector, otherwise `prefix{j}`.
pub fn column_labels<F: Field>(space: &GradedSpace, degree: i32, basis: &Matrix<F>, prefix: &str) -> Vec<String> {
    let labels = space.labels(degree);
    let mut out: Vec<String> = (0..basis.cols())
        .map(|j| {
            let col = basis.column(j);
            let nonzero: Vec<usize> = (0..col.len()).filter(|&r| !col[r].is_zero()).collect();
            match nonzero.as_slice() {
                [r] if col[*r].is_one() => labels[*r].clone(),
                _ => format!("{prefix}{j}"),
            }
        })
        .collect();
    let mut seen = std::collections::BTreeSet::new();
    for (j, l) in out.iter_mut().enumerate() {
        if !seen.insert(l.clone()) {
            *l = format!("{prefix}{j}");
            seen.insert(l.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    type Q = Rational;

    /// `K@(−1) → K@0` with d = id.
    fn two_term() -> Complex<Q> {
        let space = GradedSpace::new(BTreeMap::from([
            (-1, vec!["x".to_string()]),
            (0, vec!["y".to_string()]),
        ]))
        .unwrap();
        let d = GradedMap::from_fn(&space, &space, 1, |_| Some(Matrix::identity(1)));
        Complex::new(space, d).unwrap()
    }

    #[test]
    fn zero_and_line_are_valid() {
        assert!(validate_complex(&Complex::<Q>::zero()).is_valid());
        assert!(validate_complex(&Complex::<Q>::line(0, "1")).is_valid());
    }

    #[test]
    fn corrupted_differential_reports_degree() {
        let space = GradedSpace::from_dims(&[(-1, 1), (0, 1), (1, 1)], "e");
        let d = GradedMap::from_fn(&space, &space, 1, |_| Some(Matrix::<Q>::identity(1)));
        let c = Complex::new(space, d).unwrap();
        let report = validate_complex(&c);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].law, Law::DifferentialSquare);
        assert_eq!(report.violations[0].degree, Some(-1));
    }

    #[test]
    fn hom_of_lines() {
        let h = hom_complex(&Complex::<Q>::line(0, "a"), &Complex::line(0, "b"));
        assert_eq!(h.dims(), BTreeMap::from([(0, 1)]));
        let h = hom_complex(&Complex::<Q>::line(0, "a"), &Complex::line(1, "b"));
        assert_eq!(h.dims(), BTreeMap::from([(1, 1)]));
        assert!(h.differential().is_zero());
    }

    #[test]
    fn hom_of_two_term_complex() {
        let c = two_term();
        let h = hom_complex(&c, &c);
        assert_eq!(h.dims(), BTreeMap::from([(-1, 1), (0, 2), (1, 1)]));
        assert!(validate_complex(&h).is_valid());
        // Chain maps of C are pairs (a, a); the null-homotopic ones are all of them.
        assert_eq!(h.cohomology_dims(), BTreeMap::new());
        let cycles = h.dim(0) - h.d_block(0).rank();
        assert_eq!(cycles, 1);
    }

    #[test]
    fn tensor_of_two_term_complex() {
        let c = two_term();
        let t = tensor_complex(&c, &c);
        assert_eq!(t.dims(), BTreeMap::from([(-2, 1), (-1, 2), (0, 1)]));
        assert!(validate_complex(&t).is_valid());
        assert!(t.is_acyclic());
        let k = tensor_complex(&Complex::<Q>::line(0, "1"), &c);
        assert_eq!(k.dims(), c.dims());
        assert_eq!(k.differential().to_matrix(), c.differential().to_matrix());
        let k = tensor_complex(&Complex::<Q>::line(1, "a"), &Complex::line(1, "b"));
        assert_eq!(k.dims(), BTreeMap::from([(2, 1)]));
    }

    #[test]
    fn identity_and_zero_subquotients() {
        let k0 = Complex::<Q>::line(0, "z");
        let id = GradedMap::identity(k0.space());
        let sq = subquotient_complex(&id, &k0, &k0).unwrap();
        assert!(sq.kernel.is_zero());
        assert!(sq.cokernel.is_zero());
        let zero = GradedMap::zero(k0.space(), k0.space(), 0);
        let sq = subquotient_complex(&zero, &k0, &k0).unwrap();
        assert_eq!(sq.kernel.dims(), k0.dims());
        assert_eq!(sq.cokernel.dims(), k0.dims());
    }

    #[test]
    fn projection_onto_top_degree_is_not_a_chain_map() {
        let c = two_term();
        let k0 = Complex::<Q>::line(0, "z");
        let f = GradedMap::from_fn(c.space(), k0.space(), 0, |_| Some(Matrix::identity(1)));
        assert_eq!(
            subquotient_complex(&f, &c, &k0).unwrap_err(),
            ComplexError::NotChainMap { degree: -1 }
        );
        // Degreewise it still has kernel K@(−1) and no cokernel.
        assert_eq!(f.block_or_zero(-1).rows(), 0);
        assert_eq!(f.block_or_zero(0).kernel().cols(), 0);
        assert_eq!(f.block_or_zero(0).rank(), 1);
    }

    #[test]
    fn projection_onto_quotient_by_boundaries() {
        let c = two_term();
        let q = Complex::<Q>::line(-1, "x");
        let p = GradedMap::from_fn(c.space(), q.space(), 0, |_| Some(Matrix::identity(1)));
        let sq = subquotient_complex(&p, &c, &q).unwrap();
        assert_eq!(sq.kernel.dims(), BTreeMap::from([(0, 1)]));
        assert_eq!(sq.kernel.space().labels(0), ["y".to_string()]);
        assert!(sq.cokernel.is_zero());
        assert!(validate_complex(&sq.kernel).is_valid());
        assert_eq!(sq.inclusion.block_or_zero(0), Matrix::identity(1));
    }

    #[test]
    fn regrading_moves_degrees() {
        let c = two_term().regraded(-1);
        assert_eq!(c.dims(), BTreeMap::from([(0, 1), (1, 1)]));
        assert!(!c.differential().is_zero());
        assert!(validate_complex(&c).is_valid());
    }

    #[test]
    fn hom_tensor_adjunction_dims() {
        let c = two_term();
        let l = Complex::<Q>::line(1, "l");
        for (a, b, n) in [(&c, &c, &c), (&l, &c, &c), (&c, &l, &c)] {
            let lhs = hom_complex(&tensor_complex(a, b), n);
            let rhs = hom_complex(a, &hom_complex(b, n));
            assert_eq!(lhs.dims(), rhs.dims());
        }
    }

    #[test]
    fn closed_degree_zero_homs_are_chain_maps() {
        let c = two_term();
        let h = hom_complex(&c, &c);
        let z = h.d_block(0).kernel();
        for col in z.columns() {
            let f = hom_map(c.space(), c.space(), 0, &col);
            assert!(check_chain_map(&f, &c, &c).is_ok());
        }
    }
}
