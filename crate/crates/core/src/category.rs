//! Finite dg-categories presented by basis-level composition tables.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::complex::{validate_complex, Complex, TensorLayout};
use crate::field::Field;
use crate::report::{Law, ValidationReport, Violation};
use crate::sign::Sign;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("duplicate object `{0}`")]
    DuplicateObject(String),
    #[error("no identity given for object `{0}`")]
    MissingIdentity(String),
    #[error("basis index {index} out of range for hom({from}, {to}) of dimension {dim}")]
    BasisOutOfRange {
        from: String,
        to: String,
        index: usize,
        dim: usize,
    },
    #[error("vector of length {found} given for hom({from}, {to}) of dimension {expected}")]
    VectorLength {
        from: String,
        to: String,
        expected: usize,
        found: usize,
    },
}

/// Sparse coefficient vector.
pub type Sparse<F> = Vec<(usize, F)>;

pub fn to_sparse<F: Field>(v: &[F]) -> Sparse<F> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

/// Products `g ∘ f` of basis elements for one triple of objects.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Table<F> {
    f_dim: usize,
    entries: Vec<Sparse<F>>,
}

impl<F: Field> Table<F> {
    fn zero(g_dim: usize, f_dim: usize) -> Self {
        Table {
            f_dim,
            entries: vec![Vec::new(); g_dim * f_dim],
        }
    }

    fn get(&self, g: usize, f: usize) -> &Sparse<F> {
        &self.entries[g * self.f_dim + f]
    }
}

struct Inner<F> {
    objects: Vec<String>,
    homs: Vec<Complex<F>>,
    identities: Vec<Vec<F>>,
    tables: Vec<Table<F>>,
    opposite: OnceLock<DgCategory<F>>,
}

/// A finite dg-category. Cheap to clone.
#[derive(Clone)]
pub struct DgCategory<F>(Arc<Inner<F>>);

impl<F: PartialEq> PartialEq for DgCategory<F> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.objects == other.0.objects
                && self.0.homs == other.0.homs
                && self.0.identities == other.0.identities
                && self.0.tables == other.0.tables)
    }
}

impl<F: Eq> Eq for DgCategory<F> {}

impl<F> fmt::Debug for DgCategory<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DgCategory{:?}", self.0.objects)
    }
}

impl<F: Field> DgCategory<F> {
    pub fn objects(&self) -> &[String] {
        &self.0.objects
    }

    pub fn object_count(&self) -> usize {
        self.0.objects.len()
    }

    pub fn index_of(&self, label: &str) -> Result<usize, CategoryError> {
        self.0
            .objects
            .iter()
            .position(|o| o == label)
            .ok_or_else(|| CategoryError::UnknownObject(label.to_string()))
    }

    pub fn label(&self, x: usize) -> &str {
        &self.0.objects[x]
    }

    fn pair(&self, x: usize, y: usize) -> usize {
        x * self.object_count() + y
    }

    fn triple(&self, x: usize, y: usize, z: usize) -> usize {
        (x * self.object_count() + y) * self.object_count() + z
    }

    pub fn hom(&self, x: usize, y: usize) -> &Complex<F> {
        &self.0.homs[self.pair(x, y)]
    }

    pub fn hom_dim(&self, x: usize, y: usize) -> usize {
        self.hom(x, y).total_dim()
    }

    pub fn identity(&self, x: usize) -> &[F] {
        &self.0.identities[x]
    }

    /// Degree of the basis element `i` of `hom(x, y)`.
    pub fn basis_degree(&self, x: usize, y: usize, i: usize) -> i32 {
        self.hom(x, y).space().degree_of(i)
    }

    pub fn basis_label(&self, x: usize, y: usize, i: usize) -> String {
        let space = self.hom(x, y).space();
        let (d, k) = space.locate(i);
        space.labels(d)[k].clone()
    }

    pub fn basis_vector(&self, x: usize, y: usize, i: usize) -> Vec<F> {
        let mut v = vec![F::zero(); self.hom_dim(x, y)];
        v[i] = F::one();
        v
    }

    /// `g ∘ f` for basis elements `g ∈ hom(y, z)`, `f ∈ hom(x, y)`.
    pub fn compose_basis(&self, x: usize, y: usize, z: usize, g: usize, f: usize) -> &Sparse<F> {
        self.0.tables[self.triple(x, y, z)].get(g, f)
    }

    /// `g ∘ f` for flat vectors `g ∈ hom(y, z)`, `f ∈ hom(x, y)`.
    pub fn compose(&self, x: usize, y: usize, z: usize, g: &[F], f: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.hom_dim(x, z)];
        let table = &self.0.tables[self.triple(x, y, z)];
        for (gi, gc) in g.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (fi, fc) in f.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let coeff = gc.times(fc);
                for (k, c) in table.get(gi, fi) {
                    out[*k] = out[*k].plus(&coeff.times(c));
                }
            }
        }
        out
    }

    /// Differential of a flat vector of `hom(x, y)`.
    pub fn d(&self, x: usize, y: usize, v: &[F]) -> Vec<F> {
        self.hom(x, y).differential().apply_flat(v)
    }

    /// `(−1)^{|α||β|}` rule: `β^op ∘ α^op = ±(α ∘ β)^op`.
    pub fn opposite(&self) -> DgCategory<F> {
        self.0.opposite.get_or_init(|| opposite_category(self)).clone()
    }
}

/// Composition results keyed by `(left, right)` basis indices.
type CompositionTable<F> = BTreeMap<(usize, usize), Vec<F>>;

/// Accumulates a presentation; law checking is left to
/// [`validate_dg_category`].
#[derive(Clone, Debug)]
pub struct CategoryBuilder<F> {
    objects: Vec<String>,
    homs: BTreeMap<(usize, usize), Complex<F>>,
    identities: BTreeMap<usize, Vec<F>>,
    entries: BTreeMap<(usize, usize, usize), CompositionTable<F>>,
}

impl<F: Field> Default for CategoryBuilder<F> {
    fn default() -> Self {
        CategoryBuilder {
            objects: Vec::new(),
            homs: BTreeMap::new(),
            identities: BTreeMap::new(),
            entries: BTreeMap::new(),
        }
    }
}

impl<F: Field> CategoryBuilder<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(&mut self, label: &str) -> Result<usize, CategoryError> {
        if self.objects.iter().any(|o| o == label) {
            return Err(CategoryError::DuplicateObject(label.to_string()));
        }
        self.objects.push(label.to_string());
        Ok(self.objects.len() - 1)
    }

    pub fn index_of(&self, label: &str) -> Result<usize, CategoryError> {
        self.objects
            .iter()
            .position(|o| o == label)
            .ok_or_else(|| CategoryError::UnknownObject(label.to_string()))
    }

    pub fn hom(&mut self, x: usize, y: usize, complex: Complex<F>) {
        self.homs.insert((x, y), complex);
    }

    pub fn hom_of(&self, x: usize, y: usize) -> Option<&Complex<F>> {
        self.homs.get(&(x, y))
    }

    pub fn identity(&mut self, x: usize, v: Vec<F>) {
        self.identities.insert(x, v);
    }

    /// Set `g ∘ f` for basis elements `g ∈ hom(y, z)`, `f ∈ hom(x, y)`.
    pub fn compose(&mut self, x: usize, y: usize, z: usize, g: usize, f: usize, result: Vec<F>) {
        self.entries.entry((x, y, z)).or_default().insert((g, f), result);
    }

    /// Fill in `1 ∘ f = f` and `g ∘ 1 = g` wherever the identity is a single
    /// basis vector with coefficient one and the entry was not given.
    pub fn unit_entries(&mut self) {
        let n = self.objects.len();
        let dim = |homs: &BTreeMap<(usize, usize), Complex<F>>, x, y| homs.get(&(x, y)).map_or(0, |c| c.total_dim());
        let basis_identity = |v: &[F]| -> Option<usize> {
            let nz: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
            match nz.as_slice() {
                [i] if v[*i].is_one() => Some(*i),
                _ => None,
            }
        };
        for x in 0..n {
            for y in 0..n {
                let d = dim(&self.homs, x, y);
                let unit = |i: usize| {
                    let mut e = vec![F::zero(); d];
                    e[i] = F::one();
                    e
                };
                if let Some(iy) = self.identities.get(&y).and_then(|v| basis_identity(v)) {
                    let t = self.entries.entry((x, y, y)).or_default();
                    for f in 0..d {
                        t.entry((iy, f)).or_insert_with(|| unit(f));
                    }
                }
                if let Some(ix) = self.identities.get(&x).and_then(|v| basis_identity(v)) {
                    let t = self.entries.entry((x, x, y)).or_default();
                    for g in 0..d {
                        t.entry((g, ix)).or_insert_with(|| unit(g));
                    }
                }
            }
        }
    }

    pub fn build(self) -> Result<DgCategory<F>, CategoryError> {
        let n = self.objects.len();
        let mut homs = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                homs.push(self.homs.get(&(x, y)).cloned().unwrap_or_else(Complex::zero));
            }
        }
        let dim = |x: usize, y: usize| homs[x * n + y].total_dim();
        let mut identities = Vec::with_capacity(n);
        for x in 0..n {
            let v = self
                .identities
                .get(&x)
                .cloned()
                .ok_or_else(|| CategoryError::MissingIdentity(self.objects[x].clone()))?;
            if v.len() != dim(x, x) {
                return Err(CategoryError::VectorLength {
                    from: self.objects[x].clone(),
                    to: self.objects[x].clone(),
                    expected: dim(x, x),
                    found: v.len(),
                });
            }
            identities.push(v);
        }
        let mut tables = Vec::with_capacity(n * n * n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let mut t = Table::zero(dim(y, z), dim(x, y));
                    if let Some(given) = self.entries.get(&(x, y, z)) {
                        for (&(g, f), v) in given {
                            let range_error = |index, s: usize, t: usize| CategoryError::BasisOutOfRange {
                                from: self.objects[s].clone(),
                                to: self.objects[t].clone(),
                                index,
                                dim: dim(s, t),
                            };
                            if g >= dim(y, z) {
                                return Err(range_error(g, y, z));
                            }
                            if f >= dim(x, y) {
                                return Err(range_error(f, x, y));
                            }
                            if v.len() != dim(x, z) {
                                return Err(CategoryError::VectorLength {
                                    from: self.objects[x].clone(),
                                    to: self.objects[z].clone(),
                                    expected: dim(x, z),
                                    found: v.len(),
                                });
                            }
                            t.entries[g * t.f_dim + f] = to_sparse(v);
                        }
                    }
                    tables.push(t);
                }
            }
        }
        Ok(DgCategory(Arc::new(Inner {
            objects: self.objects,
            homs,
            identities,
            tables,
            opposite: OnceLock::new(),
        })))
    }
}

impl<F: Field> DgCategory<F> {
    /// A builder holding this presentation, for edits such as corruptions.
    pub fn to_builder(&self) -> CategoryBuilder<F> {
        let n = self.object_count();
        let mut b = CategoryBuilder::new();
        for o in self.objects() {
            b.object(o).expect("labels are distinct");
        }
        for x in 0..n {
            b.identity(x, self.identity(x).to_vec());
            for y in 0..n {
                if !self.hom(x, y).is_zero() {
                    b.hom(x, y, self.hom(x, y).clone());
                }
                for z in 0..n {
                    for g in 0..self.hom_dim(y, z) {
                        for f in 0..self.hom_dim(x, y) {
                            let r = self.compose_basis(x, y, z, g, f);
                            if !r.is_empty() {
                                b.compose(x, y, z, g, f, densify(r, self.hom_dim(x, z)));
                            }
                        }
                    }
                }
            }
        }
        b
    }
}

pub fn densify<F: Field>(v: &Sparse<F>, dim: usize) -> Vec<F> {
    let mut out = vec![F::zero(); dim];
    for (i, c) in v {
        out[*i] = c.clone();
    }
    out
}

fn is_in_degree<F: Field>(c: &Complex<F>, v: &[F], degree: i32) -> bool {
    v.iter()
        .enumerate()
        .all(|(i, x)| x.is_zero() || c.space().degree_of(i) == degree)
}

/// Checks d² = 0 on every hom, the identities, degree additivity, the Leibniz
/// rule, associativity and the unit laws, all on basis elements.
pub fn validate_dg_category<F: Field>(c: &DgCategory<F>) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = c.object_count();
    let obj = |x: usize| c.label(x).to_string();

    for x in 0..n {
        for y in 0..n {
            report.extend(validate_complex(c.hom(x, y)).in_context(&format!("hom({}, {})", obj(x), obj(y))));
        }
    }

    for x in 0..n {
        let id = c.identity(x);
        if !is_in_degree(c.hom(x, x), id, 0) {
            report.push(Violation::new(Law::IdentityDegree).objects(&[obj(x)]));
        }
        if c.d(x, x, id).iter().any(|v| !v.is_zero()) {
            report.push(Violation::new(Law::ClosedIdentity).objects(&[obj(x)]));
        }
        for y in 0..n {
            for f in 0..c.hom_dim(x, y) {
                let e = c.basis_vector(x, y, f);
                if c.compose(x, y, y, c.identity(y), &e) != e {
                    report.push(
                        Violation::new(Law::LeftUnit)
                            .objects(&[obj(x), obj(y)])
                            .items(&[c.basis_label(x, y, f)]),
                    );
                }
                if c.compose(x, x, y, &e, c.identity(x)) != e {
                    report.push(
                        Violation::new(Law::RightUnit)
                            .objects(&[obj(x), obj(y)])
                            .items(&[c.basis_label(x, y, f)]),
                    );
                }
            }
        }
    }

    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for g in 0..c.hom_dim(y, z) {
                    let p = c.basis_degree(y, z, g);
                    let eg = c.basis_vector(y, z, g);
                    let dg = c.d(y, z, &eg);
                    for f in 0..c.hom_dim(x, y) {
                        let q = c.basis_degree(x, y, f);
                        let items = [c.basis_label(y, z, g), c.basis_label(x, y, f)];
                        let objects = [obj(x), obj(y), obj(z)];
                        let ef = c.basis_vector(x, y, f);
                        let gf = densify(c.compose_basis(x, y, z, g, f), c.hom_dim(x, z));
                        if !is_in_degree(c.hom(x, z), &gf, p + q) {
                            report.push(
                                Violation::new(Law::DegreeAdditivity)
                                    .objects(&objects)
                                    .items(&items)
                                    .degree(p + q),
                            );
                        }
                        let lhs = c.d(x, z, &gf);
                        let first = c.compose(x, y, z, &dg, &ef);
                        let second = c.compose(x, y, z, &eg, &c.d(x, y, &ef));
                        let sign = Sign::parity(p as i64);
                        let rhs: Vec<F> = first.iter().zip(&second).map(|(a, b)| a.plus(&sign.apply(b))).collect();
                        if lhs != rhs {
                            report.push(
                                Violation::new(Law::Leibniz)
                                    .objects(&objects)
                                    .items(&items)
                                    .degree(p + q + 1),
                            );
                        }
                    }
                }
            }
        }
    }

    for w in 0..n {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    check_associativity(c, [w, x, y, z], &mut report);
                }
            }
        }
    }
    report
}

fn check_associativity<F: Field>(c: &DgCategory<F>, [w, x, y, z]: [usize; 4], report: &mut ValidationReport) {
    let (dh, dg, df) = (c.hom_dim(y, z), c.hom_dim(x, y), c.hom_dim(w, x));
    if dh * dg * df == 0 {
        return;
    }
    for h in 0..dh {
        let eh = c.basis_vector(y, z, h);
        for g in 0..dg {
            let hg = densify(c.compose_basis(x, y, z, h, g), c.hom_dim(x, z));
            for f in 0..df {
                let gf = densify(c.compose_basis(w, x, y, g, f), c.hom_dim(w, y));
                let left = c.compose(w, x, z, &hg, &c.basis_vector(w, x, f));
                let right = c.compose(w, y, z, &eh, &gf);
                if left != right {
                    report.push(
                        Violation::new(Law::Associativity)
                            .objects(&[c.label(w), c.label(x), c.label(y), c.label(z)])
                            .items(&[c.basis_label(y, z, h), c.basis_label(x, y, g), c.basis_label(w, x, f)]),
                    );
                }
            }
        }
    }
}

/// Same objects, `hom^op(A, B) = hom(B, A)` with the same differential and
/// `β^op ∘ α^op = (−1)^{|α||β|} (α ∘ β)^op`.
pub fn opposite_category<F: Field>(c: &DgCategory<F>) -> DgCategory<F> {
    let n = c.object_count();
    let mut homs = Vec::with_capacity(n * n);
    let mut identities = Vec::with_capacity(n);
    for x in 0..n {
        identities.push(c.identity(x).to_vec());
        for y in 0..n {
            homs.push(c.hom(y, x).clone());
        }
    }
    let mut tables = Vec::with_capacity(n * n * n);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                // β ∈ op(y, z) = hom(z, y), α ∈ op(x, y) = hom(y, x).
                let mut t = Table::zero(c.hom_dim(z, y), c.hom_dim(y, x));
                for beta in 0..c.hom_dim(z, y) {
                    for alpha in 0..c.hom_dim(y, x) {
                        let sign = Sign::koszul(c.basis_degree(y, x, alpha), c.basis_degree(z, y, beta));
                        t.entries[beta * t.f_dim + alpha] = c
                            .compose_basis(z, y, x, alpha, beta)
                            .iter()
                            .map(|(k, v)| (*k, sign.apply(v)))
                            .collect();
                    }
                }
                tables.push(t);
            }
        }
    }
    DgCategory(Arc::new(Inner {
        objects: c.objects().to_vec(),
        homs,
        identities,
        tables,
        opposite: OnceLock::new(),
    }))
}

/// Object label of a pair in a tensor category.
pub fn pair_label(a: &str, b: &str) -> String {
    format!("{a}⊗{b}")
}

/// Objects are pairs (first factor major); homs are tensor complexes and
/// `(α₂⊗β₂)(α₁⊗β₁) = (−1)^{|β₂||α₁|} α₂α₁ ⊗ β₂β₁`.
pub fn tensor_category<F: Field>(a: &DgCategory<F>, b: &DgCategory<F>) -> DgCategory<F> {
    let (na, nb) = (a.object_count(), b.object_count());
    let n = na * nb;
    let split = |p: usize| (p / nb, p % nb);
    let mut objects = Vec::with_capacity(n);
    for x in 0..na {
        for y in 0..nb {
            objects.push(pair_label(a.label(x), b.label(y)));
        }
    }
    let mut layouts = Vec::with_capacity(n * n);
    for p in 0..n {
        for q in 0..n {
            let ((a1, b1), (a2, b2)) = (split(p), split(q));
            layouts.push(TensorLayout::new(a.hom(a1, a2).space(), b.hom(b1, b2).space()));
        }
    }
    let mut homs = Vec::with_capacity(n * n);
    for p in 0..n {
        for q in 0..n {
            let ((a1, b1), (a2, b2)) = (split(p), split(q));
            homs.push(crate::complex::tensor_complex(a.hom(a1, a2), b.hom(b1, b2)));
        }
    }
    let identities: Vec<Vec<F>> = (0..n)
        .map(|p| {
            let (x, y) = split(p);
            layouts[p * n + p].tensor(a.identity(x), b.identity(y))
        })
        .collect();
    let mut tables = Vec::with_capacity(n * n * n);
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                let ((a1, b1), (a2, b2), (a3, b3)) = (split(p), split(q), split(r));
                let (lf, lg, lr) = (&layouts[p * n + q], &layouts[q * n + r], &layouts[p * n + r]);
                let (gd, fd) = (lg.space().total_dim(), lf.space().total_dim());
                let mut t = Table::zero(gd, fd);
                if lr.space().total_dim() > 0 {
                    for g in 0..gd {
                        let (alpha2, beta2) = lg.split(g);
                        let beta2_deg = b.basis_degree(b2, b3, beta2);
                        for f in 0..fd {
                            let (alpha1, beta1) = lf.split(f);
                            let aa = a.compose_basis(a1, a2, a3, alpha2, alpha1);
                            let bb = b.compose_basis(b1, b2, b3, beta2, beta1);
                            if aa.is_empty() || bb.is_empty() {
                                continue;
                            }
                            let sign = Sign::koszul(beta2_deg, a.basis_degree(a1, a2, alpha1));
                            let mut out = Vec::new();
                            for (i, u) in aa {
                                for (j, v) in bb {
                                    let (di, ii) = a.hom(a1, a3).space().locate(*i);
                                    let (dj, jj) = b.hom(b1, b3).space().locate(*j);
                                    out.push((lr.index(di, ii, dj, jj), sign.apply(&u.times(v))));
                                }
                            }
                            out.sort_by_key(|(k, _)| *k);
                            t.entries[g * fd + f] = out;
                        }
                    }
                }
                tables.push(t);
            }
        }
    }
    DgCategory(Arc::new(Inner {
        objects,
        homs,
        identities,
        tables,
        opposite: OnceLock::new(),
    }))
}

/// A morphism given by coefficients in the basis of `hom(source, target)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism<F> {
    pub source: usize,
    pub target: usize,
    pub coeffs: Vec<F>,
}

impl<F: Field> Morphism<F> {
    pub fn basis(c: &DgCategory<F>, source: usize, target: usize, i: usize) -> Self {
        Morphism {
            source,
            target,
            coeffs: c.basis_vector(source, target, i),
        }
    }

    /// The degree, if the morphism is homogeneous and nonzero.
    pub fn degree(&self, c: &DgCategory<F>) -> Option<i32> {
        c.hom(self.source, self.target).space().homogeneous_degree(&self.coeffs)
    }

    /// Components by degree, dropping zero ones.
    pub fn components(&self, c: &DgCategory<F>) -> BTreeMap<i32, Vec<F>> {
        let space = c.hom(self.source, self.target).space();
        let mut out = BTreeMap::new();
        for d in space.support() {
            let part = space.restrict(d, &self.coeffs);
            if part.iter().any(|x| !x.is_zero()) {
                out.insert(d, part);
            }
        }
        out
    }
}
