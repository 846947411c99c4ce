//! Triangular matrix dg-categories, slices of bimodules, the functors
//! `DgMod(R) → DgMod(T)` they induce, pushforward of bimodules along
//! operations on module categories, and comma dg-categories.
//!
//! A bimodule `M` over `R ⊗ T^op` is a [`Bimodule`] with `first = R` and
//! `second = T^op`; a basis vector of `T(x, y)` is used unchanged as the
//! corresponding vector of `T^op(y, x)`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::category::{tensor_category, CategoryBuilder, CategoryError, DgCategory};
use crate::complex::{direct_sum, subcomplex, Complex, ComplexError};
use crate::field::Field;
use crate::functor::{DgFunctor, FunctorError};
use crate::graded::{GradedMap, GradedSpace};
use crate::kan::{lan, lan_on_nat, ran, ran_on_nat, restrict_nat, KanError, Named};
use crate::linalg::Matrix;
use crate::module::{restrict_module, zero_module, Bimodule, DgModule, ModuleError};
use crate::nat::{dgnat_complex, DgNat, NatComplex, NatError};
use crate::sign::Sign;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("categories do not match")]
    BaseMismatch,
    #[error("object `{0}` is not in the list")]
    UnknownModule(String),
    #[error("the two sides of the pushforward square differ at ({s}, {t})")]
    SignSquare { s: String, t: String },
    #[error("unit is not the identity on the slice at `{0}`")]
    UnitNotNormalized(String),
    #[error("no adjunction data for `{0}` ⊣ `{1}`")]
    NoAdjunction(String, String),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Nat(#[from] NatError),
    #[error(transparent)]
    Kan(#[from] KanError),
}

/// `T` recovered from a bimodule over `R ⊗ T^op`.
pub fn right_factor<F: Field>(m: &Bimodule<F>) -> DgCategory<F> {
    m.second().opposite()
}

/// The zero bimodule over `R ⊗ T^op`.
pub fn zero_bimodule<F: Field>(r: &DgCategory<F>, t: &DgCategory<F>) -> Bimodule<F> {
    let top = t.opposite();
    Bimodule::from_module(r, &top, zero_module(&tensor_category(r, &top)))
        .expect("zero module over the tensor category")
}

/// `M_t`: the module `R ↦ M(R, t)` over `R`.
pub fn bimodule_slice<F: Field>(m: &Bimodule<F>, t: usize) -> DgModule<F> {
    let r = m.first();
    let values = (0..r.object_count()).map(|x| m.value(x, t).clone()).collect();
    DgModule::new(r, values, |x, x2, i| {
        m.act_first(x, x2, t, &r.basis_vector(x, x2, i), r.basis_degree(x, x2, i))
    })
    .expect("slice keeps shapes")
}

/// `t̄: M_{t1} → M_{t0}` for a homogeneous `t ∈ T(t0, t1)`, with components
/// `M(1_R ⊗ t^op)`.
pub fn slice_map<F: Field>(m: &Bimodule<F>, t0: usize, t1: usize, t: &[F], degree: i32) -> DgNat<F> {
    let r = m.first();
    let comps = (0..r.object_count())
        .map(|x| m.act_second(x, t1, t0, t, degree))
        .collect();
    DgNat::new(&bimodule_slice(m, t1), &bimodule_slice(m, t0), degree, comps).expect("slice map keeps shapes")
}

/// `Λ = [T 0; M R]` with objects all pairs `[t, r]`.
#[derive(Clone, Debug)]
pub struct TriangularMatrixCategory<F> {
    pub t_part: DgCategory<F>,
    pub r_part: DgCategory<F>,
    pub m_part: Bimodule<F>,
    pub lambda: DgCategory<F>,
    homs: Vec<Complex<F>>,
}

/// Per degree, `hom_Λ` is `T(t, t′)`, then `M(r′, t)`, then `R(r, r′)`.
fn sum_embed<F: Field>(sum: &GradedSpace, parts: &[&GradedSpace], which: usize, v: &[F]) -> Vec<F> {
    let mut out = vec![F::zero(); sum.total_dim()];
    for k in parts[which].support() {
        let before: usize = parts[..which].iter().map(|p| p.dim(k)).sum();
        let o = sum.offset(k) + before;
        let block = parts[which].restrict(k, v);
        out[o..o + block.len()].clone_from_slice(&block);
    }
    out
}

fn sum_project<F: Field>(sum: &GradedSpace, parts: &[&GradedSpace], which: usize, v: &[F]) -> Vec<F> {
    let mut out = vec![F::zero(); parts[which].total_dim()];
    for k in parts[which].support() {
        let before: usize = parts[..which].iter().map(|p| p.dim(k)).sum();
        let o = sum.offset(k) + before;
        let d = parts[which].dim(k);
        let at = parts[which].offset(k);
        out[at..at + d].clone_from_slice(&v[o..o + d]);
    }
    out
}

impl<F: Field> TriangularMatrixCategory<F> {
    pub fn object(&self, t: usize, r: usize) -> usize {
        t * self.r_part.object_count() + r
    }

    pub fn split_object(&self, x: usize) -> (usize, usize) {
        (x / self.r_part.object_count(), x % self.r_part.object_count())
    }

    fn hom_space(&self, x: usize, y: usize) -> &GradedSpace {
        self.homs[x * self.lambda_size() + y].space()
    }

    fn lambda_size(&self) -> usize {
        self.t_part.object_count() * self.r_part.object_count()
    }

    fn parts(&self, x: usize, y: usize) -> [&GradedSpace; 3] {
        let ((t, r), (t2, r2)) = (self.split_object(x), self.split_object(y));
        [
            self.t_part.hom(t, t2).space(),
            self.m_part.value(r2, t).space(),
            self.r_part.hom(r, r2).space(),
        ]
    }

    /// The `T`, `M` and `R` components of a flat vector of `hom_Λ(x, y)`.
    pub fn split(&self, x: usize, y: usize, v: &[F]) -> [Vec<F>; 3] {
        let parts = self.parts(x, y);
        let sum = self.hom_space(x, y);
        [0, 1, 2].map(|i| sum_project(sum, &parts, i, v))
    }

    pub fn join(&self, x: usize, y: usize, t: &[F], m: &[F], r: &[F]) -> Vec<F> {
        let parts = self.parts(x, y);
        let sum = self.hom_space(x, y);
        let mut out = sum_embed(sum, &parts, 0, t);
        for (a, b) in out.iter_mut().zip(sum_embed(sum, &parts, 1, m)) {
            *a = a.plus(&b);
        }
        for (a, b) in out.iter_mut().zip(sum_embed(sum, &parts, 2, r)) {
            *a = a.plus(&b);
        }
        out
    }

    /// Whether `dim hom_Λ = dim T + dim M + dim R` in every degree.
    pub fn hom_formula_holds(&self) -> bool {
        let n = self.lambda.object_count();
        (0..n).all(|x| {
            (0..n).all(|y| {
                let parts = self.parts(x, y);
                let sum = self.lambda.hom(x, y).space();
                (-8..=8).all(|k| sum.dim(k) == parts.iter().map(|p| p.dim(k)).sum::<usize>())
                    && sum.total_dim() == parts.iter().map(|p| p.total_dim()).sum::<usize>()
            })
        })
    }

    /// `m₂ • t₁` computed from the bimodule action.
    pub fn m_dot_t(&self, r2: usize, t1: usize, t0: usize, m: &[F], t: &[F]) -> Vec<F> {
        let (mdeg, tdeg) = (
            homogeneous(self.m_part.value(r2, t1).space(), m),
            homogeneous(self.t_part.hom(t0, t1).space(), t),
        );
        let sign = Sign::koszul(mdeg, tdeg);
        self.m_part
            .act_second(r2, t1, t0, t, tdeg)
            .apply_flat(m)
            .iter()
            .map(|e| sign.apply(e))
            .collect()
    }

    /// `r₂ • m₁ = M(r₂ ⊗ 1)(m₁)`.
    pub fn r_dot_m(&self, r1: usize, r2: usize, t: usize, r: &[F], m: &[F]) -> Vec<F> {
        let rdeg = homogeneous(self.r_part.hom(r1, r2).space(), r);
        self.m_part.act_first(r1, r2, t, r, rdeg).apply_flat(m)
    }
}

fn homogeneous<F: Field>(space: &GradedSpace, v: &[F]) -> i32 {
    space.homogeneous_degree(v).unwrap_or(0)
}

pub fn matrix_category<F: Field>(
    t: &DgCategory<F>,
    m: &Bimodule<F>,
    r: &DgCategory<F>,
) -> Result<TriangularMatrixCategory<F>, MatrixError> {
    if m.first() != r || *m.second() != t.opposite() {
        return Err(MatrixError::BaseMismatch);
    }
    let (nt, nr) = (t.object_count(), r.object_count());
    let n = nt * nr;
    let split = |x: usize| (x / nr, x % nr);
    let mut homs = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let ((t0, r0), (t1, r1)) = (split(x), split(y));
            homs.push(direct_sum(&[
                ("t", t.hom(t0, t1)),
                ("m", m.value(r1, t0)),
                ("r", r.hom(r0, r1)),
            ]));
        }
    }
    let mut b = CategoryBuilder::new();
    for x in 0..n {
        let (ti, ri) = split(x);
        b.object(&format!("[{}, {}]", t.label(ti), r.label(ri)))?;
    }
    for x in 0..n {
        for y in 0..n {
            if !homs[x * n + y].is_zero() {
                b.hom(x, y, homs[x * n + y].clone());
            }
        }
    }
    // Only the layout helpers are used until the real category is built.
    let mut shell = TriangularMatrixCategory {
        t_part: t.clone(),
        r_part: r.clone(),
        m_part: m.clone(),
        lambda: t.clone(),
        homs,
    };
    for x in 0..n {
        let (ti, ri) = split(x);
        let zero_m = vec![F::zero(); m.value(ri, ti).total_dim()];
        b.identity(x, shell.join(x, x, t.identity(ti), &zero_m, r.identity(ri)));
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let ((t0, r0), (t1, r1), (t2, r2)) = (split(x), split(y), split(z));
                let (gdim, fdim) = (shell.homs[y * n + z].total_dim(), shell.homs[x * n + y].total_dim());
                for gi in 0..gdim {
                    let g = unit(gdim, gi);
                    let [gt, gm, gr] = shell.split(y, z, &g);
                    for fi in 0..fdim {
                        let f = unit(fdim, fi);
                        let [ft, fm, fr] = shell.split(x, y, &f);
                        let tt = t.compose(t0, t1, t2, &gt, &ft);
                        let rr = r.compose(r0, r1, r2, &gr, &fr);
                        let mut mm = shell.m_dot_t(r2, t1, t0, &gm, &ft);
                        for (a, e) in mm.iter_mut().zip(shell.r_dot_m(r1, r2, t0, &gr, &fm)) {
                            *a = a.plus(&e);
                        }
                        let v = shell.join(x, z, &tt, &mm, &rr);
                        if v.iter().any(|e| !e.is_zero()) {
                            b.compose(x, y, z, gi, fi, v);
                        }
                    }
                }
            }
        }
    }
    shell.lambda = b.build()?;
    Ok(shell)
}

/// The bimodule `M` seen as values and actions, with `G_M: DgMod(R) → DgMod(T)`,
/// `G_M(B)(t) = DgNat(M_t, B)` and `G_M(B)(t)(η) = (−1)^{|η||t|} η ∘ t̄`.
pub fn g_functor<F: Field>(m: &Bimodule<F>, b: &DgModule<F>) -> Result<DgModule<F>, MatrixError> {
    if b.base() != m.first() {
        return Err(MatrixError::BaseMismatch);
    }
    let t = right_factor(m);
    let ncs = g_values(m, b)?;
    let values: Vec<Complex<F>> = ncs.iter().map(|nc| nc.total().clone()).collect();
    let mut err = None;
    let module = DgModule::new(&t, values.clone(), |t0, t1, i| {
        let tv = t.basis_vector(t0, t1, i);
        let tdeg = t.basis_degree(t0, t1, i);
        let bar = slice_map(m, t0, t1, &tv, tdeg);
        GradedMap::from_columns_fn(values[t0].space(), values[t1].space(), tdeg, |p| {
            let eta = ncs[t0].basis_nat(p);
            let sign: F = Sign::koszul(eta.degree(), tdeg).scalar();
            let image = eta.after(&bar).scaled(&sign);
            match ncs[t1].coords(&image) {
                Ok(c) => values[t1].space().embed(image.degree(), &c),
                Err(e) => {
                    err.get_or_insert(e);
                    vec![F::zero(); values[t1].total_dim()]
                }
            }
        })
    })?;
    match err {
        Some(e) => Err(e.into()),
        None => Ok(module),
    }
}

fn g_values<F: Field>(m: &Bimodule<F>, b: &DgModule<F>) -> Result<Vec<NatComplex<F>>, MatrixError> {
    let t = right_factor(m);
    (0..t.object_count())
        .map(|ti| Ok(dgnat_complex(&bimodule_slice(m, ti), b)?))
        .collect()
}

/// The map `nc → nc2` of the given degree sending each basis
/// transformation `η` to `image(η)`.
pub fn induced_map<F: Field>(
    nc: &NatComplex<F>,
    nc2: &NatComplex<F>,
    degree: i32,
    mut image: impl FnMut(&DgNat<F>) -> Result<DgNat<F>, MatrixError>,
) -> Result<GradedMap<F>, MatrixError> {
    let (src, tgt) = (nc.total().space(), nc2.total().space());
    let mut cols = Vec::with_capacity(src.total_dim());
    for p in 0..src.total_dim() {
        let out = image(&nc.basis_nat(p))?;
        cols.push(tgt.embed(out.degree(), &nc2.coords(&out)?));
    }
    Ok(GradedMap::from_columns_fn(src, tgt, degree, |p| cols[p].clone()))
}

/// `G_M(ε)` with components `η ↦ ε ∘ η`.
pub fn g_functor_nat<F: Field>(m: &Bimodule<F>, eps: &DgNat<F>) -> Result<DgNat<F>, MatrixError> {
    let (src, tgt) = (g_functor(m, eps.source())?, g_functor(m, eps.target())?);
    let (a, b) = (g_values(m, eps.source())?, g_values(m, eps.target())?);
    let comps = a
        .iter()
        .zip(&b)
        .map(|(nc, nc2)| induced_map(nc, nc2, eps.degree(), |eta| Ok(eps.after(eta))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DgNat::new(&src, &tgt, eps.degree(), comps)?)
}

/// A dg-functor between module categories, applied to modules and to
/// transformations.
#[derive(Clone, Debug)]
pub enum ModuleOp<F> {
    Identity(DgCategory<F>),
    Zero {
        source: DgCategory<F>,
        target: DgCategory<F>,
    },
    /// Restriction along a functor `A → C`: `DgMod(C) → DgMod(A)`.
    Restrict(DgFunctor<F>),
    /// Left Kan extension, with values on the image normalized so that the
    /// unit is an identity wherever it is invertible.
    Lan(DgFunctor<F>),
    Ran(DgFunctor<F>),
    /// `G_M` for a bimodule over `R ⊗ T^op`.
    G(Bimodule<F>),
}

impl<F: Field> ModuleOp<F> {
    pub fn name(&self) -> String {
        let functor = |f: &DgFunctor<F>| format!("{:?}→{:?}", f.source().objects(), f.target().objects());
        match self {
            ModuleOp::Identity(_) => "identity".to_string(),
            ModuleOp::Zero { .. } => "zero".to_string(),
            ModuleOp::Restrict(f) => format!("restrict[{}]", functor(f)),
            ModuleOp::Lan(f) => format!("Lan[{}]", functor(f)),
            ModuleOp::Ran(f) => format!("Ran[{}]", functor(f)),
            ModuleOp::G(_) => "G".to_string(),
        }
    }

    /// Base of the input modules.
    pub fn source(&self) -> DgCategory<F> {
        match self {
            ModuleOp::Identity(c) => c.clone(),
            ModuleOp::Zero { source, .. } => source.clone(),
            ModuleOp::Restrict(f) => f.target().clone(),
            ModuleOp::Lan(f) | ModuleOp::Ran(f) => f.source().clone(),
            ModuleOp::G(m) => m.first().clone(),
        }
    }

    /// Base of the output modules.
    pub fn target(&self) -> DgCategory<F> {
        match self {
            ModuleOp::Identity(c) => c.clone(),
            ModuleOp::Zero { target, .. } => target.clone(),
            ModuleOp::Restrict(f) => f.source().clone(),
            ModuleOp::Lan(f) | ModuleOp::Ran(f) => f.target().clone(),
            ModuleOp::G(m) => right_factor(m),
        }
    }

    pub fn apply(&self, m: &DgModule<F>) -> Result<DgModule<F>, MatrixError> {
        if *m.base() != self.source() {
            return Err(MatrixError::BaseMismatch);
        }
        Ok(match self {
            ModuleOp::Identity(_) => m.clone(),
            ModuleOp::Zero { target, .. } => zero_module(target),
            ModuleOp::Restrict(f) => restrict_module(f, m)?,
            ModuleOp::Lan(f) => lan(f, m)?.normalized().output,
            ModuleOp::Ran(f) => ran(f, m)?.output,
            ModuleOp::G(b) => g_functor(b, m)?,
        })
    }

    pub fn apply_nat(&self, eta: &DgNat<F>) -> Result<DgNat<F>, MatrixError> {
        if *eta.source().base() != self.source() {
            return Err(MatrixError::BaseMismatch);
        }
        Ok(match self {
            ModuleOp::Identity(_) => eta.clone(),
            ModuleOp::Zero { target, .. } => DgNat::zero(&zero_module(target), &zero_module(target), eta.degree()),
            ModuleOp::Restrict(f) => restrict_nat(f, eta)?,
            ModuleOp::Lan(f) => {
                let (a, b) = (lan(f, eta.source())?.normalized(), lan(f, eta.target())?.normalized());
                lan_on_nat(&a, &b, eta)?
            }
            ModuleOp::Ran(f) => ran_on_nat(&ran(f, eta.source())?, &ran(f, eta.target())?, eta)?,
            ModuleOp::G(b) => g_functor_nat(b, eta)?,
        })
    }

    /// `DgNat(X, Y) → DgNat(op X, op Y)` on basis transformations.
    pub fn hom_map(&self, x: &DgModule<F>, y: &DgModule<F>) -> Result<crate::kan::HomIso<F>, MatrixError> {
        let nc = dgnat_complex(x, y)?;
        let nc2 = dgnat_complex(&self.apply(x)?, &self.apply(y)?)?;
        let map = induced_map(&nc, &nc2, 0, |eta| self.apply_nat(eta))?;
        Ok(crate::kan::HomIso {
            source: nc.total().clone(),
            target: nc2.total().clone(),
            map,
        })
    }
}

/// `N = F(M)` over `S ⊗ T^op`: `N(s, t) = F(M_t)(s)` and
/// `N(g ⊗ t^op) = F(M_{t′})(g) ∘ [F(t̄)]_s`. The second expression
/// `(−1)^{|t||g|} [F(t̄)]_{s′} ∘ F(M_t)(g)` is compared on all basis pairs.
pub fn bimodule_pushforward<F: Field>(op: &ModuleOp<F>, m: &Bimodule<F>) -> Result<Bimodule<F>, MatrixError> {
    if *m.first() != op.source() {
        return Err(MatrixError::BaseMismatch);
    }
    let s = op.target();
    let t = right_factor(m);
    let top = m.second();
    let nt = t.object_count();
    let slices: Vec<DgModule<F>> = (0..nt)
        .map(|ti| op.apply(&bimodule_slice(m, ti)))
        .collect::<Result<_, _>>()?;
    // bars[(t0, t1)][i] = F(t̄) for basis i of T(t0, t1): F(M_{t1}) → F(M_{t0}).
    let mut bars: BTreeMap<(usize, usize), Vec<DgNat<F>>> = BTreeMap::new();
    for t0 in 0..nt {
        for t1 in 0..nt {
            let mut per = Vec::new();
            for i in 0..t.hom_dim(t0, t1) {
                let bar = slice_map(m, t0, t1, &t.basis_vector(t0, t1, i), t.basis_degree(t0, t1, i));
                per.push(op.apply_nat(&bar)?);
            }
            bars.insert((t0, t1), per);
        }
    }
    // Sign square on basis pairs.
    for (&(t0, t1), per) in &bars {
        for (i, fbar) in per.iter().enumerate() {
            let tdeg = t.basis_degree(t0, t1, i);
            for s0 in 0..s.object_count() {
                for s1 in 0..s.object_count() {
                    for g in 0..s.hom_dim(s0, s1) {
                        let gv = s.basis_vector(s0, s1, g);
                        let gdeg = s.basis_degree(s0, s1, g);
                        let first = slices[t0].act(s0, s1, &gv, gdeg).compose(fbar.component(s0));
                        let sign: F = Sign::koszul(tdeg, gdeg).scalar();
                        let second = fbar
                            .component(s1)
                            .compose(&slices[t1].act(s0, s1, &gv, gdeg))
                            .scaled(&sign);
                        if first != second {
                            return Err(MatrixError::SignSquare {
                                s: format!("{} → {}", s.label(s0), s.label(s1)),
                                t: format!("{} → {}", t.label(t0), t.label(t1)),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(Bimodule::from_actions(
        &s,
        top,
        |x, y| slices[y].value(x).clone(),
        |g, x, x2, y| slices[y].action_basis(x, x2, g).clone(),
        // β ∈ T^op(y, y2) is a morphism y2 → y of T.
        |beta, x, y, y2| bars[&(y2, y)][beta].component(x).clone(),
    )?)
}

/// A full dg-subcategory of `DgMod(A)` on finitely many modules.
#[derive(Clone, Debug)]
pub struct ModuleCategory<F> {
    pub category: DgCategory<F>,
    pub modules: Vec<Named<F>>,
    homs: Vec<NatComplex<F>>,
}

impl<F: Field> ModuleCategory<F> {
    pub fn new(modules: &[Named<F>]) -> Result<Self, MatrixError> {
        let n = modules.len();
        let mut homs = Vec::with_capacity(n * n);
        for (_, x) in modules {
            for (_, y) in modules {
                homs.push(dgnat_complex(x, y)?);
            }
        }
        let mut b = CategoryBuilder::new();
        for (name, _) in modules {
            b.object(name)?;
        }
        for x in 0..n {
            for y in 0..n {
                let h = homs[x * n + y].total();
                if !h.is_zero() {
                    b.hom(x, y, h.clone());
                }
            }
            let id = DgNat::identity(&modules[x].1);
            b.identity(
                x,
                homs[x * n + x].total().space().embed(0, &homs[x * n + x].coords(&id)?),
            );
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (hf, hg, hgf) = (&homs[x * n + y], &homs[y * n + z], &homs[x * n + z]);
                    for g in 0..hg.total().total_dim() {
                        let gn = hg.basis_nat(g);
                        for f in 0..hf.total().total_dim() {
                            let gf = gn.after(&hf.basis_nat(f));
                            let v = hgf.total().space().embed(gf.degree(), &hgf.coords(&gf)?);
                            if v.iter().any(|e| !e.is_zero()) {
                                b.compose(x, y, z, g, f, v);
                            }
                        }
                    }
                }
            }
        }
        Ok(ModuleCategory {
            category: b.build()?,
            modules: modules.to_vec(),
            homs,
        })
    }

    pub fn hom(&self, x: usize, y: usize) -> &NatComplex<F> {
        &self.homs[x * self.modules.len() + y]
    }

    pub fn index_of(&self, m: &DgModule<F>) -> Option<usize> {
        self.modules.iter().position(|(_, x)| x == m)
    }
}

/// The dg-functor `source → target` induced by an operation; every image
/// module must occur in `target`.
pub fn induced_functor<F: Field>(
    op: &ModuleOp<F>,
    source: &ModuleCategory<F>,
    target: &ModuleCategory<F>,
) -> Result<DgFunctor<F>, MatrixError> {
    let mut objects = Vec::with_capacity(source.modules.len());
    for (name, m) in &source.modules {
        let image = op.apply(m)?;
        objects.push(
            target
                .index_of(&image)
                .ok_or_else(|| MatrixError::UnknownModule(format!("{} of {name}", op.name())))?,
        );
    }
    let mut maps = BTreeMap::new();
    let n = source.modules.len();
    for x in 0..n {
        for y in 0..n {
            let map = induced_map(source.hom(x, y), target.hom(objects[x], objects[y]), 0, |eta| {
                op.apply_nat(eta)
            })?;
            maps.insert((x, y), map.to_matrix());
        }
    }
    Ok(DgFunctor::new(&source.category, &target.category, objects, |x, y| {
        maps[&(x, y)].clone()
    })?)
}

/// An object `(d, φ, c)` of a comma category, `φ ∈ Z⁰ hom(d, F c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommaObject<F> {
    pub d: usize,
    pub c: usize,
    pub phi: Vec<F>,
}

#[derive(Clone, Debug)]
pub struct CommaCategory<F> {
    pub category: DgCategory<F>,
    pub objects: Vec<CommaObject<F>>,
}

/// `(D, F(C))` for `F: C → D`. Objects are the zero map and the basis of
/// `Z⁰ hom(d, F c)` for every pair; morphisms `(α, β)` have a common degree
/// and satisfy `φ′ ∘ α = F(β) ∘ φ`.
pub fn comma_category<F: Field>(f: &DgFunctor<F>) -> Result<CommaCategory<F>, MatrixError> {
    let (c, d) = (f.source(), f.target());
    let mut objects = Vec::new();
    for di in 0..d.object_count() {
        for ci in 0..c.object_count() {
            let h = d.hom(di, f.object(ci));
            objects.push(CommaObject {
                d: di,
                c: ci,
                phi: vec![F::zero(); h.total_dim()],
            });
            for z in h.d_block(0).kernel().columns() {
                objects.push(CommaObject {
                    d: di,
                    c: ci,
                    phi: h.space().embed(0, &z),
                });
            }
        }
    }
    let n = objects.len();
    let mut b = CategoryBuilder::new();
    for (i, o) in objects.iter().enumerate() {
        b.object(&format!("({}, φ{i}, {})", d.label(o.d), c.label(o.c)))?;
    }
    let mut homs = Vec::with_capacity(n * n);
    for x in &objects {
        for y in &objects {
            let (hd, hc) = (d.hom(x.d, y.d), c.hom(x.c, y.c));
            let ambient = direct_sum(&[("d", hd), ("c", hc)]);
            let parts = [hd.space(), hc.space()];
            let square = d.hom(x.d, f.object(y.c));
            let mut basis = BTreeMap::new();
            for k in ambient.space().support() {
                // (α, β) ↦ φ′∘α − F(β)∘φ on the degree-k basis.
                let cols: Vec<Vec<F>> = (0..ambient.dim(k))
                    .map(|i| {
                        let v = ambient.space().embed(k, &unit::<F>(ambient.dim(k), i));
                        let alpha = sum_project(ambient.space(), &parts, 0, &v);
                        let beta = sum_project(ambient.space(), &parts, 1, &v);
                        let left = d.compose(x.d, y.d, f.object(y.c), &y.phi, &alpha);
                        let fb = f.apply(x.c, y.c, &beta);
                        let right = d.compose(x.d, f.object(x.c), f.object(y.c), &fb, &x.phi);
                        left.iter().zip(&right).map(|(a, b)| a.minus(b)).collect()
                    })
                    .collect();
                let kernel = Matrix::from_columns(square.total_dim(), &cols).kernel();
                if kernel.cols() > 0 {
                    basis.insert(k, kernel);
                }
            }
            let (sub, inclusion) = subcomplex(&ambient, &basis, "hom")?;
            homs.push((sub, inclusion, ambient));
        }
    }
    for x in 0..n {
        for y in 0..n {
            if !homs[x * n + y].0.is_zero() {
                b.hom(x, y, homs[x * n + y].0.clone());
            }
        }
    }
    let solve = |x: usize, y: usize, alpha: &[F], beta: &[F]| -> Vec<F> {
        let (sub, inclusion, ambient) = &homs[x * n + y];
        let parts = [
            d.hom(objects[x].d, objects[y].d).space(),
            c.hom(objects[x].c, objects[y].c).space(),
        ];
        let mut v = sum_embed(ambient.space(), &parts, 0, alpha);
        for (a, e) in v.iter_mut().zip(sum_embed(ambient.space(), &parts, 1, beta)) {
            *a = a.plus(&e);
        }
        let mut out = vec![F::zero(); sub.total_dim()];
        for k in sub.space().support() {
            let coords = inclusion
                .block_or_zero(k)
                .solve(&ambient.space().restrict(k, &v))
                .expect("commuting squares are closed under the operations");
            let o = sub.space().offset(k);
            out[o..o + coords.len()].clone_from_slice(&coords);
        }
        out
    };
    let pieces = |x: usize, y: usize, p: usize| -> (Vec<F>, Vec<F>) {
        let (sub, inclusion, ambient) = &homs[x * n + y];
        let parts = [
            d.hom(objects[x].d, objects[y].d).space(),
            c.hom(objects[x].c, objects[y].c).space(),
        ];
        let v = inclusion.apply_flat(&unit(sub.total_dim(), p));
        (
            sum_project(ambient.space(), &parts, 0, &v),
            sum_project(ambient.space(), &parts, 1, &v),
        )
    };
    for (x, ox) in objects.iter().enumerate() {
        b.identity(x, solve(x, x, d.identity(ox.d), c.identity(ox.c)));
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (ox, oy, oz) = (&objects[x], &objects[y], &objects[z]);
                for g in 0..homs[y * n + z].0.total_dim() {
                    let (ga, gb) = pieces(y, z, g);
                    for fi in 0..homs[x * n + y].0.total_dim() {
                        let (fa, fb) = pieces(x, y, fi);
                        let alpha = d.compose(ox.d, oy.d, oz.d, &ga, &fa);
                        let beta = c.compose(ox.c, oy.c, oz.c, &gb, &fb);
                        let v = solve(x, z, &alpha, &beta);
                        if v.iter().any(|e| !e.is_zero()) {
                            b.compose(x, y, z, g, fi, v);
                        }
                    }
                }
            }
        }
    }
    Ok(CommaCategory {
        category: b.build()?,
        objects,
    })
}

fn unit<F: Field>(len: usize, i: usize) -> Vec<F> {
    let mut v = vec![F::zero(); len];
    v[i] = F::one();
    v
}
