//! Left and right Kan extensions of modules along dg-functors, their units
//! and counits, the adjunction maps `Δ` and fully-faithfulness checks.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::category::densify;
use crate::complex::{check_chain_map, tensor_maps, Complex, TensorLayout};
use crate::ends::{
    coend_of_bifunctor, diagonal_inclusion, diagonal_projection, tensor_bifunctor, CoendResult, EndError,
};
use crate::field::Field;
use crate::functor::DgFunctor;
use crate::graded::GradedMap;
use crate::module::{representable, restrict_module, yoneda_module, Bimodule, DgModule, ModuleError};
use crate::nat::{dgnat_complex, validate_nat, DgNat, NatComplex, NatError};
use crate::report::CheckReport;
use crate::sign::Sign;

/// Column vectors collected per degree.
type Columns<F> = Vec<Vec<F>>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KanError {
    #[error("module is not over the expected category")]
    BaseMismatch,
    #[error("induced action of `{0}` is not well defined on the coend")]
    IllDefined(String),
    #[error("no transformation satisfies the defining equation at `{0}`")]
    Unsolvable(String),
    #[error(transparent)]
    End(#[from] EndError),
    #[error(transparent)]
    Nat(#[from] NatError),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KanSide {
    Left,
    Right,
}

#[derive(Clone, Debug)]
enum Pieces<F> {
    /// Per object `c` of the target: the bifunctor `C(F−, c) ⊗ G(−)` and its coend.
    Left(Vec<(Bimodule<F>, CoendResult<F>)>),
    /// Per object `c`: `DgNat(C(c, F−), G)`.
    Right(Vec<NatComplex<F>>),
}

/// `Lan_F G` with its unit `φ: G → (Lan_F G)∘F`, or `Ran_F G` with its
/// counit `ψ: (Ran_F G)∘F → G`.
#[derive(Clone, Debug)]
pub struct KanExtension<F> {
    pub side: KanSide,
    pub along: DgFunctor<F>,
    pub input: DgModule<F>,
    pub output: DgModule<F>,
    pub structure: DgNat<F>,
    pieces: Pieces<F>,
    /// `output(c) → raw(c)` and back, where raw is the coend or DgNat complex.
    to_raw: Vec<GradedMap<F>>,
    from_raw: Vec<GradedMap<F>>,
}

fn unit_vector<F: Field>(dim: usize, p: usize) -> Vec<F> {
    let mut e = vec![F::zero(); dim];
    e[p] = F::one();
    e
}

fn from_columns<F: Field>(source: &Complex<F>, target: &Complex<F>, degree: i32, columns: &[Vec<F>]) -> GradedMap<F> {
    GradedMap::from_columns_fn(source.space(), target.space(), degree, |p| columns[p].clone())
}

fn identities<F: Field>(m: &DgModule<F>) -> Vec<GradedMap<F>> {
    m.values().iter().map(|v| GradedMap::identity(v.space())).collect()
}

/// `(ηF)_A = η_{FA}`.
pub fn restrict_nat<F: Field>(f: &DgFunctor<F>, eta: &DgNat<F>) -> Result<DgNat<F>, KanError> {
    if eta.source().base() != f.target() {
        return Err(KanError::BaseMismatch);
    }
    let comps = (0..f.source().object_count())
        .map(|a| eta.component(f.object(a)).clone())
        .collect();
    Ok(DgNat::new(
        &restrict_module(f, eta.source())?,
        &restrict_module(f, eta.target())?,
        eta.degree(),
        comps,
    )?)
}

/// `Lan_F(G)(c) = C(F−, c) ⊗_A G`, acting on representatives by
/// `x ⊗ y ↦ (h ∘ x) ⊗ y`; unit `φ_A(y) = [1_{FA} ⊗ y]`.
pub fn lan<F: Field>(f: &DgFunctor<F>, g: &DgModule<F>) -> Result<KanExtension<F>, KanError> {
    if g.base() != f.source() {
        return Err(KanError::BaseMismatch);
    }
    let (a, c) = (f.source(), f.target());
    let fop = f.opposite();
    let mut pieces = Vec::with_capacity(c.object_count());
    for z in 0..c.object_count() {
        let w = restrict_module(&fop, &yoneda_module(c, z))?;
        let t = tensor_bifunctor(&w, g)?;
        let coend = coend_of_bifunctor(&t)?;
        pieces.push((t, coend));
    }
    let values: Vec<Complex<F>> = pieces.iter().map(|(_, r)| r.total.clone()).collect();
    let mut actions = BTreeMap::new();
    for z in 0..c.object_count() {
        for z2 in 0..c.object_count() {
            for h in 0..c.hom_dim(z, z2) {
                let raw = lan_raw_action(f, g, &pieces, z, z2, h);
                let (src, tgt) = (&pieces[z].1, &pieces[z2].1);
                let pushed = tgt.projection.compose(&raw);
                // Well defined iff the relations of z land in those of z2.
                if pushed != pushed.compose(&src.lift).compose(&src.projection) {
                    return Err(KanError::IllDefined(c.basis_label(z, z2, h)));
                }
                actions.insert((z, z2, h), pushed.compose(&src.lift));
            }
        }
    }
    let output = DgModule::new(c, values, |z, z2, h| {
        actions.remove(&(z, z2, h)).expect("action computed")
    })?;
    let comps = (0..a.object_count())
        .map(|x| {
            let fx = f.object(x);
            let layout = TensorLayout::new(c.hom(fx, fx).space(), g.value(x).space());
            let inj = &pieces[fx].1.injections[x];
            GradedMap::from_columns_fn(g.value(x).space(), output.value(fx).space(), 0, |p| {
                let e = unit_vector(g.value(x).total_dim(), p);
                inj.apply_flat(&layout.tensor(c.identity(fx), &e))
            })
        })
        .collect();
    let structure = DgNat::new(g, &restrict_module(f, &output)?, 0, comps)?;
    let ids = identities(&output);
    Ok(KanExtension {
        side: KanSide::Left,
        along: f.clone(),
        input: g.clone(),
        output,
        structure,
        pieces: Pieces::Left(pieces),
        to_raw: ids.clone(),
        from_raw: ids,
    })
}

/// `x ⊗ y ↦ (h ∘ x) ⊗ y` on `⊕_A C(FA, z) ⊗ G(A)`.
fn lan_raw_action<F: Field>(
    f: &DgFunctor<F>,
    g: &DgModule<F>,
    pieces: &[(Bimodule<F>, CoendResult<F>)],
    z: usize,
    z2: usize,
    h: usize,
) -> GradedMap<F> {
    let c = f.target();
    let hdeg = c.basis_degree(z, z2, h);
    let ((t, src), (t2, tgt)) = (&pieces[z], &pieces[z2]);
    let mut out = GradedMap::zero(src.product.space(), tgt.product.space(), hdeg);
    for x in 0..f.source().object_count() {
        let fx = f.object(x);
        let post = GradedMap::from_columns_fn(c.hom(fx, z).space(), c.hom(fx, z2).space(), hdeg, |j| {
            densify(c.compose_basis(fx, z, z2, h, j), c.hom_dim(fx, z2))
        });
        let map = tensor_maps(&post, &GradedMap::identity(g.value(x).space()))
            .relabel(t.value(x, x).space(), t2.value(x, x).space());
        out = out.plus(
            &diagonal_inclusion(t2, &tgt.product, x)
                .compose(&map)
                .compose(&diagonal_projection(t, &src.product, x)),
        );
    }
    out
}

/// `h̄: C(c′, F−) → C(c, F−)`, `j ↦ (−1)^{|h||j|} j ∘ h`, for basis `h: c → c′`.
fn precomposition<F: Field>(f: &DgFunctor<F>, z: usize, z2: usize, h: usize) -> Result<DgNat<F>, KanError> {
    let c = f.target();
    let hdeg = c.basis_degree(z, z2, h);
    let (w2, w) = (
        restrict_module(f, &representable(c, z2))?,
        restrict_module(f, &representable(c, z))?,
    );
    let comps = (0..f.source().object_count())
        .map(|x| {
            let fx = f.object(x);
            GradedMap::from_columns_fn(c.hom(z2, fx).space(), c.hom(z, fx).space(), hdeg, |j| {
                let sign = Sign::koszul(hdeg, c.basis_degree(z2, fx, j));
                densify(c.compose_basis(z, z2, fx, j, h), c.hom_dim(z, fx))
                    .iter()
                    .map(|v| sign.apply(v))
                    .collect()
            })
        })
        .collect();
    Ok(DgNat::new(&w2, &w, hdeg, comps)?)
}

/// `Ran_F(G)(c) = DgNat(C(c, F−), G)`, acting by
/// `Ran(h)(η) = (−1)^{|η||h|} η ∘ h̄`; counit `ψ_A(η) = η_A(1_{FA})`.
pub fn ran<F: Field>(f: &DgFunctor<F>, g: &DgModule<F>) -> Result<KanExtension<F>, KanError> {
    if g.base() != f.source() {
        return Err(KanError::BaseMismatch);
    }
    let (a, c) = (f.source(), f.target());
    let mut pieces = Vec::with_capacity(c.object_count());
    for z in 0..c.object_count() {
        pieces.push(dgnat_complex(&restrict_module(f, &representable(c, z))?, g)?);
    }
    let mut actions = BTreeMap::new();
    for z in 0..c.object_count() {
        for z2 in 0..c.object_count() {
            for h in 0..c.hom_dim(z, z2) {
                let hbar = precomposition(f, z, z2, h)?;
                let (src, tgt) = (pieces[z].total(), pieces[z2].total());
                let mut cols = Vec::with_capacity(src.total_dim());
                for p in 0..src.total_dim() {
                    let eta = pieces[z].basis_nat(p);
                    let moved = eta
                        .after(&hbar)
                        .scaled(&Sign::koszul(eta.degree(), hbar.degree()).scalar());
                    cols.push(tgt.space().embed(moved.degree(), &pieces[z2].coords(&moved)?));
                }
                actions.insert((z, z2, h), from_columns(src, tgt, hbar.degree(), &cols));
            }
        }
    }
    let values: Vec<Complex<F>> = pieces.iter().map(|p| p.total().clone()).collect();
    let output = DgModule::new(c, values, |z, z2, h| {
        actions.remove(&(z, z2, h)).expect("action computed")
    })?;
    let comps = (0..a.object_count())
        .map(|x| {
            let fx = f.object(x);
            let total = pieces[fx].total();
            GradedMap::from_columns_fn(total.space(), g.value(x).space(), 0, |p| {
                pieces[fx].basis_nat(p).component(x).apply_flat(c.identity(fx))
            })
        })
        .collect();
    let structure = DgNat::new(&restrict_module(f, &output)?, g, 0, comps)?;
    let ids = identities(&output);
    Ok(KanExtension {
        side: KanSide::Right,
        along: f.clone(),
        input: g.clone(),
        output,
        structure,
        pieces: Pieces::Right(pieces),
        to_raw: ids.clone(),
        from_raw: ids,
    })
}

impl<F: Field> KanExtension<F> {
    /// Output module valid; structure map natural, closed and of degree 0.
    pub fn check(&self) -> CheckReport {
        let mut r = CheckReport::new();
        let v = crate::module::validate_dg_module(&self.output);
        r.record("output is a dg-module", v.is_valid(), || v.to_string());
        let n = validate_nat(&self.structure);
        r.record("structure map is natural", n.is_valid(), || n.to_string());
        r.record(
            "structure map is closed of degree 0",
            self.structure.degree() == 0 && self.structure.is_closed(),
            || "d(structure) ≠ 0".to_string(),
        );
        r
    }

    /// Output values on the image of `F` re-indexed by the structure map
    /// wherever it is invertible, so that it becomes an identity table.
    pub fn normalized(&self) -> KanExtension<F> {
        let f = &self.along;
        let c = f.target();
        // τ_z: new(z) → output(z).
        let mut tau: Vec<Option<(usize, GradedMap<F>)>> = vec![None; c.object_count()];
        for x in 0..f.source().object_count() {
            let z = f.object(x);
            if tau[z].is_some() {
                continue;
            }
            let s = self.structure.component(x);
            if let Some(inv) = s.inverse() {
                tau[z] = Some(match self.side {
                    KanSide::Left => (x, s.clone()),
                    KanSide::Right => (x, inv),
                });
            }
        }
        let values: Vec<Complex<F>> = (0..c.object_count())
            .map(|z| match &tau[z] {
                Some((x, _)) => self.input.value(*x).clone(),
                None => self.output.value(z).clone(),
            })
            .collect();
        let tau: Vec<GradedMap<F>> = tau
            .into_iter()
            .enumerate()
            .map(|(z, t)| t.map_or_else(|| GradedMap::identity(self.output.value(z).space()), |(_, m)| m))
            .collect();
        let tau_inv: Vec<GradedMap<F>> = tau
            .iter()
            .map(|t| t.inverse().expect("transport is invertible"))
            .collect();
        let output = DgModule::new(c, values, |z, z2, h| {
            tau_inv[z2].compose(self.output.action_basis(z, z2, h)).compose(&tau[z])
        })
        .expect("transport keeps shapes");
        let restricted = restrict_module(f, &output).expect("same base");
        let comps = (0..f.source().object_count())
            .map(|x| {
                let z = f.object(x);
                match self.side {
                    KanSide::Left => tau_inv[z].compose(self.structure.component(x)),
                    KanSide::Right => self.structure.component(x).compose(&tau[z]),
                }
            })
            .collect();
        let structure = match self.side {
            KanSide::Left => DgNat::new(&self.input, &restricted, 0, comps),
            KanSide::Right => DgNat::new(&restricted, &self.input, 0, comps),
        }
        .expect("transported structure map");
        KanExtension {
            side: self.side,
            along: f.clone(),
            input: self.input.clone(),
            output,
            structure,
            pieces: self.pieces.clone(),
            to_raw: self.to_raw.iter().zip(&tau).map(|(r, t)| r.compose(t)).collect(),
            from_raw: self.from_raw.iter().zip(&tau_inv).map(|(r, t)| t.compose(r)).collect(),
        }
    }

    /// Class of `x ⊗ y` in `Lan(z)` for flat `x ∈ C(FA, z)`, `y ∈ G(A)`.
    pub fn lan_class(&self, z: usize, a: usize, x: &[F], y: &[F]) -> Vec<F> {
        let Pieces::Left(pieces) = &self.pieces else {
            panic!("not a left Kan extension")
        };
        let c = self.along.target();
        let layout = TensorLayout::new(c.hom(self.along.object(a), z).space(), self.input.value(a).space());
        self.from_raw[z].apply_flat(&pieces[z].1.injections[a].apply_flat(&layout.tensor(x, y)))
    }

    /// The transformation represented by a flat vector of `Ran(z)`.
    fn ran_element(&self, z: usize, v: &[F]) -> DgNat<F> {
        let Pieces::Right(pieces) = &self.pieces else {
            panic!("not a right Kan extension")
        };
        let raw = self.to_raw[z].apply_flat(v);
        let deg = pieces[z].total().space().homogeneous_degree(&raw).unwrap_or(0);
        pieces[z].nat(deg, &pieces[z].total().space().restrict(deg, &raw))
    }

    /// Flat coordinates in `Ran(z)` of a transformation `C(z, F−) → G`.
    fn ran_coords(&self, z: usize, eta: &DgNat<F>) -> Result<Vec<F>, KanError> {
        let Pieces::Right(pieces) = &self.pieces else {
            panic!("not a right Kan extension")
        };
        let raw = pieces[z].total().space().embed(eta.degree(), &pieces[z].coords(eta)?);
        Ok(self.from_raw[z].apply_flat(&raw))
    }
}

/// `Lan_F(η)`: the unique transformation with `(Lan_F(η)F) ∘ φ = φ′ ∘ η`,
/// found by solving on the generators `Lan(x)(φ_A(y)) = [x ⊗ y]`.
pub fn lan_on_nat<F: Field>(
    source: &KanExtension<F>,
    target: &KanExtension<F>,
    eta: &DgNat<F>,
) -> Result<DgNat<F>, KanError> {
    if source.side != KanSide::Left
        || target.side != KanSide::Left
        || *eta.source() != source.input
        || *eta.target() != target.input
    {
        return Err(KanError::BaseMismatch);
    }
    let f = &source.along;
    let (a, c) = (f.source(), f.target());
    let n = eta.degree();
    let mut comps = Vec::with_capacity(c.object_count());
    for z in 0..c.object_count() {
        let (src, tgt) = (source.output.value(z), target.output.value(z));
        let mut gens: BTreeMap<i32, (Columns<F>, Columns<F>)> = BTreeMap::new();
        for x in 0..a.object_count() {
            let fx = f.object(x);
            for j in 0..c.hom_dim(fx, z) {
                let jv = c.basis_vector(fx, z, j);
                let jdeg = c.basis_degree(fx, z, j);
                let sign: F = Sign::koszul(n, jdeg).scalar();
                for p in 0..source.input.value(x).total_dim() {
                    let y = unit_vector(source.input.value(x).total_dim(), p);
                    let v = source
                        .output
                        .act_on(fx, z, &jv, &source.structure.component(x).apply_flat(&y));
                    let image = target
                        .structure
                        .component(x)
                        .apply_flat(&eta.component(x).apply_flat(&y));
                    let w: Vec<F> = target
                        .output
                        .act_on(fx, z, &jv, &image)
                        .iter()
                        .map(|e| e.times(&sign))
                        .collect();
                    let deg = source.input.value(x).space().degree_of(p) + jdeg;
                    let entry = gens.entry(deg).or_default();
                    entry.0.push(src.space().restrict(deg, &v));
                    entry.1.push(tgt.space().restrict(deg + n, &w));
                }
            }
        }
        let mut blocks = BTreeMap::new();
        for d in src.space().support() {
            let (vs, ws) = gens.remove(&d).unwrap_or_default();
            let v = crate::linalg::Matrix::from_columns(src.dim(d), &vs);
            let w = crate::linalg::Matrix::from_columns(tgt.dim(d + n), &ws);
            let x = v
                .transpose()
                .solve_matrix(&w.transpose())
                .filter(|_| v.rank() == src.dim(d))
                .ok_or_else(|| KanError::Unsolvable(c.label(z).to_string()))?;
            blocks.insert(d, x.transpose());
        }
        comps.push(GradedMap::from_fn(src.space(), tgt.space(), n, |d| {
            blocks.get(&d).cloned()
        }));
    }
    Ok(DgNat::new(&source.output, &target.output, n, comps)?)
}

/// `Ran_F(θ)(η) = θ ∘ η`.
pub fn ran_on_nat<F: Field>(
    source: &KanExtension<F>,
    target: &KanExtension<F>,
    theta: &DgNat<F>,
) -> Result<DgNat<F>, KanError> {
    if source.side != KanSide::Right
        || target.side != KanSide::Right
        || *theta.source() != source.input
        || *theta.target() != target.input
    {
        return Err(KanError::BaseMismatch);
    }
    let c = source.along.target();
    let n = theta.degree();
    let mut comps = Vec::with_capacity(c.object_count());
    for z in 0..c.object_count() {
        let (src, tgt) = (source.output.value(z), target.output.value(z));
        let mut cols = Vec::with_capacity(src.total_dim());
        for p in 0..src.total_dim() {
            let eta = source.ran_element(z, &unit_vector(src.total_dim(), p));
            cols.push(target.ran_coords(z, &theta.after(&eta))?);
        }
        comps.push(from_columns(src, tgt, n, &cols));
    }
    Ok(DgNat::new(&source.output, &target.output, n, comps)?)
}

/// Counit of `Lan_F ⊣ F_*`: `ε_S[x ⊗ s] = S(x)(s)`, where `lan_sf` is
/// `Lan_F(S∘F)`.
pub fn lan_counit<F: Field>(lan_sf: &KanExtension<F>, s: &DgModule<F>) -> Result<DgNat<F>, KanError> {
    let f = &lan_sf.along;
    if lan_sf.side != KanSide::Left || lan_sf.input != restrict_module(f, s)? {
        return Err(KanError::BaseMismatch);
    }
    let Pieces::Left(pieces) = &lan_sf.pieces else {
        unreachable!()
    };
    let c = f.target();
    let mut comps = Vec::with_capacity(c.object_count());
    for (z, (t, coend)) in pieces.iter().enumerate() {
        let mut eval = GradedMap::zero(coend.product.space(), s.value(z).space(), 0);
        for x in 0..f.source().object_count() {
            let fx = f.object(x);
            let layout = TensorLayout::new(c.hom(fx, z).space(), s.value(fx).space());
            let summand = t.value(x, x);
            let ev = GradedMap::from_columns_fn(summand.space(), s.value(z).space(), 0, |q| {
                let (j, p) = layout.split(q);
                s.act_on(
                    fx,
                    z,
                    &c.basis_vector(fx, z, j),
                    &unit_vector(s.value(fx).total_dim(), p),
                )
            });
            eval = eval.plus(&ev.compose(&diagonal_projection(t, &coend.product, x)));
        }
        if eval != eval.compose(&coend.lift).compose(&coend.projection) {
            return Err(KanError::IllDefined(format!("counit at {}", c.label(z))));
        }
        comps.push(eval.compose(&coend.lift).compose(&lan_sf.to_raw[z]));
    }
    Ok(DgNat::new(&lan_sf.output, s, 0, comps)?)
}

/// Unit of `F_* ⊣ Ran_F`: `[η_S(s)]_A(j) = (−1)^{|s||j|} S(j)(s)`, where
/// `ran_sf` is `Ran_F(S∘F)`.
pub fn ran_unit<F: Field>(ran_sf: &KanExtension<F>, s: &DgModule<F>) -> Result<DgNat<F>, KanError> {
    let f = &ran_sf.along;
    let sf = restrict_module(f, s)?;
    if ran_sf.side != KanSide::Right || ran_sf.input != sf {
        return Err(KanError::BaseMismatch);
    }
    let c = f.target();
    let mut comps = Vec::with_capacity(c.object_count());
    for z in 0..c.object_count() {
        let w = restrict_module(f, &representable(c, z))?;
        let mut cols = Vec::with_capacity(s.value(z).total_dim());
        for p in 0..s.value(z).total_dim() {
            let sdeg = s.value(z).space().degree_of(p);
            let elem = unit_vector(s.value(z).total_dim(), p);
            let parts = (0..f.source().object_count())
                .map(|x| {
                    let fx = f.object(x);
                    GradedMap::from_columns_fn(c.hom(z, fx).space(), s.value(fx).space(), sdeg, |j| {
                        let sign = Sign::koszul(sdeg, c.basis_degree(z, fx, j));
                        s.act_on(z, fx, &c.basis_vector(z, fx, j), &elem)
                            .iter()
                            .map(|v| sign.apply(v))
                            .collect()
                    })
                })
                .collect();
            let eta = DgNat::new(&w, &sf, sdeg, parts)?;
            cols.push(ran_sf.ran_coords(z, &eta)?);
        }
        comps.push(from_columns(s.value(z), ran_sf.output.value(z), 0, &cols));
    }
    Ok(DgNat::new(s, &ran_sf.output, 0, comps)?)
}

/// An explicit map between two complexes of transformations.
#[derive(Clone, Debug)]
pub struct HomIso<F> {
    pub source: Complex<F>,
    pub target: Complex<F>,
    pub map: GradedMap<F>,
}

impl<F: Field> HomIso<F> {
    pub fn is_bijective(&self) -> bool {
        self.map.inverse().is_some()
    }

    pub fn is_chain_map(&self) -> bool {
        check_chain_map(&self.map, &self.source, &self.target).is_ok()
    }

    /// Whether the map restricts to a bijection between the closed degree-0
    /// elements of both sides.
    pub fn z0_bijective(&self) -> bool {
        let z_src = self.source.d_block(0).kernel();
        let z_tgt = self.target.d_block(0).kernel();
        let image = self.map.block_or_zero(0).mul(&z_src);
        z_src.cols() == z_tgt.cols() && image.rank() == z_src.cols() && self.target.d_block(0).mul(&image).is_zero()
    }
}

/// `DgNat(M, N) → DgNat(M∘F, N∘F)`.
pub fn restriction_hom_map<F: Field>(
    f: &DgFunctor<F>,
    m: &DgModule<F>,
    n: &DgModule<F>,
) -> Result<HomIso<F>, KanError> {
    let source = dgnat_complex(m, n)?;
    let target = dgnat_complex(&restrict_module(f, m)?, &restrict_module(f, n)?)?;
    hom_map_from(&source, &target, |eta| restrict_nat(f, eta))
}

/// `DgNat(G, G′) → DgNat(Lan G, Lan G′)`.
pub fn lan_hom_map<F: Field>(l: &KanExtension<F>, l2: &KanExtension<F>) -> Result<HomIso<F>, KanError> {
    let source = dgnat_complex(&l.input, &l2.input)?;
    let target = dgnat_complex(&l.output, &l2.output)?;
    hom_map_from(&source, &target, |eta| lan_on_nat(l, l2, eta))
}

/// `DgNat(G, G′) → DgNat(Ran G, Ran G′)`.
pub fn ran_hom_map<F: Field>(r: &KanExtension<F>, r2: &KanExtension<F>) -> Result<HomIso<F>, KanError> {
    let source = dgnat_complex(&r.input, &r2.input)?;
    let target = dgnat_complex(&r.output, &r2.output)?;
    hom_map_from(&source, &target, |eta| ran_on_nat(r, r2, eta))
}

fn hom_map_from<F: Field>(
    source: &NatComplex<F>,
    target: &NatComplex<F>,
    mut image: impl FnMut(&DgNat<F>) -> Result<DgNat<F>, KanError>,
) -> Result<HomIso<F>, KanError> {
    let (src, tgt) = (source.total(), target.total());
    let mut cols = Vec::with_capacity(src.total_dim());
    for p in 0..src.total_dim() {
        let out = image(&source.basis_nat(p))?;
        cols.push(tgt.space().embed(out.degree(), &target.coords(&out)?));
    }
    Ok(HomIso {
        source: src.clone(),
        target: tgt.clone(),
        map: from_columns(src, tgt, 0, &cols),
    })
}

/// `Δ: DgNat(Lan_F G, S) → DgNat(G, S∘F)`, `α ↦ (αF) ∘ φ`.
pub fn lan_adjunction_map<F: Field>(l: &KanExtension<F>, s: &DgModule<F>) -> Result<HomIso<F>, KanError> {
    let f = &l.along;
    let source = dgnat_complex(&l.output, s)?;
    let target = dgnat_complex(&l.input, &restrict_module(f, s)?)?;
    hom_map_from(
        &source,
        &target,
        |alpha| Ok(restrict_nat(f, alpha)?.after(&l.structure)),
    )
}

/// `DgNat(S∘F, G) → DgNat(S, Ran_F G)`, `β ↦ Ran_F(β) ∘ η_S`.
pub fn ran_adjunction_map<F: Field>(r: &KanExtension<F>, s: &DgModule<F>) -> Result<HomIso<F>, KanError> {
    let f = &r.along;
    let sf = restrict_module(f, s)?;
    let ran_sf = ran(f, &sf)?;
    let unit = ran_unit(&ran_sf, s)?;
    let source = dgnat_complex(&sf, &r.input)?;
    let target = dgnat_complex(s, &r.output)?;
    hom_map_from(&source, &target, |beta| Ok(ran_on_nat(&ran_sf, r, beta)?.after(&unit)))
}

/// A named module for test batteries.
pub type Named<F> = (String, DgModule<F>);

/// Unit/counit validity, both hom isomorphisms, naturality of `Δ` in `S`
/// and the four triangle identities on the given batteries.
pub fn adjunction_check<F: Field>(f: &DgFunctor<F>, over_source: &[Named<F>], over_target: &[Named<F>]) -> CheckReport {
    let mut report = CheckReport::new();
    let mut run = |name: String, body: &mut dyn FnMut(&mut CheckReport) -> Result<(), KanError>| {
        let mut sub = CheckReport::new();
        if let Err(e) = body(&mut sub) {
            sub.fail("computation", e.to_string());
        }
        report.absorb(&name, sub);
    };
    for (gname, g) in over_source {
        run(format!("G={gname}"), &mut |r| {
            let l = lan(f, g)?;
            r.absorb("lan", l.check());
            let rr = ran(f, g)?;
            r.absorb("ran", rr.check());
            // ε_{Lan G} ∘ Lan(φ_G) = 1.
            let l2 = lan(f, &restrict_module(f, &l.output)?)?;
            let lan_phi = lan_on_nat(&l, &l2, &l.structure)?;
            let eps = lan_counit(&l2, &l.output)?;
            r.record(
                "triangle ε∘Lan(φ) = 1",
                eps.after(&lan_phi) == DgNat::identity(&l.output),
                String::new,
            );
            // Ran(ψ_G) ∘ η_{Ran G} = 1.
            let r2 = ran(f, &restrict_module(f, &rr.output)?)?;
            let unit = ran_unit(&r2, &rr.output)?;
            let ran_psi = ran_on_nat(&r2, &rr, &rr.structure)?;
            r.record(
                "triangle Ran(ψ)∘η = 1",
                ran_psi.after(&unit) == DgNat::identity(&rr.output),
                String::new,
            );
            for (sname, s) in over_target {
                let delta = lan_adjunction_map(&l, s)?;
                r.record(format!("Δ bijective [S={sname}]"), delta.is_bijective(), || {
                    format!("{:?}", delta.map.blocks())
                });
                r.record(format!("Δ chain map [S={sname}]"), delta.is_chain_map(), String::new);
                let delta = ran_adjunction_map(&rr, s)?;
                r.record(format!("Δ′ bijective [S={sname}]"), delta.is_bijective(), String::new);
                r.record(format!("Δ′ chain map [S={sname}]"), delta.is_chain_map(), String::new);
            }
            Ok(())
        });
    }
    for (sname, s) in over_target {
        run(format!("S={sname}"), &mut |r| {
            let sf = restrict_module(f, s)?;
            // (ε_S F) ∘ φ_{SF} = 1.
            let l = lan(f, &sf)?;
            let eps = lan_counit(&l, s)?;
            let lhs = restrict_nat(f, &eps)?.after(&l.structure);
            r.record("triangle εF∘φ = 1", lhs == DgNat::identity(&sf), String::new);
            // ψ_{SF} ∘ (η_S F) = 1.
            let rr = ran(f, &sf)?;
            let unit = ran_unit(&rr, s)?;
            let lhs = rr.structure.after(&restrict_nat(f, &unit)?);
            r.record("triangle ψ∘ηF = 1", lhs == DgNat::identity(&sf), String::new);
            Ok(())
        });
    }
    report
}

/// `Δ ∘ (ρ ∘ −) = (ρF ∘ −) ∘ Δ` for a closed degree-0 `ρ: S → S′`.
pub fn delta_naturality<F: Field>(l: &KanExtension<F>, rho: &DgNat<F>) -> Result<bool, KanError> {
    let f = &l.along;
    let (s, s2) = (rho.source(), rho.target());
    let d1 = lan_adjunction_map(l, s)?;
    let d2 = lan_adjunction_map(l, s2)?;
    let src = dgnat_complex(&l.output, s)?;
    let mid = dgnat_complex(&l.output, s2)?;
    let tgt1 = dgnat_complex(&l.input, &restrict_module(f, s)?)?;
    let tgt2 = dgnat_complex(&l.input, &restrict_module(f, s2)?)?;
    let post = hom_map_from(&src, &mid, |a| Ok(rho.after(a)))?;
    let rho_f = restrict_nat(f, rho)?;
    let post_f = hom_map_from(&tgt1, &tgt2, |a| Ok(rho_f.after(a)))?;
    Ok(d2.map.compose(&post.map) == post_f.map.compose(&d1.map))
}

/// Degreewise bijectivity of every hom map; failing pairs are named.
pub fn fully_faithful_check<F: Field>(f: &DgFunctor<F>) -> CheckReport {
    let mut r = CheckReport::new();
    let s = f.source();
    for x in 0..s.object_count() {
        for y in 0..s.object_count() {
            let m = f.hom_map(x, y);
            let ok = m.inverse().is_some();
            r.record(format!("hom({}, {})", s.label(x), s.label(y)), ok, || {
                format!(
                    "dims {:?} → {:?}",
                    s.hom(x, y).dims(),
                    f.target().hom(f.object(x), f.object(y)).dims()
                )
            });
        }
    }
    r
}

/// Whether `F` is fully faithful, read from the check.
pub fn is_fully_faithful<F: Field>(f: &DgFunctor<F>) -> bool {
    fully_faithful_check(f).all_passed()
}

/// The criteria that must agree for a functor and its Kan extensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Faithfulness {
    pub functor: bool,
    pub units_invertible: bool,
    pub counits_invertible: bool,
    pub lan_fully_faithful: bool,
    pub ran_fully_faithful: bool,
}

/// Computes each criterion independently on the battery (which should
/// contain the representables) and checks the equivalences between them.
pub fn faithfulness_transfer<F: Field>(
    f: &DgFunctor<F>,
    battery: &[Named<F>],
) -> Result<(Faithfulness, CheckReport), KanError> {
    let lans = battery.iter().map(|(_, g)| lan(f, g)).collect::<Result<Vec<_>, _>>()?;
    let rans = battery.iter().map(|(_, g)| ran(f, g)).collect::<Result<Vec<_>, _>>()?;
    let mut lan_ff = true;
    let mut ran_ff = true;
    for l in &lans {
        for l2 in &lans {
            lan_ff &= lan_hom_map(l, l2)?.is_bijective();
        }
    }
    for r in &rans {
        for r2 in &rans {
            ran_ff &= ran_hom_map(r, r2)?.is_bijective();
        }
    }
    let summary = Faithfulness {
        functor: is_fully_faithful(f),
        units_invertible: lans.iter().all(|l| l.structure.is_iso()),
        counits_invertible: rans.iter().all(|r| r.structure.is_iso()),
        lan_fully_faithful: lan_ff,
        ran_fully_faithful: ran_ff,
    };
    let mut report = CheckReport::new();
    let agree = |a: bool, b: bool| move || format!("{a} vs {b}");
    let s = &summary;
    report.record(
        "F fully faithful ⇔ units invertible",
        s.functor == s.units_invertible,
        agree(s.functor, s.units_invertible),
    );
    report.record(
        "Lan fully faithful ⇔ units invertible",
        s.lan_fully_faithful == s.units_invertible,
        agree(s.lan_fully_faithful, s.units_invertible),
    );
    report.record(
        "Ran fully faithful ⇔ counits invertible",
        s.ran_fully_faithful == s.counits_invertible,
        agree(s.ran_fully_faithful, s.counits_invertible),
    );
    report.record(
        "Lan fully faithful ⇔ Ran fully faithful",
        s.lan_fully_faithful == s.ran_fully_faithful,
        agree(s.lan_fully_faithful, s.ran_fully_faithful),
    );
    Ok((summary, report))
}

/// Representables of `c` plus the zero module, named by object.
pub fn representable_battery<F: Field>(c: &crate::category::DgCategory<F>) -> Vec<Named<F>> {
    let mut out: Vec<Named<F>> = (0..c.object_count())
        .map(|x| (format!("Hom({}, −)", c.label(x)), representable(c, x)))
        .collect();
    out.push(("0".to_string(), crate::module::zero_module(c)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ends::{weighted_colimit, weighted_limit};
    use crate::field::Rational;
    use crate::fixtures;
    use crate::functor::{full_subcategory, identity_functor};
    use crate::nat::z0_hom;

    type Q = Rational;

    fn inclusion_a() -> DgFunctor<Q> {
        full_subcategory(&fixtures::a2::<Q>(), &["a"]).unwrap().1
    }

    fn functors() -> Vec<(&'static str, DgFunctor<Q>)> {
        vec![
            ("id K1", identity_functor(&fixtures::k1())),
            ("id D1", identity_functor(&fixtures::d1())),
            ("{a} ↪ A2", inclusion_a()),
            ("collapse", fixtures::collapse_a2()),
        ]
    }

    /// `Lan(η)` computed on the product: `x ⊗ y ↦ (−1)^{|η||x|} x ⊗ η(y)`
    /// through the Koszul rule of `tensor_maps`.
    fn lan_on_nat_by_representatives(l: &KanExtension<Q>, l2: &KanExtension<Q>, eta: &DgNat<Q>) -> Vec<GradedMap<Q>> {
        let (Pieces::Left(p), Pieces::Left(p2)) = (&l.pieces, &l2.pieces) else {
            unreachable!()
        };
        let f = &l.along;
        (0..f.target().object_count())
            .map(|z| {
                let ((t, src), (t2, tgt)) = (&p[z], &p2[z]);
                let mut raw = GradedMap::zero(src.product.space(), tgt.product.space(), eta.degree());
                for x in 0..f.source().object_count() {
                    let w = f.target().hom(f.object(x), z).space();
                    let m = tensor_maps(&GradedMap::identity(w), eta.component(x))
                        .relabel(t.value(x, x).space(), t2.value(x, x).space());
                    raw = raw.plus(
                        &diagonal_inclusion(t2, &tgt.product, x)
                            .compose(&m)
                            .compose(&diagonal_projection(t, &src.product, x)),
                    );
                }
                tgt.projection.compose(&raw).compose(&src.lift)
            })
            .collect()
    }

    #[test]
    fn kan_along_identity_is_identity() {
        for c in [fixtures::k1::<Q>(), fixtures::a2(), fixtures::d1()] {
            let id = identity_functor(&c);
            for (_, g) in representable_battery(&c) {
                for k in [lan(&id, &g).unwrap(), ran(&id, &g).unwrap()] {
                    assert!(k.check().all_passed());
                    let n = k.normalized();
                    assert_eq!(n.output, g);
                    assert_eq!(n.structure, DgNat::identity(&g));
                    assert!(n.check().all_passed());
                }
            }
        }
    }

    #[test]
    fn lan_along_inclusion() {
        let j = inclusion_a();
        let g = representable(j.source(), 0);
        let l = lan(&j, &g).unwrap();
        assert!(l.check().all_passed());
        assert_eq!(l.output.value(0).dims(), BTreeMap::from([(0, 1)]));
        assert_eq!(l.output.value(1).dims(), BTreeMap::from([(0, 1)]));
        assert!(l.structure.is_iso());
        let n = l.normalized();
        assert_eq!(restrict_module(&j, &n.output).unwrap(), g);
        // u acts as an isomorphism K → K, as on Hom(a, −).
        assert!(n.output.action_basis(0, 1, 0).inverse().is_some());
    }

    #[test]
    fn ran_along_inclusion_and_shift() {
        let j = inclusion_a();
        let r = ran(&j, &representable(j.source(), 0)).unwrap();
        assert!(r.check().all_passed());
        assert_eq!(r.output.value(0).dims(), BTreeMap::from([(0, 1)]));
        assert!(r.output.value(1).is_zero());
        let k1 = fixtures::k1::<Q>();
        let shifted = representable(&k1, 0).regraded(-1);
        let r = ran(&identity_functor(&k1), &shifted).unwrap();
        assert_eq!(r.output.value(0).dims(), BTreeMap::from([(1, 1)]));
        assert_eq!(r.normalized().output, shifted);
    }

    #[test]
    fn objectwise_formulas_match_weighted_colimits_and_limits() {
        for (_, f) in functors() {
            let c = f.target();
            for (_, g) in representable_battery(f.source()) {
                let l = lan(&f, &g).unwrap();
                let r = ran(&f, &g).unwrap();
                for z in 0..c.object_count() {
                    let w = restrict_module(&f.opposite(), &yoneda_module(c, z)).unwrap();
                    assert_eq!(l.output.value(z).dims(), weighted_colimit(&w, &g).unwrap().dims());
                    let w = restrict_module(&f, &representable(c, z)).unwrap();
                    assert_eq!(r.output.value(z).dims(), weighted_limit(&w, &g).unwrap().dims());
                }
            }
        }
    }

    #[test]
    fn lan_on_nat_examples() {
        let j = inclusion_a();
        let g = representable(j.source(), 0);
        let l = lan(&j, &g).unwrap();
        let id = lan_on_nat(&l, &l, &DgNat::identity(&g)).unwrap();
        assert_eq!(id, DgNat::identity(&l.output));
        let zero = lan_on_nat(&l, &l, &DgNat::zero(&g, &g, 0)).unwrap();
        assert!(zero.is_zero());
        let two = Q::from_int(2);
        let doubled = lan_on_nat(&l, &l, &DgNat::identity(&g).scaled(&two)).unwrap();
        assert_eq!(doubled, DgNat::identity(&l.output).scaled(&two));
    }

    #[test]
    fn lan_on_nat_matches_representatives_and_commutes_with_d() {
        for (_, f) in functors() {
            let battery = representable_battery(f.source());
            let lans: Vec<_> = battery.iter().map(|(_, g)| lan(&f, g).unwrap()).collect();
            for (i, (_, g)) in battery.iter().enumerate() {
                for (k, (_, g2)) in battery.iter().enumerate() {
                    let nc = dgnat_complex(g, g2).unwrap();
                    for p in 0..nc.total().total_dim() {
                        let eta = nc.basis_nat(p);
                        let solved = lan_on_nat(&lans[i], &lans[k], &eta).unwrap();
                        assert_eq!(
                            solved.components(),
                            lan_on_nat_by_representatives(&lans[i], &lans[k], &eta)
                        );
                        assert_eq!(lan_on_nat(&lans[i], &lans[k], &eta.d()).unwrap(), solved.d());
                        assert!(validate_nat(&solved).is_valid());
                    }
                }
            }
        }
    }

    #[test]
    fn adjunctions_hold_for_sample_functors() {
        for (name, f) in functors() {
            let r = adjunction_check(
                &f,
                &representable_battery(f.source()),
                &representable_battery(f.target()),
            );
            assert!(r.all_passed(), "{name}:\n{r}");
        }
    }

    #[test]
    fn delta_example_and_naturality() {
        let j = inclusion_a();
        let g = representable(j.source(), 0);
        let l = lan(&j, &g).unwrap();
        let s = representable(j.target(), 0);
        let delta = lan_adjunction_map(&l, &s).unwrap();
        assert_eq!(delta.source.dims(), BTreeMap::from([(0, 1)]));
        assert_eq!(delta.target.dims(), BTreeMap::from([(0, 1)]));
        assert!(delta.is_bijective() && delta.is_chain_map());
        for (_, f) in functors() {
            let c = f.target();
            for (_, g) in representable_battery(f.source()) {
                let l = lan(&f, &g).unwrap();
                for (_, s) in representable_battery(c) {
                    for (_, s2) in representable_battery(c) {
                        for rho in z0_hom(&s, &s2).unwrap() {
                            assert!(delta_naturality(&l, &rho).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn fully_faithful_examples() {
        assert!(is_fully_faithful(&identity_functor(&fixtures::a2::<Q>())));
        assert!(is_fully_faithful(&inclusion_a()));
        let r = fully_faithful_check(&fixtures::collapse_a2::<Q>());
        let failed: Vec<_> = r.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(failed, ["hom(b, a)"]);
    }

    #[test]
    fn faithfulness_criteria_agree() {
        for (name, f) in functors() {
            let (summary, report) = faithfulness_transfer(&f, &representable_battery(f.source())).unwrap();
            assert!(report.all_passed(), "{name}:\n{report}");
            assert_eq!(summary.functor, name != "collapse");
        }
    }

    #[test]
    fn lan_then_restrict_is_identity_for_fully_faithful_functors() {
        for (name, f) in functors() {
            if name == "collapse" {
                continue;
            }
            for (_, g) in representable_battery(f.source()) {
                let l = lan(&f, &g).unwrap().normalized();
                assert_eq!(restrict_module(&f, &l.output).unwrap(), g);
                assert_eq!(l.structure, DgNat::identity(&g));
            }
        }
    }

    #[test]
    fn lan_class_of_unit() {
        let j = inclusion_a();
        let g = representable(j.source(), 0);
        let l = lan(&j, &g).unwrap();
        let c = j.target();
        let y = vec![Q::one()];
        assert_eq!(
            l.lan_class(0, 0, c.identity(0), &y),
            l.structure.component(0).apply_flat(&y)
        );
    }
}
