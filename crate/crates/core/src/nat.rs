//! Dg-natural transformations, their complexes, Z⁰ and the dg-Yoneda
//! isomorphism.

use thiserror::Error;

use crate::category::DgCategory;
use crate::complex::{hom_complex, hom_coords, hom_differential, hom_map, Complex, ComplexError};
use crate::ends::{end_of_bifunctor, EndError, EndResult};
use crate::field::Field;
use crate::graded::GradedMap;
use crate::linalg::Matrix;
use crate::module::{representable, Bimodule, DgModule, ModuleError};
use crate::report::{Law, ValidationReport, Violation};
use crate::sign::Sign;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NatError {
    #[error("modules live over different categories")]
    BaseMismatch,
    #[error("components have the wrong shape or degree at object `{0}`")]
    ComponentShape(String),
    #[error("transformation does not lie in the complex of natural transformations")]
    NotInComplex,
    #[error(transparent)]
    End(#[from] EndError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

/// A degree-`n` family `η_X: F(X) → G(X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgNat<F> {
    source: DgModule<F>,
    target: DgModule<F>,
    degree: i32,
    components: Vec<GradedMap<F>>,
}

impl<F: Field> DgNat<F> {
    pub fn new(
        source: &DgModule<F>,
        target: &DgModule<F>,
        degree: i32,
        components: Vec<GradedMap<F>>,
    ) -> Result<Self, NatError> {
        if source.base() != target.base() {
            return Err(NatError::BaseMismatch);
        }
        let c = source.base();
        if components.len() != c.object_count() {
            return Err(NatError::ComponentShape(String::new()));
        }
        for (x, m) in components.iter().enumerate() {
            if m.degree() != degree || m.source() != source.value(x).space() || m.target() != target.value(x).space() {
                return Err(NatError::ComponentShape(c.label(x).to_string()));
            }
        }
        Ok(DgNat {
            source: source.clone(),
            target: target.clone(),
            degree,
            components,
        })
    }

    pub fn identity(m: &DgModule<F>) -> Self {
        let components = m.values().iter().map(|v| GradedMap::identity(v.space())).collect();
        DgNat {
            source: m.clone(),
            target: m.clone(),
            degree: 0,
            components,
        }
    }

    pub fn zero(source: &DgModule<F>, target: &DgModule<F>, degree: i32) -> Self {
        let components = source
            .values()
            .iter()
            .zip(target.values())
            .map(|(s, t)| GradedMap::zero(s.space(), t.space(), degree))
            .collect();
        DgNat {
            source: source.clone(),
            target: target.clone(),
            degree,
            components,
        }
    }

    pub fn source(&self) -> &DgModule<F> {
        &self.source
    }

    pub fn target(&self) -> &DgModule<F> {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn component(&self, x: usize) -> &GradedMap<F> {
        &self.components[x]
    }

    pub fn components(&self) -> &[GradedMap<F>] {
        &self.components
    }

    /// `self ∘ rhs`, componentwise.
    pub fn after(&self, rhs: &DgNat<F>) -> DgNat<F> {
        assert_eq!(
            rhs.target, self.source,
            "composing transformations with mismatched modules"
        );
        DgNat {
            source: rhs.source.clone(),
            target: self.target.clone(),
            degree: self.degree + rhs.degree,
            components: self
                .components
                .iter()
                .zip(&rhs.components)
                .map(|(a, b)| a.compose(b))
                .collect(),
        }
    }

    pub fn plus(&self, rhs: &DgNat<F>) -> DgNat<F> {
        DgNat {
            components: self
                .components
                .iter()
                .zip(&rhs.components)
                .map(|(a, b)| a.plus(b))
                .collect(),
            ..self.clone()
        }
    }

    pub fn scaled(&self, c: &F) -> DgNat<F> {
        DgNat {
            components: self.components.iter().map(|a| a.scaled(c)).collect(),
            ..self.clone()
        }
    }

    /// Componentwise Hom-complex differential.
    pub fn d(&self) -> DgNat<F> {
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(x, m)| hom_differential(self.source.value(x), self.target.value(x), m))
            .collect();
        DgNat {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree + 1,
            components,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(GradedMap::is_zero)
    }

    pub fn is_closed(&self) -> bool {
        self.d().is_zero()
    }

    /// Degreewise injective in every component.
    pub fn is_mono(&self) -> bool {
        self.components
            .iter()
            .all(|m| m.source().support().all(|d| m.block_or_zero(d).is_injective()))
    }

    pub fn is_iso(&self) -> bool {
        self.components.iter().all(|m| {
            m.source().dims() == m.target().shifted(-m.degree()).dims()
                && m.source().support().all(|d| m.block_or_zero(d).is_bijective())
        })
    }
}

/// `G(f) ∘ η_X = (−1)^{nm} η_Y ∘ F(f)` on every basis morphism.
pub fn validate_nat<F: Field>(eta: &DgNat<F>) -> ValidationReport {
    let mut report = ValidationReport::default();
    let c = eta.source.base();
    let n = c.object_count();
    for x in 0..n {
        for y in 0..n {
            for i in 0..c.hom_dim(x, y) {
                let m = c.basis_degree(x, y, i);
                let lhs = eta.target.action_basis(x, y, i).compose(&eta.components[x]);
                let rhs = eta.components[y].compose(eta.source.action_basis(x, y, i));
                let sign: F = Sign::koszul(eta.degree, m).scalar();
                if lhs != rhs.scaled(&sign) {
                    report.push(
                        Violation::new(Law::Naturality)
                            .objects(&[c.label(x), c.label(y)])
                            .items(&[c.basis_label(x, y, i)]),
                    );
                }
            }
        }
    }
    report
}

/// `(A, A′) ↦ Hom(F(A), G(A′))` over `op(C) ⊗ C`.
pub fn hom_modules_bifunctor<F: Field>(f: &DgModule<F>, g: &DgModule<F>) -> Result<Bimodule<F>, NatError> {
    if f.base() != g.base() {
        return Err(NatError::BaseMismatch);
    }
    let c = f.base();
    let values = |x: usize, y: usize| hom_complex(f.value(x), g.value(y));
    Ok(Bimodule::from_actions(
        &c.opposite(),
        c,
        values,
        // α ∈ op(x, x2) = hom(x2, x): φ ↦ (−1)^{|α||φ|} φ ∘ F(α).
        |alpha, x, x2, y| {
            let adeg = c.basis_degree(x2, x, alpha);
            let (src, tgt) = (values(x, y), values(x2, y));
            GradedMap::from_columns_fn(src.space(), tgt.space(), adeg, |p| {
                let pdeg = src.space().degree_of(p);
                let phi = basis_map(f.value(x), g.value(y), &src, p);
                let out = phi.compose(f.action_basis(x2, x, alpha));
                tgt.space().embed(
                    pdeg + adeg,
                    &hom_coords(&out.scaled(&Sign::koszul(adeg, pdeg).scalar())),
                )
            })
        },
        |beta, x, y, y2| {
            let bdeg = c.basis_degree(y, y2, beta);
            let (src, tgt) = (values(x, y), values(x, y2));
            GradedMap::from_columns_fn(src.space(), tgt.space(), bdeg, |p| {
                let pdeg = src.space().degree_of(p);
                let phi = basis_map(f.value(x), g.value(y), &src, p);
                tgt.space()
                    .embed(pdeg + bdeg, &hom_coords(&g.action_basis(y, y2, beta).compose(&phi)))
            })
        },
    )?)
}

/// The graded map given by basis vector `p` of `Hom(m, n)`.
fn basis_map<F: Field>(m: &Complex<F>, n: &Complex<F>, hom: &Complex<F>, p: usize) -> GradedMap<F> {
    let (deg, k) = hom.space().locate(p);
    let mut e = vec![F::zero(); hom.dim(deg)];
    e[k] = F::one();
    hom_map(m.space(), n.space(), deg, &e)
}

/// `DgNat(F, G)` as the end of [`hom_modules_bifunctor`].
#[derive(Clone, Debug)]
pub struct NatComplex<F> {
    source: DgModule<F>,
    target: DgModule<F>,
    end: EndResult<F>,
}

impl<F: Field> NatComplex<F> {
    pub fn total(&self) -> &Complex<F> {
        &self.end.total
    }

    pub fn end(&self) -> &EndResult<F> {
        &self.end
    }

    pub fn source(&self) -> &DgModule<F> {
        &self.source
    }

    pub fn target(&self) -> &DgModule<F> {
        &self.target
    }

    /// `λ_X`: the component at `X`, in Hom-complex coordinates.
    pub fn projection(&self, x: usize) -> &GradedMap<F> {
        &self.end.projections[x]
    }

    /// The transformation given by a homogeneous vector of the given degree.
    pub fn nat(&self, degree: i32, v: &[F]) -> DgNat<F> {
        let components = (0..self.source.base().object_count())
            .map(|x| {
                let coords = self.projection(x).apply(degree, v);
                hom_map(
                    self.source.value(x).space(),
                    self.target.value(x).space(),
                    degree,
                    &coords,
                )
            })
            .collect();
        DgNat {
            source: self.source.clone(),
            target: self.target.clone(),
            degree,
            components,
        }
    }

    /// The basis element `p` (flat index) as a transformation.
    pub fn basis_nat(&self, p: usize) -> DgNat<F> {
        let space = self.total().space();
        let (deg, k) = space.locate(p);
        let mut e = vec![F::zero(); space.dim(deg)];
        e[k] = F::one();
        self.nat(deg, &e)
    }

    /// Coordinates (in the degree of `eta`) of a transformation.
    pub fn coords(&self, eta: &DgNat<F>) -> Result<Vec<F>, NatError> {
        let d = eta.degree;
        let mut stacked = Vec::new();
        for (x, m) in eta.components.iter().enumerate() {
            stacked.push((x, hom_coords(m)));
        }
        let product = &self.end.product;
        let mut target = vec![F::zero(); product.dim(d)];
        let mut offset = 0;
        for (x, coords) in stacked {
            let len = self.end.projections[x].target().dim(d);
            target[offset..offset + len].clone_from_slice(&coords);
            offset += len;
        }
        self.end
            .inclusion
            .block_or_zero(d)
            .solve(&target)
            .ok_or(NatError::NotInComplex)
    }
}

pub fn dgnat_complex<F: Field>(f: &DgModule<F>, g: &DgModule<F>) -> Result<NatComplex<F>, NatError> {
    let t = hom_modules_bifunctor(f, g)?;
    let end = end_of_bifunctor(&t)?;
    Ok(NatComplex {
        source: f.clone(),
        target: g.clone(),
        end,
    })
}

/// A basis of the closed degree-0 transformations.
pub fn z0_hom<F: Field>(f: &DgModule<F>, g: &DgModule<F>) -> Result<Vec<DgNat<F>>, NatError> {
    let nc = dgnat_complex(f, g)?;
    Ok(z0_basis(&nc))
}

pub fn z0_basis<F: Field>(nc: &NatComplex<F>) -> Vec<DgNat<F>> {
    let k = nc.total().d_block(0).kernel();
    k.columns().iter().map(|v| nc.nat(0, v)).collect()
}

/// `DgNat(Hom(a, −), M) → M(a)`, `η ↦ η_a(1_a)`, and its inverse
/// `m ↦ (j ↦ (−1)^{|m||j|} M(j)(m))`.
#[derive(Clone, Debug)]
pub struct YonedaIso<F> {
    pub nat: NatComplex<F>,
    pub value: Complex<F>,
    pub forward: GradedMap<F>,
    pub inverse: GradedMap<F>,
}

impl<F: Field> YonedaIso<F> {
    pub fn round_trips(&self) -> bool {
        self.forward.compose(&self.inverse) == GradedMap::identity(self.value.space())
            && self.inverse.compose(&self.forward) == GradedMap::identity(self.nat.total().space())
    }

    pub fn is_chain_iso(&self) -> bool {
        crate::complex::check_chain_map(&self.forward, self.nat.total(), &self.value).is_ok()
            && crate::complex::check_chain_map(&self.inverse, &self.value, self.nat.total()).is_ok()
    }
}

/// The transformation `j ↦ (−1)^{|m||j|} M(j)(m)` for homogeneous `m ∈ M(a)`.
pub fn yoneda_nat<F: Field>(c: &DgCategory<F>, a: usize, m: &DgModule<F>, degree: i32, v: &[F]) -> DgNat<F> {
    let rep = representable(c, a);
    let elem = m.value(a).space().embed(degree, v);
    let components = (0..c.object_count())
        .map(|x| {
            GradedMap::from_columns_fn(rep.value(x).space(), m.value(x).space(), degree, |j| {
                let sign = Sign::koszul(degree, c.basis_degree(a, x, j));
                m.act_on(a, x, &c.basis_vector(a, x, j), &elem)
                    .iter()
                    .map(|e| sign.apply(e))
                    .collect()
            })
        })
        .collect();
    DgNat {
        source: rep,
        target: m.clone(),
        degree,
        components,
    }
}

pub fn yoneda_iso<F: Field>(c: &DgCategory<F>, a: &str, m: &DgModule<F>) -> Result<YonedaIso<F>, NatError> {
    let a = c.index_of(a).map_err(ModuleError::from)?;
    if m.base() != c {
        return Err(NatError::BaseMismatch);
    }
    let nat = dgnat_complex(&representable(c, a), m)?;
    let value = m.value(a).clone();
    let total = nat.total().clone();
    let forward = GradedMap::from_columns_fn(total.space(), value.space(), 0, |p| {
        let eta = nat.basis_nat(p);
        eta.component(a).apply_flat(c.identity(a))
    });
    let mut columns = Vec::new();
    for p in 0..value.total_dim() {
        let (deg, k) = value.space().locate(p);
        let mut e = vec![F::zero(); value.dim(deg)];
        e[k] = F::one();
        let eta = yoneda_nat(c, a, m, deg, &e);
        columns.push(total.space().embed(deg, &nat.coords(&eta)?));
    }
    let inverse = GradedMap::from_matrix(
        value.space(),
        total.space(),
        0,
        &Matrix::from_columns(total.total_dim(), &columns),
    )
    .expect("Yoneda inverse preserves degrees");
    Ok(YonedaIso {
        nat,
        value,
        forward,
        inverse,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::fixtures;
    use crate::module::{representable, yoneda_module};
    use std::collections::BTreeMap;

    type Q = Rational;

    /// Independent oracle: solve `G(f) η_X = (−1)^{nm} η_Y F(f)` directly on
    /// the per-object Hom bases, degree by degree, and return the solution
    /// space (as product coordinates) with the induced differential.
    fn brute_force(f: &DgModule<Q>, g: &DgModule<Q>) -> BTreeMap<i32, Matrix<Q>> {
        let c = f.base();
        let n = c.object_count();
        let homs: Vec<Complex<Q>> = (0..n).map(|x| hom_complex(f.value(x), g.value(x))).collect();
        let mut out = BTreeMap::new();
        for deg in -8..=8 {
            let widths: Vec<usize> = homs.iter().map(|h| h.dim(deg)).collect();
            let total: usize = widths.iter().sum();
            if total == 0 {
                continue;
            }
            let mut rows: Vec<Vec<Q>> = Vec::new();
            for x in 0..n {
                for y in 0..n {
                    for i in 0..c.hom_dim(x, y) {
                        let m = c.basis_degree(x, y, i);
                        let sign: Q = Sign::koszul(deg, m).scalar();
                        let mut cols: Vec<Vec<Q>> = Vec::new();
                        for (z, &width) in widths.iter().enumerate() {
                            for p in 0..width {
                                let mut e = vec![Q::zero(); width];
                                e[p] = Q::one();
                                let phi = hom_map(f.value(z).space(), g.value(z).space(), deg, &e);
                                let mut lhs = GradedMap::zero(f.value(x).space(), g.value(y).space(), deg + m);
                                if z == x {
                                    lhs = lhs.plus(&g.action_basis(x, y, i).compose(&phi));
                                }
                                if z == y {
                                    lhs = lhs.minus(&phi.compose(f.action_basis(x, y, i)).scaled(&sign));
                                }
                                cols.push(crate::complex::hom_coords(&lhs));
                            }
                        }
                        let height = cols.first().map_or(0, Vec::len);
                        let block = Matrix::from_columns(height, &cols);
                        for r in 0..block.rows() {
                            rows.push(block.row(r).to_vec());
                        }
                    }
                }
            }
            let system = Matrix::from_rows(rows, total);
            let k = system.kernel();
            if k.cols() > 0 {
                out.insert(deg, k);
            }
        }
        out
    }

    fn battery(c: &DgCategory<Q>) -> Vec<DgModule<Q>> {
        let mut v: Vec<DgModule<Q>> = (0..c.object_count()).map(|a| representable(c, a)).collect();
        v.push(representable(c, 0).regraded(1));
        v
    }

    #[test]
    fn dgnat_matches_brute_force() {
        for (_, c) in fixtures::all::<Q>() {
            for f in battery(&c) {
                for g in battery(&c) {
                    let nc = dgnat_complex(&f, &g).unwrap();
                    let oracle = brute_force(&f, &g);
                    let ours: BTreeMap<i32, Matrix<Q>> = nc
                        .end()
                        .inclusion
                        .blocks()
                        .iter()
                        .map(|(d, m)| (*d, m.clone()))
                        .collect();
                    assert_eq!(ours, oracle);
                    for p in 0..nc.total().total_dim() {
                        let eta = nc.basis_nat(p);
                        assert!(validate_nat(&eta).is_valid());
                        let deta = eta.d();
                        let via_complex = nc.nat(
                            eta.degree() + 1,
                            &nc.total().d(eta.degree(), &{
                                let (d, k) = nc.total().space().locate(p);
                                let mut e = vec![Q::zero(); nc.total().dim(d)];
                                e[k] = Q::one();
                                e
                            }),
                        );
                        assert_eq!(deta, via_complex);
                    }
                }
            }
        }
    }

    #[test]
    fn dgnat_examples() {
        let k1 = fixtures::k1::<Q>();
        let m = representable(&k1, 0);
        assert_eq!(dgnat_complex(&m, &m).unwrap().total().dims(), BTreeMap::from([(0, 1)]));
        let a2 = fixtures::a2::<Q>();
        let (ma, mb) = (representable(&a2, 0), representable(&a2, 1));
        assert_eq!(
            dgnat_complex(&mb, &ma).unwrap().total().dims(),
            BTreeMap::from([(0, 1)])
        );
        assert!(dgnat_complex(&ma, &mb).unwrap().total().is_zero());
        for g in [ma.clone(), mb.clone(), ma.regraded(2)] {
            assert_eq!(dgnat_complex(&ma, &g).unwrap().total().dims(), g.value(0).dims());
        }
        assert!(dgnat_complex(&ma, &representable(&k1, 0)).is_err());
    }

    #[test]
    fn z0_examples() {
        let k1 = fixtures::k1::<Q>();
        let m = representable(&k1, 0);
        assert_eq!(z0_hom(&m, &m).unwrap().len(), 1);
        assert!(z0_hom(&m, &m.regraded(-1)).unwrap().is_empty());
        let d1 = fixtures::d1::<Q>();
        let m = representable(&d1, 0);
        let z = z0_hom(&m, &m).unwrap();
        // Oracle: closed degree-0 natural maps of the two-term module, by
        // enumerating all degree-0 component maps and imposing both laws.
        let hom = hom_complex(m.value(0), m.value(0));
        let width = hom.dim(0);
        let mut cols = Vec::new();
        for p in 0..width {
            let mut e = vec![Q::zero(); width];
            e[p] = Q::one();
            let phi = hom_map(m.value(0).space(), m.value(0).space(), 0, &e);
            let eta = DgNat::new(&m, &m, 0, vec![phi]).unwrap();
            let mut col = hom_coords(&eta.d().components()[0]);
            for i in 0..d1.hom_dim(0, 0) {
                let a = m.action_basis(0, 0, i);
                col.extend(hom_coords(
                    &a.compose(&eta.components()[0]).minus(&eta.components()[0].compose(a)),
                ));
            }
            cols.push(col);
        }
        let height = cols[0].len();
        let oracle = Matrix::from_columns(height, &cols).kernel().cols();
        assert_eq!(z.len(), oracle);
        assert_eq!(z.len(), 1);
        for eta in &z {
            assert!(eta.is_closed());
            assert!(validate_nat(eta).is_valid());
            for zeta in &z {
                let comp = eta.after(zeta);
                assert!(comp.is_closed() && validate_nat(&comp).is_valid());
            }
        }
    }

    #[test]
    fn yoneda_round_trips_on_fixtures() {
        for (_, c) in fixtures::all::<Q>() {
            for a in 0..c.object_count() {
                for m in battery(&c) {
                    let y = yoneda_iso(&c, c.label(a), &m).unwrap();
                    assert!(y.round_trips());
                    assert!(y.is_chain_iso());
                    assert_eq!(y.nat.total().dims(), m.value(a).dims());
                }
            }
        }
    }

    #[test]
    fn yoneda_examples() {
        let k1 = fixtures::k1::<Q>();
        let y = yoneda_iso(&k1, "★", &representable(&k1, 0)).unwrap();
        assert_eq!(y.forward.block_or_zero(0), Matrix::identity(1));
        assert!(yoneda_iso(&k1, "x", &representable(&k1, 0)).is_err());
        let a2 = fixtures::a2::<Q>();
        let y = yoneda_iso(&a2, "a", &representable(&a2, 0)).unwrap();
        assert_eq!(y.value.dims(), a2.hom(0, 0).dims());
    }

    #[test]
    fn yoneda_embedding_is_fully_faithful() {
        for (_, c) in fixtures::all::<Q>() {
            let n = c.object_count();
            for a in 0..n {
                for b in 0..n {
                    // hom(a, b) → DgNat(Hom(−, a), Hom(−, b)), f ↦ f ∘ −.
                    let nc = dgnat_complex(&yoneda_module(&c, a), &yoneda_module(&c, b)).unwrap();
                    assert_eq!(nc.total().dims(), c.hom(a, b).dims());
                    let mut cols = Vec::new();
                    for f in 0..c.hom_dim(a, b) {
                        let deg = c.basis_degree(a, b, f);
                        let comps = (0..n)
                            .map(|x| {
                                GradedMap::from_columns_fn(c.hom(x, a).space(), c.hom(x, b).space(), deg, |j| {
                                    crate::category::densify(c.compose_basis(x, a, b, f, j), c.hom_dim(x, b))
                                })
                            })
                            .collect();
                        let eta = DgNat::new(&yoneda_module(&c, a), &yoneda_module(&c, b), deg, comps).unwrap();
                        assert!(validate_nat(&eta).is_valid());
                        cols.push(nc.total().space().embed(deg, &nc.coords(&eta).unwrap()));
                    }
                    let m = Matrix::from_columns(nc.total().total_dim(), &cols);
                    assert!(m.is_injective());
                }
            }
        }
    }
}
