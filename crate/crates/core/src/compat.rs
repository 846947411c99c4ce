//! Adjunctions between module categories, compatibility of the functors a
//! bimodule induces with such an adjunction, dg-recollements of module
//! categories and the matrix categories built from them.

use crate::category::{validate_dg_category, CategoryBuilder, DgCategory};
use crate::field::Field;
use crate::functor::full_subcategory;
use crate::ideal::{ideal_from_subcategory, quotient_category, IdealError};
use crate::kan::{lan, ran, ran_unit, HomIso, Named};
use crate::matrix::{
    bimodule_pushforward, bimodule_slice, g_functor, g_functor_nat, induced_map, matrix_category, right_factor,
    MatrixError, ModuleOp, TriangularMatrixCategory,
};
use crate::module::{restrict_module, validate_dg_module, zero_module, Bimodule, DgModule};
use crate::nat::{dgnat_complex, validate_nat, DgNat};
use crate::report::CheckReport;

/// An adjoint pair `left ⊣ right` of operations on module categories with a
/// known unit.
#[derive(Clone, Debug)]
pub struct AdjunctionData<F> {
    pub left: ModuleOp<F>,
    pub right: ModuleOp<F>,
}

impl<F: Field> AdjunctionData<F> {
    /// Accepts `Lan_f ⊣ f^*`, `f^* ⊣ Ran_f`, identities and zeros.
    pub fn new(left: ModuleOp<F>, right: ModuleOp<F>) -> Result<Self, MatrixError> {
        let known = match (&left, &right) {
            (ModuleOp::Lan(f), ModuleOp::Restrict(g)) | (ModuleOp::Restrict(f), ModuleOp::Ran(g)) => f == g,
            (ModuleOp::Identity(a), ModuleOp::Identity(b)) => a == b,
            (ModuleOp::Zero { source, target }, ModuleOp::Zero { source: s2, target: t2 }) => {
                source == t2 && target == s2
            }
            _ => false,
        };
        if known {
            Ok(AdjunctionData { left, right })
        } else {
            Err(MatrixError::NoAdjunction(left.name(), right.name()))
        }
    }

    /// `X → right(left(X))`.
    pub fn unit(&self, x: &DgModule<F>) -> Result<DgNat<F>, MatrixError> {
        Ok(match &self.left {
            ModuleOp::Lan(f) => lan(f, x)?.normalized().structure,
            ModuleOp::Restrict(f) => ran_unit(&ran(f, &restrict_module(f, x)?)?, x)?,
            ModuleOp::Identity(_) => DgNat::identity(x),
            _ => DgNat::zero(x, &zero_module(x.base()), 0),
        })
    }

    /// `f ↦ right(f) ∘ unit_X` for `f: left(X) → Y`.
    pub fn transpose(&self, x: &DgModule<F>, f: &DgNat<F>) -> Result<DgNat<F>, MatrixError> {
        let unit = self.unit(x)?;
        let image = self.right.apply_nat(f)?;
        if *image.source() != *unit.target() {
            return Err(MatrixError::BaseMismatch);
        }
        Ok(image.after(&unit))
    }

    /// The transpose as a map of complexes `Hom(left X, Y) → Hom(X, right Y)`.
    pub fn transpose_map(&self, x: &DgModule<F>, y: &DgModule<F>) -> Result<HomIso<F>, MatrixError> {
        let nc = dgnat_complex(&self.left.apply(x)?, y)?;
        let nc2 = dgnat_complex(x, &self.right.apply(y)?)?;
        let map = induced_map(&nc, &nc2, 0, |f| self.transpose(x, f))?;
        Ok(HomIso {
            source: nc.total().clone(),
            target: nc2.total().clone(),
            map,
        })
    }
}

/// Outcome of the three compatibility conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompatibilityFlags {
    pub closed_degree_zero: bool,
    pub mono: bool,
    pub equation: bool,
}

impl CompatibilityFlags {
    pub fn all(&self) -> bool {
        self.closed_degree_zero && self.mono && self.equation
    }
}

/// `ξ: G₁ → G₂∘F` and `ρ: G₂ → G₁∘G` on finite batteries, for `F ⊣ G`,
/// a bimodule `M` and its pushforward `N = F(M)`.
#[derive(Clone, Debug)]
pub struct CompatibilityData<F> {
    pub adjunction: AdjunctionData<F>,
    pub m: Bimodule<F>,
    pub n: Bimodule<F>,
    /// Modules over the source of `F`; `xi[i]` is the component at the `i`-th.
    pub source_battery: Vec<Named<F>>,
    /// Modules over the target of `F`; `rho[i]` is the component at the `i`-th.
    pub target_battery: Vec<Named<F>>,
    pub xi: Vec<DgNat<F>>,
    pub rho: Vec<DgNat<F>>,
    pub verified: CompatibilityFlags,
    pub checks: CheckReport,
}

pub fn compatibility_data<F: Field>(
    adjunction: &AdjunctionData<F>,
    m: &Bimodule<F>,
    source_battery: &[Named<F>],
    target_battery: &[Named<F>],
) -> Result<CompatibilityData<F>, MatrixError> {
    let (f, g) = (&adjunction.left, &adjunction.right);
    let t = right_factor(m);
    for ti in 0..t.object_count() {
        let slice = bimodule_slice(m, ti);
        let unit = adjunction.unit(&slice)?;
        if *unit.target() != slice || unit != DgNat::identity(&slice) {
            return Err(MatrixError::UnitNotNormalized(t.label(ti).to_string()));
        }
    }
    let n = bimodule_pushforward(f, m)?;
    let mut xi = Vec::with_capacity(source_battery.len());
    for (_, b) in source_battery {
        let (g1, g2) = (g_functor(m, b)?, g_functor(&n, &f.apply(b)?)?);
        let comps = (0..t.object_count())
            .map(|ti| {
                let nc = dgnat_complex(&bimodule_slice(m, ti), b)?;
                let nc2 = dgnat_complex(&bimodule_slice(&n, ti), &f.apply(b)?)?;
                induced_map(&nc, &nc2, 0, |eta| f.apply_nat(eta))
            })
            .collect::<Result<Vec<_>, _>>()?;
        xi.push(DgNat::new(&g1, &g2, 0, comps)?);
    }
    let mut rho = Vec::with_capacity(target_battery.len());
    for (_, l) in target_battery {
        let (g2, g1) = (g_functor(&n, l)?, g_functor(m, &g.apply(l)?)?);
        let comps = (0..t.object_count())
            .map(|ti| {
                let nc = dgnat_complex(&bimodule_slice(&n, ti), l)?;
                let nc2 = dgnat_complex(&bimodule_slice(m, ti), &g.apply(l)?)?;
                induced_map(&nc, &nc2, 0, |h| g.apply_nat(h))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rho.push(DgNat::new(&g2, &g1, 0, comps)?);
    }
    let mut data = CompatibilityData {
        adjunction: adjunction.clone(),
        m: m.clone(),
        n,
        source_battery: source_battery.to_vec(),
        target_battery: target_battery.to_vec(),
        xi,
        rho,
        verified: CompatibilityFlags {
            closed_degree_zero: false,
            mono: false,
            equation: false,
        },
        checks: CheckReport::new(),
    };
    let (flags, checks) = data.verify()?;
    data.verified = flags;
    data.checks = checks;
    Ok(data)
}

impl<F: Field> CompatibilityData<F> {
    /// Recomputes every condition from the stored `ξ` and `ρ`.
    pub fn verify(&self) -> Result<(CompatibilityFlags, CheckReport), MatrixError> {
        let mut r = CheckReport::new();
        let f = &self.adjunction.left;
        let t = right_factor(&self.m);
        let mut closed = true;
        for (kind, list, battery) in [
            ("ξ", &self.xi, &self.source_battery),
            ("ρ", &self.rho, &self.target_battery),
        ] {
            for (nat, (name, _)) in list.iter().zip(battery) {
                let natural = validate_nat(nat);
                let ok = natural.is_valid() && nat.degree() == 0 && nat.is_closed();
                closed &= ok;
                r.record(format!("{kind} closed of degree 0 [{name}]"), ok, || {
                    natural.to_string()
                });
            }
        }
        let mut mono = true;
        for (rho, (name, l)) in self.rho.iter().zip(&self.target_battery) {
            let injective = rho.is_mono();
            r.record(format!("ρ injective [{name}]"), injective, String::new);
            mono &= injective;
            for ti in 0..t.object_count() {
                let transpose = self.adjunction.transpose_map(&bimodule_slice(&self.m, ti), l)?;
                let same = transpose.map == *rho.component(ti) && transpose.is_bijective();
                r.record(
                    format!("ρ equals the adjunction transpose [{name}, {}]", t.label(ti)),
                    same,
                    String::new,
                );
                mono &= same;
            }
        }
        let mut equation = true;
        for (xi, (xname, x)) in self.xi.iter().zip(&self.source_battery) {
            let fx = f.apply(x)?;
            for (rho, (yname, y)) in self.rho.iter().zip(&self.target_battery) {
                let nc = dgnat_complex(&fx, y)?;
                for p in 0..nc.total().total_dim() {
                    let h = nc.basis_nat(p);
                    let lhs = g_functor_nat(&self.m, &self.adjunction.transpose(x, &h)?)?;
                    let middle = g_functor_nat(&self.n, &h)?;
                    let rhs = (*middle.source() == *xi.target() && *rho.source() == *middle.target())
                        .then(|| rho.after(&middle.after(xi)));
                    let ok = rhs
                        .as_ref()
                        .is_some_and(|rhs| rhs.source() == lhs.source() && rhs.components() == lhs.components());
                    let label = nc.total().space().basis_name(p);
                    r.record(
                        format!("G₁(η(f)) = ρ∘G₂(f)∘ξ [X={xname}, Y={yname}, f={label}]"),
                        ok,
                        String::new,
                    );
                    equation &= ok;
                }
            }
        }
        Ok((
            CompatibilityFlags {
                closed_degree_zero: closed,
                mono,
                equation,
            },
            r,
        ))
    }
}

/// Whether the left or the right half of a recollement is checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecollementSide {
    Left,
    Right,
}

/// Six operations between `DgMod(C)`, `DgMod(A)` and `DgMod(B)`:
/// `i^*, i^!: A → C`, `i_* = i_!: C → A`, `j^! = j^*: A → B` and
/// `j_!, j_*: B → A`.
#[derive(Clone, Debug)]
pub struct ModuleRecollement<F> {
    pub i_upper_star: ModuleOp<F>,
    pub i_lower: ModuleOp<F>,
    pub i_upper_shriek: ModuleOp<F>,
    pub j_lower_shriek: ModuleOp<F>,
    pub j_upper: ModuleOp<F>,
    pub j_lower_star: ModuleOp<F>,
}

/// A module recollement with its quotient and subcategory.
pub type IdealRecollement<F> = (ModuleRecollement<F>, DgCategory<F>, DgCategory<F>);

/// The six functors of the recollement induced by a full subcategory `B`
/// of `c`, with `C = c/I_B`. Returns the quotient and the subcategory too.
pub fn ideal_recollement<F: Field>(c: &DgCategory<F>, subset: &[&str]) -> Result<IdealRecollement<F>, IdealError> {
    let ideal = ideal_from_subcategory(c, subset)?;
    let q = quotient_category(c, &ideal)?;
    let (sub, j) = full_subcategory(c, subset)?;
    let pi = q.projection.clone();
    Ok((
        ModuleRecollement {
            i_upper_star: ModuleOp::Lan(pi.clone()),
            i_lower: ModuleOp::Restrict(pi.clone()),
            i_upper_shriek: ModuleOp::Ran(pi),
            j_lower_shriek: ModuleOp::Lan(j.clone()),
            j_upper: ModuleOp::Restrict(j.clone()),
            j_lower_star: ModuleOp::Ran(j),
        },
        q.quotient,
        sub,
    ))
}

/// The category with no objects.
pub fn empty_category<F: Field>() -> DgCategory<F> {
    CategoryBuilder::new().build().expect("nothing to check")
}

/// `C` empty, every `j`-functor the identity of `a` and every `i`-functor zero.
pub fn degenerate_recollement<F: Field>(a: &DgCategory<F>) -> ModuleRecollement<F> {
    let e = empty_category();
    let zero = |source: &DgCategory<F>, target: &DgCategory<F>| ModuleOp::Zero {
        source: source.clone(),
        target: target.clone(),
    };
    ModuleRecollement {
        i_upper_star: zero(a, &e),
        i_lower: zero(&e, a),
        i_upper_shriek: zero(a, &e),
        j_lower_shriek: ModuleOp::Identity(a.clone()),
        j_upper: ModuleOp::Identity(a.clone()),
        j_lower_star: ModuleOp::Identity(a.clone()),
    }
}

fn adjoint_pair<F: Field>(
    r: &mut CheckReport,
    left: &ModuleOp<F>,
    right: &ModuleOp<F>,
    xs: &[Named<F>],
    ys: &[Named<F>],
) {
    let adj = match AdjunctionData::new(left.clone(), right.clone()) {
        Ok(adj) => adj,
        Err(e) => return r.fail("adjunction data", e.to_string()),
    };
    for (xname, x) in xs {
        match adj.unit(x) {
            Ok(unit) => r.record(
                format!("unit closed, natural, degree 0 [{xname}]"),
                unit.degree() == 0 && unit.is_closed() && validate_nat(&unit).is_valid(),
                String::new,
            ),
            Err(e) => r.fail(format!("unit [{xname}]"), e.to_string()),
        }
        for (yname, y) in ys {
            match adj.transpose_map(x, y) {
                Ok(h) => {
                    r.record(
                        format!("transpose bijective [{xname}, {yname}]"),
                        h.is_bijective(),
                        || format!("{:?} → {:?}", h.source.dims(), h.target.dims()),
                    );
                    r.record(
                        format!("transpose chain map [{xname}, {yname}]"),
                        h.is_chain_map(),
                        String::new,
                    );
                }
                Err(e) => r.fail(format!("transpose [{xname}, {yname}]"), e.to_string()),
            }
        }
    }
}

fn fully_faithful<F: Field>(r: &mut CheckReport, op: &ModuleOp<F>, battery: &[Named<F>]) {
    for (xname, x) in battery {
        for (yname, y) in battery {
            match op.hom_map(x, y) {
                Ok(h) => r.record(
                    format!("hom map bijective [{xname}, {yname}]"),
                    h.is_bijective() && h.is_chain_map(),
                    || format!("{:?} → {:?}", h.source.dims(), h.target.dims()),
                ),
                Err(e) => r.fail(format!("hom map [{xname}, {yname}]"), e.to_string()),
            }
        }
    }
}

fn vanishing<F: Field>(r: &mut CheckReport, first: &ModuleOp<F>, second: &ModuleOp<F>, battery: &[Named<F>]) {
    for (name, x) in battery {
        match first.apply(x).and_then(|y| second.apply(&y)) {
            Ok(z) => r.record(format!("composite vanishes [{name}]"), z.is_zero(), || format!("{z:?}")),
            Err(e) => r.fail(format!("composite [{name}]"), e.to_string()),
        }
    }
}

/// The three axioms of a left or right dg-recollement on batteries over
/// `C` (outer), `A` (middle) and `B` (inner).
pub fn dg_recollement_axioms<F: Field>(
    rec: &ModuleRecollement<F>,
    side: RecollementSide,
    outer: &[Named<F>],
    middle: &[Named<F>],
    inner: &[Named<F>],
) -> CheckReport {
    let mut report = CheckReport::new();
    let mut section = |name: &str, body: &mut dyn FnMut(&mut CheckReport)| {
        let mut sub = CheckReport::new();
        body(&mut sub);
        report.absorb(name, sub);
    };
    match side {
        RecollementSide::Left => {
            section("LR1 (i^*, i_*)", &mut |r| {
                adjoint_pair(r, &rec.i_upper_star, &rec.i_lower, middle, outer)
            });
            section("LR1 (j_!, j^!)", &mut |r| {
                adjoint_pair(r, &rec.j_lower_shriek, &rec.j_upper, inner, middle)
            });
            section("LR2 j^! i_* = 0", &mut |r| {
                vanishing(r, &rec.i_lower, &rec.j_upper, outer)
            });
            section("LR3 i_* fully faithful", &mut |r| {
                fully_faithful(r, &rec.i_lower, outer)
            });
            section("LR3 j_! fully faithful", &mut |r| {
                fully_faithful(r, &rec.j_lower_shriek, inner)
            });
        }
        RecollementSide::Right => {
            section("RR1 (i_!, i^!)", &mut |r| {
                adjoint_pair(r, &rec.i_lower, &rec.i_upper_shriek, outer, middle)
            });
            section("RR1 (j^*, j_*)", &mut |r| {
                adjoint_pair(r, &rec.j_upper, &rec.j_lower_star, middle, inner)
            });
            section("RR2 j^* i_! = 0", &mut |r| {
                vanishing(r, &rec.i_lower, &rec.j_upper, outer)
            });
            section("RR3 i_! fully faithful", &mut |r| {
                fully_faithful(r, &rec.i_lower, outer)
            });
            section("RR3 j_* fully faithful", &mut |r| {
                fully_faithful(r, &rec.j_lower_star, inner)
            });
        }
    }
    report
}

/// `Λ = [T 0; M R]` and `Λ^! = [T 0; j_!(M) S]` with the compatibility of
/// the induced functors with `j_! ⊣ j^!`.
#[derive(Clone, Debug)]
pub struct LambdaVariant<F> {
    pub lambda: TriangularMatrixCategory<F>,
    pub lambda_shriek: TriangularMatrixCategory<F>,
    pub compatibility: CompatibilityData<F>,
    pub checks: CheckReport,
}

impl<F: Field> LambdaVariant<F> {
    pub fn passed(&self) -> bool {
        self.checks.all_passed()
    }
}

pub fn build_lambda_variant<F: Field>(
    adjunction: &AdjunctionData<F>,
    m: &Bimodule<F>,
    source_battery: &[Named<F>],
    target_battery: &[Named<F>],
) -> Result<LambdaVariant<F>, MatrixError> {
    let jbang = &adjunction.left;
    let (t, r, s) = (right_factor(m), jbang.source(), jbang.target());
    let compatibility = compatibility_data(adjunction, m, source_battery, target_battery)?;
    let lambda = matrix_category(&t, m, &r)?;
    let lambda_shriek = matrix_category(&t, &compatibility.n, &s)?;
    let mut checks = CheckReport::new();
    for (name, lam) in [("Λ", &lambda), ("Λ^!", &lambda_shriek)] {
        let v = validate_dg_category(&lam.lambda);
        checks.record(format!("{name} valid"), v.is_valid(), || v.to_string());
        checks.record(format!("{name} hom dimensions"), lam.hom_formula_holds(), String::new);
    }
    let v = validate_dg_module(compatibility.n.module());
    checks.record("j_!(M) valid", v.is_valid(), || v.to_string());
    checks.absorb("compatibility", compatibility.checks.clone());
    Ok(LambdaVariant {
        lambda,
        lambda_shriek,
        compatibility,
        checks,
    })
}
