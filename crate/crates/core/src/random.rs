//! Seeded generators of small dg-categories, modules and bifunctors, and
//! single-entry corruptions of category presentations.
//!
//! Categories are sub-dg-categories of the dg-category of small complexes:
//! a few random homogeneous maps are closed under composition and the Hom
//! differential, then every hom basis is changed by a random invertible
//! matrix so the tables are dense.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::category::{densify, CategoryBuilder, DgCategory};
use crate::complex::{hom_coords, hom_differential, hom_map, hom_space, Complex};
use crate::field::Field;
use crate::graded::{GradedMap, GradedSpace};
use crate::linalg::{span_basis, Matrix};
use crate::module::{direct_sum_modules, hom_bifunctor, representable, Bimodule, DgModule};
use crate::report::Law;

/// Seeded generator used throughout.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_objects: usize,
    pub min_degree: i32,
    pub max_degree: i32,
    /// Largest dimension of any hom in any single degree.
    pub max_dim: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_objects: 3,
            min_degree: -2,
            max_degree: 2,
            max_dim: 2,
        }
    }
}

fn small<F: Field>(rng: &mut impl Rng) -> F {
    F::from_int(rng.gen_range(-2..=2))
}

fn nonzero<F: Field>(rng: &mut impl Rng) -> F {
    F::from_int(*[-2, -1, 1, 2].get(rng.gen_range(0..4)).expect("in range"))
}

/// A random invertible `n × n` matrix with small entries.
pub fn invertible<F: Field>(rng: &mut impl Rng, n: usize) -> Matrix<F> {
    loop {
        let m = Matrix::from_fn(n, n, |i, j| if i == j { nonzero(rng) } else { small(rng) });
        if m.rank() == n {
            return m;
        }
    }
}

/// A complex of total dimension 1 or 2 in degrees `[-1, 1]`.
fn small_complex<F: Field>(rng: &mut impl Rng, name: &str) -> Complex<F> {
    let lo = rng.gen_range(-1..=1);
    if rng.gen_bool(0.5) {
        return Complex::line(lo, &format!("{name}0"));
    }
    let hi = if lo < 1 && rng.gen_bool(0.6) { lo + 1 } else { lo };
    let mut parts: BTreeMap<i32, Vec<String>> = BTreeMap::new();
    parts.entry(lo).or_default().push(format!("{name}0"));
    parts.entry(hi).or_default().push(format!("{name}1"));
    let space = GradedSpace::new(parts).expect("distinct labels");
    let d = GradedMap::from_fn(&space, &space, 1, |i| {
        (i == lo && hi == lo + 1).then(|| Matrix::from_rows(vec![vec![small(rng)]], 1))
    });
    Complex::new(space, d).expect("degree-one differential")
}

type Spans<F> = BTreeMap<(usize, usize), BTreeMap<i32, Vec<Vec<F>>>>;

fn reduce<F: Field>(spans: &mut Spans<F>, homs: &BTreeMap<(usize, usize), GradedSpace>) -> usize {
    let mut total = 0;
    for ((x, y), per) in spans.iter_mut() {
        for (k, cols) in per.iter_mut() {
            let basis = span_basis(&Matrix::from_columns(homs[&(*x, *y)].dim(*k), cols));
            *cols = basis.columns();
            total += cols.len();
        }
    }
    total
}

/// A random valid dg-category within the bounds, or `None` when the
/// closure of the chosen generators grows past them.
fn try_category<F: Field>(rng: &mut impl Rng, bounds: &Bounds) -> Option<DgCategory<F>> {
    let n = rng.gen_range(1..=bounds.max_objects);
    let objects: Vec<Complex<F>> = (0..n).map(|i| small_complex(rng, &format!("v{i}."))).collect();
    let mut homs = BTreeMap::new();
    for x in 0..n {
        for y in 0..n {
            homs.insert((x, y), hom_space(objects[x].space(), objects[y].space()));
        }
    }
    let mut spans: Spans<F> = BTreeMap::new();
    for (x, obj) in objects.iter().enumerate() {
        let id = hom_coords(&GradedMap::identity(obj.space()));
        spans.entry((x, x)).or_default().entry(0).or_default().push(id);
    }
    for _ in 0..rng.gen_range(1..=3) {
        let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let degrees: Vec<i32> = homs[&(x, y)].support().collect();
        if degrees.is_empty() {
            continue;
        }
        let k = degrees[rng.gen_range(0..degrees.len())];
        let v: Vec<F> = (0..homs[&(x, y)].dim(k)).map(|_| small(rng)).collect();
        spans.entry((x, y)).or_default().entry(k).or_default().push(v);
    }
    let map = |x: usize, y: usize, k: i32, v: &[F]| hom_map(objects[x].space(), objects[y].space(), k, v);
    let mut size = reduce(&mut spans, &homs);
    loop {
        let snapshot = spans.clone();
        for ((x, y), per) in &snapshot {
            for (k, cols) in per {
                for v in cols {
                    let d = hom_differential(&objects[*x], &objects[*y], &map(*x, *y, *k, v));
                    let dv = hom_coords(&d);
                    spans.entry((*x, *y)).or_default().entry(k + 1).or_default().push(dv);
                }
            }
        }
        for ((x, y), per_f) in &snapshot {
            for ((y2, z), per_g) in &snapshot {
                if y != y2 {
                    continue;
                }
                for (kf, fs) in per_f {
                    for (kg, gs) in per_g {
                        for f in fs {
                            for g in gs {
                                let gf = map(*y, *z, *kg, g).compose(&map(*x, *y, *kf, f));
                                let v = hom_coords(&gf);
                                spans.entry((*x, *z)).or_default().entry(kf + kg).or_default().push(v);
                            }
                        }
                    }
                }
            }
        }
        let grown = reduce(&mut spans, &homs);
        let too_big = spans.values().flat_map(|p| p.iter()).any(|(k, cols)| {
            cols.len() > bounds.max_dim || (!cols.is_empty() && (*k < bounds.min_degree || *k > bounds.max_degree))
        });
        if too_big {
            return None;
        }
        if grown == size {
            break;
        }
        size = grown;
    }
    // Gauge: new basis columns B·G per hom and degree.
    let mut bases: BTreeMap<(usize, usize), BTreeMap<i32, Matrix<F>>> = BTreeMap::new();
    for ((x, y), per) in &spans {
        for (k, cols) in per {
            if cols.is_empty() {
                continue;
            }
            let b = Matrix::from_columns(homs[&(*x, *y)].dim(*k), cols);
            let g = invertible(rng, cols.len());
            bases.entry((*x, *y)).or_default().insert(*k, b.mul(&g));
        }
    }
    Some(assemble(&objects, &bases))
}

fn assemble<F: Field>(
    objects: &[Complex<F>],
    bases: &BTreeMap<(usize, usize), BTreeMap<i32, Matrix<F>>>,
) -> DgCategory<F> {
    let n = objects.len();
    let empty = BTreeMap::new();
    let basis_of = |x: usize, y: usize| bases.get(&(x, y)).unwrap_or(&empty);
    let mut b = CategoryBuilder::new();
    for x in 0..n {
        b.object(&format!("x{x}")).expect("distinct objects");
    }
    let mut spaces = BTreeMap::new();
    for x in 0..n {
        for y in 0..n {
            let mut parts = BTreeMap::new();
            let mut counter = 0;
            for (k, m) in basis_of(x, y) {
                let labels: Vec<String> = (0..m.cols()).map(|i| format!("f{x}{y}.{}", counter + i)).collect();
                counter += m.cols();
                parts.insert(*k, labels);
            }
            spaces.insert((x, y), GradedSpace::new(parts).expect("distinct labels"));
        }
    }
    // Flat coordinates of an ambient graded map in the chosen basis.
    let coords = |x: usize, y: usize, map: &GradedMap<F>| -> Vec<F> {
        let space = &spaces[&(x, y)];
        let mut out = vec![F::zero(); space.total_dim()];
        let v = hom_coords(map);
        let k = map.degree();
        if let Some(m) = basis_of(x, y).get(&k) {
            let sol = m.solve(&v).expect("closed under the operations");
            out[space.offset(k)..space.offset(k) + sol.len()].clone_from_slice(&sol);
        } else {
            assert!(v.iter().all(Field::is_zero), "closed under the operations");
        }
        out
    };
    let basis_map = |x: usize, y: usize, p: usize| -> GradedMap<F> {
        let (k, i) = spaces[&(x, y)].locate(p);
        hom_map(objects[x].space(), objects[y].space(), k, &basis_of(x, y)[&k].column(i))
    };
    for x in 0..n {
        for y in 0..n {
            let space = spaces[&(x, y)].clone();
            if space.is_zero() {
                continue;
            }
            let d = GradedMap::from_columns_fn(&space, &space, 1, |p| {
                coords(x, y, &hom_differential(&objects[x], &objects[y], &basis_map(x, y, p)))
            });
            b.hom(x, y, Complex::new(space, d).expect("degree-one differential"));
        }
        b.identity(x, coords(x, x, &GradedMap::identity(objects[x].space())));
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for g in 0..spaces[&(y, z)].total_dim() {
                    for f in 0..spaces[&(x, y)].total_dim() {
                        let gf = basis_map(y, z, g).compose(&basis_map(x, y, f));
                        let v = coords(x, z, &gf);
                        if v.iter().any(|c| !c.is_zero()) {
                            b.compose(x, y, z, g, f, v);
                        }
                    }
                }
            }
        }
    }
    b.build().expect("well-formed presentation")
}

pub fn random_category<F: Field>(rng: &mut impl Rng, bounds: &Bounds) -> DgCategory<F> {
    loop {
        if let Some(c) = try_category(rng, bounds) {
            return c;
        }
    }
}

/// A direct sum of one or two shifted representables, in a random basis.
pub fn random_module<F: Field>(rng: &mut impl Rng, c: &DgCategory<F>) -> DgModule<F> {
    let count = rng.gen_range(1..=2);
    let parts: Vec<DgModule<F>> = (0..count)
        .map(|_| representable(c, rng.gen_range(0..c.object_count())).regraded(rng.gen_range(-1..=1)))
        .collect();
    let named: Vec<(String, &DgModule<F>)> = parts.iter().enumerate().map(|(i, m)| (format!("s{i}"), m)).collect();
    let refs: Vec<(&str, &DgModule<F>)> = named.iter().map(|(s, m)| (s.as_str(), *m)).collect();
    let sum = direct_sum_modules(c, &refs).expect("same base");
    gauge_module(rng, &sum)
}

/// The same module in a random basis of every value.
pub fn gauge_module<F: Field>(rng: &mut impl Rng, m: &DgModule<F>) -> DgModule<F> {
    let gauge: Vec<BTreeMap<i32, Matrix<F>>> = m
        .values()
        .iter()
        .map(|v| v.space().support().map(|d| (d, invertible(rng, v.dim(d)))).collect())
        .collect();
    m.conjugated(&gauge)
}

/// A bifunctor over `op(A) ⊗ A`: the Hom bifunctor, a tensor of random
/// modules or a Hom between random modules, in a random basis.
pub fn random_bifunctor<F: Field>(rng: &mut impl Rng, a: &DgCategory<F>) -> Bimodule<F> {
    let op = a.opposite();
    let t = match rng.gen_range(0..3) {
        0 => hom_bifunctor(a),
        1 => crate::ends::tensor_bifunctor(&random_module(rng, &op), &random_module(rng, a)).expect("matching bases"),
        _ => crate::nat::hom_modules_bifunctor(&random_module(rng, a), &random_module(rng, a)).expect("same base"),
    };
    let module = gauge_module(rng, t.module());
    Bimodule::from_module(&op, a, module).expect("same base")
}

/// Where a corruption was injected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Corruption {
    /// Entry `(row, col)` of the degree-`degree` differential block of `hom(from, to)`.
    Differential {
        from: String,
        to: String,
        degree: i32,
        row: usize,
        col: usize,
    },
    /// Coefficient `entry` of `g ∘ f` with `g` a basis element of `hom(y, y)`
    /// that occurs in the identity of `y`.
    Composition {
        x: String,
        y: String,
        g: String,
        f: String,
        entry: usize,
    },
}

impl Corruption {
    /// The law the validator must report.
    pub fn law(&self) -> Law {
        match self {
            Corruption::Differential { .. } => Law::DifferentialSquare,
            Corruption::Composition { .. } => Law::LeftUnit,
        }
    }
}

/// Flip the sign of one table entry so that a specific law provably breaks.
///
/// A differential entry `(q, p)` is eligible when `d(e_q) ≠ 0` or some
/// basis vector maps onto `e_p`: then `d²` changes by a nonzero amount. A
/// composition entry of `e_k ∘ f` is eligible when the identity has a
/// nonzero `e_k` coefficient: then `1 ∘ f` changes.
pub fn corrupt<F: Field>(rng: &mut impl Rng, c: &DgCategory<F>) -> (DgCategory<F>, Corruption) {
    let n = c.object_count();
    let mut diff = Vec::new();
    let mut comp = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let h = c.hom(x, y);
            for k in h.space().support() {
                let block = h.d_block(k);
                let next = h.d_block(k + 1);
                let prev = h.d_block(k - 1);
                for q in 0..block.rows() {
                    for p in 0..block.cols() {
                        if block.get(q, p).is_zero() {
                            continue;
                        }
                        let dq = next.cols() > q && (0..next.rows()).any(|r| !next.get(r, q).is_zero());
                        let hit = prev.rows() > p && prev.row(p).iter().any(|v| !v.is_zero());
                        if dq || hit {
                            diff.push((x, y, k, q, p));
                        }
                    }
                }
            }
            let id = c.identity(y);
            for (g, coeff) in id.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                for f in 0..c.hom_dim(x, y) {
                    for (r, v) in c.compose_basis(x, y, y, g, f) {
                        if !v.is_zero() {
                            comp.push((x, y, g, f, *r));
                        }
                    }
                }
            }
        }
    }
    let mut b = c.to_builder();
    if !diff.is_empty() && (comp.is_empty() || rng.gen_bool(0.5)) {
        let (x, y, k, q, p) = diff[rng.gen_range(0..diff.len())];
        let h = c.hom(x, y);
        let d = GradedMap::from_fn(h.space(), h.space(), 1, |i| {
            let mut m = h.d_block(i);
            if i == k {
                let flipped = m.get(q, p).negated();
                m.set(q, p, flipped);
            }
            Some(m)
        });
        b.hom(x, y, Complex::new(h.space().clone(), d).expect("degree-one map"));
        let where_ = Corruption::Differential {
            from: c.label(x).to_string(),
            to: c.label(y).to_string(),
            degree: k,
            row: q,
            col: p,
        };
        return (b.build().expect("same shapes"), where_);
    }
    let (x, y, g, f, r) = comp[rng.gen_range(0..comp.len())];
    let mut v = densify(c.compose_basis(x, y, y, g, f), c.hom_dim(x, y));
    v[r] = v[r].negated();
    b.compose(x, y, y, g, f, v);
    let where_ = Corruption::Composition {
        x: c.label(x).to_string(),
        y: c.label(y).to_string(),
        g: c.basis_label(y, y, g),
        f: c.basis_label(x, y, f),
        entry: r,
    };
    (b.build().expect("same shapes"), where_)
}
