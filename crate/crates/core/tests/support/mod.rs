//! Brute-force oracles shared by the integration tests.
//!
//! Ends and coends are assembled here from scratch: one linear equation
//! block per homogeneous basis morphism, in a layout of the diagonal sum
//! that is independent of the library's.

#![allow(dead_code)]

use std::collections::BTreeMap;

use dgcat::category::DgCategory;
use dgcat::complex::TensorLayout;
use dgcat::ends::{coend_of_bifunctor, end_of_bifunctor};
use dgcat::field::Field;
use dgcat::graded::GradedMap;
use dgcat::linalg::{span_basis, Matrix};
use dgcat::module::Bimodule;

/// A homogeneous morphism `x → y` given by a flat vector.
#[derive(Clone, Debug)]
pub struct Arrow<F> {
    pub from: usize,
    pub to: usize,
    pub vector: Vec<F>,
    pub degree: i32,
}

pub fn basis_arrows<F: Field>(c: &DgCategory<F>) -> Vec<Arrow<F>> {
    let mut out = Vec::new();
    for x in 0..c.object_count() {
        for y in 0..c.object_count() {
            for i in 0..c.hom_dim(x, y) {
                out.push(Arrow {
                    from: x,
                    to: y,
                    vector: c.basis_vector(x, y, i),
                    degree: c.basis_degree(x, y, i),
                });
            }
        }
    }
    out
}

/// `T(α ⊗ β)` on the value at `(x, y)`, for `α ∈ first(x, x2)` and
/// `β ∈ second(y, y2)`, through the underlying module.
pub fn act_pair<F: Field>(
    t: &Bimodule<F>,
    (x, y): (usize, usize),
    (x2, y2): (usize, usize),
    alpha: &[F],
    beta: &[F],
    degree: i32,
) -> GradedMap<F> {
    let layout = TensorLayout::new(t.first().hom(x, x2).space(), t.second().hom(y, y2).space());
    t.module()
        .act(t.pair(x, y), t.pair(x2, y2), &layout.tensor(alpha, beta), degree)
}

/// Degree-`n` layout of `⊕_A T(A, A)`: objects in order, each block in the
/// value's own coordinates.
pub struct Diagonal {
    pub offsets: Vec<usize>,
    pub dim: usize,
}

pub fn diagonal<F: Field>(t: &Bimodule<F>, n: i32) -> Diagonal {
    let mut offsets = Vec::new();
    let mut dim = 0;
    for a in 0..t.second().object_count() {
        offsets.push(dim);
        dim += t.value(a, a).dim(n);
    }
    Diagonal { offsets, dim }
}

pub fn degrees<F: Field>(t: &Bimodule<F>) -> Vec<i32> {
    let mut ds: Vec<i32> = (0..t.second().object_count())
        .flat_map(|a| t.value(a, a).space().support().collect::<Vec<_>>())
        .collect();
    ds.sort();
    ds.dedup();
    ds
}

fn all_degrees<F: Field>(t: &Bimodule<F>) -> Vec<i32> {
    let mut ds = degrees(t);
    if let (Some(&lo), Some(&hi)) = (ds.first(), ds.last()) {
        ds = (lo - 1..=hi + 1).collect();
    }
    ds
}

/// Block-diagonal differential `⊕_A T(A, A)^n → ⊕_A T(A, A)^{n+1}`.
pub fn diagonal_differential<F: Field>(t: &Bimodule<F>, n: i32) -> Matrix<F> {
    let (src, tgt) = (diagonal(t, n), diagonal(t, n + 1));
    let mut m = Matrix::zeros(tgt.dim, src.dim);
    for a in 0..t.second().object_count() {
        m.set_block(tgt.offsets[a], src.offsets[a], &t.value(a, a).d_block(n));
    }
    m
}

/// Canonical basis of the families satisfying `T(1 ⊗ f) x_A = T(f^op ⊗ 1) x_B`
/// for every given arrow `f: A → B`, per degree.
pub fn end_subspace<F: Field>(t: &Bimodule<F>, arrows: &[Arrow<F>]) -> BTreeMap<i32, Matrix<F>> {
    let a = t.second();
    let mut out = BTreeMap::new();
    for n in degrees(t) {
        let d = diagonal(t, n);
        let mut rows = Vec::new();
        for f in arrows {
            let (x, y) = (f.from, f.to);
            let height = t.value(x, y).dim(n + f.degree);
            if height == 0 {
                continue;
            }
            let mut block = Matrix::zeros(height, d.dim);
            let left = act_pair(t, (x, x), (x, y), a.identity(x), &f.vector, f.degree).block_or_zero(n);
            let right = act_pair(t, (y, y), (x, y), &f.vector, a.identity(y), f.degree).block_or_zero(n);
            block.add_block(0, d.offsets[x], &left);
            block.add_block(0, d.offsets[y], &right.negated());
            rows.push(block);
        }
        let k = Matrix::vstack(d.dim, &rows).kernel();
        if k.cols() > 0 {
            out.insert(n, span_basis(&k));
        }
    }
    out
}

/// Canonical basis of the span of `T(1 ⊗ f)(x) − T(f^op ⊗ 1)(x)` over basis
/// arrows `f: A → B` and basis `x ∈ T(B, A)`, per degree.
pub fn coend_relations<F: Field>(t: &Bimodule<F>) -> BTreeMap<i32, Matrix<F>> {
    let a = t.second();
    let mut cols: BTreeMap<i32, Vec<Vec<F>>> = BTreeMap::new();
    for f in basis_arrows(a) {
        let (x, y) = (f.from, f.to);
        let value = t.value(y, x);
        let left = act_pair(t, (y, x), (y, y), a.identity(y), &f.vector, f.degree);
        let right = act_pair(t, (y, x), (x, x), &f.vector, a.identity(x), f.degree);
        for j in value.space().support() {
            let n = j + f.degree;
            let d = diagonal(t, n);
            for k in 0..value.dim(j) {
                let mut e = vec![F::zero(); value.dim(j)];
                e[k] = F::one();
                let mut col = vec![F::zero(); d.dim];
                for (r, c) in left.apply(j, &e).into_iter().enumerate() {
                    col[d.offsets[y] + r] = col[d.offsets[y] + r].plus(&c);
                }
                for (r, c) in right.apply(j, &e).into_iter().enumerate() {
                    col[d.offsets[x] + r] = col[d.offsets[x] + r].minus(&c);
                }
                cols.entry(n).or_default().push(col);
            }
        }
    }
    cols.into_iter()
        .filter_map(|(n, cs)| {
            let b = span_basis(&Matrix::from_columns(diagonal(t, n).dim, &cs));
            (b.cols() > 0).then_some((n, b))
        })
        .collect()
}

fn same_span<F: Field>(a: Option<&Matrix<F>>, b: Option<&Matrix<F>>) -> bool {
    let cols = |m: Option<&Matrix<F>>| m.map_or(0, |m| m.cols());
    match (a, b) {
        (Some(a), Some(b)) => span_basis(a) == span_basis(b),
        _ => cols(a) == 0 && cols(b) == 0,
    }
}

/// The library's end against the oracle: same subspace of the diagonal sum
/// in every degree, injective projections, and the library differential is
/// the restriction of the diagonal one.
pub fn check_end<F: Field>(t: &Bimodule<F>) -> Result<(), String> {
    let lib = end_of_bifunctor(t).map_err(|e| e.to_string())?;
    let oracle = end_subspace(t, &basis_arrows(t.second()));
    let stacked = |n: i32| {
        let d = diagonal(t, n);
        let mut m = Matrix::zeros(d.dim, lib.total.dim(n));
        for (a, p) in lib.projections.iter().enumerate() {
            m.set_block(d.offsets[a], 0, &p.block_or_zero(n));
        }
        m
    };
    for n in all_degrees(t) {
        let s = stacked(n);
        if lib.total.dim(n) != oracle.get(&n).map_or(0, |b| b.cols()) {
            return Err(format!("end dimension differs in degree {n}"));
        }
        if s.rank() != s.cols() || !same_span(Some(&s), oracle.get(&n)) {
            return Err(format!("end subspace differs in degree {n}"));
        }
        let lhs = stacked(n + 1).mul(&lib.total.d_block(n));
        let rhs = diagonal_differential(t, n).mul(&s);
        if lhs != rhs {
            return Err(format!("end differential differs in degree {n}"));
        }
    }
    Ok(())
}

/// The library's coend against the oracle: `[μ_A]` is onto with kernel the
/// oracle's relations, and commutes with the differentials.
pub fn check_coend<F: Field>(t: &Bimodule<F>) -> Result<(), String> {
    let lib = coend_of_bifunctor(t).map_err(|e| e.to_string())?;
    let relations = coend_relations(t);
    let joined = |n: i32| {
        let d = diagonal(t, n);
        let mut m = Matrix::zeros(lib.total.dim(n), d.dim);
        for (a, mu) in lib.injections.iter().enumerate() {
            m.set_block(0, d.offsets[a], &mu.block_or_zero(n));
        }
        m
    };
    for n in all_degrees(t) {
        let mu = joined(n);
        let d = diagonal(t, n);
        let rel = relations.get(&n).map_or(0, |b| b.cols());
        if lib.total.dim(n) + rel != d.dim {
            return Err(format!("coend dimension differs in degree {n}"));
        }
        if mu.rank() != mu.rows() || !same_span(Some(&mu.kernel()), relations.get(&n)) {
            return Err(format!("coend relations differ in degree {n}"));
        }
        let lhs = lib.total.d_block(n).mul(&mu);
        let rhs = joined(n + 1).mul(&diagonal_differential(t, n));
        if lhs != rhs {
            return Err(format!("coend differential differs in degree {n}"));
        }
    }
    Ok(())
}
