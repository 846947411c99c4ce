//! Dense matrices over an exact field and Gaussian elimination.
//!
//! Kernels, complements and quotients are returned in canonical form (read
//! off the reduced row echelon form), so two computations of the same
//! subspace always produce identical bases.

use std::fmt;

use crate::field::Field;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.data[i * self.cols..(i + 1) * self.cols]
                .iter()
                .map(|x| format!("{x:?}"))
                .collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]({}x{})", self.rows, self.cols)
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column of wrong length");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: F) {
        self.data[i * self.cols + j] = value;
    }

    pub fn add_to(&mut self, i: usize, j: usize, value: &F) {
        let k = i * self.cols + j;
        self.data[k] = self.data[k].plus(value);
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &a.times(b));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (a, x) in self.data[i * self.cols..(i + 1) * self.cols].iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.plus(&a.times(x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn plus(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.plus(b)).collect(),
        }
    }

    pub fn minus(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.minus(b)).collect(),
        }
    }

    pub fn scaled(&self, c: &F) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.times(c)).collect(),
        }
    }

    pub fn negated(&self) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(F::negated).collect(),
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix<F> {
        Matrix::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix<F>) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn add_block(&mut self, r0: usize, c0: usize, block: &Matrix<F>) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                let x = block.get(i, j);
                if !x.is_zero() {
                    self.add_to(r0 + i, c0 + j, x);
                }
            }
        }
    }

    /// Stack blocks vertically; all must have `cols` columns.
    pub fn vstack(cols: usize, blocks: &[Matrix<F>]) -> Matrix<F> {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = Matrix::zeros(rows, cols);
        let mut r = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            out.set_block(r, 0, b);
            r += b.rows;
        }
        out
    }

    /// Stack blocks horizontally; all must have `rows` rows.
    pub fn hstack(rows: usize, blocks: &[Matrix<F>]) -> Matrix<F> {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let mut c = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            out.set_block(0, c, b);
            c += b.cols;
        }
        out
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inverse().expect("nonzero pivot");
            for j in c..m.cols {
                let x = m.get(r, j).times(&inv);
                m.set(r, j, x);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let x = m.get(i, j).minus(&factor.times(m.get(r, j)));
                    m.set(i, j, x);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical kernel basis as columns (`cols x nullity`): one vector per
    /// free variable, with a 1 in that variable.
    pub fn kernel(&self) -> Matrix<F> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k.set(f, j, F::one());
            for (i, &p) in pivots.iter().enumerate() {
                k.set(p, j, r.get(i, f).negated());
            }
        }
        k
    }

    /// The solution of `self * x = b` with all free variables zero.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let bm = Matrix::from_columns(self.rows, &[b.to_vec()]);
        self.solve_matrix(&bm).map(|x| x.column(0))
    }

    /// `X` with `self * X = rhs`, or `None` if some column is unsolvable.
    pub fn solve_matrix(&self, rhs: &Matrix<F>) -> Option<Matrix<F>> {
        assert_eq!(rhs.rows, self.rows);
        let aug = Matrix::hstack(self.rows, &[self.clone(), rhs.clone()]);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.cols, rhs.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(p, j, r.get(i, self.cols + j).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix<F>> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve_matrix(&Matrix::identity(self.rows))?;
        if self.mul(&x).is_identity() {
            Some(x)
        } else {
            None
        }
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols
    }

    pub fn is_bijective(&self) -> bool {
        self.rows == self.cols && self.rank() == self.cols
    }
}

/// The quotient of `F^n` by a subspace, with canonical complement.
///
/// The complement is spanned by the standard vectors at the non-pivot
/// positions of the subspace's reduced echelon form, so `lift` is a
/// coordinate embedding and `projection * lift = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient<F> {
    pub ambient: usize,
    /// Canonical basis of the subspace, as rows of a reduced echelon form.
    pub relations: Matrix<F>,
    pub projection: Matrix<F>,
    pub lift: Matrix<F>,
    /// Ambient coordinates that survive in the quotient.
    pub kept: Vec<usize>,
}

impl<F: Field> Quotient<F> {
    /// `span` holds the generating vectors as columns.
    pub fn new(ambient: usize, span: &Matrix<F>) -> Self {
        assert_eq!(span.rows(), ambient);
        let (r, pivots) = span.transpose().rref();
        let relations = r.submatrix(0, 0, pivots.len(), ambient);
        let kept: Vec<usize> = (0..ambient).filter(|c| !pivots.contains(c)).collect();
        let mut projection = Matrix::zeros(kept.len(), ambient);
        for (i, &k) in kept.iter().enumerate() {
            projection.set(i, k, F::one());
            for (row, &p) in pivots.iter().enumerate() {
                let coeff = relations.get(row, k);
                if !coeff.is_zero() {
                    projection.set(i, p, coeff.negated());
                }
            }
        }
        let mut lift = Matrix::zeros(ambient, kept.len());
        for (i, &k) in kept.iter().enumerate() {
            lift.set(k, i, F::one());
        }
        Quotient {
            ambient,
            relations,
            projection,
            lift,
            kept,
        }
    }

    pub fn dim(&self) -> usize {
        self.kept.len()
    }
}

/// Canonical basis (columns) of the span of the given columns.
pub fn span_basis<F: Field>(span: &Matrix<F>) -> Matrix<F> {
    let (r, pivots) = span.transpose().rref();
    r.submatrix(0, 0, pivots.len(), span.rows()).transpose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn mat(rows: &[&[i64]]) -> Matrix<Rational> {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect(), cols)
    }

    #[test]
    fn kernel_is_annihilated() {
        let a = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let k = a.kernel();
        assert_eq!(k.cols(), 1);
        assert!(a.mul(&k).is_zero());
        assert_eq!(a.rank(), 2);
    }

    #[test]
    fn solve_and_inverse() {
        let a = mat(&[&[2, 1], &[1, 1]]);
        let x = a.solve(&[q(3), q(2)]).unwrap();
        assert_eq!(x, vec![q(1), q(1)]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(mat(&[&[1, 1], &[1, 1]]).solve(&[q(1), q(0)]).is_none());
    }

    #[test]
    fn quotient_projection_kills_relations() {
        let span = mat(&[&[1], &[1], &[0]]);
        let quot = Quotient::new(3, &span);
        assert_eq!(quot.dim(), 2);
        assert!(quot.projection.mul(&span).is_zero());
        assert!(quot.projection.mul(&quot.lift).is_identity());
        assert_eq!(quot.kept, vec![1, 2]);
    }

    #[test]
    fn canonical_span_is_basis_independent() {
        let a = mat(&[&[1, 2], &[0, 1], &[1, 3]]);
        let b = mat(&[&[3, 1], &[1, 0], &[4, 1]]);
        assert_eq!(span_basis(&a), span_basis(&b));
    }
}
