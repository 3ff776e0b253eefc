//! Exact integer linear algebra: Hermite and Smith normal forms with their
//! unimodular transforms, fraction-free determinants, and rank/kernel
//! computations over the field with two elements.

use std::fmt;

use crate::scalar::{Int, IntScalar};

/// Dense row-major matrix over an integer scalar.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Arbitrary-precision integer matrix.
pub type IntMatrix = Matrix<Int>;

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.data.chunks(self.cols.max(1)).take(self.rows).collect();
        f.debug_struct("Matrix")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("data", &rows)
            .finish()
    }
}

impl<T: IntScalar> Matrix<T> {
    /// Builds a matrix from row-major data. Panics if the length does not match.
    ///
    /// Matrices with zero rows are allowed: they arise as the (empty) lattice
    /// part of one-dimensional circuits.
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::new(rows, cols, vec![T::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds a matrix from a list of rows. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix::new(r, c, data)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<T>]) -> Self {
        let mut m = Matrix::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Self {
        Matrix::new(
            rows,
            cols,
            data.iter().map(|&v| T::from_i64(v).expect("i64 conversion")).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a.clone() * rhs[(k, j)].clone();
                    let cell: &mut T = &mut out[(i, j)];
                    *cell = cell.clone() + prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return T::one();
        }
        let mut a = self.clone();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return T::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[(i, j)].clone() * a[(k, k)].clone() - a[(i, k)].clone() * a[(k, j)].clone();
                    a[(i, j)] = num / prev.clone();
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    /// True when the matrix is square with determinant ±1.
    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.determinant().abs().is_one()
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let h = hermite_normal_form(self).h;
        (0..h.rows).filter(|&i| h.row(i).iter().any(|v| !v.is_zero())).count()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += factor * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &T) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self[(source, j)].clone() * factor.clone();
            let cell: &mut T = &mut self[(target, j)];
            *cell = cell.clone() + v;
        }
    }

    /// col[target] += factor * col[source]
    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &T) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self[(i, source)].clone() * factor.clone();
            let cell: &mut T = &mut self[(i, target)];
            *cell = cell.clone() + v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self[(i, j)].clone();
            self[(i, j)] = v;
        }
    }

    /// Entry-wise reduction modulo 2.
    pub fn reduce_mod2(&self) -> Mod2Matrix {
        Mod2Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.is_odd()).collect(),
        }
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Row-style Hermite form: `u · m = h`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermiteForm<T> {
    pub h: Matrix<T>,
    pub u: Matrix<T>,
}

/// Row Hermite normal form with a unimodular left transform.
///
/// `h` is in row echelon form, pivots are positive, and entries above a pivot
/// lie in `[0, pivot)`.
pub fn hermite_normal_form<T: IntScalar>(m: &Matrix<T>) -> HermiteForm<T> {
    let mut h = m.clone();
    let mut u = Matrix::identity(m.rows);
    let mut pivot_row = 0;
    for col in 0..m.cols {
        if pivot_row == m.rows {
            break;
        }
        let mut has_pivot = false;
        loop {
            let best = (pivot_row..m.rows)
                .filter(|&i| !h[(i, col)].is_zero())
                .min_by(|&a, &b| h[(a, col)].abs().cmp(&h[(b, col)].abs()));
            let Some(best) = best else { break };
            has_pivot = true;
            h.swap_rows(best, pivot_row);
            u.swap_rows(best, pivot_row);
            let mut clean = true;
            for i in pivot_row + 1..m.rows {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let q = -h[(i, col)].div_floor(&h[(pivot_row, col)]);
                h.add_row_multiple(i, pivot_row, &q);
                u.add_row_multiple(i, pivot_row, &q);
                if !h[(i, col)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if !has_pivot {
            continue;
        }
        if h[(pivot_row, col)].is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        for i in 0..pivot_row {
            let q = -h[(i, col)].div_floor(&h[(pivot_row, col)]);
            h.add_row_multiple(i, pivot_row, &q);
            u.add_row_multiple(i, pivot_row, &q);
        }
        pivot_row += 1;
    }
    HermiteForm { h, u }
}

/// Column-style Hermite form: `m · v = h` with `h` in column echelon form.
///
/// A single row `[4, 6]` becomes `[2, 0]`.
pub fn column_hermite_normal_form<T: IntScalar>(m: &Matrix<T>) -> (Matrix<T>, Matrix<T>) {
    let HermiteForm { h, u } = hermite_normal_form(&m.transpose());
    (h.transpose(), u.transpose())
}

/// Smith form: `left · m · right = d` with `d` diagonal and d_1 | d_2 | ...
#[derive(Clone, Debug, PartialEq)]
pub struct SmithForm<T> {
    pub d: Matrix<T>,
    pub left: Matrix<T>,
    pub right: Matrix<T>,
}

impl<T: IntScalar> SmithForm<T> {
    /// Diagonal entries d_1, ..., d_min(rows, cols).
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Smith normal form with smallest-entry pivoting and exact Euclidean steps.
pub fn smith_normal_form<T: IntScalar>(m: &Matrix<T>) -> SmithForm<T> {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut left = Matrix::identity(rows);
    let mut right = Matrix::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return SmithForm { d, left, right };
            };
            d.swap_rows(t, bi);
            left.swap_rows(t, bi);
            d.swap_cols(t, bj);
            right.swap_cols(t, bj);

            let mut clean = true;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                left.add_row_multiple(i, t, &q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                right.add_col_multiple(j, t, &q);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let pivot = d[(t, t)].clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    d.add_row_multiple(t, i, &T::one());
                    left.add_row_multiple(t, i, &T::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            left.negate_row(t);
        }
    }
    SmithForm { d, left, right }
}

/// Basis of the integer kernel {x : m·x = 0}, as the columns of the result.
///
/// The returned lattice basis is saturated.
pub fn integer_kernel<T: IntScalar>(m: &Matrix<T>) -> Matrix<T> {
    let (h, v) = column_hermite_normal_form(m);
    let zero_cols: Vec<usize> = (0..h.cols).filter(|&j| h.column(j).iter().all(|x| x.is_zero())).collect();
    let cols: Vec<Vec<T>> = zero_cols.iter().map(|&j| v.column(j)).collect();
    Matrix::from_columns(m.cols, &cols)
}

/// Dense matrix over the field with two elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mod2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<bool>,
}

impl Mod2Matrix {
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.cols + j]
    }

    /// Reduced row echelon form and the pivot columns.
    fn rref(&self) -> (Vec<Vec<bool>>, Vec<usize>) {
        let mut rows: Vec<Vec<bool>> = (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect();
        let pivots = rref_in_place(&mut rows, self.cols);
        (rows, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }
}

fn rref_in_place(rows: &mut [Vec<bool>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c]) else { continue };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i][c] {
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot_row) {
                    *x ^= y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Linearly independent 0/1 vectors spanning a subspace of (Z/2)^dim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mod2Basis {
    pub dim: usize,
    pub vectors: Vec<Vec<u8>>,
}

impl Mod2Basis {
    /// Index of the first nonzero coordinate of each basis vector.
    pub fn leading_indices(&self) -> Vec<usize> {
        self.vectors
            .iter()
            .map(|v| v.iter().position(|&x| x == 1).expect("basis vectors are nonzero"))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Membership test for the span.
    pub fn contains(&self, v: &[u8]) -> bool {
        let mut rows: Vec<Vec<bool>> = self.vectors.iter().map(|b| b.iter().map(|&x| x == 1).collect()).collect();
        let before = rref_in_place(&mut rows, self.dim).len();
        rows.push(v.iter().map(|&x| x % 2 == 1).collect());
        rref_in_place(&mut rows, self.dim).len() == before
    }
}

/// Rank of the reduction modulo 2.
pub fn rank_mod2<T: IntScalar>(m: &Matrix<T>) -> usize {
    m.reduce_mod2().rank()
}

/// Basis of the kernel of the reduction modulo 2, in reduced row echelon
/// form: leading ones sit at strictly increasing indices and every other
/// basis vector vanishes at each leading index.
pub fn kernel_mod2<T: IntScalar>(m: &Matrix<T>) -> Mod2Basis {
    let m2 = m.reduce_mod2();
    let (rref, pivots) = m2.rref();
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    let mut vectors: Vec<Vec<bool>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![false; m.cols];
            v[f] = true;
            for (row, &p) in pivots.iter().enumerate() {
                if rref[row][f] {
                    v[p] = true;
                }
            }
            v
        })
        .collect();
    rref_in_place(&mut vectors, m.cols);
    Mod2Basis {
        dim: m.cols,
        vectors: vectors.into_iter().map(|v| v.into_iter().map(u8::from).collect()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: usize, cols: usize, data: &[i64]) -> IntMatrix {
        IntMatrix::from_i64(rows, cols, data)
    }

    #[test]
    fn hermite_of_identity_is_identity() {
        let id = IntMatrix::identity(3);
        let HermiteForm { h, u } = hermite_normal_form(&id);
        assert_eq!(h, id);
        assert_eq!(u, id);
    }

    #[test]
    fn hermite_two_by_two() {
        let m = im(2, 2, &[2, 1, 0, 1]);
        let HermiteForm { h, u } = hermite_normal_form(&m);
        assert_eq!(u.mul(&m), h);
        assert!(u.is_unimodular());
        // pivots 2 and 1, entry above the second pivot reduced to [0, 1)
        assert_eq!(h, im(2, 2, &[2, 0, 0, 1]));
    }

    #[test]
    fn single_row_hermite_in_both_conventions() {
        let m = im(1, 2, &[4, 6]);
        // Row style cannot mix columns: the row is left alone.
        assert_eq!(hermite_normal_form(&m).h, m);
        let (h, v) = column_hermite_normal_form(&m);
        assert_eq!(h, im(1, 2, &[2, 0]));
        assert_eq!(m.mul(&v), h);
        assert!(v.is_unimodular());
    }

    #[test]
    fn smith_examples() {
        let id = IntMatrix::identity(3);
        let s = smith_normal_form(&id);
        assert_eq!(s.d, id);
        assert_eq!(s.left, id);
        assert_eq!(s.right, id);

        let m = im(2, 2, &[2, 1, 0, 1]);
        let s = smith_normal_form(&m);
        assert_eq!(s.d, im(2, 2, &[1, 0, 0, 2]));
        assert_eq!(s.left.mul(&m).mul(&s.right), s.d);
        assert!(s.left.is_unimodular() && s.right.is_unimodular());

        let m = im(2, 2, &[2, 0, 0, 2]);
        assert_eq!(smith_normal_form(&m).d, m);
    }

    #[test]
    fn smith_of_zero_and_rectangular() {
        let z = IntMatrix::zeros(2, 3);
        let s = smith_normal_form(&z);
        assert!(s.d.is_zero());
        let m = im(2, 3, &[2, 4, 4, -6, 6, 12]);
        let s = smith_normal_form(&m);
        assert_eq!(s.left.mul(&m).mul(&s.right), s.d);
        assert_eq!(s.diagonal(), vec![Int::from(2), Int::from(6)]);
    }

    #[test]
    fn bareiss_determinants() {
        assert_eq!(im(2, 2, &[2, 1, 0, 1]).determinant(), Int::from(2));
        assert_eq!(im(3, 3, &[0, 1, 2, 1, 0, 3, 4, -3, 8]).determinant(), Int::from(-2));
        assert_eq!(im(2, 2, &[1, 2, 2, 4]).determinant(), Int::from(0));
    }

    #[test]
    fn generic_over_machine_integers() {
        let m: Matrix<i64> = Matrix::from_i64(2, 2, &[2, 1, 0, 1]);
        let s = smith_normal_form(&m);
        assert_eq!(s.diagonal(), vec![1, 2]);
        assert_eq!(m.determinant(), 2);
    }

    #[test]
    fn mod2_rank_examples() {
        assert_eq!(rank_mod2(&im(2, 2, &[2, 4, -6, 8])), 0);
        assert_eq!(rank_mod2(&IntMatrix::identity(4)), 4);
        // columns (1,0), (0,1), (2,-2)
        assert_eq!(rank_mod2(&im(2, 3, &[1, 0, 2, 0, 1, -2])), 2);
    }

    #[test]
    fn mod2_kernel_examples() {
        assert!(kernel_mod2(&IntMatrix::identity(3)).is_empty());
        let k = kernel_mod2(&IntMatrix::zeros(2, 3));
        assert_eq!(k.vectors, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        // columns (0,0) and (1,1)
        let k = kernel_mod2(&im(2, 2, &[0, 1, 0, 1]));
        assert_eq!(k.vectors, vec![vec![1, 0]]);
    }

    #[test]
    fn kernel_basis_is_reduced() {
        let m = im(1, 4, &[1, 1, 1, 1]);
        let k = kernel_mod2(&m);
        assert_eq!(k.len(), 3);
        let lead = k.leading_indices();
        assert!(lead.windows(2).all(|w| w[0] < w[1]));
        for (a, &s) in lead.iter().enumerate() {
            for (b, v) in k.vectors.iter().enumerate() {
                assert_eq!(v[s] == 1, a == b);
            }
        }
    }

    #[test]
    fn integer_kernel_of_relation_matrix() {
        // columns e1, e2, 2e1 - 2e2: kernel spanned by (2, -2, -1)
        let m = im(2, 3, &[1, 0, 2, 0, 1, -2]);
        let k = integer_kernel(&m);
        assert_eq!(k.cols(), 1);
        let v = k.column(0);
        assert!(m.mul_vec(&v).iter().all(|x| x == &Int::from(0)));
        let g = v.iter().fold(Int::from(0), |g, x| num_integer::Integer::gcd(&g, x));
        assert_eq!(g, Int::from(1));
    }
}
