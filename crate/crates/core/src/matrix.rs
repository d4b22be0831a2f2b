//! Dense matrices and the eliminations the rest of the crate needs:
//! determinants, linear solves, inverses and kernels.

use std::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::{Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    /// Row-major construction. Panics if `data.len() != rows * cols`.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<S>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Self { rows, cols, data }
    }

    /// Builds from equal-length rows. Returns `None` when row lengths differ.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Option<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        let n_rows = rows.len();
        Some(Self {
            rows: n_rows,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let v = (0..self.cols).fold(S::zero(), |acc, k| acc + self[(i, k)].clone() * other[(k, j)].clone());
                out.set(i, j, v);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self[(i, j)].clone());
            }
        }
        out
    }

    pub fn max_abs(&self) -> S {
        self.data
            .iter()
            .map(Scalar::magnitude)
            .fold(S::zero(), |acc, x| if x > acc { x } else { acc })
    }

    pub fn determinant(&self) -> S {
        assert!(self.is_square(), "determinant of a non-square matrix");
        S::determinant(self)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

/// Fraction-free (Bareiss) elimination after clearing row denominators.
pub fn bareiss_determinant(m: &Matrix<Rational>) -> Rational {
    let n = m.rows();
    assert!(m.is_square(), "determinant of a non-square matrix");
    if n == 0 {
        return Rational::one();
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let row = m.row(i);
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &lcm;
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect();

    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Rational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    let det = if negate { -det } else { det };
    Rational::new(det, scale)
}

/// LU elimination with partial pivoting.
pub fn lu_determinant<S: Scalar>(m: &Matrix<S>) -> S {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    let mut a = m.clone();
    let mut det = S::one();
    for k in 0..n {
        let mut pivot = k;
        for i in k + 1..n {
            if a[(i, k)].magnitude() > a[(pivot, k)].magnitude() {
                pivot = i;
            }
        }
        if a[(pivot, k)].is_zero() {
            return S::zero();
        }
        if pivot != k {
            a.swap_rows(pivot, k);
            det = -det;
        }
        let p = a[(k, k)].clone();
        det = det * p.clone();
        for i in k + 1..n {
            let factor = a[(i, k)].clone() / p.clone();
            if factor.is_zero() {
                continue;
            }
            for j in k + 1..n {
                let v = a[(i, j)].clone() - factor.clone() * a[(k, j)].clone();
                a.set(i, j, v);
            }
        }
    }
    det
}

/// Reduced row-echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon<S> {
    pub reduced: Matrix<S>,
    pub pivot_cols: Vec<usize>,
}

impl<S: Scalar> Echelon<S> {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }
}

/// Picks a pivot row for column `col` among rows `from..`.
///
/// Float mode takes the largest magnitude (lowest index on ties); exact mode
/// takes the first nonzero entry.
pub(crate) fn select_pivot<S: Scalar>(candidates: impl Iterator<Item = (usize, S)>, reference: &S) -> Option<usize> {
    if S::pivot_by_magnitude() {
        let mut best: Option<(usize, S)> = None;
        for (i, v) in candidates {
            let mag = v.magnitude();
            if best.as_ref().is_none_or(|(_, b)| mag > *b) {
                best = Some((i, mag));
            }
        }
        best.filter(|(_, mag)| !mag.is_zero() && !mag.is_negligible(reference))
            .map(|(i, _)| i)
    } else {
        candidates
            .into_iter()
            .find(|(_, v)| !v.is_negligible(reference))
            .map(|(i, _)| i)
    }
}

/// Gauss-Jordan elimination over the first `pivot_limit` columns.
fn gauss_jordan<S: Scalar>(m: &Matrix<S>, pivot_limit: usize) -> Echelon<S> {
    let mut a = m.clone();
    let mut reference = a.max_abs();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..pivot_limit.min(a.cols()) {
        if row == a.rows() {
            break;
        }
        let candidates = (row..a.rows()).map(|i| (i, a[(i, col)].clone()));
        let Some(pivot) = select_pivot(candidates, &reference) else {
            continue;
        };
        a.swap_rows(pivot, row);
        let p = a[(row, col)].clone();
        if p.magnitude() > reference {
            reference = p.magnitude();
        }
        for j in 0..a.cols() {
            let v = a[(row, j)].clone() / p.clone();
            a.set(row, j, v);
        }
        for i in 0..a.rows() {
            if i == row {
                continue;
            }
            let factor = a[(i, col)].clone();
            if factor.is_zero() {
                continue;
            }
            for j in 0..a.cols() {
                let v = a[(i, j)].clone() - factor.clone() * a[(row, j)].clone();
                a.set(i, j, v);
            }
            a.set(i, col, S::zero());
        }
        pivot_cols.push(col);
        row += 1;
    }
    Echelon { reduced: a, pivot_cols }
}

pub fn row_echelon<S: Scalar>(m: &Matrix<S>) -> Echelon<S> {
    gauss_jordan(m, m.cols())
}

pub fn rank<S: Scalar>(m: &Matrix<S>) -> usize {
    row_echelon(m).rank()
}

/// A nonzero kernel vector, or `None` when the columns are independent.
///
/// The vector has a 1 at the first free column.
pub fn kernel_vector<S: Scalar>(m: &Matrix<S>) -> Option<Vec<S>> {
    let ech = row_echelon(m);
    let free = (0..m.cols()).find(|c| !ech.pivot_cols.contains(c))?;
    let mut x = vec![S::zero(); m.cols()];
    x[free] = S::one();
    for (r, &c) in ech.pivot_cols.iter().enumerate() {
        x[c] = -ech.reduced[(r, free)].clone();
    }
    Some(x)
}

/// Solves a square system; `None` when the matrix is (numerically) singular.
pub fn solve<S: Scalar>(m: &Matrix<S>, rhs: &[S]) -> Option<Vec<S>> {
    let n = m.rows();
    assert!(m.is_square() && rhs.len() == n, "solve shape");
    let mut aug = Matrix::zeros(n, n + 1);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m[(i, j)].clone());
        }
        aug.set(i, n, rhs[i].clone());
    }
    let ech = gauss_jordan(&aug, n);
    (ech.rank() == n).then(|| (0..n).map(|i| ech.reduced[(i, n)].clone()).collect())
}

pub fn inverse<S: Scalar>(m: &Matrix<S>) -> Option<Matrix<S>> {
    let n = m.rows();
    assert!(m.is_square(), "inverse of a non-square matrix");
    let mut aug = Matrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m[(i, j)].clone());
        }
        aug.set(i, n + i, S::one());
    }
    let ech = gauss_jordan(&aug, n);
    if ech.rank() < n {
        return None;
    }
    let mut inv = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv.set(i, j, ech.reduced[(i, n + j)].clone());
        }
    }
    Some(inv)
}
