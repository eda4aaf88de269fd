//! Dense row-major matrices over any [`Scalar`].

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::{GaussRational, Rat, Scalar};

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Exact rational matrix.
pub type MatQ = Matrix<Rat>;
/// Complex floating matrix.
pub type MatC = Matrix<Complex64>;
/// Gaussian-rational matrix.
pub type MatG = Matrix<GaussRational>;

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.data.chunks(self.cols.max(1)).collect();
        f.debug_struct("Matrix").field("rows", &self.rows).field("cols", &self.cols).field("data", &rows).finish()
    }
}

impl<T> Matrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries supplied for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Sub-block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of range");
        Matrix::from_fn(rows, cols, |r, c| self[(r0 + r, c0 + c)].clone())
    }

    /// Assemble a matrix from a grid of blocks with compatible shapes.
    pub fn from_blocks(grid: &[Vec<&Matrix<T>>]) -> Result<Self> {
        let heights: Vec<usize> = grid.iter().map(|row| row.first().map_or(0, |b| b.rows)).collect();
        let widths: Vec<usize> = grid.first().map_or(vec![], |row| row.iter().map(|b| b.cols).collect());
        for (i, row) in grid.iter().enumerate() {
            if row.len() != widths.len() {
                return Err(Error::Dimension("block grid is ragged".into()));
            }
            for (j, b) in row.iter().enumerate() {
                if b.rows != heights[i] || b.cols != widths[j] {
                    return Err(Error::Dimension(format!("block ({i},{j}) has incompatible shape")));
                }
            }
        }
        let total_r: usize = heights.iter().sum();
        let total_c: usize = widths.iter().sum();
        let mut data = Vec::with_capacity(total_r * total_c);
        for (i, row) in grid.iter().enumerate() {
            for r in 0..heights[i] {
                for b in row {
                    data.extend_from_slice(b.row(r));
                }
            }
        }
        Ok(Matrix { rows: total_r, cols: total_c, data })
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { T::one() } else { T::zero() })
    }

    /// Matrix unit with a single one at `(r, c)`.
    pub fn unit(rows: usize, cols: usize, r: usize, c: usize) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        m[(r, c)] = T::one();
        m
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Matrix::from_rows(rows.iter().map(|row| row.iter().map(|&v| T::from_i64(v)).collect()).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn checked_mul(&self, rhs: &Matrix<T>) -> Result<Matrix<T>> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!("cannot multiply {}x{} by {}x{}", self.rows, self.cols, rhs.rows, rhs.cols)));
        }
        let mut out: Matrix<T> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a.clone() * rhs[(k, j)].clone();
                    let slot = &mut out[(i, j)];
                    *slot = slot.clone() + prod;
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, rhs: &Matrix<T>) -> Result<Matrix<T>> {
        self.zip_with(rhs, |a, b| a.clone() + b.clone())
    }

    pub fn checked_sub(&self, rhs: &Matrix<T>) -> Result<Matrix<T>> {
        self.zip_with(rhs, |a, b| a.clone() - b.clone())
    }

    fn zip_with(&self, rhs: &Matrix<T>, f: impl Fn(&T, &T) -> T) -> Result<Matrix<T>> {
        if self.shape() != rhs.shape() {
            return Err(Error::Dimension(format!("shape {:?} does not match {:?}", self.shape(), rhs.shape())));
        }
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect() })
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|v| v.clone() * s.clone())
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Exact symmetry for exact scalars, relative tolerance otherwise.
    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let scale = self.max_magnitude();
        (0..self.rows).all(|r| (r + 1..self.cols).all(|c| (self[(r, c)].clone() - self[(c, r)].clone()).is_negligible(scale)))
    }

    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    pub fn to_c64(&self) -> MatC {
        self.map(Scalar::to_c64)
    }

    /// Gauss-Jordan inverse with largest-magnitude pivoting.
    pub fn inverse(&self) -> Result<Matrix<T>> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        self.solve(&Matrix::identity(n))
    }

    /// Solve `self · X = rhs` for square `self`.
    pub fn solve(&self, rhs: &Matrix<T>) -> Result<Matrix<T>> {
        if !self.is_square() || rhs.rows != self.rows {
            return Err(Error::Dimension("solve requires a square system".into()));
        }
        let n = self.rows;
        let scale = self.max_magnitude();
        let mut a = self.clone();
        let mut b = rhs.clone();
        for col in 0..n {
            let pivot = (col..n).max_by(|&i, &j| a[(i, col)].magnitude().total_cmp(&a[(j, col)].magnitude())).expect("non-empty range");
            if a[(pivot, col)].is_negligible(scale) {
                return Err(Error::Singular(format!("zero pivot in column {col}")));
            }
            a.swap_rows(pivot, col);
            b.swap_rows(pivot, col);
            let inv = T::one() / a[(col, col)].clone();
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone() * inv.clone();
                for c in col..n {
                    let v = a[(r, c)].clone() - factor.clone() * a[(col, c)].clone();
                    a[(r, c)] = v;
                }
                for c in 0..b.cols {
                    let v = b[(r, c)].clone() - factor.clone() * b[(col, c)].clone();
                    b[(r, c)] = v;
                }
            }
        }
        for r in 0..n {
            let inv = T::one() / a[(r, r)].clone();
            for c in 0..b.cols {
                let v = b[(r, c)].clone() * inv.clone();
                b[(r, c)] = v;
            }
        }
        Ok(b)
    }

    pub fn det(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        for col in 0..n {
            let pivot = (col..n).max_by(|&i, &j| a[(i, col)].magnitude().total_cmp(&a[(j, col)].magnitude())).expect("non-empty range");
            if a[(pivot, col)].is_zero() {
                return Ok(T::zero());
            }
            if pivot != col {
                a.swap_rows(pivot, col);
                det = -det;
            }
            let p = a[(col, col)].clone();
            det = det * p.clone();
            for r in col + 1..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone() / p.clone();
                for c in col..n {
                    let v = a[(r, c)].clone() - factor.clone() * a[(col, c)].clone();
                    a[(r, c)] = v;
                }
            }
        }
        Ok(det)
    }

    /// Reduced row-echelon form and the pivot columns.
    ///
    /// Exact scalars pivot on the first nonzero entry; approximate ones on the
    /// largest entry, treating values below the relative pivot tolerance as zero.
    pub fn rref(&self) -> (Matrix<T>, Vec<usize>) {
        let mut a = self.clone();
        let scale = self.max_magnitude();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let candidate = if T::EXACT {
                (row..self.rows).find(|&r| !a[(r, col)].is_zero())
            } else {
                (row..self.rows)
                    .max_by(|&i, &j| a[(i, col)].magnitude().total_cmp(&a[(j, col)].magnitude()))
                    .filter(|&r| !a[(r, col)].is_negligible(scale))
            };
            let Some(p) = candidate else {
                continue;
            };
            a.swap_rows(p, row);
            let inv = T::one() / a[(row, col)].clone();
            for c in col..self.cols {
                let v = a[(row, c)].clone() * inv.clone();
                a[(row, c)] = v;
            }
            for r in 0..self.rows {
                if r == row || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for c in col..self.cols {
                    let v = a[(r, c)].clone() - factor.clone() * a[(row, c)].clone();
                    a[(r, c)] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (a, pivots)
    }

    /// Null-space basis read off the reduced row-echelon form, one vector per
    /// free column in increasing column order.
    pub fn kernel_basis(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let free = (0..self.cols).filter(|c| !pivots.contains(c));
        free.map(|f| {
            let mut v = vec![T::zero(); self.cols];
            v[f] = T::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[(row, f)].clone();
            }
            v
        })
        .collect()
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }
}

impl MatC {
    /// Entrywise max-norm of `self − other`.
    pub fn max_abs_diff(&self, other: &MatC) -> f64 {
        assert_eq!(self.shape(), other.shape(), "max_abs_diff shape mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn symmetrized(&self) -> MatC {
        Matrix::from_fn(self.rows, self.cols, |r, c| (self[(r, c)] + self[(c, r)]) * 0.5)
    }

    pub fn re(&self) -> Matrix<f64> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.re).collect() }
    }

    pub fn im(&self) -> Matrix<f64> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.im).collect() }
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl MatQ {
    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|v| v.is_integer())
    }

    pub fn to_gauss(&self) -> MatG {
        self.map(GaussRational::from_rat)
    }
}

impl Matrix<f64> {
    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

// Operator forms panic on shape mismatch; use the checked_* methods at API boundaries.
impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.checked_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.checked_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.checked_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl<T: Scalar> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|v| -v.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    #[test]
    fn exact_inverse_and_det() {
        let m = MatQ::from_i64_rows(&[&[2, 1], &[7, 4]]).unwrap();
        assert_eq!(m.det().unwrap(), rat_int(1));
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, MatQ::identity(2));
        let s = MatQ::from_i64_rows(&[&[1, 2], &[2, 4]]).unwrap();
        assert!(matches!(s.inverse(), Err(Error::Singular(_))));
        assert_eq!(s.det().unwrap(), rat_int(0));
    }

    #[test]
    fn solve_needs_pivoting() {
        let m = MatQ::from_i64_rows(&[&[0, 1], &[1, 0]]).unwrap();
        let rhs = MatQ::from_rows(vec![vec![rat(1, 2)], vec![rat(3, 1)]]).unwrap();
        let x = m.solve(&rhs).unwrap();
        assert_eq!(x[(0, 0)], rat_int(3));
        assert_eq!(x[(1, 0)], rat(1, 2));
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = MatQ::from_i64_rows(&[&[1, 2, 3], &[2, 4, 6]]).unwrap();
        assert_eq!(m.rank(), 1);
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            let col = MatQ::from_vec(3, 1, v.clone()).unwrap();
            assert!((&m * &col).is_zero());
        }
        assert_eq!(ker[0], vec![rat_int(-2), rat_int(1), rat_int(0)]);
    }

    #[test]
    fn blocks_roundtrip() {
        let a = MatQ::from_i64_rows(&[&[1, 2], &[3, 4]]).unwrap();
        let b = MatQ::identity(2);
        let g = MatQ::from_blocks(&[vec![&a, &b], vec![&b, &a]]).unwrap();
        assert_eq!(g.shape(), (4, 4));
        assert_eq!(g.block(2, 2, 2, 2), a);
        assert_eq!(g.block(0, 2, 2, 2), b);
        assert!(MatQ::from_blocks(&[vec![&a], vec![&MatQ::identity(3)]]).is_err());
    }

    #[test]
    fn complex_inverse_is_accurate() {
        let m = MatC::from_rows(vec![
            vec![Complex64::new(1.0, 2.0), Complex64::new(0.5, -1.0)],
            vec![Complex64::new(-0.3, 0.1), Complex64::new(2.0, 0.0)],
        ])
        .unwrap();
        let prod = &m * &m.inverse().unwrap();
        assert!(prod.max_abs_diff(&MatC::identity(2)) < 1e-14);
    }
}
