//! Small dense matrices over `f64` and `Complex64`.
//!
//! Everything the floating-point kernels need and nothing more: row-major
//! storage, products, adjoints, Cholesky, and the real embedding that turns
//! a Hermitian problem into a symmetric one. Matrices here are at most a few
//! hundred rows (moment matrices), so simple O(n³) loops are the right tool.

use num_complex::Complex64;
use rayon::prelude::*;
use std::ops::{Index, IndexMut};

pub type C64 = Complex64;

#[derive(Clone, PartialEq, Debug)]
pub struct Mat {
    pub n_rows: usize,
    pub n_cols: usize,
    pub data: Vec<f64>,
}

impl Mat {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Mat { n_rows, n_cols, data: vec![0.0; n_rows * n_cols] }
    }

    pub fn eye(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(n_rows: usize, n_cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Mat::zeros(n_rows, n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == n_cols));
        Mat { n_rows, n_cols, data: rows.concat() }
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn t(&self) -> Mat {
        Mat::from_fn(self.n_cols, self.n_rows, |i, j| self[(j, i)])
    }

    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.n_cols, rhs.n_rows, "inner dimensions must agree");
        let mut out = Mat::zeros(self.n_rows, rhs.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.n_cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.n_cols, x.len());
        (0..self.n_rows)
            .map(|i| {
                let row = &self.data[i * self.n_cols..(i + 1) * self.n_cols];
                row.iter().zip(x).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    pub fn scale(&mut self, s: f64) {
        for v in &mut self.data {
            *v *= s;
        }
    }

    pub fn add_scaled(&mut self, other: &Mat, s: f64) {
        assert_eq!((self.n_rows, self.n_cols), (other.n_rows, other.n_cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    /// Symmetric part `(A + Aᵀ)/2`.
    pub fn sym(&self) -> Mat {
        assert!(self.is_square());
        Mat::from_fn(self.n_rows, self.n_rows, |i, j| 0.5 * (self[(i, j)] + self[(j, i)]))
    }

    /// Entry-wise inner product `tr(AᵀB)`.
    pub fn dot(&self, other: &Mat) -> f64 {
        assert_eq!((self.n_rows, self.n_cols), (other.n_rows, other.n_cols));
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Lower Cholesky factor of a symmetric positive definite matrix, or
    /// `None` if a pivot is not strictly positive.
    pub fn cholesky(&self) -> Option<Mat> {
        assert!(self.is_square());
        let n = self.n_rows;
        let mut l = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                l[(i, j)] = self[(i, j)];
            }
        }
        // Column-oriented elimination: once column j's pivot is known, every
        // later row i updates independently from the finished prefixes of
        // rows i and j, so the row sweep parallelizes for the big Schur
        // complements that show up in the moment-matrix solver.
        let data = &mut l.data;
        for j in 0..n {
            let (head, tail) = data.split_at_mut((j + 1) * n);
            let row_j = &head[j * n..j * n + j];
            let mut d2 = head[j * n + j];
            for v in row_j {
                d2 -= v * v;
            }
            if d2 <= 0.0 || !d2.is_finite() {
                return None;
            }
            let d = d2.sqrt();
            let update = |row: &mut [f64]| {
                let mut s = row[j];
                for (a, b) in row[..j].iter().zip(row_j) {
                    s -= a * b;
                }
                row[j] = s / d;
            };
            if n - j > 256 {
                tail.par_chunks_mut(n).for_each(update);
            } else {
                tail.chunks_mut(n).for_each(update);
            }
            head[j * n + j] = d;
        }
        Some(l)
    }

    /// Solve `L y = b` for lower-triangular `L`.
    pub fn solve_lower(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n_rows;
        assert_eq!(b.len(), n);
        let mut y = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                let l = self[(i, k)];
                y[i] -= l * y[k];
            }
            y[i] /= self[(i, i)];
        }
        y
    }

    /// Solve `Lᵀ x = b` for lower-triangular `L`.
    pub fn solve_lower_t(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n_rows;
        assert_eq!(b.len(), n);
        let mut x = b.to_vec();
        for i in (0..n).rev() {
            for k in i + 1..n {
                let l = self[(k, i)];
                x[i] -= l * x[k];
            }
            x[i] /= self[(i, i)];
        }
        x
    }

    /// Solve `A x = b` for symmetric positive definite `A`.
    pub fn solve_spd(&self, b: &[f64]) -> Option<Vec<f64>> {
        let l = self.cholesky()?;
        Some(l.solve_lower_t(&l.solve_lower(b)))
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n_cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n_cols + j]
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct CMat {
    pub n_rows: usize,
    pub n_cols: usize,
    pub data: Vec<C64>,
}

impl CMat {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        CMat { n_rows, n_cols, data: vec![C64::new(0.0, 0.0); n_rows * n_cols] }
    }

    pub fn eye(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n_rows: usize, n_cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = CMat::zeros(n_rows, n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Lift a real matrix into the complex type.
    pub fn from_real(m: &Mat) -> Self {
        CMat::from_fn(m.n_rows, m.n_cols, |i, j| C64::new(m[(i, j)], 0.0))
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.n_cols, self.n_rows, |i, j| self[(j, i)].conj())
    }

    pub fn mul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.n_cols, rhs.n_rows, "inner dimensions must agree");
        let mut out = CMat::zeros(self.n_rows, rhs.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..rhs.n_cols {
                    let v = a * rhs[(k, j)];
                    out[(i, j)] += v;
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(self.n_cols, x.len());
        (0..self.n_rows)
            .map(|i| {
                let row = &self.data[i * self.n_cols..(i + 1) * self.n_cols];
                row.iter().zip(x).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    pub fn add_scaled(&mut self, other: &CMat, s: C64) {
        assert_eq!((self.n_rows, self.n_cols), (other.n_rows, other.n_cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    /// Hermitian part `(A + A†)/2`.
    pub fn herm(&self) -> CMat {
        assert!(self.is_square());
        CMat::from_fn(self.n_rows, self.n_rows, |i, j| {
            0.5 * (self[(i, j)] + self[(j, i)].conj())
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.norm()))
    }

    /// The symmetric real matrix `[[X, -Y], [Y, X]]` for `A = X + iY`. When
    /// `A` is Hermitian this embedding is symmetric and its spectrum is that
    /// of `A` with every eigenvalue doubled in multiplicity; an eigenvector
    /// `(x; y)` of the embedding gives the complex eigenvector `x + iy`.
    pub fn real_embedding(&self) -> Mat {
        assert!(self.is_square());
        let n = self.n_rows;
        Mat::from_fn(2 * n, 2 * n, |i, j| {
            let (bi, ii) = (i / n, i % n);
            let (bj, jj) = (j / n, j % n);
            let z = self[(ii, jj)];
            match (bi, bj) {
                (0, 0) | (1, 1) => z.re,
                (0, 1) => -z.im,
                (1, 0) => z.im,
                _ => unreachable!(),
            }
        })
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n_cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n_cols + j]
    }
}

// Plain-vector helpers shared by the iterative kernels.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Hermitian inner product, conjugating the first argument.
pub fn cdot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn cnorm2(a: &[C64]) -> f64 {
    cdot(a, a).re.sqrt()
}

pub fn normalize(a: &mut [f64]) {
    let n = norm2(a);
    if n > 0.0 {
        for x in a {
            *x /= n;
        }
    }
}

pub fn cnormalize(a: &mut [C64]) {
    let n = cnorm2(a);
    if n > 0.0 {
        for x in a {
            *x /= n;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_transpose() {
        let a = Mat::from_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let b = Mat::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let ab = a.mul(&b);
        assert_eq!(ab, Mat::from_rows(&[&[2.0, 1.0], &[4.0, 3.0]]));
        assert_eq!(a.t().t(), a);
        assert_eq!(a.matvec(&[1.0, 1.0]), vec![3.0, 7.0]);
    }

    #[test]
    fn cholesky_reconstructs_and_solves() {
        let a = Mat::from_rows(&[&[4.0, 2.0, 0.0], &[2.0, 5.0, 1.0], &[0.0, 1.0, 3.0]]);
        let l = a.cholesky().unwrap();
        let back = l.mul(&l.t());
        for (x, y) in back.data.iter().zip(&a.data) {
            assert!((x - y).abs() < 1e-12);
        }
        let b = vec![1.0, 2.0, 3.0];
        let x = a.solve_spd(&b).unwrap();
        let r = a.matvec(&x);
        for (u, v) in r.iter().zip(&b) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = Mat::from_rows(&[&[1.0, 2.0], &[2.0, 1.0]]);
        assert!(a.cholesky().is_none());
    }

    #[test]
    fn adjoint_and_hermitian_part() {
        let i = C64::new(0.0, 1.0);
        let a = CMat::from_fn(2, 2, |r, c| if (r, c) == (0, 1) { i } else { C64::new(0.0, 0.0) });
        let h = a.herm();
        assert_eq!(h[(0, 1)], 0.5 * i);
        assert_eq!(h[(1, 0)], -0.5 * i);
        let aa = a.adjoint();
        assert_eq!(aa[(1, 0)], -i);
    }

    #[test]
    fn real_embedding_is_symmetric_for_hermitian_input() {
        let i = C64::new(0.0, 1.0);
        let a = CMat::from_fn(2, 2, |r, c| match (r, c) {
            (0, 0) => C64::new(2.0, 0.0),
            (1, 1) => C64::new(-1.0, 0.0),
            (0, 1) => 0.5 * i + C64::new(0.25, 0.0),
            (1, 0) => -0.5 * i + C64::new(0.25, 0.0),
            _ => unreachable!(),
        });
        let e = a.real_embedding();
        assert_eq!(e.n_rows, 4);
        for r in 0..4 {
            for c in 0..4 {
                assert!((e[(r, c)] - e[(c, r)]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn vector_helpers() {
        let mut v = vec![3.0, 4.0];
        assert!((norm2(&v) - 5.0).abs() < 1e-15);
        normalize(&mut v);
        assert!((norm2(&v) - 1.0).abs() < 1e-15);
        let a = vec![C64::new(0.0, 1.0)];
        let b = vec![C64::new(0.0, 1.0)];
        assert_eq!(cdot(&a, &b), C64::new(1.0, 0.0));
    }
}
