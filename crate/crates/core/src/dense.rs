//! Row-major dense complex matrices and the factorizations the solvers need.
//!
//! Products and matrix-vector applications are done here with plain loops in a
//! fixed summation order, so results are bit-reproducible. Eigendecompositions,
//! LU and Hessenberg reductions are delegated to `faer` (sequential).

use std::ops::{Index, IndexMut};

use faer::complex_native::c64;
use faer::dyn_stack::{GlobalPodBuffer, PodStack};
use faer::linalg::householder;
use faer::prelude::*;
use faer::{Conj, Mat, Parallelism, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
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

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// `self * other` in ikj order.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for l in 0..self.cols {
                let a = self.data[i * self.cols + l];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[l * other.cols..(l + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(ZERO, |acc, (&a, &x)| acc + a * x)
            })
            .collect()
    }

    /// `[self, other] = self*other - other*self`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.matmul(other).sub(&other.matmul(self))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    /// Maximum entry modulus of `self - other` restricted to the listed columns.
    pub fn max_abs_diff_on_columns(&self, other: &Self, columns: impl IntoIterator<Item = usize>) -> f64 {
        let mut m: f64 = 0.0;
        for j in columns {
            for i in 0..self.rows {
                m = m.max((self[(i, j)] - other[(i, j)]).norm());
            }
        }
        m
    }

    /// `‖A − A†‖_max`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                m = m.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        m
    }

    pub(crate) fn to_faer(&self) -> Mat<c64> {
        Mat::from_fn(self.rows, self.cols, |i, j| c64::from(self[(i, j)]))
    }

    pub(crate) fn from_faer(m: MatRef<'_, c64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| Complex64::from(m.read(i, j)))
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_max_abs(v: &[Complex64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.norm()))
}

/// Eigenvalues in ascending order and the matching orthonormal eigenvectors
/// (as columns) of a Hermitian matrix. Only the lower triangle is read.
pub fn hermitian_eigen(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    assert!(a.is_square());
    let evd = a.to_faer().selfadjoint_eigendecomposition(Side::Lower);
    let s = evd.s().column_vector();
    let values = (0..a.rows()).map(|i| s.read(i).re).collect();
    (values, CMatrix::from_faer(evd.u()))
}

/// Solves `a x = b` by partial-pivoting LU.
pub fn lu_solve(a: &CMatrix, b: &[Complex64]) -> Vec<Complex64> {
    assert!(a.is_square() && a.rows() == b.len());
    let lu = a.to_faer().partial_piv_lu();
    let rhs = Mat::from_fn(b.len(), 1, |i, _| c64::from(b[i]));
    let x = lu.solve(&rhs);
    (0..b.len()).map(|i| Complex64::from(x.read(i, 0))).collect()
}

/// Unitary reduction `A = Q H Q†` with `H` upper Hessenberg, reused for
/// many shifted solves `(A − zI) x = b` at O(n²) each.
///
/// The reflectors act on indices `1..n`, so `Q e₀ = e₀`.
pub struct HessenbergForm {
    n: usize,
    /// Upper Hessenberg part, row-major.
    h: CMatrix,
    /// Householder essentials below the subdiagonal, as left by faer.
    essentials: Mat<c64>,
    /// Block Householder factor, stored transposed (blocksize × (n−1)).
    factor: Mat<c64>,
}

impl HessenbergForm {
    pub fn new(a: &CMatrix) -> Self {
        assert!(a.is_square());
        let n = a.rows();
        let mut work = a.to_faer();
        let bs = faer::linalg::qr::no_pivoting::compute::recommended_blocksize::<c64>(
            n.saturating_sub(1).max(1),
            n.saturating_sub(1).max(1),
        );
        let mut factor = Mat::<c64>::zeros(bs, n.saturating_sub(1));
        if n > 1 {
            let req = faer::linalg::evd::hessenberg::make_hessenberg_in_place_req::<c64>(
                n,
                bs,
                Parallelism::None,
            )
            .expect("hessenberg workspace size");
            let mut buf = GlobalPodBuffer::new(req);
            faer::linalg::evd::hessenberg::make_hessenberg_in_place(
                work.as_mut(),
                factor.as_mut().transpose_mut(),
                Parallelism::None,
                PodStack::new(&mut buf),
            );
        }
        let h = CMatrix::from_fn(n, n, |i, j| {
            if i <= j + 1 {
                Complex64::from(work.read(i, j))
            } else {
                ZERO
            }
        });
        Self {
            n,
            h,
            essentials: work,
            factor,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// The upper Hessenberg factor.
    pub fn h(&self) -> &CMatrix {
        &self.h
    }

    fn apply_reflectors(&self, v: &mut [Complex64], adjoint: bool) {
        let n = self.n;
        if n < 2 {
            return;
        }
        let mut col = Mat::from_fn(n - 1, 1, |i, _| c64::from(v[i + 1]));
        let basis = self.essentials.as_ref().submatrix(1, 0, n - 1, n - 1);
        let factor = self.factor.as_ref();
        let req = householder::apply_block_householder_sequence_on_the_left_in_place_req::<c64>(
            n - 1,
            factor.nrows(),
            1,
        )
        .expect("householder workspace size");
        let mut buf = GlobalPodBuffer::new(req);
        let stack = &mut PodStack::new(&mut buf);
        if adjoint {
            householder::apply_block_householder_sequence_transpose_on_the_left_in_place_with_conj(
                basis,
                factor,
                Conj::Yes,
                col.as_mut(),
                Parallelism::None,
                stack,
            );
        } else {
            householder::apply_block_householder_sequence_on_the_left_in_place_with_conj(
                basis,
                factor,
                Conj::No,
                col.as_mut(),
                Parallelism::None,
                stack,
            );
        }
        for i in 0..n - 1 {
            v[i + 1] = Complex64::from(col.read(i, 0));
        }
    }

    /// `Q† v`.
    pub fn to_reduced(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = v.to_vec();
        self.apply_reflectors(&mut out, true);
        out
    }

    /// `Q v`.
    pub fn from_reduced(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = v.to_vec();
        self.apply_reflectors(&mut out, false);
        out
    }

    /// Solves `(H − zI) y = c` in reduced coordinates by Gaussian elimination
    /// with partial pivoting between adjacent rows.
    pub fn solve_shifted_reduced(&self, z: Complex64, c: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.n;
        assert_eq!(c.len(), n);
        if n == 0 {
            return Ok(Vec::new());
        }
        // Upper-triangular factor stored row by row; row k holds columns k..n.
        let mut upper: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        let mut rhs = c.to_vec();
        let shifted_row = |i: usize| -> Vec<Complex64> {
            let start = i.saturating_sub(1);
            let mut r = self.h.row(i)[start..].to_vec();
            r[i - start] -= z;
            r
        };
        // Working row, indexed from column k.
        let mut work = shifted_row(0);
        let mut work_rhs = rhs[0];
        for k in 0..n {
            if k + 1 == n {
                upper.push(work);
                rhs[k] = work_rhs;
                break;
            }
            // Next original row restricted to columns k..n (its entry at k is H[k+1,k]).
            let next = shifted_row(k + 1);
            let next_rhs = rhs[k + 1];
            let (pivot, pivot_rhs, other, other_rhs) = if next[0].norm() > work[0].norm() {
                (next, next_rhs, work, work_rhs)
            } else {
                (work, work_rhs, next, next_rhs)
            };
            if pivot[0] == ZERO {
                return Err(Error::LinearAlgebra {
                    what: "singular shifted Hessenberg system".into(),
                    residual: f64::INFINITY,
                });
            }
            let l = other[0] / pivot[0];
            work = other[1..]
                .iter()
                .zip(&pivot[1..])
                .map(|(&o, &p)| o - l * p)
                .collect();
            work_rhs = other_rhs - l * pivot_rhs;
            rhs[k] = pivot_rhs;
            upper.push(pivot);
        }
        let mut y = vec![ZERO; n];
        for k in (0..n).rev() {
            let row = &upper[k];
            let mut acc = rhs[k];
            for (off, &u) in row.iter().enumerate().skip(1) {
                acc -= u * y[k + off];
            }
            if row[0] == ZERO {
                return Err(Error::LinearAlgebra {
                    what: "singular shifted Hessenberg system".into(),
                    residual: f64::INFINITY,
                });
            }
            y[k] = acc / row[0];
        }
        Ok(y)
    }

    /// Solves `(A − zI) x = b` in the original coordinates.
    pub fn solve_shifted(&self, z: Complex64, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let c = self.to_reduced(b);
        let y = self.solve_shifted_reduced(z, &c)?;
        Ok(self.from_reduced(&y))
    }
}
