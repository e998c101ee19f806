//! Small dense complex matrices.
//!
//! Generic arithmetic works over both scalar modes. Spectral routines run in
//! `f64` (cyclic complex Jacobi); rank, kernel and inversion have an exact
//! elimination path for rationals and a spectral path for floats.

use std::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::scalar::{cplx_from_f64, cplx_to_f64, modulus, negligible, Scalar, C};
use crate::{FrameError, Result, ToleranceConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

impl<T: Scalar> Index<(usize, usize)> for CMatrix<T> {
    type Output = C<T>;

    fn index(&self, (r, c): (usize, usize)) -> &C<T> {
        &self.data[r * self.cols + c]
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C<T> {
        &mut self.data[r * self.cols + c]
    }
}

impl<T: Scalar> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { C::one() } else { C::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<C<T>>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(FrameError::Dimension("ragged matrix rows".into()));
        }
        Ok(Self {
            rows: n,
            cols: m,
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

    pub fn entries(&self) -> &[C<T>] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[C<T>] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<C<T>> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn map(&self, f: impl Fn(&C<T>) -> C<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: &C<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&C<T>, &C<T>) -> C<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(FrameError::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(FrameError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let prod = a * &other[(k, c)];
                    out[(r, c)] = &out[(r, c)] + prod;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[C<T>]) -> Result<Vec<C<T>>> {
        if v.len() != self.cols {
            return Err(FrameError::Dimension("vector length".into()));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).fold(C::zero(), |acc, (a, b)| acc + a * b))
            .collect())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| modulus(&(a - b)))
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(modulus).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| cplx_to_f64(z).norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if T::exact() {
            self == other
        } else {
            self.max_abs_diff(other) <= tol
        }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        for r in 0..self.rows {
            for c in r..self.cols {
                if !negligible(&(&self[(r, c)] - self[(c, r)].conj()), tol) {
                    return false;
                }
            }
        }
        true
    }

    /// True when every off-diagonal entry is exactly zero.
    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self[(r, c)].is_zero()))
    }

    pub fn diagonal(&self) -> Vec<C<T>> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn to_f64(&self) -> CMatrix<f64> {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(cplx_to_f64).collect(),
        }
    }

    pub fn from_f64(m: &CMatrix<f64>) -> Self {
        CMatrix {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().map(cplx_from_f64).collect(),
        }
    }

    /// Exact positive-semidefiniteness test for a Hermitian matrix by
    /// symmetric elimination. A zero pivot forces its whole row to vanish.
    pub fn is_psd_exact(&self) -> bool {
        let n = self.rows;
        let mut a = self.clone();
        for k in 0..n {
            let d = a[(k, k)].re.clone();
            if d.is_negative() {
                return false;
            }
            if d.is_zero() {
                if (k + 1..n).any(|j| !a[(k, j)].is_zero()) {
                    return false;
                }
                continue;
            }
            for i in k + 1..n {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let factor = a[(i, k)].clone() / real_c(d.clone());
                for j in k + 1..n {
                    let upd = &factor * &a[(k, j)];
                    a[(i, j)] = &a[(i, j)] - upd;
                }
            }
        }
        true
    }

    /// Row-reduced echelon form; returns the pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(p, row);
            let inv = C::<T>::one() / &self[(row, col)];
            for c in 0..self.cols {
                self[(row, c)] = &self[(row, c)] * &inv;
            }
            for r in 0..self.rows {
                if r != row && !self[(r, col)].is_zero() {
                    let factor = self[(r, col)].clone();
                    for c in 0..self.cols {
                        let upd = &factor * &self[(row, c)];
                        self[(r, c)] = &self[(r, c)] - upd;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    /// Rank: exact elimination for rationals; singular values above `tol`
    /// for floats.
    pub fn rank(&self, tol: f64) -> Result<usize> {
        if T::exact() {
            Ok(self.clone().rref().len())
        } else {
            let sv = singular_values(&self.to_f64(), tol.min(1e-12))?;
            Ok(sv.iter().filter(|s| **s > tol).count())
        }
    }

    /// Basis of the right null space `{ v : self · v = 0 }`.
    pub fn kernel(&self, tol: f64) -> Result<Vec<Vec<C<T>>>> {
        if T::exact() {
            let mut r = self.clone();
            let pivots = r.rref();
            let mut basis = Vec::new();
            for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
                let mut v = vec![C::zero(); self.cols];
                v[free] = C::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, free)].clone();
                }
                basis.push(v);
            }
            Ok(basis)
        } else {
            let rank = self.rank(tol)?;
            let a = self.to_f64();
            let gram = a.adjoint().mul(&a)?;
            let (_, vecs) = hermitian_eigen(&gram, 1e-14, ToleranceConfig::MAX_SWEEPS)?;
            Ok((0..self.cols - rank)
                .map(|j| vecs.column(j).iter().map(cplx_from_f64).collect())
                .collect())
        }
    }

    /// Two-sided inverse. Rational mode pivots exactly; float mode requires
    /// the smallest singular value to exceed `invertibility_tol`.
    pub fn inverse(&self, invertibility_tol: f64) -> Result<Self> {
        if !self.is_square() {
            return Err(FrameError::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        if !T::exact() {
            let smin = smallest_singular_value(&self.to_f64())?;
            if smin <= invertibility_tol {
                return Err(FrameError::Singular {
                    smallest_singular_value: smin,
                });
            }
        }
        let mut aug = Self::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else if c - n == r {
                C::one()
            } else {
                C::zero()
            }
        });
        for col in 0..n {
            let pivot = if T::exact() {
                (col..n).find(|&r| !aug[(r, col)].is_zero())
            } else {
                (col..n)
                    .max_by(|&a, &b| modulus(&aug[(a, col)]).total_cmp(&modulus(&aug[(b, col)])))
                    .filter(|&r| !aug[(r, col)].is_zero())
            };
            let Some(p) = pivot else {
                let smin = smallest_singular_value(&self.to_f64()).unwrap_or(0.0);
                return Err(FrameError::Singular {
                    smallest_singular_value: smin,
                });
            };
            aug.swap_rows(p, col);
            let inv = C::<T>::one() / &aug[(col, col)];
            for c in 0..2 * n {
                aug[(col, c)] = &aug[(col, c)] * &inv;
            }
            for r in 0..n {
                if r != col && !aug[(r, col)].is_zero() {
                    let factor = aug[(r, col)].clone();
                    for c in 0..2 * n {
                        let upd = &factor * &aug[(col, c)];
                        aug[(r, c)] = &aug[(r, c)] - upd;
                    }
                }
            }
        }
        Ok(Self::from_fn(n, n, |r, c| aug[(r, c + n)].clone()))
    }
}

fn real_c<T: Scalar>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Eigenvalues ascend; eigenvector `j` is column `j`.
///
/// Iteration stops once every off-diagonal modulus is at most
/// `eig_tol * max(1, ‖A‖_F)`.
pub fn hermitian_eigen(a: &CMatrix<f64>, eig_tol: f64, max_sweeps: usize) -> Result<(Vec<f64>, CMatrix<f64>)> {
    if !a.is_square() {
        return Err(FrameError::Domain("eigenvalues of a non-square matrix".into()));
    }
    let n = a.rows;
    let mut m = a.clone();
    // symmetrize against rounding noise in the input
    for r in 0..n {
        m[(r, r)] = Complex::new(m[(r, r)].re, 0.0);
        for c in r + 1..n {
            let avg = (m[(r, c)] + m[(c, r)].conj()) * 0.5;
            m[(r, c)] = avg;
            m[(c, r)] = avg.conj();
        }
    }
    let mut v = CMatrix::<f64>::identity(n);
    let threshold = eig_tol * a.frobenius_norm().max(1.0);
    let off = |m: &CMatrix<f64>| {
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for c in r + 1..n {
                worst = worst.max(m[(r, c)].norm());
            }
        }
        worst
    };
    let mut sweeps = 0;
    loop {
        let residual = off(&m);
        if residual <= threshold {
            break;
        }
        if sweeps == max_sweeps {
            return Err(FrameError::NoConvergence { sweeps, residual });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let g = apq.norm();
                if g == 0.0 {
                    continue;
                }
                let phase = apq / g;
                let theta = (m[(q, q)].re - m[(p, p)].re) / (2.0 * g);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let dq = phase.conj();
                let (jpp, jpq, jqp, jqq) = (Complex::new(c, 0.0), Complex::new(s, 0.0), dq * (-s), dq * c);
                for r in 0..n {
                    let (ap, aq) = (m[(r, p)], m[(r, q)]);
                    m[(r, p)] = ap * jpp + aq * jqp;
                    m[(r, q)] = ap * jpq + aq * jqq;
                }
                for col in 0..n {
                    let (bp, bq) = (m[(p, col)], m[(q, col)]);
                    m[(p, col)] = jpp.conj() * bp + jqp.conj() * bq;
                    m[(q, col)] = jpq.conj() * bp + jqq.conj() * bq;
                }
                m[(p, q)] = Complex::zero();
                m[(q, p)] = Complex::zero();
                m[(p, p)] = Complex::new(m[(p, p)].re, 0.0);
                m[(q, q)] = Complex::new(m[(q, q)].re, 0.0);
                for r in 0..n {
                    let (vp, vq) = (v[(r, p)], v[(r, q)]);
                    v[(r, p)] = vp * jpp + vq * jqp;
                    v[(r, q)] = vp * jpq + vq * jqq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok((values, vectors))
}

/// Singular values in descending order, taken from the Hermitian dilation
/// `[[0, A], [A*, 0]]` whose spectrum is `±σ` (plus zeros).
pub fn singular_values(a: &CMatrix<f64>, eig_tol: f64) -> Result<Vec<f64>> {
    let (m, n) = (a.rows, a.cols);
    let count = m.min(n);
    if count == 0 {
        return Ok(Vec::new());
    }
    let dilation = CMatrix::from_fn(m + n, m + n, |r, c| {
        if r < m && c >= m {
            a[(r, c - m)]
        } else if r >= m && c < m {
            a[(c, r - m)].conj()
        } else {
            Complex::zero()
        }
    });
    let (values, _) = hermitian_eigen(&dilation, eig_tol, ToleranceConfig::MAX_SWEEPS)?;
    Ok(values.iter().rev().take(count).map(|s| s.max(0.0)).collect())
}

pub fn smallest_singular_value(a: &CMatrix<f64>) -> Result<f64> {
    Ok(singular_values(a, 1e-14)?.last().copied().unwrap_or(0.0))
}

pub fn spectral_norm(a: &CMatrix<f64>) -> Result<f64> {
    Ok(singular_values(a, 1e-14)?.first().copied().unwrap_or(0.0))
}
