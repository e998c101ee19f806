//! Elements of the matrix C*-algebras `M_k(ℂ)` and its diagonal subalgebra.

use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::linalg::{hermitian_eigen, CMatrix};
use crate::scalar::{Scalar, ScalarMode, C};
use crate::{FrameError, Result, ToleranceConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    Full,
    Diagonal,
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraKind::Full => f.write_str("full"),
            AlgebraKind::Diagonal => f.write_str("diagonal"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AlgebraDescriptor {
    pub kind: AlgebraKind,
    pub dim: usize,
    pub scalar_mode: ScalarMode,
}

impl AlgebraDescriptor {
    pub fn new<T: Scalar>(kind: AlgebraKind, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(FrameError::Parameter("algebra dimension must be >= 1".into()));
        }
        Ok(Self {
            kind,
            dim,
            scalar_mode: T::MODE,
        })
    }

    pub fn full<T: Scalar>(dim: usize) -> Result<Self> {
        Self::new::<T>(AlgebraKind::Full, dim)
    }

    pub fn diagonal<T: Scalar>(dim: usize) -> Result<Self> {
        Self::new::<T>(AlgebraKind::Diagonal, dim)
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self != other {
            return Err(FrameError::Dimension(format!(
                "algebra {}({}) vs {}({})",
                self.kind, self.dim, other.kind, other.dim
            )));
        }
        Ok(())
    }

    pub(crate) fn with_mode(self, scalar_mode: ScalarMode) -> Self {
        Self { scalar_mode, ..self }
    }
}

/// Eigenvalues of a Hermitian element. `downgraded` is set when a
/// rational-mode input had to be diagonalised in floating point.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    pub values: Vec<T>,
    pub downgraded: bool,
}

/// A `k × k` complex matrix living in a declared algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement<T: Scalar> {
    descriptor: AlgebraDescriptor,
    matrix: CMatrix<T>,
}

impl<T: Scalar> AlgebraElement<T> {
    /// Builds an element, rejecting off-diagonal entries for the diagonal kind.
    pub fn new(descriptor: AlgebraDescriptor, matrix: CMatrix<T>) -> Result<Self> {
        if descriptor.scalar_mode != T::MODE {
            return Err(FrameError::Mode(format!(
                "descriptor declares {} scalars",
                descriptor.scalar_mode
            )));
        }
        if matrix.rows() != descriptor.dim || matrix.cols() != descriptor.dim {
            return Err(FrameError::Dimension(format!(
                "expected {0}x{0} entries, got {1}x{2}",
                descriptor.dim,
                matrix.rows(),
                matrix.cols()
            )));
        }
        if descriptor.kind == AlgebraKind::Diagonal && !matrix.is_diagonal() {
            return Err(FrameError::Domain(
                "diagonal algebra element has nonzero off-diagonal entries".into(),
            ));
        }
        Ok(Self { descriptor, matrix })
    }

    /// Projects onto the declared kind (zeroes off-diagonals for diagonal kind).
    pub(crate) fn projected(descriptor: AlgebraDescriptor, matrix: CMatrix<T>) -> Self {
        let matrix = match descriptor.kind {
            AlgebraKind::Full => matrix,
            AlgebraKind::Diagonal => CMatrix::from_fn(matrix.rows(), matrix.cols(), |r, c| {
                if r == c {
                    matrix[(r, c)].clone()
                } else {
                    C::zero()
                }
            }),
        };
        Self { descriptor, matrix }
    }

    pub fn from_diagonal(descriptor: AlgebraDescriptor, diag: Vec<C<T>>) -> Result<Self> {
        if diag.len() != descriptor.dim {
            return Err(FrameError::Dimension("diagonal length".into()));
        }
        let m = CMatrix::from_fn(descriptor.dim, descriptor.dim, |r, c| {
            if r == c {
                diag[r].clone()
            } else {
                C::zero()
            }
        });
        Self::new(descriptor, m)
    }

    /// Real diagonal element.
    pub fn diag_real(descriptor: AlgebraDescriptor, diag: Vec<T>) -> Result<Self> {
        Self::from_diagonal(
            descriptor,
            diag.into_iter().map(|x| Complex::new(x, T::zero())).collect(),
        )
    }

    pub fn zero(descriptor: AlgebraDescriptor) -> Self {
        Self {
            descriptor,
            matrix: CMatrix::zeros(descriptor.dim, descriptor.dim),
        }
    }

    pub fn identity(descriptor: AlgebraDescriptor) -> Self {
        Self {
            descriptor,
            matrix: CMatrix::identity(descriptor.dim),
        }
    }

    pub fn scalar(descriptor: AlgebraDescriptor, s: C<T>) -> Self {
        Self::identity(descriptor).scale(&s)
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        &self.descriptor
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn entry(&self, r: usize, c: usize) -> &C<T> {
        &self.matrix[(r, c)]
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.entries().iter().all(Zero::is_zero)
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.descriptor.check_same(&other.descriptor)?;
        let m = self.matrix.mul(&other.matrix)?;
        Ok(Self::projected(self.descriptor, m))
    }

    pub fn adjoint(&self) -> Self {
        Self {
            descriptor: self.descriptor,
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.descriptor.check_same(&other.descriptor)?;
        Ok(Self {
            descriptor: self.descriptor,
            matrix: self.matrix.add(&other.matrix)?,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.descriptor.check_same(&other.descriptor)?;
        Ok(Self {
            descriptor: self.descriptor,
            matrix: self.matrix.sub(&other.matrix)?,
        })
    }

    pub fn scale(&self, s: &C<T>) -> Self {
        Self {
            descriptor: self.descriptor,
            matrix: self.matrix.scale(s),
        }
    }

    pub fn scale_real(&self, s: &T) -> Self {
        self.scale(&Complex::new(s.clone(), T::zero()))
    }

    pub fn is_hermitian(&self, cfg: &ToleranceConfig) -> bool {
        self.matrix.is_hermitian(cfg.equality_tol)
    }

    pub fn approx_eq(&self, other: &Self, cfg: &ToleranceConfig) -> bool {
        self.descriptor == other.descriptor && self.matrix.approx_eq(&other.matrix, cfg.equality_tol)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.matrix.max_abs_diff(&other.matrix)
    }

    /// Ascending eigenvalues of a Hermitian element.
    ///
    /// Diagonal matrices return their sorted diagonal exactly (in either
    /// scalar mode). Anything else goes through Jacobi in `f64`.
    pub fn hermitian_eigenvalues(&self, cfg: &ToleranceConfig) -> Result<Spectrum<T>> {
        if !self.is_hermitian(cfg) {
            return Err(FrameError::Domain("eigenvalues of a non-Hermitian element".into()));
        }
        hermitian_spectrum(&self.matrix, cfg)
    }

    /// C*-norm: the largest singular value.
    pub fn operator_norm(&self, cfg: &ToleranceConfig) -> Result<f64> {
        if self.matrix.is_diagonal() {
            return Ok(self.matrix.max_abs());
        }
        let m = self.matrix.to_f64();
        let gram = m.adjoint().mul(&m)?;
        let (vals, _) = hermitian_eigen(&gram, cfg.eig_tol, ToleranceConfig::MAX_SWEEPS)?;
        Ok(vals.last().copied().unwrap_or(0.0).max(0.0).sqrt())
    }

    /// Hermitian with nonnegative spectrum (down to `-positivity_tol`).
    /// Exact in rational mode. Non-Hermitian input is not positive.
    pub fn is_positive(&self, cfg: &ToleranceConfig) -> bool {
        is_positive_matrix(&self.matrix, cfg)
    }

    /// `self ≤ other` in the C*-order.
    pub fn order_leq(&self, other: &Self, cfg: &ToleranceConfig) -> Result<bool> {
        Ok(other.sub(self)?.is_positive(cfg))
    }

    pub fn invert(&self, cfg: &ToleranceConfig) -> Result<Self> {
        if self.descriptor.kind == AlgebraKind::Diagonal {
            let diag = self.matrix.diagonal();
            if diag.iter().any(Zero::is_zero) {
                return Err(FrameError::Singular {
                    smallest_singular_value: 0.0,
                });
            }
            if !T::exact() {
                let smin = diag.iter().map(crate::scalar::modulus).fold(f64::INFINITY, f64::min);
                if smin <= cfg.invertibility_tol {
                    return Err(FrameError::Singular {
                        smallest_singular_value: smin,
                    });
                }
            }
            let inv = diag.iter().map(|z| C::<T>::one() / z).collect();
            return Self::from_diagonal(self.descriptor, inv);
        }
        let inv = self.matrix.inverse(cfg.invertibility_tol)?;
        Ok(Self::projected(self.descriptor, inv))
    }

    pub fn to_f64(&self) -> AlgebraElement<f64> {
        AlgebraElement {
            descriptor: self.descriptor.with_mode(ScalarMode::Float),
            matrix: self.matrix.to_f64(),
        }
    }

    pub fn from_f64(e: &AlgebraElement<f64>) -> Self {
        Self::projected(e.descriptor.with_mode(T::MODE), CMatrix::from_f64(e.matrix()))
    }
}

pub(crate) fn hermitian_spectrum<T: Scalar>(m: &CMatrix<T>, cfg: &ToleranceConfig) -> Result<Spectrum<T>> {
    if m.is_diagonal() {
        let mut values: Vec<T> = m.diagonal().into_iter().map(|z| z.re).collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        return Ok(Spectrum {
            values,
            downgraded: false,
        });
    }
    let (vals, _) = hermitian_eigen(&m.to_f64(), cfg.eig_tol, ToleranceConfig::MAX_SWEEPS)?;
    Ok(Spectrum {
        values: vals.into_iter().map(T::of_f64).collect(),
        downgraded: T::exact(),
    })
}

pub(crate) fn is_positive_matrix<T: Scalar>(m: &CMatrix<T>, cfg: &ToleranceConfig) -> bool {
    if !m.is_hermitian(cfg.equality_tol) {
        return false;
    }
    if T::exact() {
        return m.is_psd_exact();
    }
    if m.is_diagonal() {
        return m.diagonal().iter().all(|z| z.re.as_f64() >= -cfg.positivity_tol);
    }
    match hermitian_eigen(&m.to_f64(), cfg.eig_tol, ToleranceConfig::MAX_SWEEPS) {
        Ok((vals, _)) => vals.first().is_none_or(|v| *v >= -cfg.positivity_tol),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn qdiag(vals: &[(i64, i64)]) -> AlgebraElement<Rational> {
        let d = AlgebraDescriptor::diagonal::<Rational>(vals.len()).unwrap();
        AlgebraElement::diag_real(d, vals.iter().map(|&(n, m)| rat(n, m)).collect()).unwrap()
    }

    fn random_full(rng: &mut ChaCha8Rng, k: usize) -> AlgebraElement<f64> {
        let d = AlgebraDescriptor::full::<f64>(k).unwrap();
        let m = CMatrix::from_fn(k, k, |_, _| {
            Complex::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
        });
        AlgebraElement::new(d, m).unwrap()
    }

    #[test]
    fn diagonal_product_is_entrywise() {
        let a = qdiag(&[(2, 1), (-1, 1)]);
        let b = qdiag(&[(3, 1), (4, 1)]);
        assert_eq!(a.multiply(&b).unwrap(), qdiag(&[(6, 1), (-4, 1)]));
        let id = AlgebraElement::identity(*a.descriptor());
        assert_eq!(a.multiply(&id).unwrap(), a);
    }

    #[test]
    fn product_matches_triple_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_full(&mut rng, 3);
        let b = random_full(&mut rng, 3);
        let ab = a.multiply(&b).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = Complex::new(0.0, 0.0);
                for l in 0..3 {
                    s += a.entry(i, l) * b.entry(l, j);
                }
                assert!((s - ab.entry(i, j)).norm() <= 1e-9);
            }
        }
    }

    #[test]
    fn descriptor_mismatch_is_dimension_error() {
        let a = qdiag(&[(1, 1), (1, 1)]);
        let b = qdiag(&[(1, 1), (1, 1), (1, 1)]);
        assert!(matches!(a.multiply(&b), Err(FrameError::Dimension(_))));
    }

    #[test]
    fn adjoint_is_conjugate_transpose() {
        let d = AlgebraDescriptor::full::<Rational>(2).unwrap();
        let z = |re: i64, im: i64| Complex::new(rat(re, 1), rat(im, 1));
        let a = AlgebraElement::new(
            d,
            CMatrix::from_rows(vec![vec![z(1, 1), z(2, 0)], vec![z(0, 0), z(3, 0)]]).unwrap(),
        )
        .unwrap();
        let expected = AlgebraElement::new(
            d,
            CMatrix::from_rows(vec![vec![z(1, -1), z(0, 0)], vec![z(2, 0), z(3, 0)]]).unwrap(),
        )
        .unwrap();
        assert_eq!(a.adjoint(), expected);
        assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn diagonal_kind_rejects_off_diagonal() {
        let d = AlgebraDescriptor::diagonal::<f64>(2).unwrap();
        let m = CMatrix::from_fn(2, 2, |_, _| Complex::new(1.0, 0.0));
        assert!(matches!(AlgebraElement::new(d, m), Err(FrameError::Domain(_))));
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(AlgebraDescriptor::full::<f64>(0).is_err());
    }

    #[test]
    fn exact_diagonal_spectrum() {
        let s = qdiag(&[(4, 3), (1, 3)]).hermitian_eigenvalues(&cfg()).unwrap();
        assert_eq!(s.values, vec![rat(1, 3), rat(4, 3)]);
        assert!(!s.downgraded);
        let id = AlgebraElement::<f64>::identity(AlgebraDescriptor::full::<f64>(3).unwrap());
        assert_eq!(id.hermitian_eigenvalues(&cfg()).unwrap().values, vec![1.0; 3]);
    }

    #[test]
    fn full_rational_spectrum_is_flagged_downgraded() {
        let d = AlgebraDescriptor::full::<Rational>(2).unwrap();
        let q = |n| Complex::new(rat(n, 1), rat(0, 1));
        let a = AlgebraElement::new(d, CMatrix::from_rows(vec![vec![q(2), q(1)], vec![q(1), q(2)]]).unwrap()).unwrap();
        let s = a.hermitian_eigenvalues(&cfg()).unwrap();
        assert!(s.downgraded);
        assert!((s.values[0].as_f64() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_hermitian_eigenvalues_is_domain_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_full(&mut rng, 2);
        assert!(matches!(a.hermitian_eigenvalues(&cfg()), Err(FrameError::Domain(_))));
        assert!(!a.is_positive(&cfg()));
    }

    #[test]
    fn norm_matches_closed_form_svd_2x2() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let a = random_full(&mut rng, 2);
            let (p, q, r, s) = (a.entry(0, 0), a.entry(0, 1), a.entry(1, 0), a.entry(1, 1));
            let fro2 = p.norm_sqr() + q.norm_sqr() + r.norm_sqr() + s.norm_sqr();
            let det = (p * s - q * r).norm();
            let smax = ((fro2 + (fro2 * fro2 - 4.0 * det * det).max(0.0).sqrt()) / 2.0).sqrt();
            assert!((a.operator_norm(&cfg()).unwrap() - smax).abs() <= 1e-12 * smax.max(1.0));
        }
        assert_eq!(qdiag(&[(4, 3), (1, 3)]).operator_norm(&cfg()).unwrap(), 4.0 / 3.0);
        let zero = AlgebraElement::<f64>::zero(AlgebraDescriptor::full::<f64>(2).unwrap());
        assert_eq!(zero.operator_norm(&cfg()).unwrap(), 0.0);
    }

    #[test]
    fn positivity_and_order() {
        assert!(qdiag(&[(1, 3), (4, 3)]).is_positive(&cfg()));
        let d = AlgebraDescriptor::diagonal::<f64>(2).unwrap();
        let slightly_negative = AlgebraElement::diag_real(d, vec![1.0, -1e-3]).unwrap();
        assert!(!slightly_negative.is_positive(&cfg()));
        let third = qdiag(&[(1, 3), (1, 3)]);
        assert!(third.order_leq(&qdiag(&[(1, 3), (4, 3)]), &cfg()).unwrap());
        assert!(!qdiag(&[(2, 1), (0, 1)])
            .order_leq(&qdiag(&[(1, 1), (1, 1)]), &cfg())
            .unwrap());
        assert!(third.order_leq(&third, &cfg()).unwrap());
    }

    #[test]
    fn gram_elements_are_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let b = random_full(&mut rng, 3);
            assert!(b.adjoint().multiply(&b).unwrap().is_positive(&cfg()));
        }
    }

    #[test]
    fn inversion() {
        assert_eq!(
            qdiag(&[(4, 3), (1, 3)]).invert(&cfg()).unwrap(),
            qdiag(&[(3, 4), (3, 1)])
        );
        let id = qdiag(&[(1, 1), (1, 1)]);
        assert_eq!(id.invert(&cfg()).unwrap(), id);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_full(&mut rng, 3)
            .add(&AlgebraElement::scalar(
                AlgebraDescriptor::full::<f64>(3).unwrap(),
                Complex::new(5.0, 0.0),
            ))
            .unwrap();
        let inv = a.invert(&cfg()).unwrap();
        let prod = a.multiply(&inv).unwrap();
        assert!(prod.max_abs_diff(&AlgebraElement::identity(*a.descriptor())) <= 1e-10);
        assert!(matches!(
            qdiag(&[(1, 1), (0, 1)]).invert(&cfg()),
            Err(FrameError::Singular { .. })
        ));
    }
}
