//! Complex polynomials in a real variable, and matrices of them.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::cstar::{AlgebraDescriptor, AlgebraElement, AlgebraKind};
use crate::linalg::CMatrix;
use crate::scalar::{cplx_to_f64, Scalar, ScalarMode, C};
use crate::{FrameError, Result};

/// Coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T: Scalar> {
    coeffs: Vec<C<T>>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(coeffs: Vec<C<T>>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn real(coeffs: Vec<T>) -> Self {
        Self::new(coeffs.into_iter().map(|c| Complex::new(c, T::zero())).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: C<T>) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[C<T>] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &T) -> C<T> {
        let x = Complex::new(x.clone(), T::zero());
        self.coeffs.iter().rev().fold(C::zero(), |acc, c| acc * &x + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Self, i: usize| p.coeffs.get(i).cloned().unwrap_or_else(C::zero);
        Self::new((0..n).map(|i| get(self, i) + get(other, i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, s: &C<T>) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Conjugates the coefficients; the variable is real.
    pub fn conj(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(Complex::conj).collect(),
        }
    }

    /// `∫_a^b p(x) dx` through the antiderivative.
    pub fn integrate(&self, a: &T, b: &T) -> C<T> {
        let mut pow_a = a.clone();
        let mut pow_b = b.clone();
        let mut acc = C::zero();
        for (d, c) in self.coeffs.iter().enumerate() {
            let denom = T::from_ratio(1, d as i64 + 1);
            let span = (pow_b.clone() - pow_a.clone()) * denom;
            acc = acc + c * Complex::new(span, T::zero());
            pow_a = pow_a * a.clone();
            pow_b = pow_b * b.clone();
        }
        acc
    }

    pub fn to_f64(&self) -> Poly<f64> {
        Poly {
            coeffs: self.coeffs.iter().map(cplx_to_f64).collect(),
        }
    }

    pub fn has_real_coefficients(&self) -> bool {
        self.coeffs.iter().all(|c| c.im.is_zero())
    }
}

/// A `k × k` matrix of polynomials valued in a declared algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMatrix<T: Scalar> {
    descriptor: AlgebraDescriptor,
    entries: Vec<Poly<T>>,
}

impl<T: Scalar> PolyMatrix<T> {
    /// Row-major `k × k` entries. Diagonal algebras reject nonzero
    /// off-diagonal polynomials.
    pub fn new(descriptor: AlgebraDescriptor, entries: Vec<Vec<Poly<T>>>) -> Result<Self> {
        let k = descriptor.dim;
        if entries.len() != k || entries.iter().any(|r| r.len() != k) {
            return Err(FrameError::Dimension(format!("expected {k}x{k} polynomial entries")));
        }
        if descriptor.scalar_mode != T::MODE {
            return Err(FrameError::Mode(format!(
                "descriptor declares {} scalars",
                descriptor.scalar_mode
            )));
        }
        let entries: Vec<_> = entries.into_iter().flatten().collect();
        if descriptor.kind == AlgebraKind::Diagonal
            && entries
                .iter()
                .enumerate()
                .any(|(idx, p)| idx / k != idx % k && !p.is_zero())
        {
            return Err(FrameError::Domain(
                "diagonal algebra rejects nonzero off-diagonal polynomials".into(),
            ));
        }
        Ok(Self { descriptor, entries })
    }

    pub fn diagonal(descriptor: AlgebraDescriptor, diag: Vec<Poly<T>>) -> Result<Self> {
        let k = descriptor.dim;
        if diag.len() != k {
            return Err(FrameError::Dimension("diagonal length".into()));
        }
        let mut diag = diag.into_iter();
        let rows = (0..k)
            .map(|r| {
                (0..k)
                    .map(|c| {
                        if r == c {
                            diag.next().unwrap_or_else(Poly::zero)
                        } else {
                            Poly::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(descriptor, rows)
    }

    pub fn constant(a: &AlgebraElement<T>) -> Self {
        Self {
            descriptor: *a.descriptor(),
            entries: a.matrix().entries().iter().cloned().map(Poly::constant).collect(),
        }
    }

    pub fn zero(descriptor: AlgebraDescriptor) -> Self {
        Self {
            descriptor,
            entries: vec![Poly::zero(); descriptor.dim * descriptor.dim],
        }
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        &self.descriptor
    }

    pub fn entry(&self, r: usize, c: usize) -> &Poly<T> {
        &self.entries[r * self.descriptor.dim + c]
    }

    pub fn degree(&self) -> usize {
        self.entries.iter().map(Poly::degree).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn eval(&self, x: &T) -> AlgebraElement<T> {
        let k = self.descriptor.dim;
        AlgebraElement::projected(self.descriptor, CMatrix::from_fn(k, k, |r, c| self.entry(r, c).eval(x)))
    }

    pub fn adjoint(&self) -> Self {
        let k = self.descriptor.dim;
        let mut entries = Vec::with_capacity(k * k);
        for r in 0..k {
            for c in 0..k {
                entries.push(self.entry(c, r).conj());
            }
        }
        Self {
            descriptor: self.descriptor,
            entries,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.descriptor.check_same(&other.descriptor)?;
        let k = self.descriptor.dim;
        let mut entries = Vec::with_capacity(k * k);
        for r in 0..k {
            for c in 0..k {
                let mut acc = Poly::zero();
                for l in 0..k {
                    acc = acc.add(&self.entry(r, l).mul(other.entry(l, c)));
                }
                entries.push(acc);
            }
        }
        Ok(Self {
            descriptor: self.descriptor,
            entries,
        })
    }

    pub fn mul_const(&self, a: &AlgebraElement<T>) -> Result<Self> {
        self.mul(&Self::constant(a))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.descriptor.check_same(&other.descriptor)?;
        Ok(Self {
            descriptor: self.descriptor,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn scale_poly(&self, p: &Poly<T>) -> Self {
        Self {
            descriptor: self.descriptor,
            entries: self.entries.iter().map(|e| e.mul(p)).collect(),
        }
    }

    /// Entrywise `∫_a^b`.
    pub fn integrate(&self, a: &T, b: &T) -> AlgebraElement<T> {
        let k = self.descriptor.dim;
        AlgebraElement::projected(
            self.descriptor,
            CMatrix::from_fn(k, k, |r, c| self.entry(r, c).integrate(a, b)),
        )
    }

    pub fn to_f64(&self) -> PolyMatrix<f64> {
        PolyMatrix {
            descriptor: self.descriptor.with_mode(ScalarMode::Float),
            entries: self.entries.iter().map(Poly::to_f64).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    fn q(n: i64, d: i64) -> C<Rational> {
        Complex::new(rat(n, d), rat(0, 1))
    }

    #[test]
    fn antiderivative_integration_is_exact() {
        // ∫_0^1 (ω - 1)^2 dω = 1/3
        let p = Poly::new(vec![q(-1, 1), q(1, 1)]);
        let sq = p.mul(&p);
        assert_eq!(sq.integrate(&rat(0, 1), &rat(1, 1)), q(1, 3));
        // ∫_{-1}^{2} 3ω^2 dω = 9
        let p = Poly::new(vec![q(0, 1), q(0, 1), q(3, 1)]);
        assert_eq!(p.integrate(&rat(-1, 1), &rat(2, 1)), q(9, 1));
    }

    #[test]
    fn trimming_and_degree() {
        let p = Poly::new(vec![q(1, 1), q(0, 1), q(0, 1)]);
        assert_eq!(p.degree(), 0);
        assert!(Poly::<Rational>::new(vec![q(0, 1)]).is_zero());
    }

    #[test]
    fn matrix_adjoint_conjugates_and_transposes() {
        let d = AlgebraDescriptor::full::<f64>(2).unwrap();
        let z = |re: f64, im: f64| Complex::new(re, im);
        let m = PolyMatrix::new(
            d,
            vec![
                vec![Poly::new(vec![z(0.0, 1.0)]), Poly::new(vec![z(0.0, 0.0), z(2.0, 0.0)])],
                vec![Poly::zero(), Poly::one()],
            ],
        )
        .unwrap();
        let x = 0.7;
        let lhs = m.adjoint().eval(&x);
        let rhs = m.eval(&x).adjoint();
        assert!(lhs.max_abs_diff(&rhs) < 1e-15);
    }

    #[test]
    fn diagonal_kind_rejects_off_diagonal_polynomials() {
        let d = AlgebraDescriptor::diagonal::<f64>(2).unwrap();
        let res = PolyMatrix::new(
            d,
            vec![vec![Poly::<f64>::one(), Poly::one()], vec![Poly::zero(), Poly::one()]],
        );
        assert!(matches!(res, Err(FrameError::Domain(_))));
    }
}
