//! Scalar fields backing the matrix algebras.
//!
//! Two modes exist: `f64` for floating-point work and [`Rational`] (arbitrary
//! precision fractions) for exact computations. Complex scalars are pairs of
//! either, via [`num_complex::Complex`].

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Complex scalar over a real field `T`.
pub type C<T> = Complex<T>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarMode {
    Float,
    Rational,
}

impl fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarMode::Float => f.write_str("float"),
            ScalarMode::Rational => f.write_str("rational"),
        }
    }
}

/// Real field used for the real and imaginary parts of algebra entries.
pub trait Scalar:
    Clone + fmt::Debug + fmt::Display + PartialEq + PartialOrd + Num + Signed + Send + Sync + 'static
{
    const MODE: ScalarMode;

    /// Nearest representable value. Exact for rationals (dyadic expansion).
    fn of_f64(x: f64) -> Self;

    fn as_f64(&self) -> f64;

    fn from_ratio(numer: i64, denom: i64) -> Self;

    /// Exact for rationals, nearest double otherwise.
    fn of_rational(q: &Rational) -> Self;

    fn exact() -> bool {
        Self::MODE == ScalarMode::Rational
    }

    /// `|x| <= tol`, or `x == 0` in exact mode.
    fn negligible(&self, tol: f64) -> bool {
        if Self::exact() {
            self.is_zero()
        } else {
            self.as_f64().abs() <= tol
        }
    }
}

impl Scalar for f64 {
    const MODE: ScalarMode = ScalarMode::Float;

    fn of_f64(x: f64) -> Self {
        x
    }

    fn as_f64(&self) -> f64 {
        *self
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn of_rational(q: &Rational) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }
}

impl Scalar for Rational {
    const MODE: ScalarMode = ScalarMode::Rational;

    fn of_f64(x: f64) -> Self {
        <BigRational as FromPrimitive>::from_f64(x).unwrap_or_else(BigRational::zero)
    }

    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn of_rational(q: &Rational) -> Self {
        q.clone()
    }
}

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::from_ratio(numer, denom)
}

pub fn real<T: Scalar>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

pub fn cplx_to_f64<T: Scalar>(z: &C<T>) -> C<f64> {
    Complex::new(z.re.as_f64(), z.im.as_f64())
}

pub fn cplx_from_f64<T: Scalar>(z: &C<f64>) -> C<T> {
    Complex::new(T::of_f64(z.re), T::of_f64(z.im))
}

/// Modulus computed in floating point.
pub fn modulus<T: Scalar>(z: &C<T>) -> f64 {
    cplx_to_f64(z).norm()
}

/// `|z| <= tol`, exact zero test in rational mode.
pub fn negligible<T: Scalar>(z: &C<T>, tol: f64) -> bool {
    if T::exact() {
        z.is_zero()
    } else {
        modulus(z) <= tol
    }
}

/// Tolerances for floating-point decisions. Ignored by exact comparisons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Slack allowed below zero for the smallest eigenvalue of a positive element.
    pub positivity_tol: f64,
    /// Entrywise comparison threshold.
    pub equality_tol: f64,
    /// Smallest singular value an invertible element must exceed.
    pub invertibility_tol: f64,
    /// Off-diagonal threshold at which the Jacobi solver stops.
    pub eig_tol: f64,
}

impl ToleranceConfig {
    pub const MAX_SWEEPS: usize = 100;

    pub fn with_equality_tol(mut self, tol: f64) -> Self {
        self.equality_tol = tol;
        self
    }

    pub fn validate(&self) -> crate::Result<()> {
        let all = [
            self.positivity_tol,
            self.equality_tol,
            self.invertibility_tol,
            self.eig_tol,
        ];
        if all.iter().all(|t| t.is_finite() && *t >= 0.0) {
            Ok(())
        } else {
            Err(crate::FrameError::Parameter(
                "tolerances must be finite and nonnegative".into(),
            ))
        }
    }
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            positivity_tol: 1e-9,
            equality_tol: 1e-9,
            invertibility_tol: 1e-10,
            eig_tol: 1e-12,
        }
    }
}
