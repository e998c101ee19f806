//! Random algebra elements, operators and frame maps for property checks.
//!
//! Rational draws are multiples of 1/8 in `[-1, 1]`; float draws are
//! uniform in `[-1, 1)`.

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;

use crate::cstar::{AlgebraDescriptor, AlgebraElement, AlgebraKind};
use crate::linalg::CMatrix;
use crate::measure::{FrameMap, MeasureSpace};
use crate::module::{ModuleDescriptor, ModuleElement, ModuleOperator};
use crate::poly::{Poly, PolyMatrix};
use crate::scalar::{Scalar, C};
use crate::Result;

pub fn random_real<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> T {
    if T::exact() {
        T::from_ratio(rng.gen_range(-8..=8), 8)
    } else {
        T::of_f64(rng.gen_range(-1.0..1.0))
    }
}

pub fn random_complex<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> C<T> {
    Complex::new(random_real(rng), random_real(rng))
}

/// Entries conform to the kind: off-diagonals stay zero for diagonal algebras.
pub fn random_algebra_element<T: Scalar, R: Rng + ?Sized>(desc: AlgebraDescriptor, rng: &mut R) -> AlgebraElement<T> {
    let k = desc.dim;
    let m = CMatrix::from_fn(k, k, |r, c| {
        if r == c || desc.kind == AlgebraKind::Full {
            random_complex(rng)
        } else {
            C::zero()
        }
    });
    AlgebraElement::new(desc, m).expect("random entries conform to the descriptor")
}

pub fn random_module_element<T: Scalar, R: Rng + ?Sized>(desc: ModuleDescriptor, rng: &mut R) -> ModuleElement<T> {
    let comps = (0..desc.rank)
        .map(|_| random_algebra_element(desc.algebra, rng))
        .collect();
    ModuleElement::new(desc, comps).expect("components share the algebra")
}

pub fn random_operator<T: Scalar, R: Rng + ?Sized>(desc: ModuleDescriptor, rng: &mut R) -> ModuleOperator<T> {
    let n = desc.rank;
    let blocks = (0..n)
        .map(|_| (0..n).map(|_| random_algebra_element(desc.algebra, rng)).collect())
        .collect();
    ModuleOperator::from_blocks(desc, blocks).expect("blocks share the algebra")
}

/// `2·I + E/(nk)` with `E` random. Entries of `E` have modulus at most
/// `√2`, so `‖E/(nk)‖ ≤ √2` and the result is invertible with
/// `σ_min ≥ 2 - √2`.
pub fn random_invertible_operator<T: Scalar, R: Rng + ?Sized>(
    desc: ModuleDescriptor,
    rng: &mut R,
) -> ModuleOperator<T> {
    let shrink = Complex::new(T::from_ratio(1, desc.flat_dim() as i64), T::zero());
    let e = random_operator::<T, R>(desc, rng).scale(&shrink);
    ModuleOperator::identity(desc)
        .scale(&Complex::new(T::from_ratio(2, 1), T::zero()))
        .add(&e)
        .expect("same descriptor")
}

/// Polynomial with complex coefficients and degree at most `degree`.
pub fn random_poly<T: Scalar, R: Rng + ?Sized>(degree: usize, rng: &mut R) -> Poly<T> {
    Poly::new((0..=degree).map(|_| random_complex(rng)).collect())
}

pub fn random_poly_matrix<T: Scalar, R: Rng + ?Sized>(
    desc: AlgebraDescriptor,
    degree: usize,
    rng: &mut R,
) -> PolyMatrix<T> {
    let k = desc.dim;
    let rows = (0..k)
        .map(|r| {
            (0..k)
                .map(|c| {
                    if r == c || desc.kind == AlgebraKind::Full {
                        random_poly(degree, rng)
                    } else {
                        Poly::zero()
                    }
                })
                .collect()
        })
        .collect();
    PolyMatrix::new(desc, rows).expect("entries conform to the descriptor")
}

/// Polynomial frame map of degree at most `degree` over `measure`.
pub fn random_poly_frame<T: Scalar, R: Rng + ?Sized>(
    module: ModuleDescriptor,
    measure: MeasureSpace<T>,
    degree: usize,
    rng: &mut R,
) -> Result<FrameMap<T>> {
    let comps = (0..module.rank)
        .map(|_| random_poly_matrix(module.algebra, degree, rng))
        .collect();
    FrameMap::polynomial(module, measure, comps)
}

/// `m` atoms at `0, 1, …, m-1` with weights drawn from `{1/4, 1/2, …, 2}`,
/// carrying constant random values.
pub fn random_atomic_frame<T: Scalar, R: Rng + ?Sized>(
    module: ModuleDescriptor,
    atoms: usize,
    rng: &mut R,
) -> Result<FrameMap<T>> {
    let points = (0..atoms).map(|i| T::from_ratio(i as i64, 1)).collect();
    let weights = (0..atoms).map(|_| T::from_ratio(rng.gen_range(1..=8), 4)).collect();
    let measure = MeasureSpace::atoms(points, weights)?;
    let samples = measure
        .nodes(0)?
        .into_iter()
        .map(|n| crate::measure::Sample {
            point: n.point,
            weight: n.weight,
            value: random_module_element(module, rng),
        })
        .collect();
    FrameMap::sampled(module, measure, samples)
}
