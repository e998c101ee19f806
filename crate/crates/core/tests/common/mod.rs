#![allow(dead_code)]

use cframe_core::scalar::rat;
use cframe_core::{
    AlgebraDescriptor, AlgebraElement, FrameMap, MeasureSpace, ModuleDescriptor, ModuleElement, Poly, PolyMatrix,
    Rational, Scalar,
};

pub fn diag2<T: Scalar>() -> AlgebraDescriptor {
    AlgebraDescriptor::diagonal::<T>(2).unwrap()
}

pub fn rank1<T: Scalar>() -> ModuleDescriptor {
    ModuleDescriptor::new(diag2::<T>(), 1).unwrap()
}

pub fn unit_interval<T: Scalar>() -> MeasureSpace<T> {
    MeasureSpace::lebesgue(T::zero(), T::one()).unwrap()
}

/// `ω ↦ diag(c0 + c1·ω, d0 + d1·ω)` given as ratios.
pub fn affine_diag<T: Scalar>(measure: MeasureSpace<T>, c: [(i64, i64); 2], d: [(i64, i64); 2]) -> FrameMap<T> {
    let p = |(n0, d0): (i64, i64), (n1, d1): (i64, i64)| Poly::real(vec![T::from_ratio(n0, d0), T::from_ratio(n1, d1)]);
    let m = PolyMatrix::diagonal(diag2::<T>(), vec![p(c[0], c[1]), p(d[0], d[1])]).unwrap();
    FrameMap::polynomial(rank1::<T>(), measure, vec![m]).unwrap()
}

/// `F(ω) = diag(2ω, ω − 1)` on `[0, 1]`.
pub fn first_example<T: Scalar>() -> FrameMap<T> {
    affine_diag(unit_interval(), [(0, 1), (2, 1)], [(-1, 1), (1, 1)])
}

/// `G(ω) = diag((3/2)ω, ω − 7/3)` on `[0, 1]`.
pub fn second_example<T: Scalar>() -> FrameMap<T> {
    affine_diag(unit_interval(), [(0, 1), (3, 2)], [(-7, 3), (1, 1)])
}

pub fn diag_elem<T: Scalar>(a: T, b: T) -> AlgebraElement<T> {
    AlgebraElement::diag_real(diag2::<T>(), vec![a, b]).unwrap()
}

pub fn identity_atoms<T: Scalar>(m: usize) -> FrameMap<T> {
    let points = (0..m).map(|i| T::from_ratio(i as i64, 1)).collect();
    let weights = vec![T::one(); m];
    let measure = MeasureSpace::atoms(points, weights).unwrap();
    let id = ModuleElement::new(rank1::<T>(), vec![AlgebraElement::identity(diag2::<T>())]).unwrap();
    FrameMap::constant(measure, &id)
}

pub fn q(n: i64, d: i64) -> Rational {
    rat(n, d)
}
