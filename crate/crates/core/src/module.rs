//! The Hilbert module `U = A^n` and its adjointable operators.
//!
//! Inner product: `⟨f, g⟩ = Σ_i f_i · g_i*`, A-linear in the first slot.
//! Operators act by right multiplication with an `n × n` block matrix over
//! `A`: `(K f)_j = Σ_i f_i · M_ij`. Flattening lays the blocks out verbatim
//! as an `(n·k) × (n·k)` complex matrix `M`, so that `K f` is the row block
//! `[f_1 … f_n] · M`.

use crate::cstar::{hermitian_spectrum, is_positive_matrix, AlgebraDescriptor, AlgebraElement, Spectrum};
use crate::linalg::{singular_values, CMatrix};
use crate::scalar::{Scalar, ScalarMode, C};
use crate::{FrameError, Result, ToleranceConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModuleDescriptor {
    pub algebra: AlgebraDescriptor,
    pub rank: usize,
}

impl ModuleDescriptor {
    pub fn new(algebra: AlgebraDescriptor, rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(FrameError::Parameter("module rank must be >= 1".into()));
        }
        Ok(Self { algebra, rank })
    }

    /// Side length of the flattened operator matrix.
    pub fn flat_dim(&self) -> usize {
        self.rank * self.algebra.dim
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self != other {
            return Err(FrameError::Dimension(format!(
                "module rank {} over {}({}) vs rank {} over {}({})",
                self.rank, self.algebra.kind, self.algebra.dim, other.rank, other.algebra.kind, other.algebra.dim
            )));
        }
        Ok(())
    }

    pub(crate) fn with_mode(self, mode: ScalarMode) -> Self {
        Self {
            algebra: self.algebra.with_mode(mode),
            ..self
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModuleElement<T: Scalar> {
    descriptor: ModuleDescriptor,
    components: Vec<AlgebraElement<T>>,
}

impl<T: Scalar> ModuleElement<T> {
    pub fn new(descriptor: ModuleDescriptor, components: Vec<AlgebraElement<T>>) -> Result<Self> {
        if components.len() != descriptor.rank {
            return Err(FrameError::Dimension(format!(
                "expected {} components, got {}",
                descriptor.rank,
                components.len()
            )));
        }
        for c in &components {
            descriptor.algebra.check_same(c.descriptor())?;
        }
        Ok(Self { descriptor, components })
    }

    pub fn zero(descriptor: ModuleDescriptor) -> Self {
        Self {
            descriptor,
            components: vec![AlgebraElement::zero(descriptor.algebra); descriptor.rank],
        }
    }

    /// `a` in slot `i`, zero elsewhere.
    pub fn unit(descriptor: ModuleDescriptor, i: usize, a: AlgebraElement<T>) -> Result<Self> {
        let mut f = Self::zero(descriptor);
        descriptor.algebra.check_same(a.descriptor())?;
        *f.components
            .get_mut(i)
            .ok_or_else(|| FrameError::Dimension(format!("slot {i} out of range")))? = a;
        Ok(f)
    }

    pub fn descriptor(&self) -> &ModuleDescriptor {
        &self.descriptor
    }

    pub fn components(&self) -> &[AlgebraElement<T>] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &AlgebraElement<T> {
        &self.components[i]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(AlgebraElement::is_zero)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.descriptor.check_same(&other.descriptor)?;
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(Self {
            descriptor: self.descriptor,
            components,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&C::new(-T::one(), T::zero())))
    }

    pub fn scale(&self, s: &C<T>) -> Self {
        Self {
            descriptor: self.descriptor,
            components: self.components.iter().map(|c| c.scale(s)).collect(),
        }
    }

    /// Module action `a · f`.
    pub fn left_mul(&self, a: &AlgebraElement<T>) -> Result<Self> {
        let components = self.components.iter().map(|c| a.multiply(c)).collect::<Result<_>>()?;
        Ok(Self {
            descriptor: self.descriptor,
            components,
        })
    }

    /// Right multiplication of every component by `a`.
    pub fn right_mul(&self, a: &AlgebraElement<T>) -> Result<Self> {
        let components = self.components.iter().map(|c| c.multiply(a)).collect::<Result<_>>()?;
        Ok(Self {
            descriptor: self.descriptor,
            components,
        })
    }

    /// `⟨f, g⟩ = Σ_i f_i · g_i*`.
    pub fn inner_product(&self, other: &Self) -> Result<AlgebraElement<T>> {
        self.descriptor.check_same(&other.descriptor)?;
        let mut acc = AlgebraElement::zero(self.descriptor.algebra);
        for (f, g) in self.components.iter().zip(&other.components) {
            acc = acc.add(&f.multiply(&g.adjoint())?)?;
        }
        Ok(acc)
    }

    /// `‖f‖ = ‖⟨f, f⟩‖^{1/2}`.
    pub fn module_norm(&self, cfg: &ToleranceConfig) -> Result<f64> {
        Ok(self.inner_product(self)?.operator_norm(cfg)?.sqrt())
    }

    /// The row block `[f_1 … f_n]` of shape `k × n·k`.
    pub fn row_block(&self) -> CMatrix<T> {
        let k = self.descriptor.algebra.dim;
        CMatrix::from_fn(k, self.descriptor.flat_dim(), |r, c| {
            self.components[c / k].entry(r, c % k).clone()
        })
    }

    pub(crate) fn from_row_block(descriptor: ModuleDescriptor, row: &CMatrix<T>) -> Self {
        let k = descriptor.algebra.dim;
        let components = (0..descriptor.rank)
            .map(|i| {
                AlgebraElement::projected(
                    descriptor.algebra,
                    CMatrix::from_fn(k, k, |r, c| row[(r, i * k + c)].clone()),
                )
            })
            .collect();
        Self { descriptor, components }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, cfg: &ToleranceConfig) -> bool {
        self.descriptor == other.descriptor
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a.approx_eq(b, cfg))
    }

    pub fn to_f64(&self) -> ModuleElement<f64> {
        ModuleElement {
            descriptor: self.descriptor.with_mode(ScalarMode::Float),
            components: self.components.iter().map(AlgebraElement::to_f64).collect(),
        }
    }
}

/// Spectral summary of a module operator, computed on its flattening.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSpectral<T> {
    pub is_self_adjoint: bool,
    pub is_positive: bool,
    /// Ascending eigenvalues of the flattening, when self-adjoint.
    pub eigenvalues: Option<Spectrum<T>>,
    pub operator_norm: f64,
    pub smallest_eigenvalue: Option<T>,
    pub smallest_singular_value: f64,
    pub is_invertible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModuleOperator<T: Scalar> {
    descriptor: ModuleDescriptor,
    blocks: Vec<AlgebraElement<T>>,
}

impl<T: Scalar> ModuleOperator<T> {
    /// Builds an operator from its `n × n` blocks, row-major.
    pub fn from_blocks(descriptor: ModuleDescriptor, blocks: Vec<Vec<AlgebraElement<T>>>) -> Result<Self> {
        let n = descriptor.rank;
        if blocks.len() != n || blocks.iter().any(|r| r.len() != n) {
            return Err(FrameError::Dimension(format!("expected {n}x{n} blocks")));
        }
        let blocks: Vec<_> = blocks.into_iter().flatten().collect();
        for b in &blocks {
            descriptor.algebra.check_same(b.descriptor())?;
        }
        Ok(Self { descriptor, blocks })
    }

    pub(crate) fn from_fn(
        descriptor: ModuleDescriptor,
        mut f: impl FnMut(usize, usize) -> Result<AlgebraElement<T>>,
    ) -> Result<Self> {
        let n = descriptor.rank;
        let mut blocks = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                blocks.push(f(i, j)?);
            }
        }
        Ok(Self { descriptor, blocks })
    }

    pub fn identity(descriptor: ModuleDescriptor) -> Self {
        Self::from_flat(descriptor, &CMatrix::identity(descriptor.flat_dim())).expect("identity has the flat dimension")
    }

    pub fn zero(descriptor: ModuleDescriptor) -> Self {
        Self {
            descriptor,
            blocks: vec![AlgebraElement::zero(descriptor.algebra); descriptor.rank * descriptor.rank],
        }
    }

    /// Block-diagonal operator with `a` on every diagonal slot.
    pub fn scalar(descriptor: ModuleDescriptor, a: &AlgebraElement<T>) -> Result<Self> {
        descriptor.algebra.check_same(a.descriptor())?;
        Self::from_fn(descriptor, |i, j| {
            Ok(if i == j {
                a.clone()
            } else {
                AlgebraElement::zero(descriptor.algebra)
            })
        })
    }

    /// Inverse of [`flatten`](Self::flatten). Off-diagonal entries of each
    /// block are dropped for the diagonal kind.
    pub fn from_flat(descriptor: ModuleDescriptor, flat: &CMatrix<T>) -> Result<Self> {
        let (k, nk) = (descriptor.algebra.dim, descriptor.flat_dim());
        if flat.rows() != nk || flat.cols() != nk {
            return Err(FrameError::Dimension(format!("expected {nk}x{nk} flat matrix")));
        }
        Self::from_fn(descriptor, |i, j| {
            Ok(AlgebraElement::projected(
                descriptor.algebra,
                CMatrix::from_fn(k, k, |r, c| flat[(i * k + r, j * k + c)].clone()),
            ))
        })
    }

    pub fn descriptor(&self) -> &ModuleDescriptor {
        &self.descriptor
    }

    pub fn block(&self, i: usize, j: usize) -> &AlgebraElement<T> {
        &self.blocks[i * self.descriptor.rank + j]
    }

    pub fn flatten(&self) -> CMatrix<T> {
        let (n, k) = (self.descriptor.rank, self.descriptor.algebra.dim);
        CMatrix::from_fn(n * k, n * k, |r, c| {
            self.block(r / k, c / k).entry(r % k, c % k).clone()
        })
    }

    /// `(K f)_j = Σ_i f_i · M_ij`.
    pub fn apply(&self, f: &ModuleElement<T>) -> Result<ModuleElement<T>> {
        self.descriptor.check_same(f.descriptor())?;
        let row = f.row_block().mul(&self.flatten())?;
        Ok(ModuleElement::from_row_block(self.descriptor, &row))
    }

    /// Blocks `(K*)_ij = M_ji*`, so that `⟨K f, g⟩ = ⟨f, K* g⟩`.
    pub fn adjoint(&self) -> Self {
        let n = self.descriptor.rank;
        let mut blocks = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                blocks.push(self.block(j, i).adjoint());
            }
        }
        Self {
            descriptor: self.descriptor,
            blocks,
        }
    }

    /// Block product `self · other`. Under the right action this applies
    /// `self` first and `other` second, and
    /// `flatten(a.compose(b)) = flatten(a) · flatten(b)`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.descriptor.check_same(&other.descriptor)?;
        Self::from_flat(self.descriptor, &self.flatten().mul(&other.flatten())?)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.descriptor.check_same(&other.descriptor)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(Self {
            descriptor: self.descriptor,
            blocks,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&C::new(-T::one(), T::zero())))
    }

    pub fn scale(&self, s: &C<T>) -> Self {
        Self {
            descriptor: self.descriptor,
            blocks: self.blocks.iter().map(|b| b.scale(s)).collect(),
        }
    }

    pub fn is_self_adjoint(&self, cfg: &ToleranceConfig) -> bool {
        let n = self.descriptor.rank;
        (0..n).all(|i| {
            (i..n).all(|j| {
                self.block(i, j)
                    .matrix()
                    .approx_eq(self.block(j, i).adjoint().matrix(), cfg.equality_tol)
            })
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, cfg: &ToleranceConfig) -> bool {
        self.descriptor == other.descriptor && self.blocks.iter().zip(&other.blocks).all(|(a, b)| a.approx_eq(b, cfg))
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(AlgebraElement::is_zero)
    }

    /// Largest singular value of the flattening.
    pub fn operator_norm(&self) -> Result<f64> {
        Ok(singular_values(&self.flatten().to_f64(), 1e-14)?
            .first()
            .copied()
            .unwrap_or(0.0))
    }

    pub fn spectral(&self, cfg: &ToleranceConfig) -> Result<OperatorSpectral<T>> {
        let flat = self.flatten();
        let is_self_adjoint = self.is_self_adjoint(cfg);
        let eigenvalues = if is_self_adjoint {
            Some(hermitian_spectrum(&flat, cfg)?)
        } else {
            None
        };
        let sv = singular_values(&flat.to_f64(), 1e-14)?;
        let smallest_singular_value = sv.last().copied().unwrap_or(0.0);
        let is_invertible = if T::exact() {
            flat.rank(0.0)? == flat.rows()
        } else {
            smallest_singular_value > cfg.invertibility_tol
        };
        Ok(OperatorSpectral {
            is_self_adjoint,
            is_positive: is_self_adjoint && is_positive_matrix(&flat, cfg),
            smallest_eigenvalue: eigenvalues.as_ref().and_then(|s| s.values.first().cloned()),
            eigenvalues,
            operator_norm: sv.first().copied().unwrap_or(0.0),
            smallest_singular_value,
            is_invertible,
        })
    }

    pub fn invert(&self, cfg: &ToleranceConfig) -> Result<Self> {
        let inv = self.flatten().inverse(cfg.invertibility_tol)?;
        Self::from_flat(self.descriptor, &inv)
    }

    pub fn to_f64(&self) -> ModuleOperator<f64> {
        ModuleOperator {
            descriptor: self.descriptor.with_mode(ScalarMode::Float),
            blocks: self.blocks.iter().map(AlgebraElement::to_f64).collect(),
        }
    }
}

/// `⟨K f, f⟩`.
pub fn quadratic_form<T: Scalar>(k: &ModuleOperator<T>, f: &ModuleElement<T>) -> Result<AlgebraElement<T>> {
    k.apply(f)?.inner_product(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cstar::AlgebraKind;
    use crate::scalar::{rat, Rational};
    use num_complex::Complex;
    use num_traits::Zero;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn desc(kind: AlgebraKind, k: usize, n: usize) -> ModuleDescriptor {
        ModuleDescriptor::new(AlgebraDescriptor::new::<f64>(kind, k).unwrap(), n).unwrap()
    }

    fn rand_alg(rng: &mut ChaCha8Rng, d: AlgebraDescriptor) -> AlgebraElement<f64> {
        let m = CMatrix::from_fn(d.dim, d.dim, |r, c| {
            if d.kind == AlgebraKind::Diagonal && r != c {
                Complex::zero()
            } else {
                Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            }
        });
        AlgebraElement::new(d, m).unwrap()
    }

    fn rand_elem(rng: &mut ChaCha8Rng, d: ModuleDescriptor) -> ModuleElement<f64> {
        let comps = (0..d.rank).map(|_| rand_alg(rng, d.algebra)).collect();
        ModuleElement::new(d, comps).unwrap()
    }

    fn rand_op(rng: &mut ChaCha8Rng, d: ModuleDescriptor) -> ModuleOperator<f64> {
        ModuleOperator::from_fn(d, |_, _| Ok(rand_alg(rng, d.algebra))).unwrap()
    }

    #[test]
    fn inner_product_of_diagonals() {
        let a = AlgebraDescriptor::diagonal::<Rational>(2).unwrap();
        let d = ModuleDescriptor::new(a, 1).unwrap();
        let z = |re, im| Complex::new(rat(re, 1), rat(im, 1));
        let f = ModuleElement::new(
            d,
            vec![AlgebraElement::from_diagonal(a, vec![z(1, 2), z(3, 0)]).unwrap()],
        )
        .unwrap();
        let g = ModuleElement::new(
            d,
            vec![AlgebraElement::from_diagonal(a, vec![z(0, 1), z(-2, 1)]).unwrap()],
        )
        .unwrap();
        let expected =
            AlgebraElement::from_diagonal(a, vec![z(1, 2) * z(0, 1).conj(), z(3, 0) * z(-2, 1).conj()]).unwrap();
        assert_eq!(f.inner_product(&g).unwrap(), expected);
        let zero = ModuleElement::<Rational>::zero(d);
        assert!(zero.inner_product(&zero).unwrap().is_zero());
    }

    #[test]
    fn inner_product_matches_scalar_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let d = desc(AlgebraKind::Full, 3, 2);
        let f = rand_elem(&mut rng, d);
        let g = rand_elem(&mut rng, d);
        let ip = f.inner_product(&g).unwrap();
        for p in 0..3 {
            for q in 0..3 {
                let mut s = Complex::new(0.0, 0.0);
                for i in 0..2 {
                    for l in 0..3 {
                        s += f.component(i).entry(p, l) * g.component(i).entry(q, l).conj();
                    }
                }
                assert!((s - ip.entry(p, q)).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn module_norms() {
        let a = AlgebraDescriptor::diagonal::<f64>(2).unwrap();
        let d = ModuleDescriptor::new(a, 1).unwrap();
        let id = ModuleElement::<f64>::new(d, vec![AlgebraElement::identity(a)]).unwrap();
        assert_eq!(id.module_norm(&cfg()).unwrap(), 1.0);
        let f = ModuleElement::new(d, vec![AlgebraElement::diag_real(a, vec![3.0, 0.0]).unwrap()]).unwrap();
        assert_eq!(f.module_norm(&cfg()).unwrap(), 3.0);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let d = desc(AlgebraKind::Full, 2, 3);
        for _ in 0..20 {
            let f = rand_elem(&mut rng, d);
            let lam = Complex::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let lhs = f.scale(&lam).module_norm(&cfg()).unwrap();
            let rhs = lam.norm() * f.module_norm(&cfg()).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
        }
    }

    #[test]
    fn apply_identity_and_single_block() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let d = desc(AlgebraKind::Full, 2, 2);
        let f = rand_elem(&mut rng, d);
        assert!(ModuleOperator::identity(d).apply(&f).unwrap().max_abs_diff(&f) <= 1e-15);
        let d1 = desc(AlgebraKind::Full, 2, 1);
        let m = rand_alg(&mut rng, d1.algebra);
        let a = rand_alg(&mut rng, d1.algebra);
        let k = ModuleOperator::from_blocks(d1, vec![vec![m.clone()]]).unwrap();
        let f = ModuleElement::new(d1, vec![a.clone()]).unwrap();
        let kf = k.apply(&f).unwrap();
        assert!(kf.component(0).max_abs_diff(&a.multiply(&m).unwrap()) <= 1e-15);
    }

    #[test]
    fn adjoint_identity_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for kind in [AlgebraKind::Full, AlgebraKind::Diagonal] {
            let d = desc(kind, 3, 2);
            let k = rand_op(&mut rng, d);
            let f = rand_elem(&mut rng, d);
            let g = rand_elem(&mut rng, d);
            let lhs = k.apply(&f).unwrap().inner_product(&g).unwrap();
            let rhs = f.inner_product(&k.adjoint().apply(&g).unwrap()).unwrap();
            assert!(lhs.max_abs_diff(&rhs) <= 1e-10);
            assert_eq!(k.adjoint().flatten(), k.flatten().adjoint());
        }
    }

    #[test]
    fn adjoint_involution_exact() {
        let a = AlgebraDescriptor::full::<Rational>(2).unwrap();
        let d = ModuleDescriptor::new(a, 2).unwrap();
        let mut counter = 0i64;
        let k = ModuleOperator::from_fn(d, |_, _| {
            let m = CMatrix::from_fn(2, 2, |_, _| {
                counter += 1;
                Complex::new(rat(counter, 3), rat(-counter, 7))
            });
            AlgebraElement::new(a, m)
        })
        .unwrap();
        assert_eq!(k.adjoint().adjoint(), k);
        assert_eq!(
            ModuleOperator::<Rational>::identity(d).adjoint(),
            ModuleOperator::identity(d)
        );
    }

    #[test]
    fn flatten_respects_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let d = desc(AlgebraKind::Full, 2, 3);
        let k = rand_op(&mut rng, d);
        let l = rand_op(&mut rng, d);
        let lhs = k.compose(&l).unwrap().flatten();
        let rhs = k.flatten().mul(&l.flatten()).unwrap();
        assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
        // applies k first, then l
        let f = rand_elem(&mut rng, d);
        let seq = l.apply(&k.apply(&f).unwrap()).unwrap();
        assert!(k.compose(&l).unwrap().apply(&f).unwrap().max_abs_diff(&seq) <= 1e-12);
        assert_eq!(ModuleOperator::<f64>::identity(d).flatten(), CMatrix::identity(6));
    }

    #[test]
    fn example_moment_operator_spectral() {
        let a = AlgebraDescriptor::diagonal::<Rational>(2).unwrap();
        let d = ModuleDescriptor::new(a, 1).unwrap();
        let s = ModuleOperator::from_blocks(
            d,
            vec![vec![AlgebraElement::diag_real(a, vec![rat(4, 3), rat(1, 3)]).unwrap()]],
        )
        .unwrap();
        let sp = s.spectral(&cfg()).unwrap();
        assert!(sp.is_self_adjoint && sp.is_positive && sp.is_invertible);
        assert_eq!(sp.eigenvalues.unwrap().values, vec![rat(1, 3), rat(4, 3)]);
        assert!((sp.operator_norm - 4.0 / 3.0).abs() < 1e-15);
        let inv = s.invert(&cfg()).unwrap();
        assert_eq!(
            inv.block(0, 0),
            &AlgebraElement::diag_real(a, vec![rat(3, 4), rat(3, 1)]).unwrap()
        );
        let zero = ModuleOperator::<Rational>::zero(d).spectral(&cfg()).unwrap();
        assert!(zero.is_positive && !zero.is_invertible);
    }

    #[test]
    fn norm_matches_power_iteration() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let d = desc(AlgebraKind::Full, 2, 2);
        for _ in 0..10 {
            let k = rand_op(&mut rng, d);
            let flat = k.flatten();
            let gram = flat.adjoint().mul(&flat).unwrap();
            let mut v = vec![Complex::new(1.0, 0.3); 4];
            let mut lam = 0.0;
            for _ in 0..2000 {
                let w = gram.mul_vec(&v).unwrap();
                let nrm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                lam = nrm / v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                v = w.iter().map(|z| z / nrm).collect();
            }
            let norm = k.operator_norm().unwrap();
            assert!((norm - lam.sqrt()).abs() <= 1e-8 * norm);
        }
    }

    #[test]
    fn invert_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        let d = desc(AlgebraKind::Full, 2, 2);
        let k = rand_op(&mut rng, d)
            .add(&ModuleOperator::identity(d).scale(&Complex::new(4.0, 0.0)))
            .unwrap();
        let inv = k.invert(&cfg()).unwrap();
        let res = k.compose(&inv).unwrap().max_abs_diff(&ModuleOperator::identity(d));
        assert!(res <= 1e-9);
        assert!(matches!(
            ModuleOperator::<f64>::zero(d).invert(&cfg()),
            Err(FrameError::Singular { .. })
        ));
    }

    #[test]
    fn diagonal_closure_of_operations() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let d = desc(AlgebraKind::Diagonal, 3, 2);
        let k = rand_op(&mut rng, d)
            .add(&ModuleOperator::identity(d).scale(&Complex::new(3.0, 0.0)))
            .unwrap();
        let f = rand_elem(&mut rng, d);
        let outputs = [k.compose(&k.adjoint()).unwrap(), k.invert(&cfg()).unwrap()];
        for op in &outputs {
            assert!((0..op.descriptor().rank)
                .all(|i| (0..op.descriptor().rank).all(|j| op.block(i, j).matrix().is_diagonal())));
        }
        assert!(k
            .apply(&f)
            .unwrap()
            .components()
            .iter()
            .all(|c| c.matrix().is_diagonal()));
    }
}
