//! Measure spaces, frame maps `Ω → A^n`, Bochner integration and the
//! discretized `L²(Ω, A)`.

use crate::cstar::{AlgebraDescriptor, AlgebraElement};
use crate::linalg::CMatrix;
use crate::module::{ModuleDescriptor, ModuleElement, ModuleOperator};
use crate::poly::{Poly, PolyMatrix};
use crate::quadrature::{composite_rule, pairwise_sum};
use crate::scalar::{Scalar, ScalarMode};
use crate::{FrameError, Result, ToleranceConfig};

/// Sample count used to check that an interval weight is nonnegative.
const WEIGHT_SAMPLES: usize = 1000;

/// Default number of Gauss–Legendre panels.
pub const DEFAULT_PANELS: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSpace<T: Scalar> {
    /// `[a, b]` with density `weight` against Lebesgue measure.
    Interval { a: T, b: T, weight: Poly<T> },
    /// Point masses `weights[i]` at `points[i]`.
    Atoms { points: Vec<T>, weights: Vec<T> },
}

impl<T: Scalar> MeasureSpace<T> {
    pub fn interval(a: T, b: T, weight: Poly<T>) -> Result<Self> {
        if a >= b {
            return Err(FrameError::Domain(format!("empty interval [{a}, {b}]")));
        }
        if !weight.has_real_coefficients() {
            return Err(FrameError::Domain("weight polynomial must be real".into()));
        }
        let span = b.clone() - a.clone();
        for i in 0..=WEIGHT_SAMPLES + 1 {
            let x = a.clone() + span.clone() * T::from_ratio(i as i64, WEIGHT_SAMPLES as i64 + 1);
            let w = weight.eval(&x).re;
            if w < T::zero() {
                return Err(FrameError::Domain(format!("weight is negative at {x}")));
            }
        }
        Ok(Self::Interval { a, b, weight })
    }

    /// Lebesgue measure on `[a, b]`.
    pub fn lebesgue(a: T, b: T) -> Result<Self> {
        Self::interval(a, b, Poly::one())
    }

    pub fn atoms(points: Vec<T>, weights: Vec<T>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(FrameError::Dimension(format!(
                "{} atom points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| **w <= T::zero()) {
            return Err(FrameError::Domain(format!("atom weight {w} is not positive")));
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(FrameError::Domain(format!("duplicate atom label {p}")));
            }
        }
        Ok(Self::Atoms { points, weights })
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Self::Atoms { .. })
    }

    pub fn atom_count(&self) -> Option<usize> {
        match self {
            Self::Atoms { points, .. } => Some(points.len()),
            Self::Interval { .. } => None,
        }
    }

    /// The atomic measure with atom `idx` removed.
    pub fn without_atom(&self, idx: usize) -> Result<Self> {
        match self {
            Self::Atoms { points, weights } if idx < points.len() => {
                let mut points = points.clone();
                let mut weights = weights.clone();
                points.remove(idx);
                weights.remove(idx);
                Ok(Self::Atoms { points, weights })
            }
            Self::Atoms { .. } => Err(FrameError::Parameter(format!("no atom {idx}"))),
            Self::Interval { .. } => Err(FrameError::Mode("atom removal needs an atomic measure".into())),
        }
    }

    /// Quadrature nodes with the weight folded in. Atomic measures return
    /// their atoms; intervals need `panels ≥ 2`.
    pub fn nodes(&self, panels: usize) -> Result<Vec<Node<T>>> {
        match self {
            Self::Atoms { points, weights } => Ok(points
                .iter()
                .zip(weights)
                .map(|(p, w)| Node {
                    point: p.clone(),
                    weight: w.clone(),
                })
                .collect()),
            Self::Interval { a, b, weight } => {
                if panels < 2 {
                    return Err(FrameError::Parameter(format!(
                        "grid size must be at least 2, got {panels}"
                    )));
                }
                Ok(composite_rule(a.as_f64(), b.as_f64(), panels)
                    .into_iter()
                    .map(|(x, w)| {
                        let point = T::of_f64(x);
                        let density = weight.eval(&point).re;
                        Node {
                            weight: T::of_f64(w) * density,
                            point,
                        }
                    })
                    .collect())
            }
        }
    }

    pub fn to_f64(&self) -> MeasureSpace<f64> {
        match self {
            Self::Interval { a, b, weight } => MeasureSpace::Interval {
                a: a.as_f64(),
                b: b.as_f64(),
                weight: weight.to_f64(),
            },
            Self::Atoms { points, weights } => MeasureSpace::Atoms {
                points: points.iter().map(Scalar::as_f64).collect(),
                weights: weights.iter().map(Scalar::as_f64).collect(),
            },
        }
    }
}

/// A quadrature node or atom.
#[derive(Debug, Clone, PartialEq)]
pub struct Node<T: Scalar> {
    pub point: T,
    pub weight: T,
}

/// How integrals over interval measures are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegrationMode {
    /// Monomial antiderivatives; polynomial data only.
    Exact,
    /// Composite 5-point Gauss–Legendre over `panels` panels.
    Quadrature { panels: usize },
}

impl IntegrationMode {
    /// Exact for rational scalars, 32 Gauss–Legendre panels for floats.
    pub fn default_for<T: Scalar>() -> Self {
        if T::exact() {
            Self::Exact
        } else {
            Self::Quadrature { panels: DEFAULT_PANELS }
        }
    }

    pub(crate) fn panels(&self) -> usize {
        match self {
            Self::Exact => DEFAULT_PANELS,
            Self::Quadrature { panels } => *panels,
        }
    }
}

/// One grid point of a sampled frame map.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample<T: Scalar> {
    pub point: T,
    pub weight: T,
    pub value: ModuleElement<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FrameData<T: Scalar> {
    /// One polynomial matrix per module component.
    Polynomial(Vec<PolyMatrix<T>>),
    Sampled(Vec<Sample<T>>),
}

/// A map `F: Ω → A^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameMap<T: Scalar> {
    module: ModuleDescriptor,
    measure: MeasureSpace<T>,
    data: FrameData<T>,
}

impl<T: Scalar> FrameMap<T> {
    pub fn polynomial(
        module: ModuleDescriptor,
        measure: MeasureSpace<T>,
        components: Vec<PolyMatrix<T>>,
    ) -> Result<Self> {
        if components.len() != module.rank {
            return Err(FrameError::Dimension(format!(
                "expected {} components, got {}",
                module.rank,
                components.len()
            )));
        }
        for c in &components {
            module.algebra.check_same(c.descriptor())?;
        }
        Ok(Self {
            module,
            measure,
            data: FrameData::Polynomial(components),
        })
    }

    /// Samples over an atomic measure must sit on its atoms, in order.
    pub fn sampled(module: ModuleDescriptor, measure: MeasureSpace<T>, samples: Vec<Sample<T>>) -> Result<Self> {
        for s in &samples {
            if s.weight <= T::zero() {
                return Err(FrameError::Domain(format!(
                    "sample weight {} is not positive",
                    s.weight
                )));
            }
            module.check_same(s.value.descriptor())?;
        }
        if let MeasureSpace::Atoms { points, weights } = &measure {
            let matches = samples.len() == points.len()
                && samples
                    .iter()
                    .zip(points.iter().zip(weights))
                    .all(|(s, (p, w))| s.point == *p && s.weight == *w);
            if !matches {
                return Err(FrameError::GridMismatch(
                    "samples must coincide with the atoms of the measure".into(),
                ));
            }
        }
        Ok(Self {
            module,
            measure,
            data: FrameData::Sampled(samples),
        })
    }

    /// The map `ω ↦ 0`.
    pub fn zero(module: ModuleDescriptor, measure: MeasureSpace<T>) -> Self {
        Self {
            module,
            measure,
            data: FrameData::Polynomial(vec![PolyMatrix::zero(module.algebra); module.rank]),
        }
    }

    /// The constant map `ω ↦ f`.
    pub fn constant(measure: MeasureSpace<T>, f: &ModuleElement<T>) -> Self {
        Self {
            module: *f.descriptor(),
            measure,
            data: FrameData::Polynomial(f.components().iter().map(PolyMatrix::constant).collect()),
        }
    }

    pub fn module(&self) -> &ModuleDescriptor {
        &self.module
    }

    pub fn measure(&self) -> &MeasureSpace<T> {
        &self.measure
    }

    pub fn data(&self) -> &FrameData<T> {
        &self.data
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(self.data, FrameData::Polynomial(_))
    }

    /// Sampled, or defined over an atomic measure.
    pub fn is_discrete(&self) -> bool {
        !self.is_polynomial() || self.measure.is_atomic()
    }

    pub fn degree(&self) -> Option<usize> {
        match &self.data {
            FrameData::Polynomial(c) => Some(c.iter().map(PolyMatrix::degree).max().unwrap_or(0)),
            FrameData::Sampled(_) => None,
        }
    }

    /// `F(ω)`. Polynomial data only.
    pub fn eval(&self, x: &T) -> Result<ModuleElement<T>> {
        match &self.data {
            FrameData::Polynomial(c) => ModuleElement::new(self.module, c.iter().map(|p| p.eval(x)).collect()),
            FrameData::Sampled(_) => Err(FrameError::Mode("sampled maps cannot be evaluated off-grid".into())),
        }
    }

    /// Grid points with weights and values: the samples, the atoms, or the
    /// Gauss–Legendre nodes over `panels` panels.
    pub fn samples(&self, panels: usize) -> Result<Vec<Sample<T>>> {
        match &self.data {
            FrameData::Sampled(s) => Ok(s.clone()),
            FrameData::Polynomial(_) => self
                .measure
                .nodes(panels)?
                .into_iter()
                .map(|n| {
                    Ok(Sample {
                        value: self.eval(&n.point)?,
                        point: n.point,
                        weight: n.weight,
                    })
                })
                .collect(),
        }
    }

    /// Sampled realization on `grid_size` panels. Atomic measures and
    /// already sampled maps pass through unchanged.
    pub fn discretize(&self, grid_size: usize) -> Result<Self> {
        if self.is_discrete() {
            return Ok(self.clone());
        }
        Ok(Self {
            module: self.module,
            measure: self.measure.clone(),
            data: FrameData::Sampled(self.samples(grid_size)?),
        })
    }

    /// Pointwise map of every value; polynomial entries are mapped
    /// through `poly`, samples through `value`.
    pub(crate) fn map_values(
        &self,
        poly: impl Fn(&[PolyMatrix<T>]) -> Result<Vec<PolyMatrix<T>>>,
        value: impl Fn(&ModuleElement<T>) -> Result<ModuleElement<T>>,
    ) -> Result<Self> {
        let data = match &self.data {
            FrameData::Polynomial(c) => FrameData::Polynomial(poly(c)?),
            FrameData::Sampled(s) => FrameData::Sampled(
                s.iter()
                    .map(|s| {
                        Ok(Sample {
                            point: s.point.clone(),
                            weight: s.weight.clone(),
                            value: value(&s.value)?,
                        })
                    })
                    .collect::<Result<_>>()?,
            ),
        };
        Ok(Self {
            module: self.module,
            measure: self.measure.clone(),
            data,
        })
    }

    /// Restriction to the atomic measure without atom `idx`.
    pub fn without_atom(&self, idx: usize) -> Result<Self> {
        let measure = self.measure.without_atom(idx)?;
        let data = match &self.data {
            FrameData::Polynomial(c) => FrameData::Polynomial(c.clone()),
            FrameData::Sampled(s) => {
                let mut s = s.clone();
                s.remove(idx);
                FrameData::Sampled(s)
            }
        };
        Ok(Self {
            module: self.module,
            measure,
            data,
        })
    }

    pub fn to_f64(&self) -> FrameMap<f64> {
        let module = self.module.with_mode(ScalarMode::Float);
        let data = match &self.data {
            FrameData::Polynomial(c) => FrameData::Polynomial(c.iter().map(PolyMatrix::to_f64).collect()),
            FrameData::Sampled(s) => FrameData::Sampled(
                s.iter()
                    .map(|s| Sample {
                        point: s.point.as_f64(),
                        weight: s.weight.as_f64(),
                        value: s.value.to_f64(),
                    })
                    .collect(),
            ),
        };
        FrameMap {
            module,
            measure: self.measure.to_f64(),
            data,
        }
    }
}

/// An element of `L²(Ω, A)` on a fixed grid.
#[derive(Debug, Clone, PartialEq)]
pub struct L2Element<T: Scalar> {
    algebra: AlgebraDescriptor,
    grid: Vec<Node<T>>,
    values: Vec<AlgebraElement<T>>,
}

impl<T: Scalar> L2Element<T> {
    pub fn new(algebra: AlgebraDescriptor, grid: Vec<Node<T>>, values: Vec<AlgebraElement<T>>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(FrameError::GridMismatch(format!(
                "{} grid points but {} values",
                grid.len(),
                values.len()
            )));
        }
        for v in &values {
            algebra.check_same(v.descriptor())?;
        }
        Ok(Self { algebra, grid, values })
    }

    pub fn zero(algebra: AlgebraDescriptor, grid: Vec<Node<T>>) -> Self {
        let values = vec![AlgebraElement::zero(algebra); grid.len()];
        Self { algebra, grid, values }
    }

    pub fn algebra(&self) -> &AlgebraDescriptor {
        &self.algebra
    }

    pub fn grid(&self) -> &[Node<T>] {
        &self.grid
    }

    pub fn values(&self) -> &[AlgebraElement<T>] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(AlgebraElement::is_zero)
    }

    pub(crate) fn check_grid(&self, grid: &[Node<T>]) -> Result<()> {
        if self.grid != grid {
            return Err(FrameError::GridMismatch("L² elements live on different grids".into()));
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    /// `‖⟨φ, φ⟩‖`.
    pub fn norm_squared(&self, cfg: &ToleranceConfig) -> Result<f64> {
        l2_inner(self, self)?.operator_norm(cfg)
    }
}

/// `⟨φ, ψ⟩ = Σ_ω w(ω) · φ(ω) · ψ(ω)*`.
pub fn l2_inner<T: Scalar>(phi: &L2Element<T>, psi: &L2Element<T>) -> Result<AlgebraElement<T>> {
    phi.algebra.check_same(&psi.algebra)?;
    phi.check_grid(&psi.grid)?;
    let terms = phi
        .grid
        .iter()
        .zip(phi.values.iter().zip(&psi.values))
        .map(|(n, (a, b))| Ok(a.multiply(&b.adjoint())?.scale_real(&n.weight)))
        .collect::<Result<Vec<_>>>()?;
    Ok(sum_elements(phi.algebra, &terms))
}

/// Integrand for [`bochner_integrate`].
pub enum Integrand<'a, T: Scalar> {
    Polynomial(&'a PolyMatrix<T>),
    Function(&'a dyn Fn(&T) -> AlgebraElement<T>),
}

/// `∫_Ω φ dμ` for an A-valued integrand.
///
/// Atomic measures sum `w · φ(ω)` whatever the mode. Over an interval the
/// exact mode needs a polynomial integrand.
pub fn bochner_integrate<T: Scalar>(
    integrand: Integrand<'_, T>,
    algebra: AlgebraDescriptor,
    measure: &MeasureSpace<T>,
    mode: IntegrationMode,
) -> Result<AlgebraElement<T>> {
    if let Integrand::Polynomial(p) = &integrand {
        algebra.check_same(p.descriptor())?;
    }
    let nodes = match (measure, mode, &integrand) {
        (MeasureSpace::Interval { a, b, weight }, IntegrationMode::Exact, Integrand::Polynomial(p)) => {
            return Ok(p.scale_poly(weight).integrate(a, b));
        }
        (MeasureSpace::Interval { .. }, IntegrationMode::Exact, Integrand::Function(_)) => {
            return Err(FrameError::Mode(
                "exact integration needs a polynomial integrand".into(),
            ));
        }
        _ => measure.nodes(mode.panels())?,
    };
    let eval = |x: &T| -> AlgebraElement<T> {
        match &integrand {
            Integrand::Polynomial(p) => p.eval(x),
            Integrand::Function(f) => f(x),
        }
    };
    let terms: Vec<_> = nodes.iter().map(|n| eval(&n.point).scale_real(&n.weight)).collect();
    for t in &terms {
        algebra.check_same(t.descriptor())?;
    }
    Ok(sum_elements(algebra, &terms))
}

/// Pairwise sum of algebra elements in the given order.
pub(crate) fn sum_elements<T: Scalar>(algebra: AlgebraDescriptor, terms: &[AlgebraElement<T>]) -> AlgebraElement<T> {
    pairwise_sum(terms, &|a: &AlgebraElement<T>, b: &AlgebraElement<T>| {
        a.add(b).expect("terms share one descriptor")
    })
    .unwrap_or_else(|| AlgebraElement::zero(algebra))
}

/// Pairwise sum of equally shaped matrices in the given order.
pub(crate) fn sum_matrices<T: Scalar>(rows: usize, cols: usize, terms: &[CMatrix<T>]) -> CMatrix<T> {
    pairwise_sum(terms, &|a: &CMatrix<T>, b: &CMatrix<T>| {
        a.add(b).expect("terms share one shape")
    })
    .unwrap_or_else(|| CMatrix::zeros(rows, cols))
}

/// Outcome of [`refinement_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Refinement {
    pub moment_delta: f64,
}

/// Moment matrices at `grid_size` and `2 · grid_size` panels, compared
/// entrywise.
pub fn refinement_check<T: Scalar>(f: &FrameMap<T>, grid_size: usize) -> Result<Refinement> {
    if !f.is_polynomial() {
        return Err(FrameError::Mode("refinement needs a polynomial frame map".into()));
    }
    if f.measure.is_atomic() {
        return Err(FrameError::Mode("refinement needs an interval measure".into()));
    }
    let coarse = quadrature_moment(f, grid_size)?;
    let fine = quadrature_moment(f, 2 * grid_size)?;
    Ok(Refinement {
        moment_delta: coarse.max_abs_diff(&fine),
    })
}

fn quadrature_moment<T: Scalar>(f: &FrameMap<T>, panels: usize) -> Result<ModuleOperator<T>> {
    crate::frame::moment_matrix(f, IntegrationMode::Quadrature { panels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational, C};
    use num_complex::Complex;

    fn q(n: i64, d: i64) -> C<Rational> {
        Complex::new(rat(n, d), rat(0, 1))
    }

    fn diag2() -> AlgebraDescriptor {
        AlgebraDescriptor::diagonal::<Rational>(2).unwrap()
    }

    #[test]
    fn example_moment_integral_is_exact() {
        let unit = MeasureSpace::lebesgue(rat(0, 1), rat(1, 1)).unwrap();
        // diag(4ω², (ω − 1)²)
        let p = PolyMatrix::diagonal(
            diag2(),
            vec![
                Poly::new(vec![q(0, 1), q(0, 1), q(4, 1)]),
                Poly::new(vec![q(1, 1), q(-2, 1), q(1, 1)]),
            ],
        )
        .unwrap();
        let got = bochner_integrate(Integrand::Polynomial(&p), diag2(), &unit, IntegrationMode::Exact).unwrap();
        let want = AlgebraElement::diag_real(diag2(), vec![rat(4, 3), rat(1, 3)]).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn dual_pair_integral_is_identity() {
        let unit = MeasureSpace::lebesgue(rat(0, 1), rat(1, 1)).unwrap();
        // diag(3ω², ω² − (10/3)ω + 7/3)
        let p = PolyMatrix::diagonal(
            diag2(),
            vec![
                Poly::new(vec![q(0, 1), q(0, 1), q(3, 1)]),
                Poly::new(vec![q(7, 3), q(-10, 3), q(1, 1)]),
            ],
        )
        .unwrap();
        let got = bochner_integrate(Integrand::Polynomial(&p), diag2(), &unit, IntegrationMode::Exact).unwrap();
        assert_eq!(got, AlgebraElement::identity(diag2()));
    }

    #[test]
    fn zero_integrand_integrates_to_zero() {
        let d = AlgebraDescriptor::full::<f64>(2).unwrap();
        let unit = MeasureSpace::lebesgue(0.0, 1.0).unwrap();
        let z = PolyMatrix::zero(d);
        let got = bochner_integrate(
            Integrand::Polynomial(&z),
            d,
            &unit,
            IntegrationMode::Quadrature { panels: 4 },
        )
        .unwrap();
        assert!(got.is_zero());
    }

    #[test]
    fn exact_mode_rejects_functions_and_small_grids_are_rejected() {
        let d = AlgebraDescriptor::full::<f64>(1).unwrap();
        let unit = MeasureSpace::lebesgue(0.0, 1.0).unwrap();
        let f = |x: &f64| AlgebraElement::scalar(d, C::new(x.exp(), 0.0));
        let r = bochner_integrate(Integrand::Function(&f), d, &unit, IntegrationMode::Exact);
        assert!(matches!(r, Err(FrameError::Mode(_))));
        let r = bochner_integrate(
            Integrand::Function(&f),
            d,
            &unit,
            IntegrationMode::Quadrature { panels: 1 },
        );
        assert!(matches!(r, Err(FrameError::Parameter(_))));
        let r = bochner_integrate(
            Integrand::Function(&f),
            d,
            &unit,
            IntegrationMode::Quadrature { panels: 0 },
        );
        assert!(matches!(r, Err(FrameError::Parameter(_))));
        let got = bochner_integrate(
            Integrand::Function(&f),
            d,
            &unit,
            IntegrationMode::Quadrature { panels: 8 },
        )
        .unwrap();
        assert!((got.entry(0, 0).re - (1f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn atoms_sum_exactly() {
        let d = AlgebraDescriptor::full::<Rational>(1).unwrap();
        let atoms = MeasureSpace::atoms(vec![rat(1, 4), rat(3, 4)], vec![rat(1, 2), rat(1, 2)]).unwrap();
        // ∫ ω² over the two atoms: (1/16 + 9/16) / 2
        let p = PolyMatrix::new(d, vec![vec![Poly::new(vec![q(0, 1), q(0, 1), q(1, 1)])]]).unwrap();
        for mode in [IntegrationMode::Exact, IntegrationMode::Quadrature { panels: 2 }] {
            let got = bochner_integrate(Integrand::Polynomial(&p), d, &atoms, mode).unwrap();
            assert_eq!(got.entry(0, 0), &q(5, 16));
        }
    }

    #[test]
    fn weight_is_folded_into_nodes() {
        // ∫_0^2 ω · (1 + ω) dω = 2 + 8/3
        let d = AlgebraDescriptor::full::<f64>(1).unwrap();
        let m = MeasureSpace::interval(0.0, 2.0, Poly::real(vec![1.0, 1.0])).unwrap();
        let p = PolyMatrix::new(d, vec![vec![Poly::real(vec![0.0, 1.0])]]).unwrap();
        let got = bochner_integrate(
            Integrand::Polynomial(&p),
            d,
            &m,
            IntegrationMode::Quadrature { panels: 2 },
        )
        .unwrap();
        assert!((got.entry(0, 0).re - 14.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn measure_validation() {
        assert!(MeasureSpace::lebesgue(1.0, 1.0).is_err());
        assert!(MeasureSpace::interval(0.0, 1.0, Poly::real(vec![-0.5, 1.0])).is_err());
        assert!(MeasureSpace::interval(0.0, 1.0, Poly::real(vec![0.0, 1.0])).is_ok());
        assert!(MeasureSpace::atoms(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(MeasureSpace::atoms(vec![0.0], vec![0.0]).is_err());
        assert!(MeasureSpace::<f64>::atoms(vec![], vec![]).is_ok());
    }

    #[test]
    fn l2_inner_singleton_identity() {
        let d = AlgebraDescriptor::full::<f64>(2).unwrap();
        let grid = vec![Node {
            point: 0.0,
            weight: 1.0,
        }];
        let phi = L2Element::new(d, grid, vec![AlgebraElement::identity(d)]).unwrap();
        assert_eq!(l2_inner(&phi, &phi).unwrap(), AlgebraElement::identity(d));
        let zero = L2Element::zero(d, phi.grid().to_vec());
        assert!(l2_inner(&zero, &zero).unwrap().is_zero());
        let other = L2Element::zero(
            d,
            vec![Node {
                point: 0.5,
                weight: 1.0,
            }],
        );
        assert!(matches!(l2_inner(&phi, &other), Err(FrameError::GridMismatch(_))));
    }

    #[test]
    fn discretize_sorts_nodes_and_passes_atoms_through() {
        let d = AlgebraDescriptor::diagonal::<f64>(2).unwrap();
        let m = ModuleDescriptor::new(d, 1).unwrap();
        let unit = MeasureSpace::lebesgue(0.0, 1.0).unwrap();
        let f = FrameMap::constant(unit, &ModuleElement::new(m, vec![AlgebraElement::identity(d)]).unwrap());
        let s = f.discretize(8).unwrap();
        let FrameData::Sampled(samples) = s.data() else {
            panic!()
        };
        assert_eq!(samples.len(), 40);
        assert!(samples.windows(2).all(|w| w[0].point < w[1].point));
        assert!(f.discretize(1).is_err());

        let atoms = MeasureSpace::atoms(vec![0.0, 1.0], vec![1.0, 2.0]).unwrap();
        let g = FrameMap::constant(
            atoms,
            &ModuleElement::new(m, vec![AlgebraElement::identity(d)]).unwrap(),
        );
        assert_eq!(g.discretize(2).unwrap(), g);
    }
}
