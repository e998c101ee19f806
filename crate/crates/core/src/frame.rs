//! Moment matrices, frame bounds, frame operators and the synthesis and
//! analysis operators of a frame map.
//!
//! With `R(ω) = [F_1(ω) … F_n(ω)]` the flattened moment matrix is
//! `∫ R(ω)* R(ω) dμ`, whose block `(i, j)` is `∫ F_i(ω)* F_j(ω) dμ`. Under the
//! right action this operator sends `f` to `∫ ⟨f, F(ω)⟩ F(ω) dμ`, i.e. it is
//! the frame operator `S`.

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;

use crate::cstar::{hermitian_spectrum, AlgebraElement, AlgebraKind};
use crate::linalg::{hermitian_eigen, CMatrix};
use crate::measure::{
    refinement_check, sum_matrices, FrameData, FrameMap, IntegrationMode, L2Element, MeasureSpace, Node,
};
use crate::module::{quadratic_form, ModuleElement, ModuleOperator};
use crate::poly::PolyMatrix;
use crate::random::random_module_element;
use crate::scalar::{Scalar, C};
use crate::{FrameError, Result, ToleranceConfig};

/// Refinement deltas above this mark a numeric report as unconverged.
pub const QUADRATURE_FLAG: f64 = 1e-7;

/// Tolerance for the operator identities, relative to `max(1, upper)`.
pub const IDENTITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions {
    pub tolerances: ToleranceConfig,
    pub mode: IntegrationMode,
}

impl AnalysisOptions {
    /// Default tolerances; exact integration for rationals, 32 panels for floats.
    pub fn new<T: Scalar>() -> Self {
        Self {
            tolerances: ToleranceConfig::default(),
            mode: IntegrationMode::default_for::<T>(),
        }
    }

    pub fn with_mode(self, mode: IntegrationMode) -> Self {
        Self { mode, ..self }
    }

    pub fn with_tolerances(self, tolerances: ToleranceConfig) -> Self {
        Self { tolerances, ..self }
    }
}

/// `C_ij = ∫ G_i(ω)* F_j(ω) dμ`. With `G = F` this is the moment matrix.
pub fn mixed_moment<T: Scalar>(f: &FrameMap<T>, g: &FrameMap<T>, mode: IntegrationMode) -> Result<ModuleOperator<T>> {
    f.module().check_same(g.module())?;
    if f.measure() != g.measure() {
        return Err(FrameError::Dimension("frame maps live on different measures".into()));
    }
    let desc = *f.module();
    if let (
        FrameData::Polynomial(fp),
        FrameData::Polynomial(gp),
        MeasureSpace::Interval { a, b, weight },
        IntegrationMode::Exact,
    ) = (f.data(), g.data(), f.measure(), mode)
    {
        return ModuleOperator::from_fn(desc, |i, j| {
            Ok(gp[i].adjoint().mul(&fp[j])?.scale_poly(weight).integrate(a, b))
        });
    }
    let fs = f.samples(mode.panels())?;
    let gs = g.samples(mode.panels())?;
    if fs.len() != gs.len()
        || fs
            .iter()
            .zip(&gs)
            .any(|(x, y)| x.point != y.point || x.weight != y.weight)
    {
        return Err(FrameError::GridMismatch(
            "frame maps are sampled on different grids".into(),
        ));
    }
    let nk = desc.flat_dim();
    let terms = fs
        .iter()
        .zip(&gs)
        .map(|(x, y)| {
            let w = Complex::new(x.weight.clone(), T::zero());
            Ok(y.value.row_block().adjoint().mul(&x.value.row_block())?.scale(&w))
        })
        .collect::<Result<Vec<_>>>()?;
    ModuleOperator::from_flat(desc, &sum_matrices(nk, nk, &terms))
}

/// `M_ij = ∫ F_i(ω)* F_j(ω) dμ`.
pub fn moment_matrix<T: Scalar>(f: &FrameMap<T>, mode: IntegrationMode) -> Result<ModuleOperator<T>> {
    mixed_moment(f, f, mode)
}

/// The frame operator `S f = ∫ ⟨f, F(ω)⟩ F(ω) dμ`, realized by the moment matrix.
pub fn frame_operator<T: Scalar>(f: &FrameMap<T>, mode: IntegrationMode) -> Result<ModuleOperator<T>> {
    moment_matrix(f, mode)
}

/// Optimal frame bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds<T> {
    pub lower: T,
    pub upper: T,
    /// Both values computed in exact arithmetic.
    pub exact: bool,
}

/// Extremal eigenvalues of the flattened moment matrix.
pub fn bounds_of_moment<T: Scalar>(m: &ModuleOperator<T>, cfg: &ToleranceConfig) -> Result<Bounds<T>> {
    let mut flat = m.flatten();
    if !T::exact() {
        let half = Complex::new(T::from_ratio(1, 2), T::zero());
        flat = flat.add(&flat.adjoint())?.scale(&half);
    }
    let spec = hermitian_spectrum(&flat, cfg)?;
    let lower = spec.values.first().cloned().unwrap_or_else(T::zero);
    let upper = spec.values.last().cloned().unwrap_or_else(T::zero);
    Ok(Bounds {
        lower,
        upper,
        exact: T::exact() && !spec.downgraded,
    })
}

pub fn optimal_bounds<T: Scalar>(f: &FrameMap<T>, opts: &AnalysisOptions) -> Result<Bounds<T>> {
    bounds_of_moment(&moment_matrix(f, opts.mode)?, &opts.tolerances)
}

/// `x > tol`, or `x > 0` when `x` is exact.
fn positive_beyond<T: Scalar>(x: &T, exact: bool, tol: f64) -> bool {
    if exact {
        *x > T::zero()
    } else {
        x.as_f64() > tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameReport<T: Scalar> {
    pub lower_bound: T,
    pub upper_bound: T,
    pub exact_bounds: bool,
    pub is_frame: bool,
    pub is_tight: bool,
    /// Always true at finite rank over a finite measure.
    pub is_bessel: bool,
    /// Element attaining the lower bound on one diagonal slot.
    pub witness_low: Option<ModuleElement<T>>,
    pub moment: ModuleOperator<T>,
    /// Refinement delta of the moment matrix; zero for exact or atomic
    /// integration, absent for fixed samples over an interval.
    pub quadrature_delta: Option<f64>,
    pub unconverged: bool,
}

pub fn classify<T: Scalar>(f: &FrameMap<T>, opts: &AnalysisOptions) -> Result<FrameReport<T>> {
    let cfg = &opts.tolerances;
    let moment = moment_matrix(f, opts.mode)?;
    let Bounds { lower, upper, exact } = bounds_of_moment(&moment, cfg)?;
    let is_frame = positive_beyond(&lower, exact, cfg.positivity_tol);
    let is_tight = if exact {
        lower == upper
    } else {
        (upper.as_f64() - lower.as_f64()).abs() <= cfg.equality_tol * upper.as_f64().max(1.0)
    };
    let quadrature_delta = match (f.data(), f.measure(), opts.mode) {
        (_, MeasureSpace::Atoms { .. }, _) | (FrameData::Polynomial(_), _, IntegrationMode::Exact) => Some(0.0),
        (FrameData::Polynomial(_), _, IntegrationMode::Quadrature { panels }) => {
            Some(refinement_check(f, panels)?.moment_delta)
        }
        (FrameData::Sampled(_), _, _) => None,
    };
    Ok(FrameReport {
        witness_low: Some(min_eigen_witness(&moment, cfg)?),
        lower_bound: lower,
        upper_bound: upper,
        exact_bounds: exact,
        is_frame,
        is_tight,
        is_bessel: true,
        moment,
        unconverged: quadrature_delta.is_some_and(|d| d > QUADRATURE_FLAG),
        quadrature_delta,
    })
}

/// An `f` whose witnessed diagonal entry satisfies
/// `⟨Sf, f⟩_ss = λ_min · ⟨f, f⟩_ss` with `⟨f, f⟩_ss = 1`.
fn min_eigen_witness<T: Scalar>(m: &ModuleOperator<T>, cfg: &ToleranceConfig) -> Result<ModuleElement<T>> {
    let desc = *m.descriptor();
    let (n, k) = (desc.rank, desc.algebra.dim);
    let flat = m.flatten().to_f64();
    let mut components = Vec::with_capacity(n);
    match desc.algebra.kind {
        AlgebraKind::Full => {
            let (_, vecs) = hermitian_eigen(&flat, cfg.eig_tol, ToleranceConfig::MAX_SWEEPS)?;
            let v = vecs.column(0);
            for i in 0..n {
                let mat = CMatrix::from_fn(k, k, |r, c| {
                    if r == 0 {
                        Complex::new(T::of_f64(v[i * k + c].re), T::of_f64(-v[i * k + c].im))
                    } else {
                        C::zero()
                    }
                });
                components.push(AlgebraElement::new(desc.algebra, mat)?);
            }
        }
        AlgebraKind::Diagonal => {
            let mut best: Option<(f64, usize, Vec<C<f64>>)> = None;
            for s in 0..k {
                let slot = CMatrix::from_fn(n, n, |i, j| flat[(i * k + s, j * k + s)]);
                let (vals, vecs) = hermitian_eigen(&slot, cfg.eig_tol, ToleranceConfig::MAX_SWEEPS)?;
                if best.as_ref().is_none_or(|(b, _, _)| vals[0] < *b) {
                    best = Some((vals[0], s, vecs.column(0)));
                }
            }
            let (_, s, u) = best.expect("k >= 1");
            for ui in u.iter().take(n) {
                let mut diag = vec![C::zero(); k];
                diag[s] = Complex::new(T::of_f64(ui.re), T::of_f64(-ui.im));
                components.push(AlgebraElement::from_diagonal(desc.algebra, diag)?);
            }
        }
    }
    ModuleElement::new(desc, components)
}

/// An `f` with `candidate · ⟨f, f⟩ ≤ ⟨Sf, f⟩` false, or `None` when the
/// candidate does not exceed the optimal lower bound by more than
/// `positivity_tol`.
pub fn bound_witness_for_moment<T: Scalar>(
    m: &ModuleOperator<T>,
    candidate: &T,
    cfg: &ToleranceConfig,
) -> Result<Option<ModuleElement<T>>> {
    let bounds = bounds_of_moment(m, cfg)?;
    let margin = candidate.clone() - bounds.lower.clone();
    if !positive_beyond(&margin, bounds.exact, cfg.positivity_tol) {
        return Ok(None);
    }
    let f = min_eigen_witness(m, cfg)?;
    let lhs = f.inner_product(&f)?.scale_real(candidate);
    let rhs = quadratic_form(m, &f)?;
    if lhs.order_leq(&rhs, cfg)? {
        return Ok(None);
    }
    Ok(Some(f))
}

pub fn bound_witness<T: Scalar>(
    f: &FrameMap<T>,
    candidate: &T,
    opts: &AnalysisOptions,
) -> Result<Option<ModuleElement<T>>> {
    bound_witness_for_moment(&moment_matrix(f, opts.mode)?, candidate, &opts.tolerances)
}

fn grid_of<T: Scalar>(f: &FrameMap<T>) -> Result<Vec<crate::measure::Sample<T>>> {
    if !f.is_discrete() {
        return Err(FrameError::Mode("discretize interval frame maps first".into()));
    }
    f.samples(0)
}

/// `(T*_F f)(ω) = ⟨f, F(ω)⟩`.
pub fn analysis_apply<T: Scalar>(f_map: &FrameMap<T>, f: &ModuleElement<T>) -> Result<L2Element<T>> {
    f_map.module().check_same(f.descriptor())?;
    let samples = grid_of(f_map)?;
    let values = samples
        .iter()
        .map(|s| f.inner_product(&s.value))
        .collect::<Result<Vec<_>>>()?;
    let grid = samples
        .into_iter()
        .map(|s| Node {
            point: s.point,
            weight: s.weight,
        })
        .collect();
    L2Element::new(f_map.module().algebra, grid, values)
}

/// `(T_F φ)_i = ∫ φ(ω) F_i(ω) dμ`, so that `⟨T_F φ, f⟩ = ∫ φ(ω) ⟨F(ω), f⟩ dμ`.
pub fn synthesis_apply<T: Scalar>(f_map: &FrameMap<T>, phi: &L2Element<T>) -> Result<ModuleElement<T>> {
    let desc = *f_map.module();
    desc.algebra.check_same(phi.algebra())?;
    let samples = grid_of(f_map)?;
    let grid: Vec<_> = samples
        .iter()
        .map(|s| Node {
            point: s.point.clone(),
            weight: s.weight.clone(),
        })
        .collect();
    phi.check_grid(&grid)?;
    let terms = samples
        .iter()
        .zip(phi.values())
        .map(|(s, v)| {
            let w = Complex::new(s.weight.clone(), T::zero());
            Ok(v.matrix().mul(&s.value.row_block())?.scale(&w))
        })
        .collect::<Result<Vec<_>>>()?;
    let row = sum_matrices(desc.algebra.dim, desc.flat_dim(), &terms);
    ModuleElement::new(
        desc,
        (0..desc.rank)
            .map(|i| {
                let k = desc.algebra.dim;
                AlgebraElement::new(desc.algebra, CMatrix::from_fn(k, k, |r, c| row[(r, i * k + c)].clone()))
            })
            .collect::<Result<_>>()?,
    )
}

/// A named operator identity with its residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub residual: f64,
    /// Threshold the residual or margin was judged against.
    pub tolerance: f64,
}

impl Check {
    fn new(name: &'static str, pass: bool, residual: f64, tolerance: f64) -> Self {
        Self {
            name,
            pass,
            residual,
            tolerance,
        }
    }
}

/// The flattened analysis matrix `B = [R(ω_1)* … R(ω_N)*]` (`nk × Nk`) and
/// the node weights.
fn analysis_matrix<T: Scalar>(f: &FrameMap<T>) -> Result<(CMatrix<T>, Vec<T>)> {
    let samples = grid_of(f)?;
    let desc = f.module();
    let (k, nk) = (desc.algebra.dim, desc.flat_dim());
    let blocks: Vec<_> = samples.iter().map(|s| s.value.row_block().adjoint()).collect();
    let b = CMatrix::from_fn(nk, k * samples.len(), |r, c| blocks[c / k][(r, c % k)].clone());
    Ok((b, samples.into_iter().map(|s| s.weight).collect()))
}

struct DiscreteChecks {
    tt_star_residual: f64,
    synthesis_onto: bool,
    synthesis_margin: f64,
    analysis_injective: bool,
    analysis_margin: f64,
}

fn discrete_checks<T: Scalar>(d: &FrameMap<T>, moment: &CMatrix<f64>, cfg: &ToleranceConfig) -> Result<DiscreteChecks> {
    let nk = d.module().flat_dim();
    let k = d.module().algebra.dim;
    let (b, weights) = analysis_matrix(d)?;
    // T T* = B W B*, W the node weights repeated k times.
    let bw = CMatrix::from_fn(b.rows(), b.cols(), |r, c| {
        &b[(r, c)] * Complex::new(weights[c / k].clone(), T::zero())
    });
    let tt = bw.mul(&b.adjoint())?;
    let tt_star_residual = tt.to_f64().max_abs_diff(moment);

    let (synthesis_onto, synthesis_margin) = if T::exact() {
        (tt.rank(0.0)? == nk, 0.0)
    } else {
        let h = tt.to_f64();
        let h = h.add(&h.adjoint())?.scale(&Complex::new(0.5, 0.0));
        let (vals, _) = hermitian_eigen(&h, cfg.eig_tol, ToleranceConfig::MAX_SWEEPS)?;
        let onto = vals.iter().filter(|v| **v > cfg.positivity_tol).count() == nk;
        (onto, vals[0])
    };

    // Injectivity of x ↦ x·B W^{1/2} by Gram–Schmidt on the rows.
    let (analysis_injective, analysis_margin) = if T::exact() {
        (b.rank(0.0)? == nk, 0.0)
    } else {
        let bf = b.to_f64();
        let rows: Vec<Vec<C<f64>>> = (0..nk)
            .map(|r| {
                (0..bf.cols())
                    .map(|c| bf[(r, c)] * weights[c / k].as_f64().sqrt())
                    .collect()
            })
            .collect();
        let margin = gram_schmidt_min_residual(rows);
        (margin > cfg.positivity_tol, margin)
    };
    Ok(DiscreteChecks {
        tt_star_residual,
        synthesis_onto,
        synthesis_margin,
        analysis_injective,
        analysis_margin,
    })
}

/// Smallest squared residual norm of modified Gram–Schmidt with one
/// reorthogonalization pass.
fn gram_schmidt_min_residual(rows: Vec<Vec<C<f64>>>) -> f64 {
    let mut basis: Vec<Vec<C<f64>>> = Vec::new();
    let mut min = f64::INFINITY;
    for mut v in rows {
        for _ in 0..2 {
            for q in &basis {
                let proj: C<f64> = v.iter().zip(q).map(|(a, b)| a * b.conj()).sum();
                for (a, b) in v.iter_mut().zip(q) {
                    *a -= proj * b;
                }
            }
        }
        let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        min = min.min(norm2);
        if norm2 > 0.0 {
            let inv = 1.0 / norm2.sqrt();
            basis.push(v.into_iter().map(|z| z * inv).collect());
        }
    }
    min
}

/// Checks of the operator identities of the frame operator and the
/// synthesis and analysis operators. Interval maps are discretized with
/// the option's panel count, in floating point.
pub fn verify_operator_identities<T: Scalar>(f: &FrameMap<T>, opts: &AnalysisOptions) -> Result<Vec<Check>> {
    let cfg = &opts.tolerances;
    let report = classify(f, opts)?;
    let m = &report.moment;
    let flat = m.flatten().to_f64();
    let upper = report.upper_bound.as_f64();
    let lower = report.lower_bound.as_f64();
    let scale = upper.abs().max(1.0);
    let tol = IDENTITY_TOL * scale;
    let spectral = m.spectral(cfg)?;
    let mut checks = Vec::with_capacity(8);

    checks.push(Check::new(
        "self_adjoint",
        spectral.is_self_adjoint,
        flat.max_abs_diff(&flat.adjoint()),
        cfg.equality_tol,
    ));
    checks.push(Check::new(
        "positive",
        spectral.is_positive,
        (-lower).max(0.0),
        cfg.positivity_tol,
    ));

    let dc = if f.is_discrete() {
        discrete_checks(f, &flat, cfg)?
    } else {
        discrete_checks(&f.to_f64().discretize(opts.mode.panels())?, &flat, cfg)?
    };
    checks.push(Check::new(
        "s_equals_tt_star",
        dc.tt_star_residual <= tol,
        dc.tt_star_residual,
        tol,
    ));

    let norm = spectral.operator_norm;
    let excess = (norm - upper).max(0.0);
    checks.push(Check::new("norm_at_most_upper", excess <= tol, excess, tol));

    checks.push(Check::new(
        "invertible_iff_frame",
        spectral.is_invertible == report.is_frame,
        spectral.smallest_singular_value,
        cfg.invertibility_tol,
    ));

    let mut bound_residual = (upper - norm).abs();
    if spectral.is_invertible {
        let inv_norm = m.invert(cfg)?.operator_norm()?;
        bound_residual = bound_residual.max((lower - 1.0 / inv_norm).abs());
    }
    checks.push(Check::new(
        "bounds_from_norms",
        bound_residual <= tol,
        bound_residual,
        tol,
    ));

    checks.push(Check::new(
        "synthesis_onto_iff_frame",
        dc.synthesis_onto == report.is_frame,
        dc.synthesis_margin,
        cfg.positivity_tol,
    ));
    checks.push(Check::new(
        "analysis_injective_iff_frame",
        dc.analysis_injective == report.is_frame,
        dc.analysis_margin,
        cfg.positivity_tol,
    ));
    Ok(checks)
}

/// `ω ↦ K(F(ω))`, with frame operator `K S K*`.
pub fn transform_frame<T: Scalar>(k: &ModuleOperator<T>, f: &FrameMap<T>) -> Result<FrameMap<T>> {
    k.descriptor().check_same(f.module())?;
    let n = f.module().rank;
    f.map_values(
        |comps: &[PolyMatrix<T>]| {
            (0..n)
                .map(|j| {
                    let mut acc = PolyMatrix::zero(f.module().algebra);
                    for (i, c) in comps.iter().enumerate() {
                        acc = acc.add(&c.mul_const(k.block(i, j))?)?;
                    }
                    Ok(acc)
                })
                .collect()
        },
        |v| k.apply(v),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormCriterion {
    pub a_norm: f64,
    pub b_norm: f64,
    pub consistent: bool,
}

/// Extremes of `‖⟨Sf, f⟩‖ / ‖⟨f, f⟩‖` over `trials` random nonzero `f`,
/// compared with the optimal bounds.
pub fn norm_criterion<T: Scalar, R: Rng + ?Sized>(
    f: &FrameMap<T>,
    trials: usize,
    rng: &mut R,
    opts: &AnalysisOptions,
) -> Result<NormCriterion> {
    if trials == 0 {
        return Err(FrameError::Parameter("norm criterion needs at least one trial".into()));
    }
    let cfg = &opts.tolerances;
    let m = moment_matrix(f, opts.mode)?;
    let bounds = bounds_of_moment(&m, cfg)?;
    let (mut a_norm, mut b_norm) = (f64::INFINITY, 0.0f64);
    let mut done = 0;
    while done < trials {
        let x = random_module_element(*f.module(), rng);
        let gram = x.inner_product(&x)?.operator_norm(cfg)?;
        if gram == 0.0 {
            continue;
        }
        let ratio = quadratic_form(&m, &x)?.operator_norm(cfg)? / gram;
        a_norm = a_norm.min(ratio);
        b_norm = b_norm.max(ratio);
        done += 1;
    }
    let (lower, upper) = (bounds.lower.as_f64(), bounds.upper.as_f64());
    let tol = IDENTITY_TOL * upper.abs().max(1.0);
    let consistent = a_norm >= lower - tol && b_norm <= upper + tol && a_norm <= b_norm + tol;
    Ok(NormCriterion {
        a_norm,
        b_norm,
        consistent,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exactness {
    pub is_exact: bool,
    /// Atoms whose removal leaves a frame.
    pub removable_atoms: Vec<usize>,
}

/// Single-atom removals of an atomic frame.
pub fn exactness_check<T: Scalar>(f: &FrameMap<T>, opts: &AnalysisOptions) -> Result<Exactness> {
    let Some(m) = f.measure().atom_count() else {
        return Err(FrameError::Mode("exactness is decided for atomic measures only".into()));
    };
    if !classify(f, opts)?.is_frame {
        return Err(FrameError::Domain("exactness needs a frame".into()));
    }
    let mut removable_atoms = Vec::new();
    for idx in 0..m {
        if classify(&f.without_atom(idx)?, opts)?.is_frame {
            removable_atoms.push(idx);
        }
    }
    Ok(Exactness {
        is_exact: removable_atoms.is_empty(),
        removable_atoms,
    })
}
