//! Dual frames: cross moments, the canonical dual, dual-pair verification,
//! and the Riesz-type and nonvanishing checks over atomic measures.

use num_traits::{One, Zero};

use crate::cstar::{AlgebraDescriptor, AlgebraElement, AlgebraKind};
use crate::frame::{
    analysis_apply, bounds_of_moment, classify, mixed_moment, moment_matrix, synthesis_apply, transform_frame,
    AnalysisOptions,
};
use crate::linalg::CMatrix;
use crate::measure::{FrameMap, IntegrationMode, L2Element, MeasureSpace, Sample};
use crate::module::{ModuleElement, ModuleOperator};
use crate::scalar::{negligible, Scalar, C};
use crate::{FrameError, Result};

/// `C_ij = ∫ G_i(ω)* F_j(ω) dμ`; the pair is dual exactly when `C = I`.
pub fn cross_moment_matrix<T: Scalar>(
    f: &FrameMap<T>,
    g: &FrameMap<T>,
    mode: IntegrationMode,
) -> Result<ModuleOperator<T>> {
    mixed_moment(f, g, mode)
}

/// `S⁻¹F`.
pub fn canonical_dual<T: Scalar>(f: &FrameMap<T>, opts: &AnalysisOptions) -> Result<FrameMap<T>> {
    let cfg = &opts.tolerances;
    let s = moment_matrix(f, opts.mode)?;
    let bounds = bounds_of_moment(&s, cfg)?;
    let is_frame = if bounds.exact {
        bounds.lower > T::zero()
    } else {
        bounds.lower.as_f64() > cfg.positivity_tol
    };
    if !is_frame {
        return Err(FrameError::Singular {
            smallest_singular_value: bounds.lower.as_f64().max(0.0),
        });
    }
    transform_frame(&s.invert(cfg)?, f)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualReport<T: Scalar> {
    pub is_dual_pair: bool,
    pub cross_moment: ModuleOperator<T>,
    /// `max |C − I|` entrywise.
    pub identity_residual: f64,
    pub riesz_type: Option<bool>,
    pub second_dual: Option<FrameMap<T>>,
}

/// Whether integrals of `f` are computed without rounding.
fn integrates_exactly<T: Scalar>(f: &FrameMap<T>, mode: IntegrationMode) -> bool {
    T::exact() && (f.measure().is_atomic() || !f.is_polynomial() || mode == IntegrationMode::Exact)
}

pub fn is_dual_pair<T: Scalar>(f: &FrameMap<T>, g: &FrameMap<T>, opts: &AnalysisOptions) -> Result<DualReport<T>> {
    let c = cross_moment_matrix(f, g, opts.mode)?;
    let id = ModuleOperator::identity(*f.module());
    let identity_residual = c.max_abs_diff(&id);
    let is_dual_pair = if integrates_exactly(f, opts.mode) && integrates_exactly(g, opts.mode) {
        c == id
    } else {
        identity_residual <= opts.tolerances.equality_tol
    };
    Ok(DualReport {
        is_dual_pair,
        cross_moment: c,
        identity_residual,
        riesz_type: None,
        second_dual: None,
    })
}

/// Basis of the algebra as a complex vector space: matrix units `E_pq`
/// (all pairs for the full kind, `p = q` for the diagonal kind).
fn algebra_basis(desc: AlgebraDescriptor) -> Vec<(usize, usize)> {
    let k = desc.dim;
    match desc.kind {
        AlgebraKind::Full => (0..k).flat_map(|p| (0..k).map(move |q| (p, q))).collect(),
        AlgebraKind::Diagonal => (0..k).map(|p| (p, p)).collect(),
    }
}

fn matrix_unit<T: Scalar>(desc: AlgebraDescriptor, (p, q): (usize, usize)) -> AlgebraElement<T> {
    let k = desc.dim;
    let m = CMatrix::from_fn(k, k, |r, c| if (r, c) == (p, q) { C::one() } else { C::zero() });
    AlgebraElement::new(desc, m).expect("matrix units conform to the kind")
}

/// The analysis operator `f ↦ (⟨f, F(ω_t)⟩)_t` as a matrix from
/// coordinates of `A^n` to coordinates of `A^m`.
pub fn analysis_matrix_atomic<T: Scalar>(f: &FrameMap<T>) -> Result<CMatrix<T>> {
    if !f.measure().is_atomic() {
        return Err(FrameError::Mode(
            "the flattened analysis matrix needs an atomic measure".into(),
        ));
    }
    let desc = *f.module();
    let basis = algebra_basis(desc.algebra);
    let d = basis.len();
    let samples = f.samples(0)?;
    let (m, n) = (samples.len(), desc.rank);
    let mut out = CMatrix::zeros(m * d, n * d);
    for i in 0..n {
        for (b, &unit) in basis.iter().enumerate() {
            let e = ModuleElement::unit(desc, i, matrix_unit(desc.algebra, unit))?;
            for (t, s) in samples.iter().enumerate() {
                let v = e.inner_product(&s.value)?;
                for (r, &(p, q)) in basis.iter().enumerate() {
                    out[(t * d + r, i * d + b)] = v.entry(p, q).clone();
                }
            }
        }
    }
    Ok(out)
}

/// `φ − T*_F S⁻¹ T_F φ`: the component of `φ` orthogonal to the range of
/// the analysis operator. `F` must be a discrete frame.
pub fn range_complement<T: Scalar>(
    f: &FrameMap<T>,
    phi: &L2Element<T>,
    opts: &AnalysisOptions,
) -> Result<L2Element<T>> {
    let s_inv = moment_matrix(f, opts.mode)?.invert(&opts.tolerances)?;
    let back = analysis_apply(f, &s_inv.apply(&synthesis_apply(f, phi)?)?)?;
    let values = phi
        .values()
        .iter()
        .zip(back.values())
        .map(|(a, b)| a.sub(b))
        .collect::<Result<Vec<_>>>()?;
    L2Element::new(*phi.algebra(), phi.grid().to_vec(), values)
}

/// `G + Δ` with `Δ_1(ω) = h(ω)*` and `Δ_i = 0` otherwise. When `h` is
/// orthogonal to the range of `T*_F`, `∫ ⟨f, Δ(ω)⟩ F(ω) dμ = 0`, so the
/// result is again a dual of `F`.
pub fn perturbed_dual<T: Scalar>(g: &FrameMap<T>, h: &L2Element<T>) -> Result<FrameMap<T>> {
    let samples = g.samples(0)?;
    if samples.len() != h.values().len() {
        return Err(FrameError::GridMismatch(
            "perturbation lives on a different grid".into(),
        ));
    }
    let desc = *g.module();
    let samples = samples
        .into_iter()
        .zip(h.values())
        .map(|(s, hv)| {
            let delta = ModuleElement::unit(desc, 0, hv.adjoint())?;
            Ok(Sample {
                value: s.value.add(&delta)?,
                ..s
            })
        })
        .collect::<Result<Vec<_>>>()?;
    FrameMap::sampled(desc, g.measure().clone(), samples)
}

fn is_nonzero<T: Scalar>(h: &L2Element<T>, tol: f64) -> bool {
    h.values()
        .iter()
        .any(|v| v.matrix().entries().iter().any(|z| !negligible(z, tol)))
}

fn require_atomic_frame<T: Scalar>(f: &FrameMap<T>, opts: &AnalysisOptions) -> Result<()> {
    if !matches!(f.measure(), MeasureSpace::Atoms { .. }) {
        return Err(FrameError::Mode("decided for atomic measures only".into()));
    }
    if !classify(f, opts)?.is_frame {
        return Err(FrameError::Domain("input is not a frame".into()));
    }
    Ok(())
}

/// Riesz-type test: the analysis operator is onto exactly when its
/// flattened matrix has full row rank. Otherwise a second dual is built
/// from the first matrix-unit probe with a nonzero range complement.
pub fn riesz_type_check<T: Scalar>(f: &FrameMap<T>, opts: &AnalysisOptions) -> Result<DualReport<T>> {
    require_atomic_frame(f, opts)?;
    let cfg = &opts.tolerances;
    let a = analysis_matrix_atomic(f)?;
    let riesz = a.rank(cfg.invertibility_tol)? == a.rows();
    let g = canonical_dual(f, opts)?;
    let mut second = None;
    if !riesz {
        for h in probes(f)? {
            let h = range_complement(f, &h, opts)?;
            if is_nonzero(&h, cfg.equality_tol) {
                second = Some(perturbed_dual(&g, &h)?);
                break;
            }
        }
    }
    let mut report = is_dual_pair(f, second.as_ref().unwrap_or(&g), opts)?;
    report.riesz_type = Some(riesz);
    report.second_dual = second;
    Ok(report)
}

/// Matrix units placed on one atom at a time.
pub fn probes<T: Scalar>(f: &FrameMap<T>) -> Result<Vec<L2Element<T>>> {
    let algebra = f.module().algebra;
    let grid = analysis_apply(f, &ModuleElement::zero(*f.module()))?.grid().to_vec();
    let mut out = Vec::new();
    for t in 0..grid.len() {
        for unit in algebra_basis(algebra) {
            let mut values = vec![AlgebraElement::zero(algebra); grid.len()];
            values[t] = matrix_unit(algebra, unit);
            out.push(L2Element::new(algebra, grid.clone(), values)?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Nonvanishing<T: Scalar> {
    pub all_nonzero: bool,
    pub zero_atoms: Vec<usize>,
    /// A dual different from the canonical one, built on the first zero atom.
    pub second_dual: Option<FrameMap<T>>,
    /// The second dual passed the dual-pair test and differs from the
    /// canonical dual.
    pub second_dual_verified: bool,
}

/// Atoms where `F` vanishes. On such an atom any value of the dual can be
/// changed without affecting the reconstruction.
pub fn nonvanishing_check<T: Scalar>(f: &FrameMap<T>, opts: &AnalysisOptions) -> Result<Nonvanishing<T>> {
    require_atomic_frame(f, opts)?;
    let cfg = &opts.tolerances;
    let samples = f.samples(0)?;
    let mut zero_atoms = Vec::new();
    for (t, s) in samples.iter().enumerate() {
        let vanishes = if T::exact() {
            s.value.is_zero()
        } else {
            s.value.module_norm(cfg)? <= cfg.equality_tol
        };
        if vanishes {
            zero_atoms.push(t);
        }
    }
    let Some(&t0) = zero_atoms.first() else {
        return Ok(Nonvanishing {
            all_nonzero: true,
            zero_atoms,
            second_dual: None,
            second_dual_verified: false,
        });
    };
    let g = canonical_dual(f, opts)?;
    let desc = *f.module();
    let mut gs = g.samples(0)?;
    let bump = ModuleElement::unit(desc, 0, AlgebraElement::identity(desc.algebra))?;
    gs[t0].value = gs[t0].value.add(&bump)?;
    let g1 = FrameMap::sampled(desc, f.measure().clone(), gs)?;
    let dual = is_dual_pair(f, &g1, opts)?.is_dual_pair;
    let distinct = dual_distance(&g, &g1, 0)? > cfg.equality_tol;
    Ok(Nonvanishing {
        all_nonzero: false,
        zero_atoms,
        second_dual: Some(g1),
        second_dual_verified: dual && distinct,
    })
}

/// Reconstruction error `max |∫ ⟨x, G(ω)⟩ F(ω) dμ − x|` for a discrete pair.
pub fn reconstruction_residual<T: Scalar>(
    f: &FrameMap<T>,
    g: &FrameMap<T>,
    x: &ModuleElement<T>,
    opts: &AnalysisOptions,
) -> Result<f64> {
    let c = cross_moment_matrix(f, g, opts.mode)?;
    Ok(c.apply(x)?.max_abs_diff(x))
}

/// Largest entrywise difference between the values of two maps on a
/// common grid.
pub fn dual_distance<T: Scalar>(a: &FrameMap<T>, b: &FrameMap<T>, panels: usize) -> Result<f64> {
    let (sa, sb) = (a.samples(panels)?, b.samples(panels)?);
    if sa.len() != sb.len() || sa.iter().zip(&sb).any(|(x, y)| x.point != y.point) {
        return Err(FrameError::GridMismatch("maps are sampled on different grids".into()));
    }
    Ok(sa
        .iter()
        .zip(&sb)
        .map(|(x, y)| x.value.max_abs_diff(&y.value))
        .fold(0.0, f64::max))
}
