//! JSON reports. Field order is fixed by declaration order; floats use the
//! shortest representation that round-trips.

use cframe_core::frame::{Bounds, Check, FrameReport, QUADRATURE_FLAG};
use cframe_core::{ModuleOperator, Scalar, ToleranceConfig};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{coeff_of, module_element_spec, real_of, Coeff, FrameSpec, JobConfig, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    NotAFrame,
    NotDual,
    Unconverged,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub status: Status,
    pub bounds: BoundsSection,
    pub flags: FlagsSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_low: Option<Vec<Vec<Vec<Coeff>>>>,
    /// Flattened `nk × nk` moment matrix.
    pub moment: Vec<Vec<Coeff>>,
    pub checks: Vec<CheckEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual: Option<DualSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
    pub config: JobConfig,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsSection {
    pub lower: Real,
    pub upper: Real,
    pub exact: bool,
    /// `is_frame` compares `lower` against this.
    pub positivity_tol: f64,
    /// `is_tight` compares `upper - lower` against this, relative to `max(1, upper)`.
    pub equality_tol: f64,
}

impl BoundsSection {
    pub fn new<T: Scalar>(b: &Bounds<T>, cfg: &ToleranceConfig) -> Self {
        Self {
            lower: real_of(&b.lower),
            upper: real_of(&b.upper),
            exact: b.exact,
            positivity_tol: cfg.positivity_tol,
            equality_tol: cfg.equality_tol,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FlagsSection {
    pub is_frame: bool,
    pub is_tight: bool,
    pub is_bessel: bool,
    pub quadrature_delta: Option<f64>,
    pub quadrature_tol: f64,
    pub unconverged: bool,
}

impl FlagsSection {
    pub fn new<T: Scalar>(r: &FrameReport<T>) -> Self {
        Self {
            is_frame: r.is_frame,
            is_tight: r.is_tight,
            is_bessel: r.is_bessel,
            quadrature_delta: r.quadrature_delta,
            quadrature_tol: QUADRATURE_FLAG,
            unconverged: r.unconverged,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckEntry {
    pub name: &'static str,
    pub pass: bool,
    pub residual: f64,
    pub tolerance: f64,
}

impl From<&Check> for CheckEntry {
    fn from(c: &Check) -> Self {
        Self {
            name: c.name,
            pass: c.pass,
            residual: c.residual,
            tolerance: c.tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DualSection {
    pub frame: FrameSpec,
    pub bounds: BoundsSection,
    pub is_dual_pair: bool,
    pub identity_residual: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub riesz_type: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairSection {
    pub is_dual_pair: bool,
    /// The verdict used exact arithmetic.
    pub exact: bool,
    pub cross_moment: Vec<Vec<Coeff>>,
    pub identity_residual: f64,
    pub tolerance: f64,
    pub second_bounds: BoundsSection,
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub config_digest: String,
    pub grid_size: usize,
    pub scalar_mode: String,
    pub tool_version: &'static str,
}

impl Provenance {
    pub fn new(config: &JobConfig) -> Self {
        Self {
            config_digest: digest(&config.to_json()),
            grid_size: config.grid_size,
            scalar_mode: config.scalar_mode().to_string(),
            tool_version: env!("CARGO_PKG_VERSION"),
        }
    }
}

pub fn digest(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn flat_matrix<T: Scalar>(m: &ModuleOperator<T>) -> Vec<Vec<Coeff>> {
    let flat = m.flatten();
    (0..flat.rows())
        .map(|r| (0..flat.cols()).map(|c| coeff_of(&flat[(r, c)])).collect())
        .collect()
}

pub fn witness<T: Scalar>(r: &FrameReport<T>) -> Option<Vec<Vec<Vec<Coeff>>>> {
    r.witness_low.as_ref().map(module_element_spec)
}

impl Report {
    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
