//! Job configuration: the JSON schema and its conversion to frame maps.

use std::fmt;

use cframe_core::measure::{FrameData, Sample};
use cframe_core::scalar::ScalarMode;
use cframe_core::{
    AlgebraDescriptor, AlgebraElement, AlgebraKind, FrameMap, MeasureSpace, ModuleDescriptor, ModuleElement, Poly,
    PolyMatrix, Rational, Scalar, ToleranceConfig, C,
};
use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub const DEFAULT_GRID: usize = 32;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub algebra: AlgebraSpec,
    pub module_rank: usize,
    pub measure: MeasureSpec,
    pub frame: FrameSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second_frame: Option<FrameSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceSpec>,
    #[serde(default = "default_grid")]
    pub grid_size: usize,
}

fn default_grid() -> usize {
    DEFAULT_GRID
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub kind: KindSpec,
    pub dim: usize,
    #[serde(default)]
    pub scalar_mode: ModeSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindSpec {
    Full,
    Diagonal,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeSpec {
    #[default]
    Float,
    Rational,
}

impl From<ModeSpec> for ScalarMode {
    fn from(m: ModeSpec) -> Self {
        match m {
            ModeSpec::Float => ScalarMode::Float,
            ModeSpec::Rational => ScalarMode::Rational,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasureSpec {
    Interval {
        a: Real,
        b: Real,
        #[serde(default = "unit_weight")]
        weight_coeffs: Vec<Real>,
    },
    Atoms {
        points: Vec<Real>,
        weights: Vec<Real>,
    },
}

fn unit_weight() -> Vec<Real> {
    vec![Real::Text("1".into())]
}

/// Per component, per matrix entry.
pub type PolyEntries = Vec<Vec<Vec<Vec<Coeff>>>>;

/// Per grid point, per component, a `k × k` matrix.
pub type SampleValues = Vec<Vec<Vec<Vec<Coeff>>>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FrameSpec {
    Polynomial {
        entries: PolyEntries,
    },
    Samples {
        grid: Vec<Real>,
        /// Quadrature weights; required over intervals, taken from the
        /// atoms otherwise.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<Real>>,
        values: SampleValues,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positivity_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equality_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invertibility_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eig_tol: Option<f64>,
}

/// A real number: a rational string `"p/q"` (or integer `"p"`) or a JSON number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Real {
    Text(String),
    Number(f64),
}

/// A complex coefficient: a real, or an `[re, im]` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Pair([Real; 2]),
    Real(Real),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

impl JobConfig {
    /// Parses JSON, reporting the field path and line/column on failure.
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            ConfigError::new(
                if path == "." { String::new() } else { path },
                format!("{inner} (line {}, column {})", inner.line(), inner.column()),
            )
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Structural checks that need no arithmetic.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.algebra.dim == 0 {
            return Err(ConfigError::new("algebra.dim", "must be at least 1"));
        }
        if self.module_rank == 0 {
            return Err(ConfigError::new("module_rank", "must be at least 1"));
        }
        if matches!(self.measure, MeasureSpec::Interval { .. }) && self.grid_size < 2 {
            return Err(ConfigError::new(
                "grid_size",
                "must be at least 2 for interval measures",
            ));
        }
        Ok(())
    }

    pub fn scalar_mode(&self) -> ScalarMode {
        self.algebra.scalar_mode.into()
    }

    /// Defaults overridden by the config's `tolerances` block.
    pub fn tolerance_config(&self) -> Result<ToleranceConfig, ConfigError> {
        let mut cfg = ToleranceConfig::default();
        if let Some(t) = &self.tolerances {
            cfg.positivity_tol = t.positivity_tol.unwrap_or(cfg.positivity_tol);
            cfg.equality_tol = t.equality_tol.unwrap_or(cfg.equality_tol);
            cfg.invertibility_tol = t.invertibility_tol.unwrap_or(cfg.invertibility_tol);
            cfg.eig_tol = t.eig_tol.unwrap_or(cfg.eig_tol);
        }
        cfg.validate()
            .map_err(|e| ConfigError::new("tolerances", e.to_string()))?;
        Ok(cfg)
    }

    pub fn module<T: Scalar>(&self) -> Result<ModuleDescriptor, ConfigError> {
        let kind = match self.algebra.kind {
            KindSpec::Full => AlgebraKind::Full,
            KindSpec::Diagonal => AlgebraKind::Diagonal,
        };
        let alg = AlgebraDescriptor::new::<T>(kind, self.algebra.dim)
            .map_err(|e| ConfigError::new("algebra", e.to_string()))?;
        ModuleDescriptor::new(alg, self.module_rank).map_err(|e| ConfigError::new("module_rank", e.to_string()))
    }

    pub fn measure<T: Scalar>(&self) -> Result<MeasureSpace<T>, ConfigError> {
        match &self.measure {
            MeasureSpec::Interval { a, b, weight_coeffs } => {
                let a = real::<T>(a, "measure.interval.a")?;
                let b = real::<T>(b, "measure.interval.b")?;
                let w = weight_coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| real::<T>(c, &format!("measure.interval.weight_coeffs[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                MeasureSpace::interval(a, b, Poly::real(w))
                    .map_err(|e| ConfigError::new("measure.interval", e.to_string()))
            }
            MeasureSpec::Atoms { points, weights } => {
                let p = reals::<T>(points, "measure.atoms.points")?;
                let w = reals::<T>(weights, "measure.atoms.weights")?;
                if p.len() != w.len() {
                    return Err(ConfigError::new("measure.atoms", "points and weights differ in length"));
                }
                MeasureSpace::atoms(p, w).map_err(|e| ConfigError::new("measure.atoms", e.to_string()))
            }
        }
    }

    pub fn frame<T: Scalar>(&self) -> Result<FrameMap<T>, ConfigError> {
        build_frame(self, &self.frame, "frame")
    }

    pub fn second_frame<T: Scalar>(&self) -> Result<Option<FrameMap<T>>, ConfigError> {
        self.second_frame
            .as_ref()
            .map(|spec| build_frame(self, spec, "second_frame"))
            .transpose()
    }
}

fn build_frame<T: Scalar>(config: &JobConfig, spec: &FrameSpec, path: &str) -> Result<FrameMap<T>, ConfigError> {
    let module = config.module::<T>()?;
    let measure = config.measure::<T>()?;
    let n = module.rank;
    match spec {
        FrameSpec::Polynomial { entries } => {
            let path = format!("{path}.polynomial.entries");
            if entries.len() != n {
                return Err(ConfigError::new(
                    path,
                    format!("expected {n} components, found {}", entries.len()),
                ));
            }
            let comps = entries
                .iter()
                .enumerate()
                .map(|(i, m)| poly_matrix::<T>(module.algebra, m, &format!("{path}[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            FrameMap::polynomial(module, measure, comps).map_err(|e| ConfigError::new(path, e.to_string()))
        }
        FrameSpec::Samples { grid, weights, values } => {
            let path = format!("{path}.samples");
            let points = reals::<T>(grid, &format!("{path}.grid"))?;
            let weights = match (weights, &measure) {
                (Some(w), _) => reals::<T>(w, &format!("{path}.weights"))?,
                (None, MeasureSpace::Atoms { weights, .. }) => weights.clone(),
                (None, MeasureSpace::Interval { .. }) => {
                    return Err(ConfigError::new(
                        format!("{path}.weights"),
                        "required for samples over an interval measure",
                    ))
                }
            };
            if points.len() != values.len() || points.len() != weights.len() {
                return Err(ConfigError::new(path, "grid, weights and values differ in length"));
            }
            let mut samples = Vec::with_capacity(points.len());
            for (s, ((point, weight), comps)) in points.into_iter().zip(weights).zip(values).enumerate() {
                let vpath = format!("{path}.values[{s}]");
                if comps.len() != n {
                    return Err(ConfigError::new(
                        vpath,
                        format!("expected {n} components, found {}", comps.len()),
                    ));
                }
                let elems = comps
                    .iter()
                    .enumerate()
                    .map(|(i, m)| algebra_element::<T>(module.algebra, m, &format!("{vpath}[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                let value = ModuleElement::new(module, elems).map_err(|e| ConfigError::new(&vpath, e.to_string()))?;
                samples.push(Sample { point, weight, value });
            }
            FrameMap::sampled(module, measure, samples).map_err(|e| ConfigError::new(path, e.to_string()))
        }
    }
}

fn square<'a, X>(rows: &'a [Vec<X>], k: usize, path: &str) -> Result<&'a [Vec<X>], ConfigError> {
    if rows.len() != k || rows.iter().any(|r| r.len() != k) {
        return Err(ConfigError::new(path, format!("expected a {k}x{k} matrix")));
    }
    Ok(rows)
}

fn poly_matrix<T: Scalar>(
    alg: AlgebraDescriptor,
    rows: &[Vec<Vec<Coeff>>],
    path: &str,
) -> Result<PolyMatrix<T>, ConfigError> {
    let k = alg.dim;
    let rows = square(rows, k, path)?;
    let mut out = Vec::with_capacity(k);
    for (r, row) in rows.iter().enumerate() {
        let mut prow = Vec::with_capacity(k);
        for (c, coeffs) in row.iter().enumerate() {
            let epath = format!("{path}[{r}][{c}]");
            let p = Poly::new(
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(d, z)| complex::<T>(z, &format!("{epath}[{d}]")))
                    .collect::<Result<Vec<_>, _>>()?,
            );
            if r != c && alg.kind == AlgebraKind::Diagonal && !p.is_zero() {
                return Err(ConfigError::new(
                    epath,
                    "diagonal algebra rejects nonzero off-diagonal entries",
                ));
            }
            prow.push(p);
        }
        out.push(prow);
    }
    PolyMatrix::new(alg, out).map_err(|e| ConfigError::new(path, e.to_string()))
}

fn algebra_element<T: Scalar>(
    alg: AlgebraDescriptor,
    rows: &[Vec<Coeff>],
    path: &str,
) -> Result<AlgebraElement<T>, ConfigError> {
    let k = alg.dim;
    let rows = square(rows, k, path)?;
    let mut entries = Vec::with_capacity(k);
    for (r, row) in rows.iter().enumerate() {
        let mut erow = Vec::with_capacity(k);
        for (c, z) in row.iter().enumerate() {
            let epath = format!("{path}[{r}][{c}]");
            let z = complex::<T>(z, &epath)?;
            if r != c && alg.kind == AlgebraKind::Diagonal && !z.is_zero() {
                return Err(ConfigError::new(
                    epath,
                    "diagonal algebra rejects nonzero off-diagonal entries",
                ));
            }
            erow.push(z);
        }
        entries.push(erow);
    }
    let m = cframe_core::linalg::CMatrix::from_rows(entries).map_err(|e| ConfigError::new(path, e.to_string()))?;
    AlgebraElement::new(alg, m).map_err(|e| ConfigError::new(path, e.to_string()))
}

fn reals<T: Scalar>(xs: &[Real], path: &str) -> Result<Vec<T>, ConfigError> {
    xs.iter()
        .enumerate()
        .map(|(i, x)| real::<T>(x, &format!("{path}[{i}]")))
        .collect()
}

fn complex<T: Scalar>(z: &Coeff, path: &str) -> Result<C<T>, ConfigError> {
    match z {
        Coeff::Real(x) => Ok(Complex::new(real(x, path)?, T::zero())),
        Coeff::Pair([re, im]) => Ok(Complex::new(
            real(re, &format!("{path}[0]"))?,
            real(im, &format!("{path}[1]"))?,
        )),
    }
}

fn real<T: Scalar>(x: &Real, path: &str) -> Result<T, ConfigError> {
    match x {
        Real::Number(v) if v.is_finite() => Ok(T::of_f64(*v)),
        Real::Number(_) => Err(ConfigError::new(path, "not a finite number")),
        Real::Text(s) => parse_rational(s)
            .map(|q| T::of_rational(&q))
            .map_err(|m| ConfigError::new(path, m)),
    }
}

/// Parses `"p"` or `"p/q"` with `q > 0` and `gcd(p, q) = 1`.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let parse = |t: &str| -> Result<BigInt, String> {
        let digits = t.strip_prefix('-').unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("{s:?} is not a rational of the form \"p/q\""));
        }
        t.parse::<BigInt>().map_err(|e| e.to_string())
    };
    let p = parse(num)?;
    let q = match den {
        Some(d) => parse(d)?,
        None => BigInt::one(),
    };
    if !q.is_positive() {
        return Err(format!("{s:?} needs a positive denominator"));
    }
    if !p.gcd(&q).is_one() {
        return Err(format!("{s:?} is not reduced"));
    }
    Ok(Rational::new_raw(p, q))
}

/// Canonical text of a real: `"p/q"` for rationals, a number for floats.
pub fn real_of<T: Scalar>(x: &T) -> Real {
    if T::exact() {
        Real::Text(x.to_string())
    } else {
        Real::Number(x.as_f64())
    }
}

pub fn coeff_of<T: Scalar>(z: &C<T>) -> Coeff {
    if z.im.is_zero() {
        Coeff::Real(real_of(&z.re))
    } else {
        Coeff::Pair([real_of(&z.re), real_of(&z.im)])
    }
}

fn matrix_of<T: Scalar>(a: &AlgebraElement<T>) -> Vec<Vec<Coeff>> {
    let k = a.descriptor().dim;
    (0..k)
        .map(|r| (0..k).map(|c| coeff_of(a.entry(r, c))).collect())
        .collect()
}

pub fn module_element_spec<T: Scalar>(f: &ModuleElement<T>) -> Vec<Vec<Vec<Coeff>>> {
    f.components().iter().map(matrix_of).collect()
}

/// The frame definition of a map, in the config schema.
pub fn frame_spec<T: Scalar>(f: &FrameMap<T>) -> FrameSpec {
    match f.data() {
        FrameData::Polynomial(comps) => FrameSpec::Polynomial {
            entries: comps
                .iter()
                .map(|m| {
                    let k = m.descriptor().dim;
                    (0..k)
                        .map(|r| {
                            (0..k)
                                .map(|c| m.entry(r, c).coeffs().iter().map(coeff_of).collect())
                                .collect()
                        })
                        .collect()
                })
                .collect(),
        },
        FrameData::Sampled(samples) => FrameSpec::Samples {
            grid: samples.iter().map(|s| real_of(&s.point)).collect(),
            weights: (!f.measure().is_atomic()).then(|| samples.iter().map(|s| real_of(&s.weight)).collect()),
            values: samples.iter().map(|s| module_element_spec(&s.value)).collect(),
        },
    }
}
