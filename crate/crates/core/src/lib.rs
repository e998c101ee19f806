//! Continuous frames in Hilbert C*-modules over finite-dimensional matrix
//! algebras: moment matrices, frame bounds, frame operators and duals.

pub mod cstar;
pub mod duality;
pub mod error;
pub mod frame;
pub mod linalg;
pub mod measure;
pub mod module;
pub mod poly;
pub mod quadrature;
pub mod random;
pub mod scalar;
pub mod suite;

pub use cstar::{AlgebraDescriptor, AlgebraElement, AlgebraKind, Spectrum};
pub use error::{FrameError, Result};
pub use frame::{AnalysisOptions, Bounds, Check, FrameReport};
pub use measure::{FrameMap, IntegrationMode, L2Element, MeasureSpace};
pub use module::{ModuleDescriptor, ModuleElement, ModuleOperator, OperatorSpectral};
pub use poly::{Poly, PolyMatrix};
pub use scalar::{Rational, Scalar, ScalarMode, ToleranceConfig, C};
