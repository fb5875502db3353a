//! Error types.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum TensorError {
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch { left: Vec<usize>, right: Vec<usize> },
    #[error("variance mismatch between contracted or combined axes")]
    VarianceMismatch,
    #[error("scale dimension mismatch: {left} vs {right}")]
    ScaleMismatch { left: String, right: String },
    #[error("axis out of range")]
    AxisOutOfRange,
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum GeomError {
    #[error("metric is singular at the evaluation point (det = {det})")]
    SingularMetric { det: f64 },
    #[error("point outside the chart domain: {reason}")]
    OutsideDomain { reason: String },
    #[error("phase point is not timelike-admissible: g(d,d)/(-c^2) = {ratio}")]
    NotTimelike { ratio: f64 },
    #[error("conditioning guard tripped: alpha0 = {alpha0} exceeds 1e3")]
    NearLightCone { alpha0: f64 },
    #[error("electromagnetic 2-form is not closed: |dF| = {residual}")]
    NotClosed { residual: f64 },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum CatalogError {
    #[error("unknown catalog id `{0}`")]
    UnknownId(String),
    #[error("missing parameter `{0}`")]
    MissingParam(String),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: String, reason: String },
}
