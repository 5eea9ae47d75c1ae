use thiserror::Error;

/// Errors produced while building, evaluating, or analysing a production function.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter violation: {0}")]
    ParameterViolation(String),

    #[error("arity mismatch: {0}")]
    ArityMismatch(String),

    #[error("quasi-product construction needs at least two inner functions")]
    EmptyInnerList,

    #[error("domain violation at {point:?}: {reason}")]
    DomainViolation { point: Vec<f64>, reason: String },

    #[error("finite-difference stencil leaves the positive orthant on axis {axis} at {point:?}")]
    StencilOutOfDomain { point: Vec<f64>, axis: usize },

    #[error("index error: {0}")]
    IndexError(String),

    #[error("spec carries no quasi-product structure")]
    StructureMissing,

    #[error("outer function has zero derivative at u = {u}")]
    DegenerateOuter { u: f64 },

    #[error("marginal product of input {index} vanishes at {point:?}")]
    ZeroMarginalProduct { point: Vec<f64>, index: usize },

    #[error("Hicks denominator vanishes for pair ({i}, {j}) at {point:?}")]
    DegenerateDenominator { point: Vec<f64>, i: usize, j: usize },

    #[error("Allen determinant vanishes at {point:?}")]
    SingularAllenDeterminant { point: Vec<f64> },

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid spec document: {0}")]
    InvalidSpec(String),
}

impl Error {
    /// The offending point, when the error is tied to one.
    pub fn point(&self) -> Option<&[f64]> {
        match self {
            Error::DomainViolation { point, .. }
            | Error::StencilOutOfDomain { point, .. }
            | Error::ZeroMarginalProduct { point, .. }
            | Error::DegenerateDenominator { point, .. }
            | Error::SingularAllenDeterminant { point } => Some(point),
            _ => None,
        }
    }

    /// Fills in the point of a point-bound error that was raised without one.
    pub fn at(mut self, p: &[f64]) -> Error {
        match &mut self {
            Error::DomainViolation { point, .. }
            | Error::StencilOutOfDomain { point, .. }
            | Error::ZeroMarginalProduct { point, .. }
            | Error::DegenerateDenominator { point, .. }
            | Error::SingularAllenDeterminant { point } => {
                if point.is_empty() {
                    *point = p.to_vec();
                }
            }
            _ => {}
        }
        self
    }

    /// True for errors raised while evaluating at a point, as opposed to malformed input.
    pub fn is_evaluation_error(&self) -> bool {
        matches!(
            self,
            Error::DomainViolation { .. }
                | Error::StencilOutOfDomain { .. }
                | Error::ZeroMarginalProduct { .. }
                | Error::DegenerateDenominator { .. }
                | Error::SingularAllenDeterminant { .. }
                | Error::DegenerateOuter { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
