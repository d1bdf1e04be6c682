use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive semi-definite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace is not one (got {trace})")]
    TraceNotOne { trace: f64 },

    #[error("effects do not sum to the identity (residual {residual:e})")]
    IncompleteMeasurement { residual: f64 },

    #[error("measurement has no outcomes")]
    EmptyMeasurement,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("parameter grids differ")]
    GridMismatch,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("states are equal within tolerance (trace norm of difference {trace_norm:e})")]
    StatesEqual { trace_norm: f64 },

    #[error("outcome {outcome} is impossible (probability {probability:e})")]
    OutcomeImpossible { outcome: usize, probability: f64 },

    #[error("outcomes {outcomes:?} have zero marginal probability under the prior")]
    OutcomeNeverOccurs { outcomes: Vec<usize> },

    #[error("point outside the loss domain: {0}")]
    OutOfDomain(String),

    #[error("invalid estimator: {0}")]
    InvalidEstimator(String),

    #[error("invalid prior: {0}")]
    InvalidPrior(String),

    #[error("search space of {size} candidate evaluations exceeds cap {cap}")]
    SearchSpaceTooLarge { size: f64, cap: u64 },

    #[error("operation needs a single-parameter family (param_dim = {param_dim})")]
    MultiParameterUnsupported { param_dim: usize },

    #[error("average state is rank deficient (kernel dimension {kernel_dim})")]
    RankDeficientAverage { kernel_dim: usize },

    #[error("family is not classical: states at grid indices {first} and {second} fail to commute (norm {commutator_norm:e})")]
    NotClassicalState {
        first: usize,
        second: usize,
        commutator_norm: f64,
    },

    #[error("reference family is not classical")]
    NotClassicalReference,

    #[error("operation requires least-squares loss")]
    WrongLoss,

    #[error("measurement is not refineable on this family")]
    NotRefineable,

    #[error("family is constant on the grid")]
    StateConstant,

    #[error("measurement outcome probabilities depend on the parameter")]
    MeasurementInformative,

    #[error("estimators are equal")]
    EstimatorsEqual,

    #[error("risk profiles differ (max deviation {max_deviation:e})")]
    ProfilesDiffer { max_deviation: f64 },

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("unsupported Hilbert space dimension {0}")]
    UnsupportedDimension(usize),

    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    /// True for errors caused by mismatched sizes or grids.
    pub fn is_dimension_error(&self) -> bool {
        matches!(self, Error::DimensionMismatch { .. } | Error::GridMismatch)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
