use thiserror::Error;

/// Domain errors raised by the transform, inversion, distribution and
/// windowing layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample is empty")]
    EmptySample,
    #[error("sample value at index {index} is not finite ({value})")]
    NonFiniteValue { index: usize, value: f64 },
    #[error("normalization pipeline has no steps")]
    EmptyPipeline,
    #[error("invalid parameter for {step}: {reason}")]
    InvalidStepParameter { step: &'static str, reason: String },
    #[error("pipeline yields non-positive value {value} at index {index}")]
    PipelineYieldsNonPositive { index: usize, value: f64 },
    #[error("breve moment must not be NaN")]
    NanMoment,
    #[error("s-grid is not sorted ascending at position {position}")]
    GridNotSorted { position: usize },
    #[error("derivative order must be at least 1")]
    OrderZero,
    #[error("ConstantSample: all normalized values are equal, the transform is constant")]
    ConstantSample,
    #[error("TargetOutOfRange: target {target} outside [{min}, {max}] (residual {residual})")]
    TargetOutOfRange {
        target: f64,
        min: f64,
        max: f64,
        residual: f64,
    },
    #[error("inversion stalled at s={moment} with residual {residual}")]
    InversionStalled { moment: f64, residual: f64 },
    #[error("series inversion diverges after {terms} terms")]
    SeriesDiverging { terms: usize },
    #[error("series inversion needs at least one term, at most {max}; got {requested}")]
    InvalidTermCount { requested: usize, max: usize },
    #[error("Lambert W0 argument {0} is below the branch point -1/e")]
    BelowBranchPoint(f64),
    #[error("invalid Breve parameters alpha={alpha}, beta={beta}: need 0 < alpha <= 1 and beta > 0")]
    InvalidBreveParams { alpha: f64, beta: f64 },
    #[error("NormalizationMismatch: {quantity} is {actual}, expected {expected}")]
    NormalizationMismatch {
        quantity: &'static str,
        actual: f64,
        expected: f64,
    },
    #[error("invalid window plan: {0}")]
    InvalidWindowPlan(String),
    #[error("series of length {len} is shorter than the window width {width}")]
    SeriesTooShort { len: usize, width: usize },
    #[error("timestamps must be strictly increasing (index {index})")]
    TimestampsNotIncreasing { index: usize },
    #[error("timestamps length {timestamps} does not match values length {values}")]
    TimestampLengthMismatch { timestamps: usize, values: usize },
    #[error("window {window}: {source}")]
    Window {
        window: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
