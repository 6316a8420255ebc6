use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("edge ({from}, {to}) has nonpositive weight {weight}")]
    NonPositiveWeight { from: usize, to: usize, weight: f64 },
    #[error("node index {index} outside [1, {n}]")]
    NodeOutOfRange { index: usize, n: usize },
    #[error("duplicate edge ({from}, {to})")]
    DuplicateEdge { from: usize, to: usize },
    #[error("a digraph needs at least one node")]
    EmptyGraph,
    #[error("spectral summary needs n >= 2, got n = {0}")]
    TooFewNodes(usize),
    #[error("node count mismatch: expected {expected}, found {found}")]
    NodeCountMismatch { expected: usize, found: usize },
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("time must be nonnegative, got {0}")]
    NegativeTime(f64),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("theta for agent {agent} is {value} at t = {t}, outside [{lower}, {upper}]")]
    ThetaOutOfBounds {
        agent: usize,
        t: f64,
        value: f64,
        lower: f64,
        upper: f64,
    },
    #[error("t = {t} lies beyond the end of a non-repeating schedule ({end})")]
    BeyondSchedule { t: f64, end: f64 },
    #[error("switching time {time} is not a multiple of step {step}; try h = {suggestion}")]
    MisalignedSwitch { time: f64, step: f64, suggestion: f64 },
    #[error("divergence at t = {t}: state component {index} = {value}")]
    Divergence { t: f64, index: usize, value: f64 },
    #[error("empty tail window: tail_start {tail_start} >= horizon {horizon}")]
    EmptyTail { tail_start: f64, horizon: f64 },
    #[error("grid too short: {0}")]
    GridTooShort(String),
    #[error("invalid scenario:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
