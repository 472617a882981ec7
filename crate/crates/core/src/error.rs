use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("all field values are zero; no probability distribution exists")]
    DegenerateIntensity,

    #[error("invalid dimension: expected {expected}, found {found}")]
    Dimension { expected: String, found: usize },

    #[error("state is not normalized: |norm^2 - 1| = {deviation:e}")]
    NotNormalized { deviation: f64 },

    #[error("channel {channel} out of range 1..={n_channels}")]
    ChannelOutOfRange { channel: usize, n_channels: usize },

    #[error("qubit {qubit} out of range 1..={n_qubits}")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("gate acts twice on index {0}; the two indices must differ")]
    RepeatedIndex(usize),

    #[error("beam split phases violate the unitarity condition (residual {residual:e})")]
    BeamSplitPhases { residual: f64 },

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not orthogonal (max deviation {deviation:e})")]
    NotOrthogonal { deviation: f64 },

    #[error("matrix is not hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("eigenphase {phase} sits on the branch cut; the logarithm is not unique")]
    BranchAmbiguous { phase: f64 },

    #[error("step duration must be positive, got {0}")]
    NonPositiveStep(f64),

    #[error("operation needs at least {needed} qubits, got {found}")]
    TooFewQubits { needed: usize, found: usize },

    #[error("ensemble weights must be non-negative and sum to 1 (sum = {sum})")]
    InvalidWeights { sum: f64 },

    #[error("ensemble is empty")]
    EmptyEnsemble,

    #[error("probability vector is invalid: {0}")]
    InvalidProbabilities(String),

    #[error("field amplitude is zero; phase is undefined")]
    UndefinedPhase,

    #[error("invalid measurement settings: {0}")]
    InvalidSettings(String),

    #[error("{0}")]
    Unsupported(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("instruction {position}: {source}")]
    AtInstruction {
        position: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn dim(expected: impl Into<String>, found: usize) -> Self {
        Error::Dimension {
            expected: expected.into(),
            found,
        }
    }

    /// Line number of a parse error, looking through instruction wrappers.
    pub fn line(&self) -> Option<usize> {
        match self {
            Error::Parse { line, .. } => Some(*line),
            Error::AtInstruction { source, .. } => source.line(),
            _ => None,
        }
    }
}
