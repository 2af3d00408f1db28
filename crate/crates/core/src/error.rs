use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("weight {weight} of `{atom}` is outside [0, 1]")]
    WeightOutOfRange { atom: String, weight: String },

    #[error("duplicate weighted fact for `{0}`")]
    DuplicateWeightedFact(String),

    #[error("weighted facts on both `{0}` and its negation")]
    ConflictingWeightedFacts(String),

    #[error("invalid atom name `{0}`")]
    InvalidSymbol(String),

    #[error("malformed event token `{0}`")]
    MalformedToken(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("fresh atom `{0}` already occurs in the program")]
    FreshCollision(String),

    #[error("universe has {found} symbols but the enumeration cap is {cap}")]
    CapExceeded { found: usize, cap: usize },

    #[error("program has {found} stable models; class enumeration supports at most {limit}")]
    TooManyModels { found: usize, limit: usize },

    #[error("program is not free of default negation")]
    NotNafFree,

    #[error("stable model `{0}` is inconsistent")]
    InconsistentModel(String),

    #[error("event `{0}` is inconsistent")]
    InconsistentEvent(String),

    #[error("normalizing factor Z is identically zero")]
    ZeroNormalizer,

    #[error("normalizing factor Z evaluates to zero for the given parameters")]
    ZeroNormalizerAt,

    #[error("no value for parameter {0}")]
    MissingVariable(String),

    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),

    #[error("parameter {name} = {value} is outside [0, 1]")]
    ParameterOutOfRange { name: String, value: String },

    #[error("{group} = {sum}, expected 1")]
    SimplexViolation { group: String, sum: String },

    #[error("invalid parameter file: {0}")]
    ThetaFormat(String),

    #[error("parameter grid has {0} points, more than the search supports")]
    GridTooLarge(u128),

    #[error("resolution must be positive")]
    ZeroResolution,

    #[error("{source_name}:{line}: {error}")]
    Dataset {
        source_name: String,
        line: usize,
        error: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    WeightOutOfRange,
    DuplicateWeightedFact,
    ConflictingWeightedFacts,
    ReservedName,
}

/// A failure while reading program text, positioned at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}
