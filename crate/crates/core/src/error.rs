use thiserror::Error;

/// Errors produced anywhere in the toolkit.
///
/// Variants are grouped by failure class; [`Error::exit_code`] maps each
/// class onto the command-line exit status.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("field mismatch: GF({left}) vs GF({right})")]
    FieldMismatch { left: u32, right: u32 },
    #[error("element {value} out of range for GF({order})")]
    ElementOutOfRange { value: u32, order: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("operation requires characteristic 2, field has characteristic {0}")]
    NotCharacteristicTwo(u32),

    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("syndrome table collision: two error patterns of weight <= {t} share a syndrome, so d < 2t+1")]
    SyndromeCollision { t: usize },
    #[error("decoding failed: received word is not within radius {t} of any codeword")]
    DecodeFailure { t: usize },
    #[error("exhaustive budget exceeded: {needed} evaluations > budget {budget}{hint}")]
    BudgetExceeded {
        needed: String,
        budget: u64,
        hint: &'static str,
    },

    #[error("scheme dimensions invalid: {0}")]
    SchemeDimensions(String),
    #[error("H0 is not binary: entry ({row}, {col}) = {value}")]
    H0NotBinary { row: usize, col: usize, value: u32 },
    #[error("H0 is not systematic [I | R]: {0}")]
    H0NotSystematic(String),
    #[error("H0 masking distance too small: d0 = {d0}, need d0 >= u0 + 1 = {needed}")]
    MaskingDistanceTooSmall { d0: usize, needed: usize },
    #[error("code distance too small: d = {d}, need d >= 2t + 1 = {needed}")]
    CodeDistanceTooSmall { d: usize, needed: usize },

    #[error("invalid stuck profile: {0}")]
    InvalidStuckProfile(String),
    #[error("too many stuck cells: {got} > {max}")]
    TooManyStuck { got: usize, max: usize },
    #[error("unsupported stuck level {0}: only level 1 is supported by this encoder")]
    UnsupportedLevel(u32),
    #[error("message entry {index} = {value} is not in the masking alphabet F (constant coefficient must be zero)")]
    NotInMaskingAlphabet { index: usize, value: u32 },
    #[error("masking failed: {0}")]
    MaskingFailed(String),

    #[error("invalid bound query: {0}")]
    InvalidBoundQuery(String),
    #[error("error injection impossible: {0}")]
    Injection(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit status for this error class: 2 validation, 3 decode, 4 I/O, 5 budget.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DecodeFailure { .. } => 3,
            Error::Io(_) => 4,
            Error::BudgetExceeded { .. } => 5,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
