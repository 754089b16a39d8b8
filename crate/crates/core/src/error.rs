use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty sequence")]
    EmptySequence,

    #[error("reserved symbol at position {position}")]
    ReservedSymbol { position: usize },

    #[error("decode too large: {length} symbols exceeds limit {limit}")]
    DecodeTooLarge { length: u64, limit: u64 },

    #[error("decoded length exceeds the supported maximum of 2^62 symbols")]
    LengthOverflow,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate record name {0:?}")]
    DuplicateName(String),

    #[error("empty record {0}")]
    EmptyRecord(String),

    #[error("weight overflow")]
    WeightOverflow,

    #[error("A overflow")]
    AOverflow,

    #[error("decoded length over validation cap ({length} > {cap})")]
    ValidationCap { length: u64, cap: u64 },

    #[error("no common substring between {0} and {1}")]
    NoCommonSubstring(String, String),

    #[error("sequence too short: {name} has decoded length {length}, need at least 2")]
    SequenceTooShort { name: String, length: u64 },

    #[error("oracle budget exceeded: {0}")]
    OracleBudget(String),

    #[error("name {0:?} is longer than 10 characters (use relaxed names)")]
    NameTooLong(String),

    #[error("pair ({0}, {1}): {2}")]
    Pair(String, String, Box<Error>),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
