use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("pole factor {factor} is outside the admissible locus")]
    DisallowedPole { factor: String },

    #[error("no contraction declared for generator pair ({left}, {right})")]
    MissingContraction { left: String, right: String },

    #[error("expressions belong to different generator systems ({left} vs {right})")]
    SystemMismatch { left: String, right: String },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownName(String),

    #[error("Fock basis exceeds the size bound of {bound} states")]
    BasisTooLarge { bound: usize },

    #[error("raw power {power} outside the valid range {min}..={max}")]
    PowerOutOfRange { power: i64, min: i64, max: i64 },

    #[error("empty joint exactness window; enlarge the cutoffs")]
    EmptyWindow,

    #[error("odd generators are not supported by the Fock oracle")]
    OddGenerator,

    #[error("invalid argument: {0}")]
    Invalid(String),
}
