//! Error type shared by every engine layer.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}: scalar literal `{literal}` is not valid for field {field}")]
    FieldMismatch {
        line: usize,
        literal: String,
        field: String,
    },

    #[error("line {line}: linear form has {found} coefficients, expected {expected} (constant plus one per variable)")]
    Arity {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("operands belong to different fields")]
    MixedFields,

    #[error("division by zero")]
    DivisionByZero,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus {0} exceeds 2^31 - 1")]
    ModulusTooLarge(u64),

    #[error("monomial factorial vanishes in the field (characteristic divides it)")]
    NonInvertibleFactorial,

    #[error("product fan-in {fanin} exceeds the supported bound {bound}")]
    FanInTooLarge { fanin: usize, bound: usize },

    #[error("product terms have different fan-in ({left} vs {right})")]
    FanInMismatch { left: usize, right: usize },

    #[error("linear form has a nonzero constant; a homogeneous circuit is required")]
    NotHomogeneous,

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("field has only {field_size} elements but the sample range needs {needed}")]
    FieldTooSmall { field_size: u64, needed: u64 },

    #[error("field characteristic {p} does not exceed the fan-in bound {d}; the branching-program pipeline requires char(F) > d")]
    UnsupportedCharacteristic { p: u64, d: usize },

    #[error("all terms must share one fan-in to form a noncommutative word list")]
    NonuniformFanIn,

    #[error("word length {found} does not match the program depth {expected}")]
    WordLengthMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
