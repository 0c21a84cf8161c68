//! Error types shared across the crate.

use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("sequence order must be at least 2 (got {0})")]
    OrderTooSmall(usize),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus {got} is below the cipher bound {min}")]
    ModulusTooSmall { got: u64, min: u64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("entry {entry} is not a residue modulo {modulus}")]
    EntryOutOfRange { entry: u64, modulus: u64 },

    #[error("matrix is singular modulo {modulus} (det = {det})")]
    SingularMatrix { det: u64, modulus: u64 },

    /// A commutation precondition of the nested sum failed.
    #[error("the {side} factors of the nested sums do not commute")]
    CommutationViolation { side: &'static str },

    /// The derived encryption key has no inverse; the caller must pick a
    /// fresh session secret.
    #[error("derived encryption key is singular modulo {modulus}; retry with a fresh session secret")]
    DegenerateKey { modulus: u64 },

    #[error("unsupported symbol {symbol:?} at position {position}")]
    UnsupportedSymbol { symbol: char, position: usize },

    #[error("block has {got} entries, expected {expected}")]
    BlockLength { expected: usize, got: usize },

    #[error("pad count {pad} must be smaller than the block length {block}")]
    PadTooLarge { pad: usize, block: usize },

    #[error("a padded message must contain at least one block")]
    PadWithoutBlocks,

    #[error("text mode requires modulus 47, the symbol alphabet size (got {0})")]
    TextModulus(u64),

    #[error("exponent must be at least 1 (got {0})")]
    ExponentTooSmall(i64),

    #[error("sum length must be at least 1")]
    EmptySum,

    #[error("combined exponent overflows the supported range")]
    ExponentOverflow,

    #[error("search exceeded the cap of {cap} steps")]
    ResourceLimit { cap: u64 },

    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A document-format error with the 1-based line it was detected on.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub(crate) fn new(line: usize, kind: ParseErrorKind) -> Self {
        Self { line, kind }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// First line was not the `MPKC v1` header.
    MissingHeader,
    /// A field outside the document's fixed schema.
    UnknownField(String),
    ExpectedField { expected: &'static str, got: String },
    WrongRole { expected: &'static str, got: String },
    BadInteger(String),
    RowLength { expected: usize, got: usize },
    EntryOutOfRange { entry: u64, modulus: u64 },
    NotPrime(u64),
    /// The document ended before the schema was complete.
    UnexpectedEnd,
    TrailingContent,
    /// A stored matrix disagrees with the stored exponent that defines it.
    MatrixExponentMismatch(&'static str),
    Invalid(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::MissingHeader => write!(f, "expected `MPKC v1` header"),
            Self::UnknownField(name) => write!(f, "unknown field `{name}`"),
            Self::ExpectedField { expected, got } => {
                write!(f, "expected `{expected}`, got `{got}`")
            }
            Self::WrongRole { expected, got } => {
                write!(f, "expected role `{expected}`, got `{got}`")
            }
            Self::BadInteger(tok) => write!(f, "`{tok}` is not a valid integer"),
            Self::RowLength { expected, got } => {
                write!(f, "matrix row has {got} entries, expected {expected}")
            }
            Self::EntryOutOfRange { entry, modulus } => {
                write!(f, "entry {entry} is not a residue modulo {modulus}")
            }
            Self::NotPrime(p) => write!(f, "modulus {p} is not prime"),
            Self::UnexpectedEnd => write!(f, "unexpected end of document"),
            Self::TrailingContent => write!(f, "trailing content after document end"),
            Self::MatrixExponentMismatch(name) => {
                write!(f, "matrix {name} does not match its stored exponent")
            }
            Self::Invalid(msg) => write!(f, "{msg}"),
        }
    }
}
