use thiserror::Error;

/// Errors raised by n-adic operations.
///
/// Each variant carries a stable machine-readable name (see [`Error::name`])
/// used by the CLI for single-line diagnostics.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid-argument: {0}")]
    InvalidArgument(String),
    #[error("not-invertible: residue shares the prime {prime} with the base")]
    NotInvertible { prime: u64 },
    #[error("denominator-not-unit: denominator shares the prime {prime} with the base")]
    DenominatorNotUnit { prime: u64 },
    #[error("invalid-digit: digit {digit} out of range for base {base}")]
    InvalidDigit { digit: u64, base: u64 },
    #[error("unsupported-prime-2: operation not defined when 2 divides the base")]
    UnsupportedPrime2,
    #[error("non-unit: argument must be a unit (coprime to the base)")]
    NonUnit,
    #[error("no-square-root: argument is not a quadratic residue modulo {prime}")]
    NoSquareRoot { prime: u64 },
    #[error("outside-convergence-radius: series diverges at the prime {prime}")]
    OutsideConvergenceRadius { prime: u64 },
    #[error("not-periodic: continued fraction has an empty period")]
    NotPeriodic,
    #[error("invalid-family: {0}")]
    InvalidFamily(String),
    #[error("degenerate-square: {0} is a perfect square")]
    DegenerateSquare(String),
    #[error("invalid-character: illegal character {ch:?} at position {position}")]
    InvalidCharacter { ch: char, position: usize },
    #[error("not-coprime: base of the tower shares a factor with the ring base")]
    NotCoprime,
    #[error("unsupported-shape: cannot certify tower height nor compute exactly")]
    UnsupportedShape,
    #[error("parse-error: {0}")]
    Parse(String),
    #[error("internal-error: {0}")]
    Internal(String),
}

impl Error {
    /// Stable error name used on CLI diagnostic lines.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::NotInvertible { .. } => "not-invertible",
            Error::DenominatorNotUnit { .. } => "denominator-not-unit",
            Error::InvalidDigit { .. } => "invalid-digit",
            Error::UnsupportedPrime2 => "unsupported-prime-2",
            Error::NonUnit => "non-unit",
            Error::NoSquareRoot { .. } => "no-square-root",
            Error::OutsideConvergenceRadius { .. } => "outside-convergence-radius",
            Error::NotPeriodic => "not-periodic",
            Error::InvalidFamily(_) => "invalid-family",
            Error::DegenerateSquare(_) => "degenerate-square",
            Error::InvalidCharacter { .. } => "invalid-character",
            Error::NotCoprime => "not-coprime",
            Error::UnsupportedShape => "unsupported-shape",
            Error::Parse(_) => "parse-error",
            Error::Internal(_) => "internal-error",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
