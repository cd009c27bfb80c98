use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Errors from model operations and optimiser runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A dimension below the supported minimum was supplied.
    InvalidDimension { d: usize, min: usize },
    /// Two bit strings, or a bit string and a model, disagree on length.
    LengthMismatch { expected: usize, found: usize },
    /// A scalar parameter is outside its legal range.
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    /// The remaining evaluation budget cannot pay for the next iteration.
    BudgetExhausted { remaining: u64, required: u64 },
    /// A ranking was requested for an empty fitness list.
    EmptyRanking,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDimension { d, min } => {
                write!(f, "dimension {d} is below the minimum of {min}")
            }
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Error::InvalidParameter { name, reason } => {
                write!(f, "invalid parameter `{name}`: {reason}")
            }
            Error::BudgetExhausted {
                remaining,
                required,
            } => write!(
                f,
                "budget exhausted: {remaining} evaluations left, next step needs {required}"
            ),
            Error::EmptyRanking => write!(f, "cannot rank an empty fitness list"),
        }
    }
}

impl core::error::Error for Error {}
