//! Error type shared by every module of the crate.

use std::fmt;

use crate::grid::Rank;

/// Everything that can go wrong when constructing parameters or evaluating
/// a series.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The 2×2 matrix (a, b; b, c) fails a > 0 or ac − b² > 0.
    NotPositiveDefinite { a: f64, b: f64, c: f64 },
    /// A width-type parameter (κ, ν, or the theta parameter t) was ≤ 0 or
    /// not finite.
    NonPositiveParameter { name: &'static str, value: f64 },
    /// Grid size must be an odd integer ≥ 3.
    InvalidDimension { d: i64 },
    /// Truncation policy fields out of range.
    InvalidPolicy(String),
    /// The shell loop hit the `max_shell` safety cap before the tail
    /// criterion was met.
    ConvergenceFailure { shells_used: u32, tail_bound: f64 },
    /// A Wigner sum produced an imaginary residue above the error threshold,
    /// which always indicates an index-reduction bug in the input.
    NonNegligibleImaginaryPart { residue: f64 },
    /// A grid function of the wrong rank was passed to a transform.
    RankMismatch { expected: Rank, found: Rank },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPositiveDefinite { a, b, c } => write!(
                f,
                "sigma matrix [[{a}, {b}], [{b}, {c}]] is not positive definite \
                 (requires a > 0 and ac - b^2 > 0)"
            ),
            Error::NonPositiveParameter { name, value } => {
                write!(f, "{name} must be a positive finite number, got {value}")
            }
            Error::InvalidDimension { d } => {
                write!(f, "d must be odd and >= 3, got {d}")
            }
            Error::InvalidPolicy(msg) => write!(f, "invalid truncation policy: {msg}"),
            Error::ConvergenceFailure {
                shells_used,
                tail_bound,
            } => write!(
                f,
                "series failed to converge within {shells_used} shells \
                 (remaining tail bound {tail_bound:.3e})"
            ),
            Error::NonNegligibleImaginaryPart { residue } => write!(
                f,
                "Wigner sum has imaginary residue {residue:.3e} above 1e-10; \
                 this indicates an indexing bug in the input grid"
            ),
            Error::RankMismatch { expected, found } => {
                write!(f, "expected a rank-{expected} grid, got rank-{found}")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
