//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime")]
    BadModulus(u64),
    #[error("mixed prime fields: {0} vs {1}")]
    FieldMismatch(u64, u64),
    #[error("matrix is singular")]
    Singular,
    #[error("cannot invert the zero series")]
    ZeroInvert,
    #[error("precision exhausted during reduction (retry with larger N)")]
    PrecisionExhausted,
    #[error("reduction disagrees with hat invariants after retries: {0}")]
    InvariantMismatch(String),
    #[error("reduction did not terminate within the operation budget")]
    ReductionBudget,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported coweight {0} for this operation")]
    UnsupportedMu(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("a formula produced a negative power of q ({0})")]
    NegativeDegree(i64),
    #[error("enumeration budget exceeded: {0} representatives (use --force)")]
    Budget(u128),
}
