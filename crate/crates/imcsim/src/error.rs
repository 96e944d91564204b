//! Error type shared by every module in the crate.

use thiserror::Error;

/// Unified error for array, analog, decode, metrics, and file operations.
#[derive(Debug, Error)]
pub enum Error {
    /// Row or column address outside the array dimensions.
    #[error("address {addr} out of range (limit {limit})")]
    AddressOutOfRange { addr: usize, limit: usize },

    /// Operand word length disagrees with the array dimension it drives.
    #[error("word length {got} does not match expected length {expected}")]
    WordLengthMismatch { got: usize, expected: usize },

    /// A column was evaluated without a precharge since its last evaluation.
    #[error("column {col} evaluated without precharge")]
    NotPrecharged { col: usize },

    /// MAC count outside the range a table or operation supports.
    #[error("count {count} out of range (limit {limit})")]
    CountOutOfRange { count: usize, limit: usize },

    /// Discharge-model fit failed or missed the residual bound.
    #[error("discharge fit diverged: {0}")]
    FitDiverged(String),

    /// Fitted or rescaled ladder is not strictly decreasing in count.
    #[error("fitted ladder not strictly decreasing between counts {lo} and {hi}")]
    NonMonotoneFit { lo: usize, hi: usize },

    /// Model voltage requested before a fit was installed.
    #[error("discharge model evaluated before fitting")]
    ModelUnfitted,

    /// Input ladder violates strict monotonicity.
    #[error("ladder not strictly decreasing at index {index}")]
    NonMonotoneLadder { index: usize },

    /// Thermometer code has a 1 above a 0: not a valid zeros-prefix pattern.
    #[error("bubble in thermometer code {code}")]
    Bubble { code: String },

    /// Parameter set rejected by validation.
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    /// File could not be read, written, or parsed.
    #[error("{path}: {detail}")]
    FileFormat { path: String, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
