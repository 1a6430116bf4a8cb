use thiserror::Error;

/// Crate-wide error type.
///
/// The variants follow one failure taxonomy across every module: `Shape` and
/// `Range` for mismatched dimensions and out-of-bounds indices, `Config` for
/// invalid settings caught before any work starts, `Contract` for violated
/// call-site preconditions (wrong dtype, non-mirrored samples, ...), `State`
/// for out-of-order use such as sorting a batch that was never evaluated,
/// `Step` for failures surfaced inside an update, and `Validation` for bad
/// data discovered during a pre-execution scan (e.g. an unknown opcode).
#[derive(Debug, Error)]
pub enum Error {
    #[error("range error: {0}")]
    Range(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("state error: {0}")]
    State(String),
    #[error("contract error: {0}")]
    Contract(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("step error: {0}")]
    Step(String),
    #[error("validation error: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
