use thiserror::Error;

/// Errors surfaced by simulator components.
///
/// Invalid-parameter conditions are caught at construction time so the hot
/// paths can assume validated inputs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("operation requires T = 0 (hard-core) dynamics, got T = {0}")]
    RequiresZeroTemperature(f64),

    #[error("series too short: need at least {need} samples, got {got}")]
    SeriesTooShort { need: usize, got: usize },

    #[error(
        "free space too small: rejection sampling exhausted {budget} proposals without a hit"
    )]
    FreeSpaceExhausted { budget: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
