use lepm_linalg::LinalgError;

use crate::model::BlockTag;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LepmError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("{block} block differs from its explicit form by {deviation:e} under every permutation")]
    BlockMismatch { block: BlockTag, deviation: f64 },
    #[error("quartic resolvent is degenerate (|p4| = {p4:e})")]
    QuarticBranchFailure { p4: f64 },
    #[error("steady-state denominator vanishes ({value:e})")]
    DenominatorVanishes { value: f64 },
    #[error("characteristic rate radicand is negative ({value:e})")]
    NegativeRadicand { value: f64 },
    #[error("no positive root at gamma = {gamma}")]
    NoRoot { gamma: f64 },
}

pub type Result<T> = std::result::Result<T, LepmError>;
