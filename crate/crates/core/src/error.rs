use thiserror::Error;

use crate::point::DualSystem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    /// The limit functional was asked to act on a sequence without a limit.
    #[error("outside model domain: {0}")]
    OutsideModelDomain(String),

    #[error("dual system mismatch: {left:?} vs {right:?}")]
    SystemMismatch { left: DualSystem, right: DualSystem },

    #[error("point not representable in truncation N = {truncation}: {reason}")]
    OutsideTruncation { truncation: usize, reason: String },

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("no solution: {0}")]
    Infeasible(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown check {0:?}")]
    UnknownCheck(String),
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
