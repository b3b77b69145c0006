use alloc::string::String;

use crate::action::Action;
use crate::state::Phase;
use crate::unit::{PlayerId, UnitId};

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid config: {field}: {reason}")]
    InvalidConfig { field: &'static str, reason: String },
    #[error("operation requires phase {expected:?}, game is in {actual:?}")]
    WrongPhase { expected: Phase, actual: Phase },
    #[error("unknown player {0}")]
    UnknownPlayer(PlayerId),
    #[error("unknown unit {0}")]
    UnknownUnit(UnitId),
    #[error("unit {0} is not a living playable unit")]
    NotPlayable(UnitId),
    #[error("illegal action {action} for unit {unit}")]
    IllegalAction { unit: UnitId, action: Action },
    #[error("turn for player {player} is incomplete: unit {unit} has no action")]
    MissingAction { player: PlayerId, unit: UnitId },
    #[error("turn for player {player} names unit {unit} it does not control")]
    ForeignUnit { player: PlayerId, unit: UnitId },
    #[error("no turn submitted for player {0}")]
    MissingTurn(PlayerId),
    #[error("invalid deployment: {0}")]
    InvalidDeployment(String),
    #[error("game is not finished")]
    NotFinished,
    #[error("{0}")]
    OutOfRange(String),
    #[error("all legal actions of unit {0} have zero weight")]
    ZeroWeights(UnitId),
    #[error("shape mismatch: expected {expected}, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },
    #[error("{0}")]
    InvalidArgument(String),
    #[error("non-finite loss at step {step}")]
    Diverged { step: usize },
    #[error("truncated game log: {0}")]
    TruncatedLog(String),
}
