use crate::game::{ActionId, InfoSetKey};
use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A history contains an action that is not legal at the point it appears.
    #[error("invalid history: action {action:?} at depth {depth} is not legal there")]
    InvalidHistory { depth: usize, action: ActionId },

    /// A game constructor was given parameters outside its domain.
    #[error("invalid game parameters: {0}")]
    InvalidParams(String),

    /// A strategy or metric was applied to a game it does not belong to.
    #[error("game mismatch: {0}")]
    GameMismatch(String),

    /// An opponent model is missing an information set it must cover.
    #[error("fixed strategy is missing information set {0}")]
    IncompleteModel(InfoSetKey),

    /// A probability vector failed validation.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// An exhaustive enumeration would exceed the configured budget.
    #[error("enumeration budget exceeded: {0}")]
    SizeLimit(String),

    /// A strategy file could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
