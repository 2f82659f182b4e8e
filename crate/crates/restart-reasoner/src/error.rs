//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by parsing, validation, and the decision pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// The level file is not well-formed JSON.
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    /// The level file parsed but violates a level invariant.
    #[error("invalid level: {0}")]
    InvalidLevel(String),

    /// A trajectory was requested for a target at or left of the launch origin.
    #[error("target ({x}, {y}) is not strictly right of the launch origin")]
    TargetBehindOrigin { x: f64, y: f64 },

    /// Propagation was seeded with a force already below the floor.
    #[error("initial force {force} is below the propagation floor {floor}")]
    ForceBelowFloor { force: f64, floor: f64 },

    /// A shot was requested with no birds left in the queue.
    #[error("no birds remaining")]
    NoBirdsRemaining,

    /// Solvability was asked about a state with no pigs alive.
    #[error("no pigs alive; the level is already solved")]
    NoPigsAlive,

    /// No block can be reached from the sling in the current state.
    #[error("nothing reachable from the sling")]
    NothingReachable,

    /// A trial record without a prediction cannot be classified.
    #[error("trial record has no prediction; the trial never reached the last bird")]
    MissingPrediction,

    /// Configuration file problems (unknown keys, values out of range).
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
