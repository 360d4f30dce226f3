use thiserror::Error;

use crate::game::PairWitness;

/// Errors produced by the core library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("player {player} is out of range 1..={players}")]
    InvalidPlayer { player: usize, players: usize },

    #[error("edge e{} is out of range (hypergraph has {edges} edges)", .edge + 1)]
    InvalidEdge { edge: usize, edges: usize },

    #[error("hyperedge has an empty {side} set")]
    EmptyEdgeSide { side: &'static str },

    #[error("coalition mask {mask:#x} is not valid for {players} players")]
    InvalidCoalition { mask: u64, players: usize },

    #[error("{what} supports at most {limit} players, got {players}")]
    LimitExceeded {
        what: &'static str,
        players: usize,
        limit: usize,
    },

    #[error("no path from player {from} to player {to}")]
    NoPath { from: usize, to: usize },

    #[error("table game needs {expected} entries, got {actual}")]
    TableLength { expected: usize, actual: usize },

    #[error("worth of the empty coalition must be 0, got {0}")]
    NonZeroEmptyWorth(String),

    #[error("game is not convex: {0}")]
    NotConvex(Box<PairWitness>),

    #[error("player counts disagree: {left} vs {right}")]
    PlayerCountMismatch { left: usize, right: usize },

    #[error("sample count must be at least 1")]
    ZeroSamples,

    #[error("{0}")]
    InvalidParameter(String),

    #[error("{path}: {message}")]
    Parse { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
