use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("automaton has {0} live states; the pair-state HMM supports at most {1}")]
    TooManyStates(usize, usize),

    #[error("{path}:{line}: malformed record: {msg}")]
    MalformedRecord { path: PathBuf, line: usize, msg: String },

    #[error("{path}: corpus version {found} is not readable by version {expected}")]
    VersionMismatch {
        path: PathBuf,
        found: String,
        expected: String,
    },

    #[error("could not find {wanted} distinct automata after {attempts} attempts")]
    DistinctnessExhausted { wanted: usize, attempts: usize },

    #[error("oracle rejected prefix at instance {instance}, position {position}")]
    OracleReject { instance: u64, position: usize },

    #[error("non-finite training loss at epoch {epoch}, batch {batch}: {loss}")]
    NonFiniteLoss { epoch: usize, batch: usize, loss: f64 },

    #[error("state {0} has no live outgoing edge")]
    NoLiveEdges(u32),

    #[error("automaton has a self-loop at state {0}; the masked pair-state HMM cannot represent it")]
    SelfLoop(u32),

    #[error("malformed automaton: {0}")]
    MalformedDfa(String),

    #[error("malformed model file: {0}")]
    ModelFormat(String),

    #[error("empty training corpus")]
    EmptyCorpus,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
