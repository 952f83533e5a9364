use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("generator index x{index} out of range for rank {rank}")]
    IndexOutOfRank { index: usize, rank: usize },

    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),

    #[error("group mismatch: N({0},{1}) vs N({2},{3})")]
    GroupMismatch(usize, usize, usize, usize),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("not an automorphism: abelianization has determinant {0}")]
    NotAutomorphism(String),

    #[error("palindromicity is undecided for step {0} (decision procedure covers step <= 3)")]
    Undecided(usize),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}
