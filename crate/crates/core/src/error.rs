use thiserror::Error;

use crate::board::{StarEdge, StarVertex};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("graph is not regular (vertex {vertex} has degree {degree}, expected {expected})")]
    NotRegular {
        vertex: usize,
        degree: usize,
        expected: usize,
    },
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("rejection budget of {0} attempts exhausted")]
    BudgetExhausted(usize),
    #[error("invalid vertex id {0}")]
    InvalidVertex(usize),
    #[error("invalid leveling: {0}")]
    InvalidLeveling(String),
    #[error("index arithmetic overflow: {0}")]
    Overflow(String),
    #[error("edge {0} already claimed")]
    AlreadyClaimed(StarEdge),
    #[error("{0} and {1} do not span a board edge")]
    NotABoardEdge(StarVertex, StarVertex),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("B set of vertex {0} is not determined")]
    Undetermined(usize),
    #[error("no valid image for vertex {0} during extraction")]
    NoValidImage(usize),
    #[error("no unclaimed vertex left")]
    NoUnclaimedVertex,
    #[error("breaker policy returned claimed or unknown vertex {0}")]
    PolicyBug(usize),
    #[error("hyperedge of size {size} is below the required {required}")]
    HyperedgeTooSmall { size: usize, required: usize },
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("state space cap exceeded: {0} unclaimed vertices")]
    CapExceeded(usize),
    #[error("config error: {0}")]
    Config(String),
    #[error("transcript error: {0}")]
    Transcript(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("aborted by the player")]
    Aborted,
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
