use thiserror::Error;

use crate::termgraph::{Agent, Kind, NodeRef};

/// Errors raised while building or querying term graphs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("dangling reference {0}")]
    DanglingReference(NodeRef),
    #[error("node {0} is unreachable from the root")]
    Unreachable(NodeRef),
    #[error("node {node} has a {found} label in a {expected} graph")]
    KindMismatch { node: NodeRef, expected: Kind, found: Kind },
    #[error("leaf {0} assigns payoffs to a different agent set")]
    AgentSetMismatch(NodeRef),
    #[error("leaf {0} has no payoffs")]
    EmptyPayoff(NodeRef),
    #[error("agent {0} does not occur in the leaf payoffs")]
    UnknownAgent(Agent),
    #[error("graph has no leaf, so its agent set is unknown")]
    NoLeaf,
    #[error("agent names must be non-empty")]
    EmptyAgentName,
    #[error("incomparable kinds: {0} and {1}")]
    IncomparableKinds(Kind, Kind),
    #[error("expected a {expected} graph, found a {found} graph")]
    WrongKind { expected: Kind, found: Kind },
}

/// Errors raised by the game-theoretic operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("inconsistent strategies: {0}")]
    InconsistentStrategies(String),
    #[error("profiles of different games")]
    DifferentGames,
    #[error("payoff undefined at root")]
    PayoffUndefined,
    #[error("BI requires finite profile")]
    CyclicProfile,
    #[error("not a 0,1-profile")]
    NotZeroOneProfile,
    #[error("invalid 0,1 word: {0}")]
    InvalidWord(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
