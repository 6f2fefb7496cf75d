use thiserror::Error;

use crate::grammar::Violation;
use crate::tree::{NodeAddress, Symbol};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("not an auxiliary tree (no foot node)")]
    NotAuxiliaryTree,
    #[error("not an initial tree (has a foot node)")]
    NotInitialTree,
    #[error("label mismatch: site is {site}, tree root is {root}")]
    LabelMismatch { site: Symbol, root: Symbol },
    #[error("illegal site at {address}: {reason}")]
    IllegalSite { address: NodeAddress, reason: &'static str },
    #[error("no node at address {0}")]
    BadAddress(NodeAddress),
    #[error("invalid grammar: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidGrammar(Vec<Violation>),
    #[error("label {0} has no image under the projection")]
    UnmappedLabel(Symbol),
    #[error("symbol {0} is not in the automaton alphabet")]
    UnknownSymbol(Symbol),
    #[error("token {0} is not a terminal of the grammar")]
    UnknownToken(String),
    #[error("grammar is not in regular form")]
    NotRegularForm,
    #[error("automaton construction exceeded the state cap of {cap}")]
    StateExplosion { cap: usize },
    #[error("walk is not connected: edge {position} does not start where the previous edge ends")]
    NotAWalk { position: usize },
    #[error("edge {0} is not in the spine graph")]
    UnknownEdge(usize),
    #[error("invalid CFG: {0}")]
    InvalidCfg(String),
    #[error("CFG cannot be lexicalized: {0}")]
    NotLexicalizable(String),
    #[error("substitution closure does not terminate: {0}")]
    NonterminationGuard(String),
    #[error("extension did not reach regular form within {0} passes")]
    ExtensionDiverged(usize),
    #[error("lexicalizer output is not in regular form")]
    ConstructionNotRegular,
}
