use thiserror::Error;

use crate::automata::LassoWord;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown atomic proposition '{0}'")]
    UnknownAtom(String),
    #[error("duplicate atomic proposition '{0}'")]
    DuplicateAtom(String),
    #[error("atomic proposition names must be non-empty")]
    EmptyAtomName,
    #[error("{count} atomic propositions exceed the explicit-alphabet limit of {max}")]
    TooManyAtoms { count: usize, max: usize },
    #[error("formula is not co-safety")]
    NotCoSafety,
    #[error("GF body must be co-safety")]
    NotGfCoSafety,
    #[error("unknown pattern family '{0}'")]
    UnknownFamily(String),
    #[error("{family}: {msg}")]
    PatternParams { family: &'static str, msg: String },
    #[error("HOA error at line {line}, column {col}: {msg}")]
    Hoa {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("state-based acceptance is not supported; re-export the automaton with transition-based acceptance")]
    StateBasedAcceptance,
    #[error("unsupported acceptance condition: {0}")]
    UnsupportedAcceptance(String),
    #[error("expected a {expected} automaton, got {found}")]
    WrongKind {
        expected: &'static str,
        found: &'static str,
    },
    #[error("automaton must be deterministic")]
    NotDeterministic,
    #[error("automaton must be complete")]
    NotComplete,
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("invalid MDP: {0}")]
    InvalidMdp(String),
    #[error("self-validation failed: {msg}")]
    Validation {
        msg: String,
        witness: Option<LassoWord>,
    },
    #[error(
        "value iteration did not converge after {iterations} iterations (residual {residual:e})"
    )]
    IterationCap { iterations: usize, residual: f64 },
    #[error("strategy undefined at product state {0}")]
    UndefinedStrategy(usize),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
