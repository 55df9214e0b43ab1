//! Error type shared across the engine.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {position}: expected {expected}")]
    Syntax { position: usize, expected: String },

    #[error("unknown proposition symbol `{0}`")]
    UnknownSymbol(String),

    #[error("unknown agent `{0}`")]
    UnknownAgent(String),

    #[error("invalid agent name `{0}`: must be lowercase alphanumeric/underscore")]
    InvalidAgentName(String),

    #[error("modal formula not allowed here: `{0}`")]
    ModalFormulaNotAllowed(String),

    #[error("not an agent formula: `{0}` has an atom outside every belief operator")]
    NotAgentFormula(String),

    #[error("unsupported revision formula: {0}")]
    UnsupportedRevisionFormula(String),

    #[error("cannot contract `{0}`: it is entailed by the laws")]
    ContractionImpossible(String),

    #[error("no law-consistent model for `{0}`")]
    NoLawConsistentModel(String),

    #[error("candidate pool is empty")]
    EmptyPool,

    #[error("scenario parse error: {0}")]
    ScenarioParse(String),

    #[error("laws are jointly inconsistent")]
    InconsistentLaws,

    #[error("nested model path `{0}` exceeds the scenario depth bound")]
    DepthViolation(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
