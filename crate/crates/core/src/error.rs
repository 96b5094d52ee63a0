use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),
    #[error("exact evaluation needs rational parameters: {0}")]
    UnsupportedExactParameter(String),
    #[error("evaluation failed: {0}")]
    Evaluation(String),
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
    #[error("numerical consistency check failed: {0}")]
    NumericalConsistency(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unknown row `{0}`")]
    UnknownRow(String),
    #[error("unknown table {0} (tables are numbered 1..7)")]
    UnknownTable(u32),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("exponent {exp} at position {pos} is outside 0..=12")]
    ExponentRange { pos: usize, exp: String },
    #[error("registry data invalid: {0}")]
    Registry(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
