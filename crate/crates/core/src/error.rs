use thiserror::Error;

/// Errors raised by the library. Verdict-style outcomes (a violated clause,
/// an invalid proof line, an `unknown` evaluation) are reported through
/// result types, not through this enum.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("undeclared symbol `{name}` at byte {pos}")]
    UndeclaredSymbol { name: String, pos: usize },

    #[error("arity mismatch for `{name}`: expected {expected}, found {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("invalid signature: {0}")]
    Signature(String),

    #[error("not a code: {0}")]
    NotACode(String),

    #[error("malformed JSON AST: {0}")]
    Json(String),

    #[error("schema precondition failed: {0}")]
    Schema(String),

    #[error("evaluation error: {0}")]
    Eval(String),

    #[error("model error: {0}")]
    Model(String),

    #[error("size guard: {0}")]
    SizeGuard(String),

    #[error("forcing error: {0}")]
    Forcing(String),

    #[error("malformed trace: {0}")]
    Trace(String),
}

pub type Result<T> = std::result::Result<T, Error>;
