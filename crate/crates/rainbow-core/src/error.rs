use thiserror::Error;

/// Errors raised by the library. Stage failures inside the embedding
/// pipeline are not errors; they are reported through `EmbedOutcome`.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid edge: endpoints coincide at vertex {0}")]
    InvalidEdge(usize),

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("colour {colour} out of range ({count} colours)")]
    ColourOutOfRange { colour: usize, count: usize },

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("parity error: {0}")]
    Parity(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("greedy completion stuck at vertex {vertex}")]
    CompletionStuck { vertex: usize },

    #[error("validation failed: {0}")]
    Violation(String),

    #[error("internal consistency violated: {0}")]
    Internal(String),

    #[error("schema error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Schema { line: Option<usize>, message: String },
}

impl Error {
    pub(crate) fn schema(message: impl Into<String>) -> Self {
        Error::Schema { line: None, message: message.into() }
    }

    pub(crate) fn schema_at(line: usize, message: impl Into<String>) -> Self {
        Error::Schema { line: Some(line), message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
