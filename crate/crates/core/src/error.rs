use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("node `{node}` has no interface `{interface}`")]
    UnknownInterface { node: String, interface: String },

    #[error("malformed path at hop {hop}: {reason}")]
    MalformedPath { hop: usize, reason: String },

    #[error("path syntax error at column {column}: {reason}")]
    PathSyntax { column: usize, reason: String },

    #[error("malformed path view at hop {hop}: {reason}")]
    MalformedView { hop: usize, reason: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid resource amount: {0}")]
    InvalidAmount(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("enumeration bound {bound} is too small: valid paths continue past it")]
    IncompleteEnumeration { bound: usize },

    #[error("invalid configuration field `{field}`: {reason}")]
    InvalidConfig { field: &'static str, reason: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
