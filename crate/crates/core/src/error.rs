use thiserror::Error;

/// Errors produced by the analysis toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("node {node} out of range for a network with {node_count} nodes")]
    InvalidNode { node: usize, node_count: usize },

    #[error("network is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("graph is not simple: {0}")]
    NotSimple(String),

    #[error("topology generation failed: {0}")]
    Generation(String),

    #[error("routing model or centrality was built for a different network")]
    ModelMismatch,

    #[error("operation not supported: {0}")]
    Unsupported(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("experiment failed: {0}")]
    Experiment(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
