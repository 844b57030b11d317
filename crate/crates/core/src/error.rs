use thiserror::Error;

use crate::graph::NodeId;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),
    #[error("duplicate tweet id {0}")]
    DuplicateTweetId(String),
    #[error("malformed record at line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("syntax error at offset {offset}: {reason}")]
    PatternSyntax { offset: usize, reason: String },
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("empty background graph")]
    EmptyBackgroundGraph,
    #[error("unknown construction rule {0}")]
    UnknownRule(String),
    #[error("graph is empty")]
    EmptyGraph,
    #[error("graph is not connected")]
    Disconnected,
    #[error("empty value list")]
    EmptyValues,
    #[error("bin edges must be strictly ascending")]
    NonAscendingEdges,
    #[error("incompatible histograms")]
    IncompatibleHistograms,
    #[error("need at least two divergence records")]
    TooFewRecords,
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("{stage} stage failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Wrap an error with the pipeline stage it occurred in.
    pub fn in_stage(self, stage: &'static str) -> Error {
        match self {
            Error::Stage { .. } => self,
            other => Error::Stage {
                stage,
                source: Box::new(other),
            },
        }
    }

    /// Innermost non-stage error, for classifying exit codes.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
