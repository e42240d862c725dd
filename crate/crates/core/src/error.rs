use thiserror::Error;

use crate::graph::Vertex;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{what} exceeds cap {cap}; raise it with {hint}")]
    Cap {
        what: String,
        cap: u64,
        hint: String,
    },
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn cap(what: impl Into<String>, cap: u64, hint: impl Into<String>) -> Self {
        Error::Cap {
            what: what.into(),
            cap,
            hint: hint.into(),
        }
    }

    /// Resource-type errors: caps, exhausted searches, unattainable desk-scale hypotheses.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Cap { .. } | Error::Resource(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
