use std::io;
use std::path::PathBuf;

use docdup_core::IngestError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DocdupError {
    #[error("{}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Decode { path: PathBuf, source: IngestError },
    #[error("{}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },
    #[error("unknown format {0:?} (expected json, text or html)")]
    UnknownFormat(String),
    #[error("internal invariant violated in {document}: {detail}")]
    Invariant { document: String, detail: String },
}

impl DocdupError {
    /// Process exit code for this error: 3 for invariant violations, 2 for
    /// everything caused by input or output.
    pub fn exit_code(&self) -> i32 {
        match self {
            DocdupError::Invariant { .. } => 3,
            _ => 2,
        }
    }
}
