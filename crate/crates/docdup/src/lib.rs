//! File handling, reports and the command-line driver for `docdup-core`.
//!
//! [`pipeline`] loads files and runs detection and merging, [`report`] turns
//! the result into a serializable [`Report`], and [`emit`] renders it as
//! JSON, plain text or HTML.

pub mod emit;
pub mod error;
pub mod pipeline;
pub mod report;

pub use emit::{emit, Format};
pub use error::DocdupError;
pub use pipeline::{analyze, load_path, run, Analysis, PipelineConfig};
pub use report::{Report, SCHEMA};
