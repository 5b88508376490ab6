//! Exact and near-duplicate fragment detection for documentation text.
//!
//! The pipeline has three stages:
//!
//! 1. [`ingest`] turns raw bytes into a [`Document`] with 1-based symbol
//!    coordinates and a token stream.
//! 2. [`detect`] finds maximal repeated token sequences with a suffix array
//!    and reports them as [`ExactGroup`]s.
//! 3. [`merge`] glues nearby exact groups into near-duplicate groups with any
//!    number of extension points, using an [`IntervalTree`] over extended
//!    intervals to find neighbours.
//!
//! [`stats`] computes the arity histogram and duplicate coverage of a result.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod detect;
pub mod ingest;
pub mod interval;
pub mod merge;
pub mod model;
pub mod stats;
pub mod suffix;

pub use detect::{detect_exact_groups, DetectorConfig};
pub use ingest::{load_document, tokenize, DocId, Document, IngestError, IngestOptions, SeparatorSet, Token};
pub use interval::{ExtendedInterval, IntervalTree, Owner};
pub use merge::{construct_near_duplicate_groups, GroupId, MergeState};
pub use model::{
    before, dist_fragments, dist_groups, dist_vgroups, is_near_duplicate, is_variational, length_group,
    length_vgroup, ExactGroup, Gap, ModelError, NearDuplicateGroup, TextFragment, Threshold, VariationalGroup,
};
pub use stats::{compute_coverage, compute_histogram, Histogram};
pub use suffix::{build_suffix_index, SuffixIndex};
