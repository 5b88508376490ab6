use std::fs;
use std::path::{Path, PathBuf};

use docdup_core::{
    construct_near_duplicate_groups, detect_exact_groups, load_document, DetectorConfig, DocId, Document,
    IngestOptions, NearDuplicateGroup, Threshold, VariationalGroup,
};
use rayon::prelude::*;

use crate::error::DocdupError;
use crate::report::Report;

/// Environment variable capping how many documents are processed at once.
pub const THREADS_ENV: &str = "DOCDUP_THREADS";

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PipelineConfig {
    pub ingest: IngestOptions,
    pub detector: DetectorConfig,
    pub threshold: Threshold,
}

/// Output of detection and merging on one document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Analysis {
    /// Number of exact groups found before merging.
    pub exact_groups: usize,
    /// Surviving groups in document order.
    pub groups: Vec<VariationalGroup>,
}

pub fn load_path(path: &Path, id: DocId, options: &IngestOptions) -> Result<Document, DocdupError> {
    let bytes = fs::read(path).map_err(|source| DocdupError::Read { path: path.to_owned(), source })?;
    let doc = load_document(&bytes, options).map_err(|source| DocdupError::Decode { path: path.to_owned(), source })?;
    Ok(doc.with_id(id).with_name(path.display().to_string()))
}

/// Exact detection followed by near-duplicate construction, with a final
/// check that every multi-part group satisfies the near-duplicate inequality
/// and that no occurrence was lost or invented.
pub fn analyze(doc: &Document, config: &PipelineConfig) -> Result<Analysis, DocdupError> {
    let exact = detect_exact_groups(doc, config.detector);
    let exact_groups = exact.len();
    let fragments_in: usize = exact.iter().map(|g| g.cardinality()).sum();
    let groups = construct_near_duplicate_groups(exact, config.threshold);

    let invariant = |detail: String| DocdupError::Invariant { document: doc.name().to_owned(), detail };
    let fragments_out: usize = groups.iter().flat_map(|g| g.parts()).map(|p| p.cardinality()).sum();
    if fragments_in != fragments_out {
        return Err(invariant(format!("{fragments_in} occurrences in, {fragments_out} out")));
    }
    for group in groups.iter().filter(|g| g.extension_points() > 0) {
        if let Err(e) = NearDuplicateGroup::new(group.clone(), config.threshold) {
            return Err(invariant(format!("group at {}: {e}", group.first_begin())));
        }
    }
    Ok(Analysis { exact_groups, groups })
}

/// Thread count from the environment, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    let raw = std::env::var(THREADS_ENV).ok()?;
    match raw.trim().parse::<usize>() {
        Ok(n) if n > 0 => Some(n),
        _ => {
            log::warn!("ignoring {THREADS_ENV}={raw:?}: expected a positive integer");
            None
        }
    }
}

/// Analyze every path, at most `threads` documents at a time, and return
/// the outcomes in input order.
pub fn run(paths: &[PathBuf], config: &PipelineConfig, threads: Option<usize>) -> Vec<Result<(Document, Report), DocdupError>> {
    let work = || {
        paths
            .par_iter()
            .enumerate()
            .map(|(i, path)| {
                let doc = load_path(path, DocId(i as u32), &config.ingest)?;
                let analysis = analyze(&doc, config)?;
                let report = Report::build(&doc, config, &analysis);
                Ok((doc, report))
            })
            .collect()
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    match builder.build() {
        Ok(pool) => pool.install(work),
        Err(e) => {
            log::warn!("could not start a thread pool ({e}); running on the global pool");
            work()
        }
    }
}
