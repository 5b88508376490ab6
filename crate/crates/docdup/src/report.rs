//! The report data model and its JSON schema.
//!
//! Rationals are serialized as `"p/q"` strings and percentages as fixed
//! two-decimal strings, so the JSON is byte-stable across platforms.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use docdup_core::{
    compute_coverage, compute_histogram, is_near_duplicate, Document, ExactGroup, Threshold, VariationalGroup,
};

use crate::pipeline::{Analysis, PipelineConfig};

/// Name of the schema; also the top-level key carrying document metadata.
pub const SCHEMA: &str = "docdup_report_v1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub docdup_report_v1: DocumentInfo,
    pub config: ConfigEcho,
    pub groups: Vec<ReportGroup>,
    pub histogram: Vec<HistogramRow>,
    /// Share of symbols inside some duplicate fragment, as `"p/q"`.
    pub coverage: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentInfo {
    pub document: String,
    pub symbols: usize,
    pub tokens: usize,
    pub exact_groups_detected: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub min_tokens: usize,
    pub min_group: usize,
    pub threshold: String,
    /// Punctuation separators; whitespace always separates.
    pub separators: String,
    pub strip_markup: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistogramRow {
    pub extension_points: usize,
    pub groups: usize,
    pub percent: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportGroup {
    /// Hash of the group's coordinates; stable across runs.
    pub id: String,
    pub extension_points: usize,
    pub tuples: usize,
    pub parts: Vec<PartInfo>,
    pub occurrences: Vec<TupleInfo>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartInfo {
    /// Shared token sequence, tokens joined by single spaces.
    pub text: String,
    /// Sum of occurrence lengths in symbols.
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleInfo {
    pub begin: usize,
    pub end: usize,
    pub fragments: Vec<Span>,
    pub extension_values: Vec<Span>,
}

/// A quoted piece of the source. Empty extension values have `end = begin - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub begin: usize,
    pub end: usize,
    pub text: String,
}

impl Report {
    pub fn build(doc: &Document, config: &PipelineConfig, analysis: &Analysis) -> Report {
        let groups = &analysis.groups;
        let coverage = compute_coverage(doc.len(), groups);
        let total = groups.len();
        let histogram = compute_histogram(groups)
            .into_iter()
            .map(|(extension_points, count)| HistogramRow { extension_points, groups: count, percent: percent(count, total) })
            .collect();
        Report {
            docdup_report_v1: DocumentInfo {
                document: doc.name().to_owned(),
                symbols: doc.len(),
                tokens: doc.tokens().len(),
                exact_groups_detected: analysis.exact_groups,
            },
            config: ConfigEcho {
                min_tokens: config.detector.min_tokens,
                min_group: config.detector.min_group_size,
                threshold: config.threshold.to_string(),
                separators: config.ingest.separators.punctuation().to_owned(),
                strip_markup: config.ingest.strip_markup,
            },
            groups: groups.iter().map(|g| report_group(doc, g)).collect(),
            histogram,
            coverage: format!("{}/{}", coverage.numer(), coverage.denom()),
        }
    }

    /// Rebuild every group from the report's coordinates and check it
    /// against the source: quoted texts must match, each group must be a
    /// valid variational group, multi-part groups must satisfy the
    /// near-duplicate inequality, and the coverage must recompute.
    pub fn verify(&self, doc: &Document) -> Result<(), String> {
        let threshold: Threshold = self.config.threshold.parse().map_err(|e| format!("{e}"))?;
        let mut rebuilt = Vec::with_capacity(self.groups.len());
        for group in &self.groups {
            let vg = rebuild_group(doc, group)?;
            if vg.extension_points() != group.extension_points || vg.cardinality() != group.tuples {
                return Err(format!("group {}: shape does not match", group.id));
            }
            if vg.extension_points() > 0 && !is_near_duplicate(&vg, threshold) {
                return Err(format!("group {}: gap total exceeds {threshold}", group.id));
            }
            if group_id(&vg) != group.id {
                return Err(format!("group {}: id does not match its coordinates", group.id));
            }
            rebuilt.push(vg);
        }
        let coverage = compute_coverage(doc.len(), &rebuilt);
        if format!("{}/{}", coverage.numer(), coverage.denom()) != self.coverage {
            return Err(format!("coverage {} does not recompute", self.coverage));
        }
        Ok(())
    }
}

fn rebuild_group(doc: &Document, group: &ReportGroup) -> Result<VariationalGroup, String> {
    let err = |what: String| format!("group {}: {what}", group.id);
    let check = |span: &Span| {
        let text = doc.slice(span.begin, span.end);
        if text == span.text {
            Ok(())
        } else {
            Err(err(format!("[{}, {}] quotes {:?} but the source has {:?}", span.begin, span.end, span.text, text)))
        }
    };
    let mut parts = Vec::with_capacity(group.parts.len());
    for (i, part) in group.parts.iter().enumerate() {
        let mut fragments = Vec::with_capacity(group.occurrences.len());
        for tuple in &group.occurrences {
            let span = tuple.fragments.get(i).ok_or_else(|| err(format!("tuple is missing part {i}")))?;
            check(span)?;
            fragments.push(doc.fragment(span.begin, span.end).map_err(|e| err(e.to_string()))?);
        }
        parts.push(ExactGroup::new(part.text.clone(), fragments).map_err(|e| err(e.to_string()))?);
    }
    for tuple in &group.occurrences {
        tuple.extension_values.iter().try_for_each(check)?;
    }
    VariationalGroup::new(parts).map_err(|e| err(e.to_string()))
}

fn report_group(doc: &Document, group: &VariationalGroup) -> ReportGroup {
    let span = |begin: usize, end: usize| Span { begin, end, text: doc.slice(begin, end) };
    let occurrences = (0..group.cardinality())
        .map(|k| {
            let (begin, end) = group.hull(k);
            TupleInfo {
                begin,
                end,
                fragments: group.tuple(k).map(|f| span(f.begin(), f.end())).collect(),
                extension_values: group.gaps(k).into_iter().map(|g| span(g.begin, g.end)).collect(),
            }
        })
        .collect();
    ReportGroup {
        id: group_id(group),
        extension_points: group.extension_points(),
        tuples: group.cardinality(),
        parts: group.parts().iter().map(|p| PartInfo { text: p.text().to_owned(), length: p.length() }).collect(),
        occurrences,
    }
}

/// First 8 bytes of SHA-256 over the group's coordinates, part by part.
pub fn group_id(group: &VariationalGroup) -> String {
    let mut hasher = Sha256::new();
    for part in group.parts() {
        for f in part.occurrences() {
            hasher.update(format!("{}-{},", f.begin(), f.end()).as_bytes());
        }
        hasher.update(b";");
    }
    hex::encode(&hasher.finalize()[..8])
}

/// `count / total` as a percentage with two decimals, rounded half up.
fn percent(count: usize, total: usize) -> String {
    if total == 0 {
        return "0.00".into();
    }
    let hundredths = (count as u128 * 10_000 * 2 + total as u128) / (2 * total as u128);
    format!("{}.{:02}", hundredths / 100, hundredths % 100)
}
