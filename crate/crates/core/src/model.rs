//! Fragments, exact groups, variational groups and the near-duplicate test.
//!
//! Coordinates are 1-based closed intervals. All arithmetic is on integers;
//! the threshold is an exact rational and comparisons are cross-multiplied.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_rational::Ratio;
use thiserror::Error;

use crate::ingest::DocId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("fragments belong to different documents ({0} and {1})")]
    CrossDocument(DocId, DocId),
    #[error("invalid interval [{begin}, {end}]")]
    InvalidInterval { begin: usize, end: usize },
    #[error("interval [{begin}, {end}] exceeds document length {length}")]
    OutOfBounds { begin: usize, end: usize, length: usize },
    #[error("an exact group needs at least two occurrences, got {0}")]
    TooFewOccurrences(usize),
    #[error("occurrences [{0}, {1}] and [{2}, {3}] overlap")]
    OverlappingOccurrences(usize, usize, usize, usize),
    #[error("group cardinalities differ ({left} vs {right})")]
    CardinalityMismatch { left: usize, right: usize },
    #[error("a variational group needs at least one part")]
    EmptyVariationalGroup,
    #[error("parts do not occur in consistent document order")]
    NotVariational,
    #[error("gap total exceeds the threshold for tuple {tuple}")]
    NotNearDuplicate { tuple: usize },
    #[error("invalid threshold {0:?}; expected p/q with q > 0")]
    InvalidThreshold(String),
}

/// A closed interval `[begin, end]` of a document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TextFragment {
    doc: DocId,
    begin: usize,
    end: usize,
}

impl TextFragment {
    pub fn new(doc: DocId, begin: usize, end: usize) -> Result<Self, ModelError> {
        if begin == 0 || end < begin {
            return Err(ModelError::InvalidInterval { begin, end });
        }
        Ok(TextFragment { doc, begin, end })
    }

    pub fn doc(&self) -> DocId {
        self.doc
    }

    pub fn begin(&self) -> usize {
        self.begin
    }

    pub fn end(&self) -> usize {
        self.end
    }

    /// `|g| = e - b + 1`.
    pub fn len(&self) -> usize {
        self.end - self.begin + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `e¹ < b²`, without the document check.
    #[inline]
    pub fn precedes(&self, other: &TextFragment) -> bool {
        self.end < other.begin
    }

    #[inline]
    pub fn intersects(&self, other: &TextFragment) -> bool {
        self.begin <= other.end && other.begin <= self.end
    }

    /// Fragment distance, without the document check. Adjacent fragments are
    /// at distance 2.
    #[inline]
    pub fn distance(&self, other: &TextFragment) -> usize {
        if self.precedes(other) {
            other.begin - self.end + 1
        } else if other.precedes(self) {
            self.begin - other.end + 1
        } else {
            0
        }
    }

    fn same_doc(&self, other: &TextFragment) -> Result<(), ModelError> {
        if self.doc == other.doc {
            Ok(())
        } else {
            Err(ModelError::CrossDocument(self.doc, other.doc))
        }
    }
}

impl fmt::Display for TextFragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.begin, self.end)
    }
}

pub fn before(first: &TextFragment, second: &TextFragment) -> Result<bool, ModelError> {
    first.same_doc(second)?;
    Ok(first.precedes(second))
}

pub fn dist_fragments(first: &TextFragment, second: &TextFragment) -> Result<usize, ModelError> {
    first.same_doc(second)?;
    Ok(first.distance(second))
}

/// Pairwise-disjoint occurrences of one repeated string, sorted by position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactGroup {
    text: String,
    occurrences: Vec<TextFragment>,
}

impl ExactGroup {
    /// Sorts the occurrences and checks they are disjoint, from one document,
    /// and at least two.
    pub fn new(text: impl Into<String>, mut occurrences: Vec<TextFragment>) -> Result<Self, ModelError> {
        if occurrences.len() < 2 {
            return Err(ModelError::TooFewOccurrences(occurrences.len()));
        }
        occurrences.sort_unstable();
        for pair in occurrences.windows(2) {
            pair[0].same_doc(&pair[1])?;
            if !pair[0].precedes(&pair[1]) {
                return Err(ModelError::OverlappingOccurrences(pair[0].begin, pair[0].end, pair[1].begin, pair[1].end));
            }
        }
        Ok(ExactGroup { text: text.into(), occurrences })
    }

    /// The shared string (tokens joined by single spaces).
    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn occurrences(&self) -> &[TextFragment] {
        &self.occurrences
    }

    /// `#G`.
    pub fn cardinality(&self) -> usize {
        self.occurrences.len()
    }

    pub fn doc(&self) -> DocId {
        self.occurrences[0].doc
    }

    /// Sum of occurrence lengths.
    pub fn length(&self) -> usize {
        self.occurrences.iter().map(TextFragment::len).sum()
    }
}

pub fn dist_groups(first: &ExactGroup, second: &ExactGroup) -> Result<usize, ModelError> {
    if first.cardinality() != second.cardinality() {
        return Err(ModelError::CardinalityMismatch { left: first.cardinality(), right: second.cardinality() });
    }
    if first.doc() != second.doc() {
        return Err(ModelError::CrossDocument(first.doc(), second.doc()));
    }
    Ok(pairwise_distance(first, second))
}

fn pairwise_distance(first: &ExactGroup, second: &ExactGroup) -> usize {
    first.occurrences.iter().zip(&second.occurrences).map(|(a, b)| a.distance(b)).max().unwrap_or(0)
}

pub fn length_group(group: &ExactGroup) -> usize {
    group.length()
}

/// Exact groups of equal cardinality whose occurrences interleave in a
/// consistent order: `g_1^1 .. g_N^1 .. g_1^2 .. g_N^2 ..`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariationalGroup {
    parts: Vec<ExactGroup>,
}

impl VariationalGroup {
    pub fn new(parts: Vec<ExactGroup>) -> Result<Self, ModelError> {
        if parts.is_empty() {
            return Err(ModelError::EmptyVariationalGroup);
        }
        if let Some(mismatch) = parts.iter().find(|p| p.cardinality() != parts[0].cardinality()) {
            return Err(ModelError::CardinalityMismatch { left: parts[0].cardinality(), right: mismatch.cardinality() });
        }
        if !is_variational(&parts) {
            return Err(ModelError::NotVariational);
        }
        Ok(VariationalGroup { parts })
    }

    /// An exact group seen as a one-part variational group.
    pub fn from_exact(group: ExactGroup) -> Self {
        VariationalGroup { parts: alloc::vec![group] }
    }

    /// `⟨self, other⟩`, if that is a variational group.
    pub fn concat(&self, other: &VariationalGroup) -> Result<VariationalGroup, ModelError> {
        let mut parts = Vec::with_capacity(self.parts.len() + other.parts.len());
        parts.extend_from_slice(&self.parts);
        parts.extend_from_slice(&other.parts);
        VariationalGroup::new(parts)
    }

    pub fn parts(&self) -> &[ExactGroup] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<ExactGroup> {
        self.parts
    }

    /// Number of tuples, `#G_1`.
    pub fn cardinality(&self) -> usize {
        self.parts[0].cardinality()
    }

    /// Number of extension points, `N - 1`.
    pub fn extension_points(&self) -> usize {
        self.parts.len() - 1
    }

    pub fn doc(&self) -> DocId {
        self.parts[0].doc()
    }

    /// The fragments `g_1^k .. g_N^k` of tuple `k` (0-based).
    pub fn tuple(&self, k: usize) -> impl ExactSizeIterator<Item = &TextFragment> + '_ {
        self.parts.iter().map(move |p| &p.occurrences[k])
    }

    /// `[b_1^k, e_N^k]`.
    pub fn hull(&self, k: usize) -> (usize, usize) {
        let first = &self.parts[0].occurrences[k];
        let last = &self.parts[self.parts.len() - 1].occurrences[k];
        (first.begin, last.end)
    }

    pub fn first_begin(&self) -> usize {
        self.parts[0].occurrences[0].begin
    }

    /// `(Σ dist(g_i^k, g_{i+1}^k), Σ |g_i^k|)` for tuple `k`.
    pub fn tuple_totals(&self, k: usize) -> (usize, usize) {
        let mut gaps = 0;
        let mut fixed = 0;
        let mut prev: Option<&TextFragment> = None;
        for g in self.tuple(k) {
            fixed += g.len();
            if let Some(p) = prev {
                gaps += p.distance(g);
            }
            prev = Some(g);
        }
        (gaps, fixed)
    }

    pub fn length(&self) -> usize {
        self.parts.iter().map(ExactGroup::length).sum()
    }

    /// The `N - 1` gaps between consecutive parts of tuple `k`.
    pub fn gaps(&self, k: usize) -> Vec<Gap> {
        self.parts.windows(2).map(|w| Gap { begin: w[0].occurrences[k].end + 1, end: w[1].occurrences[k].begin - 1 }).collect()
    }
}

impl From<ExactGroup> for VariationalGroup {
    fn from(group: ExactGroup) -> Self {
        VariationalGroup::from_exact(group)
    }
}

pub fn dist_vgroups(first: &VariationalGroup, second: &VariationalGroup) -> Result<usize, ModelError> {
    if first.cardinality() != second.cardinality() {
        return Err(ModelError::CardinalityMismatch { left: first.cardinality(), right: second.cardinality() });
    }
    let mut max = 0;
    for a in &first.parts {
        for b in &second.parts {
            max = max.max(dist_groups(a, b)?);
        }
    }
    Ok(max)
}

pub fn length_vgroup(group: &VariationalGroup) -> usize {
    group.length()
}

/// Equal cardinalities, and within and across tuples every fragment ends
/// before the next one begins.
pub fn is_variational(parts: &[ExactGroup]) -> bool {
    let Some(first) = parts.first() else {
        return false;
    };
    let m = first.cardinality();
    if parts.iter().any(|p| p.cardinality() != m || p.doc() != first.doc()) {
        return false;
    }
    let mut prev: Option<&TextFragment> = None;
    for k in 0..m {
        for part in parts {
            let g = &part.occurrences[k];
            if prev.is_some_and(|p| !p.precedes(g)) {
                return false;
            }
            prev = Some(g);
        }
    }
    true
}

/// Checks `Σ dist ≤ τ · Σ |g|` for every tuple.
pub fn is_near_duplicate(group: &VariationalGroup, threshold: Threshold) -> bool {
    first_violation(group, threshold).is_none()
}

fn first_violation(group: &VariationalGroup, threshold: Threshold) -> Option<usize> {
    (0..group.cardinality()).find(|&k| {
        let (gaps, fixed) = group.tuple_totals(k);
        !threshold.admits(gaps, fixed)
    })
}

/// Share of variable text allowed relative to the fixed text, as an exact
/// rational. Defaults to 3/20.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Threshold(Ratio<u64>);

impl Threshold {
    pub fn new(numer: u64, denom: u64) -> Result<Self, ModelError> {
        if denom == 0 {
            return Err(ModelError::InvalidThreshold(alloc::format!("{numer}/{denom}")));
        }
        Ok(Threshold(Ratio::new(numer, denom)))
    }

    /// Numerator in lowest terms.
    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    /// Denominator in lowest terms.
    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    /// `gaps ≤ τ · fixed`.
    #[inline]
    pub fn admits(&self, gaps: usize, fixed: usize) -> bool {
        self.denom() as u128 * gaps as u128 <= self.numer() as u128 * fixed as u128
    }

    /// `q · (τ · fixed - gaps)` where `τ = p/q`: the slack in units of `1/q`.
    #[inline]
    pub fn scaled_slack(&self, gaps: usize, fixed: usize) -> i64 {
        (self.numer() as i128 * fixed as i128 - self.denom() as i128 * gaps as i128) as i64
    }
}

impl Default for Threshold {
    fn default() -> Self {
        Threshold(Ratio::new_raw(3, 20))
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for Threshold {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let invalid = || ModelError::InvalidThreshold(s.into());
        let (p, q) = s.trim().split_once('/').ok_or_else(invalid)?;
        let p = p.trim().parse::<u64>().map_err(|_| invalid())?;
        let q = q.trim().parse::<u64>().map_err(|_| invalid())?;
        Threshold::new(p, q).map_err(|_| invalid())
    }
}

/// The text between two consecutive parts of a tuple, `[e_i^k + 1, b_{i+1}^k - 1]`.
/// Empty when the parts are adjacent (`end + 1 == begin`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gap {
    pub begin: usize,
    pub end: usize,
}

impl Gap {
    pub fn len(&self) -> usize {
        (self.end + 1).saturating_sub(self.begin)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A variational group known to satisfy the near-duplicate inequality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NearDuplicateGroup {
    group: VariationalGroup,
    threshold: Threshold,
}

impl NearDuplicateGroup {
    pub fn new(group: VariationalGroup, threshold: Threshold) -> Result<Self, ModelError> {
        match first_violation(&group, threshold) {
            Some(tuple) => Err(ModelError::NotNearDuplicate { tuple }),
            None => Ok(NearDuplicateGroup { group, threshold }),
        }
    }

    pub fn group(&self) -> &VariationalGroup {
        &self.group
    }

    pub fn into_group(self) -> VariationalGroup {
        self.group
    }

    pub fn threshold(&self) -> Threshold {
        self.threshold
    }

    /// Extension point values: one row per tuple, `N - 1` gaps per row.
    pub fn extension_values(&self) -> Vec<Vec<Gap>> {
        (0..self.group.cardinality()).map(|k| self.group.gaps(k)).collect()
    }
}
