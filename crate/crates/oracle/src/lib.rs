//! Brute-force reference implementations for cross-checking `docdup-core`.
//!
//! Everything here works on raw `(begin, end)` coordinates and exhaustive
//! enumeration. Nothing calls into the detector, the interval tree or the
//! merger; the only things taken from the core crate are its input types.

use std::collections::BTreeMap;

use docdup_core::{Document, ExactGroup, Threshold, VariationalGroup};
use thiserror::Error;

pub mod gen;

pub const MAX_TOKENS: usize = 500;
pub const MAX_GROUPS: usize = 5;
pub const MAX_CARDINALITY: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{0} tokens exceeds the oracle cap of {MAX_TOKENS}")]
    TooManyTokens(usize),
    #[error("{0} groups exceeds the oracle cap of {MAX_GROUPS}")]
    TooManyGroups(usize),
    #[error("cardinality {0} exceeds the oracle cap of {MAX_CARDINALITY}")]
    CardinalityTooLarge(usize),
}

/// Occurrence spans of one exact group, sorted.
pub type Spans = Vec<(usize, usize)>;

/// A variational group as parts of raw spans.
pub type RawGroup = Vec<Spans>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OracleRepeat {
    pub tokens: Vec<String>,
    /// Token offsets of the kept (disjoint) occurrences.
    pub starts: Vec<usize>,
}

/// All maximal repeated n-grams, with occurrences thinned left to right.
///
/// An n-gram is maximal when not every occurrence shares the same preceding
/// token and not every occurrence shares the same following token (the text
/// boundaries count as unique neighbours). Sorted by first start, longest
/// first.
pub fn brute_force_repeats<S: AsRef<str>>(
    tokens: &[S],
    min_tokens: usize,
    min_group: usize,
) -> Result<Vec<OracleRepeat>, OracleError> {
    let n = tokens.len();
    if n > MAX_TOKENS {
        return Err(OracleError::TooManyTokens(n));
    }
    let tokens: Vec<&str> = tokens.iter().map(AsRef::as_ref).collect();
    let mut out = Vec::new();
    for len in min_tokens.max(1)..=n {
        let mut table: BTreeMap<&[&str], Vec<usize>> = BTreeMap::new();
        for start in 0..=n - len {
            table.entry(&tokens[start..start + len]).or_default().push(start);
        }
        for (gram, starts) in table {
            if starts.len() < 2 {
                continue;
            }
            let before = |s: usize| s.checked_sub(1).map(|i| tokens[i]);
            let after = |s: usize| tokens.get(s + len).copied();
            let same_before = uniform(&starts, before);
            let same_after = uniform(&starts, after);
            if same_before || same_after {
                continue;
            }
            let mut kept: Vec<usize> = Vec::new();
            for &s in &starts {
                if kept.last().is_none_or(|&k| s >= k + len) {
                    kept.push(s);
                }
            }
            if kept.len() >= min_group.max(2) {
                out.push(OracleRepeat { tokens: gram.iter().map(|t| t.to_string()).collect(), starts: kept });
            }
        }
    }
    out.sort_by(|a, b| a.starts[0].cmp(&b.starts[0]).then(b.tokens.len().cmp(&a.tokens.len())));
    Ok(out)
}

/// True when every start sees the same, existing neighbour.
fn uniform<'a>(starts: &[usize], ctx: impl Fn(usize) -> Option<&'a str>) -> bool {
    let first = ctx(starts[0]);
    first.is_some() && starts.iter().all(|&s| ctx(s) == first)
}

fn dist(a: (usize, usize), b: (usize, usize)) -> usize {
    if a.1 < b.0 {
        b.0 - a.1 + 1
    } else if b.1 < a.0 {
        a.0 - b.1 + 1
    } else {
        0
    }
}

/// Raw spans of a production group.
pub fn raw(group: &VariationalGroup) -> RawGroup {
    group.parts().iter().map(spans_of).collect()
}

pub fn spans_of(group: &ExactGroup) -> Spans {
    group.occurrences().iter().map(|f| (f.begin(), f.end())).collect()
}

/// Equal cardinalities and a strictly increasing walk
/// `g_1^1, .., g_N^1, g_1^2, .., g_N^m`.
pub fn is_variational_raw(parts: &[Spans]) -> bool {
    let Some(m) = parts.first().map(Vec::len) else {
        return false;
    };
    if parts.iter().any(|p| p.len() != m) {
        return false;
    }
    let walk: Vec<(usize, usize)> = (0..m).flat_map(|k| parts.iter().map(move |p| p[k])).collect();
    walk.windows(2).all(|w| w[0].1 < w[1].0) && walk.iter().all(|&(b, e)| b >= 1 && b <= e)
}

/// `q · Σ dist ≤ p · Σ |g|` for every tuple.
pub fn is_near_duplicate_raw(parts: &[Spans], threshold: Threshold) -> bool {
    let m = parts[0].len();
    (0..m).all(|k| {
        let fixed: u128 = parts.iter().map(|p| (p[k].1 - p[k].0 + 1) as u128).sum();
        let gaps: u128 = parts.windows(2).map(|w| dist(w[0][k], w[1][k]) as u128).sum();
        threshold.denom() as u128 * gaps <= threshold.numer() as u128 * fixed
    })
}

/// Independent re-check of one output group against the source document:
/// each part's occurrences are disjoint and cover identical token sequences
/// that start and end on token boundaries, the parts form a variational
/// group, and every tuple satisfies the near-duplicate inequality.
pub fn verify_group(doc: &Document, group: &VariationalGroup, threshold: Threshold) -> Result<(), String> {
    let parts = raw(group);
    for (i, part) in group.parts().iter().enumerate() {
        let spans = &parts[i];
        if spans.len() < 2 {
            return Err(format!("part {i} has {} occurrences", spans.len()));
        }
        if spans.windows(2).any(|w| w[0].1 >= w[1].0) {
            return Err(format!("part {i} has overlapping occurrences"));
        }
        let expected: Vec<&str> = part.text().split(' ').collect();
        for &(b, e) in spans {
            if e > doc.len() {
                return Err(format!("part {i} occurrence [{b}, {e}] is out of bounds"));
            }
            let inside: Vec<&str> =
                doc.tokens().iter().filter(|t| t.begin >= b && t.end <= e).map(|t| t.text.as_str()).collect();
            let starts_on_token = doc.tokens().iter().any(|t| t.begin == b);
            let ends_on_token = doc.tokens().iter().any(|t| t.end == e);
            if inside != expected || !starts_on_token || !ends_on_token {
                return Err(format!("part {i} occurrence [{b}, {e}] does not spell {:?}", part.text()));
            }
        }
    }
    if !is_variational_raw(&parts) {
        return Err("parts are not in variational order".into());
    }
    if !is_near_duplicate_raw(&parts, threshold) {
        return Err("gap total exceeds the threshold".into());
    }
    Ok(())
}

/// Every ordered selection of two or more distinct groups that forms a
/// near-duplicate group, as index sequences into `groups`.
pub fn brute_force_near_groups(groups: &[ExactGroup], threshold: Threshold) -> Result<Vec<Vec<usize>>, OracleError> {
    if groups.len() > MAX_GROUPS {
        return Err(OracleError::TooManyGroups(groups.len()));
    }
    if let Some(g) = groups.iter().find(|g| g.cardinality() > MAX_CARDINALITY) {
        return Err(OracleError::CardinalityTooLarge(g.cardinality()));
    }
    let spans: Vec<Spans> = groups.iter().map(spans_of).collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    extend_sequences(&spans, threshold, &mut current, &mut out);
    out.sort();
    Ok(out)
}

fn extend_sequences(spans: &[Spans], threshold: Threshold, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if current.len() >= 2 {
        let parts: Vec<Spans> = current.iter().map(|&i| spans[i].clone()).collect();
        if is_variational_raw(&parts) && is_near_duplicate_raw(&parts, threshold) {
            out.push(current.clone());
        }
    }
    for i in 0..spans.len() {
        if !current.contains(&i) {
            current.push(i);
            extend_sequences(spans, threshold, current, out);
            current.pop();
        }
    }
}

/// Replays the greedy closest-first merge policy without an interval tree:
/// in each pass, every live group (in order of first occurrence, then id)
/// is compared against every other live group; the admissible partners are
/// exactly those whose concatenation, in either order, is a near-duplicate
/// group. Returns the surviving groups sorted by their spans.
pub fn greedy_trace(groups: &[ExactGroup], threshold: Threshold) -> Vec<RawGroup> {
    let mut input: Vec<(Spans, &str)> = groups.iter().map(|g| (spans_of(g), g.text())).collect();
    input.sort();
    input.dedup();

    let mut live: BTreeMap<u32, RawGroup> = input.into_iter().enumerate().map(|(i, (s, _))| (i as u32, vec![s])).collect();
    let mut next_id = live.len() as u32;
    loop {
        let mut order: Vec<(usize, u32)> = live.iter().map(|(&id, g)| (g[0][0].0, id)).collect();
        order.sort();
        let mut pending: Vec<(u32, RawGroup)> = Vec::new();
        for (_, id) in order {
            let Some(group) = live.get(&id) else { continue };
            let mut best: Option<((usize, usize, u32), RawGroup)> = None;
            for (&other_id, other) in &live {
                if other_id == id || other[0].len() != group[0].len() {
                    continue;
                }
                let forward: RawGroup = group.iter().chain(other.iter()).cloned().collect();
                let backward: RawGroup = other.iter().chain(group.iter()).cloned().collect();
                let merged = if is_variational_raw(&forward) {
                    forward
                } else if is_variational_raw(&backward) {
                    backward
                } else {
                    continue;
                };
                if !is_near_duplicate_raw(&merged, threshold) {
                    continue;
                }
                let distance = group
                    .iter()
                    .flat_map(|a| other.iter().map(move |b| a.iter().zip(b).map(|(&x, &y)| dist(x, y)).max().unwrap_or(0)))
                    .max()
                    .unwrap_or(0);
                let key = (distance, other[0][0].0, other_id);
                if best.as_ref().is_none_or(|(k, _)| key < *k) {
                    best = Some((key, merged));
                }
            }
            if let Some(((_, _, partner), merged)) = best {
                live.remove(&id);
                live.remove(&partner);
                pending.push((next_id, merged));
                next_id += 1;
            }
        }
        if pending.is_empty() {
            break;
        }
        live.extend(pending);
    }
    let mut out: Vec<RawGroup> = live.into_values().collect();
    out.sort();
    out
}

/// Symbol-by-symbol coverage count: how many of `1..=doc_len` fall inside
/// some occurrence.
pub fn covered_symbols(doc_len: usize, groups: &[VariationalGroup]) -> usize {
    let mut marked = vec![false; doc_len + 1];
    for g in groups {
        for part in g.parts() {
            for f in part.occurrences() {
                let end = f.end().min(doc_len);
                if f.begin() <= end {
                    marked[f.begin()..=end].fill(true);
                }
            }
        }
    }
    marked.iter().skip(1).filter(|&&m| m).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(s: &str) -> Vec<&str> {
        s.split_whitespace().collect()
    }

    fn summary(reps: &[OracleRepeat]) -> Vec<(String, usize)> {
        reps.iter().map(|r| (r.tokens.join(" "), r.starts.len())).collect()
    }

    #[test]
    fn repeats_table() {
        let r = brute_force_repeats(&words("a b c x a b c y a b c"), 3, 2).unwrap();
        assert_eq!(summary(&r), vec![("a b c".into(), 3)]);
        let r = brute_force_repeats(&words("a a a a"), 1, 2).unwrap();
        assert_eq!(summary(&r), vec![("a a".into(), 2), ("a".into(), 4)]);
        assert!(brute_force_repeats(&words("a a a"), 2, 2).unwrap().is_empty());
        assert!(brute_force_repeats(&words("a b c d"), 1, 2).unwrap().is_empty());
        let r = brute_force_repeats(&words("a b a b"), 1, 2).unwrap();
        assert_eq!(summary(&r), vec![("a b".into(), 2)]);
    }

    #[test]
    fn caps() {
        let long = vec!["x"; MAX_TOKENS + 1];
        assert_eq!(brute_force_repeats(&long, 1, 2), Err(OracleError::TooManyTokens(MAX_TOKENS + 1)));
    }

    #[test]
    fn raw_predicates() {
        let a = vec![(1, 20), (101, 120)];
        let b = vec![(25, 44), (125, 144)];
        let c = vec![(26, 45), (126, 145)];
        let tau = Threshold::default();
        assert!(is_variational_raw(&[a.clone(), b.clone()]));
        assert!(!is_variational_raw(&[b.clone(), a.clone()]));
        assert!(is_near_duplicate_raw(&[a.clone(), b], tau));
        assert!(!is_near_duplicate_raw(&[a, c], tau));
    }
}
