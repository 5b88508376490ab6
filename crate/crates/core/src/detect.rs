//! Exact duplicate detection.
//!
//! Repeats are found on the token stream: every maximal repeated token
//! sequence (one whose occurrence set shrinks when it is extended by a token
//! on either side) becomes a candidate group. Overlapping occurrences of a
//! self-repetitive sequence are thinned left to right, and candidates below
//! the configured length or group size are dropped.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::ingest::{Document, Token};
use crate::model::{ExactGroup, TextFragment};
use crate::suffix::build_suffix_index;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetectorConfig {
    /// Minimum clone length in tokens.
    pub min_tokens: usize,
    /// Minimum number of disjoint occurrences.
    pub min_group_size: usize,
}

impl DetectorConfig {
    pub fn new(min_tokens: usize, min_group_size: usize) -> Self {
        DetectorConfig { min_tokens: min_tokens.max(1), min_group_size: min_group_size.max(2) }
    }
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig { min_tokens: 5, min_group_size: 2 }
    }
}

/// A repeat in token coordinates: `len` tokens starting at each of `starts`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TokenRepeat {
    pub len: usize,
    pub starts: Vec<usize>,
}

/// Map token texts to dense ids in order of first appearance.
pub fn token_ids(tokens: &[Token]) -> Vec<u32> {
    let mut ids: BTreeMap<&str, u32> = BTreeMap::new();
    tokens
        .iter()
        .map(|t| {
            let next = ids.len() as u32;
            *ids.entry(t.text.as_str()).or_insert(next)
        })
        .collect()
}

/// Maximal repeats of `ids` with their thinned occurrence lists, sorted by
/// first start and then by length (longest first).
pub fn maximal_repeats(ids: &[u32], cfg: DetectorConfig) -> Vec<TokenRepeat> {
    let cfg = DetectorConfig::new(cfg.min_tokens, cfg.min_group_size);
    let n = ids.len();
    if n < 2 {
        return Vec::new();
    }
    let index = build_suffix_index(ids);
    let sa = &index.sa;
    let left_of = |pos: u32| match pos {
        0 => LeftContext::Diverse,
        p => LeftContext::Uniform(ids[p as usize - 1]),
    };

    let mut out = Vec::new();
    let mut emit = |depth: usize, lb: usize, rb: usize, left: LeftContext| {
        if depth < cfg.min_tokens || left != LeftContext::Diverse || rb - lb + 1 < cfg.min_group_size {
            return;
        }
        let mut starts: Vec<usize> = sa[lb..=rb].iter().map(|&p| p as usize).collect();
        starts.sort_unstable();
        let starts = thin(&starts, depth);
        if starts.len() >= cfg.min_group_size {
            out.push(TokenRepeat { len: depth, starts });
        }
    };

    // Bottom-up walk over lcp-intervals. Each stack entry is an open interval
    // (depth, left bound, accumulated left context of the suffixes seen so far).
    let mut stack: Vec<(usize, usize, LeftContext)> = alloc::vec![(0, 0, LeftContext::Empty)];
    for i in 1..=n {
        let h = if i < n { index.lcp[i] as usize } else { 0 };
        let mut acc = left_of(sa[i - 1]);
        let mut lb = i - 1;
        while h < stack.last().map_or(0, |t| t.0) {
            let (depth, start, left) = stack.pop().expect("non-empty stack");
            let left = left.join(acc);
            emit(depth, start, i - 1, left);
            acc = left;
            lb = start;
        }
        let top = stack.last_mut().expect("root interval stays on the stack");
        if h > top.0 {
            stack.push((h, lb, acc));
        } else {
            top.2 = top.2.join(acc);
        }
    }

    out.sort_unstable_by(|a, b| a.starts[0].cmp(&b.starts[0]).then(b.len.cmp(&a.len)));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LeftContext {
    Empty,
    Uniform(u32),
    Diverse,
}

impl LeftContext {
    fn join(self, other: LeftContext) -> LeftContext {
        match (self, other) {
            (LeftContext::Empty, x) | (x, LeftContext::Empty) => x,
            (LeftContext::Uniform(a), LeftContext::Uniform(b)) if a == b => self,
            _ => LeftContext::Diverse,
        }
    }
}

/// Keep a start iff its span does not overlap the last kept one.
fn thin(sorted_starts: &[usize], len: usize) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::with_capacity(sorted_starts.len());
    for &s in sorted_starts {
        if kept.last().is_none_or(|&k| s >= k + len) {
            kept.push(s);
        }
    }
    kept
}

/// Every maximal repeated token sequence of the document as an exact group
/// in symbol coordinates, sorted by first occurrence.
pub fn detect_exact_groups(doc: &Document, cfg: DetectorConfig) -> Vec<ExactGroup> {
    let tokens = doc.tokens();
    let ids = token_ids(tokens);
    maximal_repeats(&ids, cfg)
        .into_iter()
        .map(|rep| {
            let text = join_tokens(&tokens[rep.starts[0]..rep.starts[0] + rep.len]);
            let occurrences = rep
                .starts
                .iter()
                .map(|&s| {
                    TextFragment::new(doc.id(), tokens[s].begin, tokens[s + rep.len - 1].end)
                        .expect("token spans are non-empty")
                })
                .collect();
            ExactGroup::new(text, occurrences).expect("thinned occurrences are disjoint")
        })
        .collect()
}

fn join_tokens(tokens: &[Token]) -> String {
    let mut text = String::new();
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 {
            text.push(' ');
        }
        text.push_str(&t.text);
    }
    text
}
