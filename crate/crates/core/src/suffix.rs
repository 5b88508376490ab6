//! Suffix and LCP arrays over token-id sequences.

use alloc::vec;
use alloc::vec::Vec;

/// `sa` lists suffix start positions in lexicographic order; `lcp[i]` is the
/// longest common prefix of suffixes `sa[i - 1]` and `sa[i]` (`lcp[0] = 0`).
/// A proper prefix sorts before its extensions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SuffixIndex {
    pub sa: Vec<u32>,
    pub lcp: Vec<u32>,
}

impl SuffixIndex {
    pub fn len(&self) -> usize {
        self.sa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sa.is_empty()
    }
}

/// Prefix doubling followed by Kasai's LCP construction.
///
/// Sequences must be shorter than `u32::MAX` symbols.
pub fn build_suffix_index(ids: &[u32]) -> SuffixIndex {
    let n = ids.len();
    assert!(n < u32::MAX as usize, "sequence too long for a u32 suffix array");
    if n == 0 {
        return SuffixIndex::default();
    }
    let sa = suffix_array(ids);
    let lcp = kasai(ids, &sa);
    SuffixIndex { sa, lcp }
}

fn suffix_array(ids: &[u32]) -> Vec<u32> {
    let n = ids.len();
    let mut sa: Vec<u32> = (0..n as u32).collect();
    sa.sort_unstable_by_key(|&i| ids[i as usize]);
    // ranks start at 1 so that 0 can stand for "past the end"
    let mut rank = vec![0u32; n];
    rank[sa[0] as usize] = 1;
    for w in 1..n {
        let bump = u32::from(ids[sa[w - 1] as usize] != ids[sa[w] as usize]);
        rank[sa[w] as usize] = rank[sa[w - 1] as usize] + bump;
    }
    let mut next = vec![0u32; n];
    let mut width = 1usize;
    while (rank[sa[n - 1] as usize] as usize) < n {
        let key = |i: u32| {
            let i = i as usize;
            (rank[i], if i + width < n { rank[i + width] } else { 0 })
        };
        sa.sort_unstable_by_key(|&i| key(i));

        next[sa[0] as usize] = 1;
        for w in 1..n {
            let bump = u32::from(key(sa[w - 1]) != key(sa[w]));
            next[sa[w] as usize] = next[sa[w - 1] as usize] + bump;
        }
        core::mem::swap(&mut rank, &mut next);
        width *= 2;
    }
    sa
}

fn kasai(ids: &[u32], sa: &[u32]) -> Vec<u32> {
    let n = ids.len();
    let mut inverse = vec![0u32; n];
    for (i, &p) in sa.iter().enumerate() {
        inverse[p as usize] = i as u32;
    }
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for p in 0..n {
        let r = inverse[p] as usize;
        if r == 0 {
            h = 0;
            continue;
        }
        let q = sa[r - 1] as usize;
        while p + h < n && q + h < n && ids[p + h] == ids[q + h] {
            h += 1;
        }
        lcp[r] = h as u32;
        h = h.saturating_sub(1);
    }
    lcp
}
