//! Centered interval tree over extended duplicate intervals.
//!
//! Bounds are exact rationals stored as integers in units of `1/q`, where
//! `q` is the threshold's denominator (20 for the default 3/20). Intervals
//! are closed: touching endpoints overlap.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt;

use crate::model::{ExactGroup, TextFragment, Threshold, VariationalGroup};

/// Identifier of a live group during merging.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupId(pub u32);

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G{}", self.0)
    }
}

/// The group and tuple index an interval belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Owner {
    pub group: GroupId,
    pub tuple: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExtendedInterval {
    /// Lower bound, scaled by the threshold denominator.
    pub lo: i64,
    /// Upper bound, scaled by the threshold denominator.
    pub hi: i64,
    pub owner: Owner,
}

impl ExtendedInterval {
    /// `[b - τ|g|, e + τ|g|]`.
    pub fn around_fragment(fragment: &TextFragment, threshold: Threshold, owner: Owner) -> Self {
        let q = threshold.denom() as i64;
        let slack = threshold.scaled_slack(0, fragment.len());
        ExtendedInterval { lo: q * fragment.begin() as i64 - slack, hi: q * fragment.end() as i64 + slack, owner }
    }

    /// `[b_1^k - x^k, e_N^k + x^k]` with `x^k = τ Σ|g_i^k| - Σ dist(g_i^k, g_{i+1}^k)`.
    /// For a one-part group this is the same as [`around_fragment`](Self::around_fragment).
    pub fn around_tuple(group: &VariationalGroup, k: usize, threshold: Threshold, owner: Owner) -> Self {
        let q = threshold.denom() as i64;
        let (gaps, fixed) = group.tuple_totals(k);
        let slack = threshold.scaled_slack(gaps, fixed);
        let (b, e) = group.hull(k);
        ExtendedInterval { lo: q * b as i64 - slack, hi: q * e as i64 + slack, owner }
    }

    #[inline]
    pub fn intersects(&self, other: &ExtendedInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    fn sort_key(&self) -> (i64, i64, Owner) {
        (self.lo, self.hi, self.owner)
    }
}

#[derive(Debug, Clone)]
struct Node {
    center: i64,
    /// Intervals containing `center`, ascending by lower bound.
    by_lo: Vec<(i64, usize)>,
    /// The same intervals, descending by upper bound.
    by_hi: Vec<(Reverse<i64>, usize)>,
    left: Option<usize>,
    right: Option<usize>,
}

impl Node {
    fn new(center: i64) -> Self {
        Node { center, by_lo: Vec::new(), by_hi: Vec::new(), left: None, right: None }
    }

    fn add(&mut self, slot: usize, iv: &ExtendedInterval) {
        let lo_key = (iv.lo, slot);
        let at = self.by_lo.binary_search(&lo_key).unwrap_or_else(|e| e);
        self.by_lo.insert(at, lo_key);
        let hi_key = (Reverse(iv.hi), slot);
        let at = self.by_hi.binary_search(&hi_key).unwrap_or_else(|e| e);
        self.by_hi.insert(at, hi_key);
    }

    fn drop_slot(&mut self, slot: usize, iv: &ExtendedInterval) {
        if let Ok(at) = self.by_lo.binary_search(&(iv.lo, slot)) {
            self.by_lo.remove(at);
        }
        if let Ok(at) = self.by_hi.binary_search(&(Reverse(iv.hi), slot)) {
            self.by_hi.remove(at);
        }
    }
}

#[derive(Debug, Clone)]
struct Stored {
    interval: ExtendedInterval,
    node: usize,
}

/// Interval tree supporting insertion, removal by owning group, and closed
/// overlap queries.
///
/// Construction from a batch splits at the median endpoint; later insertions
/// descend to the node whose center they contain (creating leaves as needed)
/// and never rebalance.
#[derive(Debug, Clone, Default)]
pub struct IntervalTree {
    nodes: Vec<Node>,
    root: Option<usize>,
    slots: Vec<Option<Stored>>,
    free: Vec<usize>,
    by_owner: BTreeMap<GroupId, Vec<usize>>,
    len: usize,
}

impl IntervalTree {
    pub fn new() -> Self {
        IntervalTree::default()
    }

    /// Balanced construction from a batch of intervals.
    pub fn build(intervals: Vec<ExtendedInterval>) -> Self {
        let mut tree = IntervalTree::new();
        let slots: Vec<usize> = intervals.into_iter().map(|iv| tree.alloc(iv)).collect();
        tree.root = tree.build_node(slots);
        tree
    }

    fn alloc(&mut self, interval: ExtendedInterval) -> usize {
        let stored = Some(Stored { interval, node: usize::MAX });
        let slot = match self.free.pop() {
            Some(slot) => {
                self.slots[slot] = stored;
                slot
            }
            None => {
                self.slots.push(stored);
                self.slots.len() - 1
            }
        };
        self.by_owner.entry(interval.owner.group).or_default().push(slot);
        self.len += 1;
        slot
    }

    fn interval(&self, slot: usize) -> &ExtendedInterval {
        &self.slots[slot].as_ref().expect("live slot").interval
    }

    fn build_node(&mut self, slots: Vec<usize>) -> Option<usize> {
        if slots.is_empty() {
            return None;
        }
        let mut endpoints: Vec<i64> = slots.iter().flat_map(|&s| [self.interval(s).lo, self.interval(s).hi]).collect();
        endpoints.sort_unstable();
        let center = endpoints[endpoints.len() / 2];

        let (mut left, mut right, mut here) = (Vec::new(), Vec::new(), Vec::new());
        for s in slots {
            let iv = self.interval(s);
            if iv.hi < center {
                left.push(s);
            } else if iv.lo > center {
                right.push(s);
            } else {
                here.push(s);
            }
        }
        let id = self.nodes.len();
        self.nodes.push(Node::new(center));
        for s in here {
            self.attach(id, s);
        }
        let l = self.build_node(left);
        let r = self.build_node(right);
        self.nodes[id].left = l;
        self.nodes[id].right = r;
        Some(id)
    }

    fn attach(&mut self, node: usize, slot: usize) {
        let stored = self.slots[slot].as_mut().expect("live slot");
        stored.node = node;
        let iv = stored.interval;
        self.nodes[node].add(slot, &iv);
    }

    pub fn insert(&mut self, interval: ExtendedInterval) {
        debug_assert!(interval.lo <= interval.hi);
        let slot = self.alloc(interval);
        let fresh_center = interval.lo + (interval.hi - interval.lo) / 2;
        let mut at = match self.root {
            Some(root) => root,
            None => {
                self.nodes.push(Node::new(fresh_center));
                self.root = Some(self.nodes.len() - 1);
                self.nodes.len() - 1
            }
        };
        loop {
            let node = &self.nodes[at];
            let child = if interval.hi < node.center {
                (node.left, true)
            } else if interval.lo > node.center {
                (node.right, false)
            } else {
                break;
            };
            at = match child {
                (Some(next), _) => next,
                (None, is_left) => {
                    self.nodes.push(Node::new(fresh_center));
                    let id = self.nodes.len() - 1;
                    if is_left {
                        self.nodes[at].left = Some(id);
                    } else {
                        self.nodes[at].right = Some(id);
                    }
                    id
                }
            };
        }
        self.attach(at, slot);
    }

    /// Remove every interval owned by `group`. Returns `false` (and logs a
    /// warning) if the group had no intervals.
    pub fn remove(&mut self, group: GroupId) -> bool {
        let Some(slots) = self.by_owner.remove(&group) else {
            log::warn!("interval tree: no intervals owned by {group}");
            return false;
        };
        for slot in slots {
            let stored = self.slots[slot].take().expect("live slot");
            self.nodes[stored.node].drop_slot(slot, &stored.interval);
            self.free.push(slot);
            self.len -= 1;
        }
        true
    }

    pub fn contains_group(&self, group: GroupId) -> bool {
        self.by_owner.contains_key(&group)
    }

    /// Stored intervals intersecting the closed interval `[lo, hi]`, ordered
    /// by lower bound, upper bound, then owner.
    pub fn query_overlapping(&self, lo: i64, hi: i64) -> Vec<ExtendedInterval> {
        let mut found: Vec<ExtendedInterval> = Vec::new();
        let mut pending: Vec<usize> = self.root.into_iter().collect();
        while let Some(id) = pending.pop() {
            let node = &self.nodes[id];
            if hi < node.center {
                // everything here reaches the center, so only lo matters
                found.extend(node.by_lo.iter().take_while(|(l, _)| *l <= hi).map(|&(_, s)| *self.interval(s)));
                pending.extend(node.left);
            } else if lo > node.center {
                found.extend(node.by_hi.iter().take_while(|(h, _)| h.0 >= lo).map(|&(_, s)| *self.interval(s)));
                pending.extend(node.right);
            } else {
                found.extend(node.by_lo.iter().map(|&(_, s)| *self.interval(s)));
                pending.extend(node.left);
                pending.extend(node.right);
            }
        }
        found.sort_unstable_by_key(ExtendedInterval::sort_key);
        found
    }

    /// Convenience wrapper taking the probe as an interval.
    pub fn query(&self, probe: &ExtendedInterval) -> Vec<ExtendedInterval> {
        self.query_overlapping(probe.lo, probe.hi)
    }

    /// Number of stored intervals.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

/// Tree holding one extended interval per occurrence of every group; group
/// `i` of the slice is owned by `GroupId(i)`.
pub fn initiate(groups: &[ExactGroup], threshold: Threshold) -> IntervalTree {
    let intervals = groups
        .iter()
        .enumerate()
        .flat_map(|(i, g)| {
            g.occurrences().iter().enumerate().map(move |(k, frag)| {
                ExtendedInterval::around_fragment(frag, threshold, Owner { group: GroupId(i as u32), tuple: k })
            })
        })
        .collect();
    IntervalTree::build(intervals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::DocId;
    use alloc::vec;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn iv(lo: i64, hi: i64, group: u32) -> ExtendedInterval {
        ExtendedInterval { lo, hi, owner: Owner { group: GroupId(group), tuple: 0 } }
    }

    fn frag(b: usize, e: usize) -> TextFragment {
        TextFragment::new(DocId(0), b, e).unwrap()
    }

    #[test]
    fn fifteen_percent_extension() {
        let owner = Owner { group: GroupId(0), tuple: 0 };
        let ext = ExtendedInterval::around_fragment(&frag(10, 19), Threshold::default(), owner);
        // [8.5, 20.5] scaled by 20
        assert_eq!((ext.lo, ext.hi), (170, 410));
    }

    #[test]
    fn tuple_interval_at_boundary_is_hull() {
        let a = ExactGroup::new("a", vec![frag(1, 20), frag(101, 120)]).unwrap();
        let b = ExactGroup::new("b", vec![frag(25, 44), frag(125, 144)]).unwrap();
        let vg = VariationalGroup::new(vec![a, b]).unwrap();
        let ext = ExtendedInterval::around_tuple(&vg, 1, Threshold::default(), Owner { group: GroupId(3), tuple: 1 });
        assert_eq!((ext.lo, ext.hi), (101 * 20, 144 * 20));
    }

    #[test]
    fn initiate_stores_every_occurrence() {
        assert!(initiate(&[], Threshold::default()).is_empty());
        let a = ExactGroup::new("a", vec![frag(1, 10), frag(50, 59)]).unwrap();
        let b = ExactGroup::new("b", vec![frag(12, 20), frag(70, 78)]).unwrap();
        let tree = initiate(&[a, b], Threshold::default());
        assert_eq!(tree.len(), 4);
        let hits = tree.query_overlapping(11 * 20, 11 * 20);
        assert_eq!(hits.iter().map(|h| h.owner.group).collect::<Vec<_>>(), vec![GroupId(0), GroupId(1)]);
    }

    #[test]
    fn insert_query_remove() {
        let mut tree = IntervalTree::new();
        tree.insert(iv(0, 10, 0));
        tree.insert(iv(20, 30, 1));
        assert_eq!(tree.query_overlapping(5, 5), vec![iv(0, 10, 0)]);
        assert!(tree.query_overlapping(11, 19).is_empty());
        assert_eq!(tree.query_overlapping(10, 10), vec![iv(0, 10, 0)]);
        assert_eq!(tree.query_overlapping(10, 20).len(), 2);

        assert!(tree.remove(GroupId(0)));
        assert!(tree.query_overlapping(0, 10).is_empty());
        assert!(!tree.remove(GroupId(0)));
        assert_eq!(tree.len(), 1);

        tree.insert(iv(0, 10, 0));
        assert_eq!(tree.query_overlapping(0, 25).len(), 2);
    }

    #[test]
    fn negative_bounds_are_fine() {
        let mut tree = IntervalTree::build(vec![iv(-30, -10, 0), iv(-5, 5, 1)]);
        tree.insert(iv(-100, -90, 2));
        assert_eq!(tree.query_overlapping(-95, -20).len(), 2);
    }

    #[test]
    fn random_ops_match_linear_scan() {
        let mut rng = StdRng::seed_from_u64(7);
        let start: Vec<_> = (0..100)
            .map(|g| {
                let lo = rng.gen_range(-50..500);
                iv(lo, lo + rng.gen_range(0..60), g)
            })
            .collect();
        let mut tree = IntervalTree::build(start.clone());
        let mut naive = start;
        let mut next_group = 100;
        for _ in 0..2_000 {
            match rng.gen_range(0..3) {
                0 => {
                    let lo = rng.gen_range(-50..500);
                    let x = iv(lo, lo + rng.gen_range(0..60), next_group);
                    next_group += 1;
                    tree.insert(x);
                    naive.push(x);
                }
                1 if !naive.is_empty() => {
                    let g = naive[rng.gen_range(0..naive.len())].owner.group;
                    tree.remove(g);
                    naive.retain(|x| x.owner.group != g);
                }
                _ => {
                    let lo = rng.gen_range(-80..560);
                    let hi = lo + rng.gen_range(0..40);
                    let mut expect: Vec<_> = naive.iter().copied().filter(|x| x.lo <= hi && lo <= x.hi).collect();
                    expect.sort_unstable_by_key(ExtendedInterval::sort_key);
                    assert_eq!(tree.query_overlapping(lo, hi), expect);
                }
            }
            assert_eq!(tree.len(), naive.len());
        }
    }
}
