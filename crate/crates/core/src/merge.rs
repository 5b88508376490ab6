//! Near-duplicate group construction.
//!
//! Starting from the exact groups, each pass visits every live group in
//! document order, finds the groups it can be concatenated with into a
//! near-duplicate group, and merges it with the closest one. Groups built in
//! a pass become visible to the interval tree only when the pass ends. Passes
//! repeat until one builds nothing; the survivors, merged or not, are the
//! result.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

pub use crate::interval::GroupId;
use crate::interval::{initiate, ExtendedInterval, IntervalTree, Owner};
use crate::model::{dist_vgroups, is_near_duplicate, ExactGroup, Threshold, VariationalGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MergeError {
    #[error("no candidates to choose from")]
    NoCandidates,
    #[error("{0} is not a live group")]
    UnknownGroup(GroupId),
}

/// A group that can be merged with the group being expanded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub id: GroupId,
    /// The concatenation in document order, already checked to be a
    /// near-duplicate group.
    pub merged: VariationalGroup,
    /// Distance between the two groups before merging.
    pub distance: usize,
    pub first_begin: usize,
}

/// Working sets of one merge run.
#[derive(Debug, Clone)]
pub struct MergeState {
    set_g: BTreeMap<GroupId, VariationalGroup>,
    set_vg: BTreeMap<GroupId, VariationalGroup>,
    set_new: Vec<(GroupId, VariationalGroup)>,
    tree: IntervalTree,
    threshold: Threshold,
    next_id: u32,
    passes: usize,
}

impl MergeState {
    /// Canonically orders and deduplicates `groups`, numbers them from 0 and
    /// builds the interval tree.
    pub fn new(mut groups: Vec<ExactGroup>, threshold: Threshold) -> Self {
        groups.sort_by(cmp_exact);
        groups.dedup();
        let tree = initiate(&groups, threshold);
        let next_id = groups.len() as u32;
        let set_g = groups.into_iter().enumerate().map(|(i, g)| (GroupId(i as u32), VariationalGroup::from_exact(g))).collect();
        MergeState { set_g, set_vg: BTreeMap::new(), set_new: Vec::new(), tree, threshold, next_id, passes: 0 }
    }

    pub fn threshold(&self) -> Threshold {
        self.threshold
    }

    /// Exact groups not merged so far.
    pub fn set_g(&self) -> &BTreeMap<GroupId, VariationalGroup> {
        &self.set_g
    }

    /// Near-duplicate groups built so far.
    pub fn set_vg(&self) -> &BTreeMap<GroupId, VariationalGroup> {
        &self.set_vg
    }

    pub fn tree(&self) -> &IntervalTree {
        &self.tree
    }

    /// Completed passes, including the final empty one.
    pub fn passes(&self) -> usize {
        self.passes
    }

    pub fn live(&self, id: GroupId) -> Option<&VariationalGroup> {
        self.set_g.get(&id).or_else(|| self.set_vg.get(&id))
    }

    pub fn live_count(&self) -> usize {
        self.set_g.len() + self.set_vg.len()
    }

    /// Groups that form a near-duplicate group with `id`, in either order.
    ///
    /// Candidates come from overlap queries on the extended tuple intervals
    /// of `id`, are kept if the concatenation is variational and every tuple
    /// pair of extended intervals intersects, and finally must pass the
    /// near-duplicate inequality on the concatenation itself.
    pub fn nearby(&self, id: GroupId) -> Result<Vec<Candidate>, MergeError> {
        let group = self.live(id).ok_or(MergeError::UnknownGroup(id))?;
        let tau = self.threshold;
        let probes: Vec<ExtendedInterval> = (0..group.cardinality())
            .map(|k| ExtendedInterval::around_tuple(group, k, tau, Owner { group: id, tuple: k }))
            .collect();

        let mut touching = BTreeSet::new();
        for probe in &probes {
            touching.extend(self.tree.query(probe).into_iter().map(|hit| hit.owner.group).filter(|&g| g != id));
        }

        let mut out = Vec::new();
        for other_id in touching {
            let other = self.live(other_id).expect("tree only holds live groups");
            if other.cardinality() != group.cardinality() {
                continue;
            }
            let Some(merged) = group.concat(other).or_else(|_| other.concat(group)).ok() else {
                continue;
            };
            let all_close = probes.iter().enumerate().all(|(k, probe)| {
                probe.intersects(&ExtendedInterval::around_tuple(other, k, tau, Owner { group: other_id, tuple: k }))
            });
            if !all_close || !is_near_duplicate(&merged, tau) {
                continue;
            }
            let distance = dist_vgroups(group, other).expect("cardinalities checked");
            out.push(Candidate { id: other_id, merged, distance, first_begin: other.first_begin() });
        }
        Ok(out)
    }

    /// One sweep over the live groups followed by the join of the groups it
    /// built. Returns how many groups were built.
    pub fn merge_pass(&mut self) -> usize {
        let mut order: Vec<(usize, GroupId)> =
            self.set_g.iter().chain(self.set_vg.iter()).map(|(&id, g)| (g.first_begin(), id)).collect();
        order.sort_unstable();

        for (_, id) in order {
            if self.live(id).is_none() {
                continue;
            }
            let candidates = self.nearby(id).expect("live group");
            let Ok(best) = get_closest(&candidates) else {
                continue;
            };
            let (partner, merged) = (best.id, best.merged.clone());
            self.remove(id);
            self.remove(partner);
            let new_id = GroupId(self.next_id);
            self.next_id += 1;
            self.set_new.push((new_id, merged));
        }

        let built = self.set_new.len();
        self.join();
        self.passes += 1;
        built
    }

    fn remove(&mut self, id: GroupId) {
        if self.set_g.remove(&id).is_none() {
            self.set_vg.remove(&id);
        }
        self.tree.remove(id);
    }

    fn join(&mut self) {
        for (id, group) in self.set_new.drain(..) {
            for k in 0..group.cardinality() {
                self.tree.insert(ExtendedInterval::around_tuple(&group, k, self.threshold, Owner { group: id, tuple: k }));
            }
            self.set_vg.insert(id, group);
        }
    }

    /// Run passes to the fixpoint and return every surviving group in
    /// canonical document order.
    pub fn run(mut self) -> Vec<VariationalGroup> {
        while self.merge_pass() > 0 {}
        let mut out: Vec<VariationalGroup> = self.set_vg.into_values().chain(self.set_g.into_values()).collect();
        out.sort_by(cmp_variational);
        out
    }
}

/// The candidate at the smallest group distance; ties go to the earliest
/// first occurrence, then to the smallest id.
pub fn get_closest(candidates: &[Candidate]) -> Result<&Candidate, MergeError> {
    candidates
        .iter()
        .min_by_key(|c| (c.distance, c.first_begin, c.id))
        .ok_or(MergeError::NoCandidates)
}

/// Merge nearby exact groups into near-duplicate groups until nothing more
/// merges. Unmerged groups are returned as one-part groups.
pub fn construct_near_duplicate_groups(groups: Vec<ExactGroup>, threshold: Threshold) -> Vec<VariationalGroup> {
    MergeState::new(groups, threshold).run()
}

fn cmp_exact(a: &ExactGroup, b: &ExactGroup) -> Ordering {
    a.occurrences()
        .iter()
        .map(|f| (f.begin(), f.end()))
        .cmp(b.occurrences().iter().map(|f| (f.begin(), f.end())))
        .then_with(|| a.text().cmp(b.text()))
}

/// Document order: first occurrence, then all fragments tuple by tuple.
pub fn cmp_variational(a: &VariationalGroup, b: &VariationalGroup) -> Ordering {
    a.first_begin()
        .cmp(&b.first_begin())
        .then_with(|| spans(a).cmp(spans(b)))
        .then_with(|| a.parts().iter().map(ExactGroup::text).cmp(b.parts().iter().map(ExactGroup::text)))
}

fn spans(g: &VariationalGroup) -> impl Iterator<Item = (usize, usize)> + '_ {
    (0..g.cardinality()).flat_map(move |k| g.tuple(k)).map(|f| (f.begin(), f.end()))
}
