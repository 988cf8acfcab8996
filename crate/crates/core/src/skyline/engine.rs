//! Incremental skyline maintenance with pruning on arrival.
//!
//! Survivors are bucketed by window length. A new tuple can only be
//! dominated by tuples at least as good in length, and can only dominate
//! tuples at most as good, so each arrival scans one side of the buckets.
//! Each reference point is reduced to a local skyline first (in parallel);
//! the local skylines are then merged in reference-point order, so the
//! outcome is identical for every thread count.

use std::collections::BTreeMap;
use std::ops::Bound;

use rayon::prelude::*;

use super::{
    dominates_unchecked, DominationRecord, Selection, SkylineResult, SkylineSet, SkylineTuple,
};
use crate::ops::CountDirection;

struct Entry {
    tuple: SkylineTuple,
    estimate: usize,
}

struct Incremental {
    dir: CountDirection,
    buckets: BTreeMap<usize, Vec<Entry>>,
}

impl Incremental {
    fn new(dir: CountDirection) -> Self {
        Incremental {
            dir,
            buckets: BTreeMap::new(),
        }
    }

    // Buckets holding tuples whose length is at least as preferred as `len`.
    fn better_or_equal(&mut self, len: usize) -> impl Iterator<Item = &mut Vec<Entry>> {
        let range = match self.dir {
            CountDirection::Decreasing => (Bound::Included(len), Bound::Unbounded),
            CountDirection::Increasing => (Bound::Unbounded, Bound::Included(len)),
        };
        self.buckets.range_mut(range).map(|(_, v)| v)
    }

    fn worse_or_equal(&mut self, len: usize) -> impl Iterator<Item = &mut Vec<Entry>> {
        let range = match self.dir {
            CountDirection::Decreasing => (Bound::Unbounded, Bound::Included(len)),
            CountDirection::Increasing => (Bound::Included(len), Bound::Unbounded),
        };
        self.buckets.range_mut(range).map(|(_, v)| v)
    }

    /// Offers a tuple that already stands for `estimate` pruned candidates.
    /// Returns whether it entered the skyline.
    fn offer(&mut self, tuple: SkylineTuple, estimate: usize) -> bool {
        let dir = self.dir;
        let len = tuple.len();
        for bucket in self.better_or_equal(len) {
            if let Some(prev) = bucket
                .iter_mut()
                .find(|prev| dominates_unchecked(&prev.tuple, &tuple, dir))
            {
                prev.estimate += 1 + estimate;
                return false;
            }
        }
        let mut absorbed = estimate;
        for bucket in self.worse_or_equal(len) {
            bucket.retain(|prev| {
                if dominates_unchecked(&tuple, &prev.tuple, dir) {
                    absorbed += 1 + prev.estimate;
                    false
                } else {
                    true
                }
            });
        }
        self.buckets.retain(|_, v| !v.is_empty());
        self.buckets.entry(len).or_default().push(Entry {
            tuple,
            estimate: absorbed,
        });
        true
    }

    fn into_entries(self) -> impl Iterator<Item = Entry> {
        self.buckets.into_values().flatten()
    }
}

fn select(t: &SkylineTuple, selection: Selection) -> SkylineTuple {
    match selection {
        Selection::Unified => t.clone(),
        Selection::Individual(i) => t.project(i),
    }
}

pub(super) fn compute(
    candidates: &[SkylineTuple],
    dir: CountDirection,
    selection: Selection,
) -> SkylineResult {
    let selected: Vec<SkylineTuple> = candidates
        .par_iter()
        .map(|t| select(t, selection))
        .collect();

    // Group by reference point, preserving arrival order inside each group.
    let mut groups: Vec<&[SkylineTuple]> = Vec::new();
    let mut start = 0;
    for i in 1..=selected.len() {
        if i == selected.len() || selected[i].reference != selected[start].reference {
            if i > start {
                groups.push(&selected[start..i]);
            }
            start = i;
        }
    }
    let locals: Vec<Incremental> = groups
        .par_iter()
        .map(|group| {
            let mut local = Incremental::new(dir);
            for t in group.iter() {
                local.offer(t.clone(), 0);
            }
            local
        })
        .collect();

    let mut global = Incremental::new(dir);
    for local in locals {
        for entry in local.into_entries() {
            global.offer(entry.tuple, entry.estimate);
        }
    }

    let survivors: Vec<Entry> = global.into_entries().collect();
    let exact: Vec<usize> = survivors
        .par_iter()
        .map(|s| {
            selected
                .iter()
                .filter(|c| dominates_unchecked(&s.tuple, c, dir))
                .count()
        })
        .collect();

    let mut set = SkylineSet::default();
    let mut dod = DominationRecord::default();
    for (entry, exact) in survivors.into_iter().zip(exact) {
        let id = entry.tuple.id();
        if entry.estimate != exact {
            log::debug!(
                "dod estimate for t_r={} len={} is {}, exact {}",
                id.reference,
                id.length,
                entry.estimate,
                exact
            );
        }
        dod.exact.insert(id, exact);
        dod.estimated.insert(id, entry.estimate);
        set.by_length
            .entry(id.length)
            .or_default()
            .push(entry.tuple);
    }
    for bucket in set.by_length.values_mut() {
        bucket.sort_by_key(|t| t.reference);
    }
    SkylineResult {
        direction: dir,
        selection,
        set,
        dod,
        candidate_count: selected.len(),
    }
}
