//! Evolution skylines over `(window length, event counts)` candidates.
//!
//! A candidate is a reference point `t_r`, the contiguous window `T_r`
//! immediately preceding it, and the per-combination event edge counts of
//! `G_γ[(t_r, T_r)]`. The direction of the event (see
//! [`count_direction`](crate::ops::count_direction)) fixes whether short or
//! long windows are preferred.

mod candidates;
mod engine;
mod oracle;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::aggregate::{AggregationSpec, CombinationUniverse, CountVector, EndpointKey};
use crate::error::{Error, Result};
use crate::graph::{Semantics, TemporalPropertyGraph};
use crate::ops::{count_direction, CountDirection, EventKind};
use crate::time::{TimeInstant, Window};

pub use oracle::{brute_force_skyline, pareto_dominates, BruteForce};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SkylineTuple {
    pub reference: TimeInstant,
    pub window: Window,
    pub counts: CountVector,
}

impl SkylineTuple {
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.counts.length
    }

    pub fn id(&self) -> TupleId {
        TupleId {
            reference: self.reference,
            length: self.counts.length,
        }
    }

    /// The same candidate restricted to the `i`-th count.
    pub fn project(&self, i: usize) -> SkylineTuple {
        SkylineTuple {
            reference: self.reference,
            window: self.window,
            counts: CountVector {
                counts: vec![self.counts.counts[i]],
                length: self.counts.length,
            },
        }
    }
}

/// A candidate is identified by its reference point and window length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TupleId {
    pub reference: TimeInstant,
    pub length: usize,
}

pub(crate) fn dominates_unchecked(a: &SkylineTuple, b: &SkylineTuple, dir: CountDirection) -> bool {
    let mut all_ge = true;
    let mut any_gt = false;
    for (x, y) in a.counts.counts.iter().zip(&b.counts.counts) {
        if x < y {
            all_ge = false;
            break;
        }
        any_gt |= x > y;
    }
    if !all_ge {
        return false;
    }
    let (la, lb) = (a.len(), b.len());
    match dir {
        CountDirection::Increasing => la < lb || (la <= lb && any_gt),
        CountDirection::Decreasing => la > lb || (la >= lb && any_gt),
    }
}

/// Whether `a` dominates `b`. With increasing counts shorter windows win,
/// with decreasing counts longer ones do; counts always prefer larger.
pub fn dominates(a: &SkylineTuple, b: &SkylineTuple, dir: CountDirection) -> Result<bool> {
    if a.counts.counts.len() != b.counts.counts.len() {
        return Err(Error::Domain(format!(
            "count vectors of {} and {} dimensions are not comparable",
            a.counts.counts.len(),
            b.counts.counts.len()
        )));
    }
    Ok(dominates_unchecked(a, b, dir))
}

/// Preferred length first, then reference point, then counts.
pub fn canonical_cmp(dir: CountDirection, a: &SkylineTuple, b: &SkylineTuple) -> Ordering {
    let by_len = match dir {
        CountDirection::Decreasing => b.len().cmp(&a.len()),
        CountDirection::Increasing => a.len().cmp(&b.len()),
    };
    by_len
        .then(a.reference.cmp(&b.reference))
        .then_with(|| a.counts.counts.cmp(&b.counts.counts))
}

/// Which counts take part in dominance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    /// Every combination pair at once.
    Unified,
    /// One combination pair, by universe position.
    Individual(usize),
}

/// Non-dominated tuples bucketed by window length.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SkylineSet {
    pub by_length: BTreeMap<usize, Vec<SkylineTuple>>,
}

impl SkylineSet {
    pub fn len(&self) -> usize {
        self.by_length.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = &SkylineTuple> {
        self.by_length.values().flatten()
    }

    pub fn contains(&self, id: TupleId) -> bool {
        self.by_length
            .get(&id.length)
            .is_some_and(|b| b.iter().any(|t| t.reference == id.reference))
    }
}

/// Domination degrees of skyline tuples: the exact number of candidates each
/// one dominates, and the running estimate accumulated while pruning.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DominationRecord {
    pub exact: BTreeMap<TupleId, usize>,
    pub estimated: BTreeMap<TupleId, usize>,
}

impl DominationRecord {
    pub fn dod(&self, id: TupleId) -> Option<usize> {
        self.exact.get(&id).copied()
    }

    /// Tuples whose running estimate differs from the exact degree.
    pub fn divergences(&self) -> Vec<(TupleId, usize, usize)> {
        self.exact
            .iter()
            .filter_map(|(id, &exact)| {
                let est = self.estimated.get(id).copied().unwrap_or(0);
                (est != exact).then_some((*id, exact, est))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkylineResult {
    pub direction: CountDirection,
    pub selection: Selection,
    pub set: SkylineSet,
    pub dod: DominationRecord,
    pub candidate_count: usize,
}

impl SkylineResult {
    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    /// Tuples with their exact domination degree, in canonical order.
    pub fn rows(&self) -> Vec<(&SkylineTuple, usize)> {
        let mut rows: Vec<_> = self
            .set
            .iter()
            .map(|t| (t, self.dod.dod(t.id()).unwrap_or(0)))
            .collect();
        rows.sort_by(|a, b| canonical_cmp(self.direction, a.0, b.0));
        rows
    }
}

/// The `k` tuples with the highest domination degree; ties fall back to
/// canonical order.
pub fn top_k(result: &SkylineResult, k: usize) -> Vec<(SkylineTuple, usize)> {
    let mut rows = result.rows();
    rows.sort_by(|a, b| {
        b.1.cmp(&a.1)
            .then_with(|| canonical_cmp(result.direction, a.0, b.0))
    });
    rows.into_iter()
        .take(k)
        .map(|(t, d)| (t.clone(), d))
        .collect()
}

/// What to explore: one event under one semantics, for one edge label,
/// aggregated by one spec.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Query {
    pub kind: EventKind,
    pub semantics: Semantics,
    pub edge_label: String,
    pub spec: AggregationSpec,
}

impl Query {
    pub fn direction(&self) -> CountDirection {
        count_direction(self.kind, self.semantics)
    }
}

/// A validated query bound to a graph, with its combination universe.
#[derive(Debug)]
pub struct Exploration<'g> {
    graph: &'g TemporalPropertyGraph,
    query: Query,
    universe: CombinationUniverse,
    threads: Option<usize>,
}

impl<'g> Exploration<'g> {
    pub fn new(graph: &'g TemporalPropertyGraph, query: Query) -> Result<Self> {
        let violations = graph.validate();
        if !violations.is_empty() {
            return Err(Error::Integrity(violations));
        }
        let universe = CombinationUniverse::new(graph, &query.edge_label, &query.spec)?;
        Ok(Exploration {
            graph,
            query,
            universe,
            threads: None,
        })
    }

    /// Caps the worker threads; results do not depend on the value.
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads.max(1));
        self
    }

    pub fn graph(&self) -> &'g TemporalPropertyGraph {
        self.graph
    }

    pub fn query(&self) -> &Query {
        &self.query
    }

    pub fn universe(&self) -> &CombinationUniverse {
        &self.universe
    }

    pub fn direction(&self) -> CountDirection {
        self.query.direction()
    }

    fn run<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        match self.threads {
            Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(pool) => pool.install(f),
                Err(e) => {
                    log::warn!("falling back to the global thread pool: {e}");
                    f()
                }
            },
            None => f(),
        }
    }

    /// Every `(t_r, T_r, W)` candidate, reference points ascending; within a
    /// reference point, longest window first for decreasing counts and
    /// shortest first for increasing counts.
    pub fn candidates(&self) -> Result<Vec<SkylineTuple>> {
        self.run(|| candidates::sweep(self.graph, &self.query, &self.universe))
    }

    pub fn unified_skyline(&self) -> Result<SkylineResult> {
        let candidates = self.candidates()?;
        Ok(self.skyline_of(&candidates, Selection::Unified))
    }

    /// The skyline of the pair at universe position `i` over `(length, w_i)`.
    pub fn individual_skyline(&self, i: usize) -> Result<SkylineResult> {
        self.check_selection(Selection::Individual(i))?;
        let candidates = self.candidates()?;
        Ok(self.skyline_of(&candidates, Selection::Individual(i)))
    }

    pub fn individual_skyline_for(
        &self,
        src: &EndpointKey,
        dst: &EndpointKey,
    ) -> Result<SkylineResult> {
        let i = self.universe.position(src, dst).ok_or_else(|| {
            Error::Domain(format!("({src}, {dst}) is not in the combination universe"))
        })?;
        self.individual_skyline(i)
    }

    pub fn check_selection(&self, selection: Selection) -> Result<()> {
        match selection {
            Selection::Individual(i) if i >= self.universe.len() => Err(Error::Domain(format!(
                "pair {i} is outside a universe of {} pairs",
                self.universe.len()
            ))),
            _ => Ok(()),
        }
    }

    /// Skyline of precomputed candidates (as returned by [`Self::candidates`]).
    pub fn skyline_of(&self, candidates: &[SkylineTuple], selection: Selection) -> SkylineResult {
        self.run(|| engine::compute(candidates, self.direction(), selection))
    }

    /// The exhaustive reference result for this exploration.
    pub fn brute_force(&self, selection: Selection) -> Result<BruteForce> {
        self.check_selection(selection)?;
        brute_force_skyline(self.graph, &self.query, selection)
    }
}
