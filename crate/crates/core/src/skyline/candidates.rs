//! Candidate generation by a per-reference-point sweep.
//!
//! For a fixed reference point `r` and window `[r - L, r - 1]`, whether an
//! edge belongs to an event graph depends on `L` only through two numbers:
//! the run of consecutive instants it exists ending at `r - 1` (strict) and
//! the distance back to its latest instant before `r` (loose). Every edge
//! therefore contributes to one contiguous range of `L`, and all windows of
//! a reference point are counted in a single pass over the edges with a
//! difference array per combination pair.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use super::{Query, SkylineTuple};
use crate::aggregate::{CombinationUniverse, CountVector, EndpointKey};
use crate::error::{Error, Result};
use crate::graph::{Edge, NodeIdx, Semantics, TemporalPropertyGraph};
use crate::ops::{classification_instant, CountDirection, EventKind};
use crate::time::{TimeInstant, Window};

/// Endpoint keys of every node touching the edge label, per instant.
struct KeyTable {
    // node -> sorted (from-instant, key id) change points
    segments: HashMap<NodeIdx, Vec<(TimeInstant, u32)>>,
    // (src key, dst key) -> universe position
    pairs: HashMap<(u32, u32), usize>,
    symmetric: bool,
}

impl KeyTable {
    fn new(
        g: &TemporalPropertyGraph,
        edges: &[&Edge],
        universe: &CombinationUniverse,
    ) -> Result<Self> {
        let spec = universe.spec();
        let nodes: BTreeSet<NodeIdx> = edges.iter().flat_map(|e| [e.src, e.dst]).collect();
        let mut raw: Vec<(NodeIdx, Vec<(TimeInstant, EndpointKey)>)> =
            Vec::with_capacity(nodes.len());
        for n in nodes {
            let existence = &g.node(n).existence;
            let mut points: Vec<(TimeInstant, EndpointKey)> = Vec::new();
            if spec.is_time_varying(g, n) {
                for t in existence.instants() {
                    let key = spec.endpoint_key(g, n, t)?;
                    if points.last().is_none_or(|(_, k)| *k != key) {
                        points.push((t, key));
                    }
                }
            } else if let Some(t) = existence.first() {
                points.push((TimeInstant(0), spec.endpoint_key(g, n, t)?));
            }
            raw.push((n, points));
        }
        // Ids follow key order, so comparing ids compares keys.
        let keys: BTreeSet<&EndpointKey> =
            universe.pairs().iter().flat_map(|(a, b)| [a, b]).collect();
        let id_of: HashMap<&EndpointKey, u32> = keys
            .iter()
            .enumerate()
            .map(|(i, k)| (*k, i as u32))
            .collect();
        let mut segments = HashMap::with_capacity(raw.len());
        for (n, points) in &raw {
            let mut seg = Vec::with_capacity(points.len());
            for (t, key) in points {
                let id = id_of.get(key).ok_or_else(|| {
                    Error::Domain(format!("endpoint {key} is not in the combination universe"))
                })?;
                seg.push((*t, *id));
            }
            segments.insert(*n, seg);
        }
        let pairs = universe
            .pairs()
            .iter()
            .enumerate()
            .map(|(i, (a, b))| ((id_of[a], id_of[b]), i))
            .collect();
        Ok(KeyTable {
            segments,
            pairs,
            symmetric: universe.is_symmetric(),
        })
    }

    fn key(&self, node: NodeIdx, t: TimeInstant) -> Option<u32> {
        let seg = self.segments.get(&node)?;
        let i = seg.partition_point(|(from, _)| *from <= t);
        seg.get(i.checked_sub(1)?).map(|(_, id)| *id)
    }

    fn pair(&self, mut s: u32, mut d: u32) -> Option<usize> {
        if self.symmetric && d < s {
            std::mem::swap(&mut s, &mut d);
        }
        self.pairs.get(&(s, d)).copied()
    }
}

/// Window lengths `L` in `1..=r` for which `edge` belongs to the event graph.
fn length_range(
    edge: &Edge,
    r: TimeInstant,
    kind: EventKind,
    sem: Semantics,
) -> Option<(usize, usize)> {
    let max = r.index();
    let prev = TimeInstant(r.0 - 1);
    let present = edge.existence.contains(r);
    let run = edge.existence.run_ending_at(prev);
    let gap = edge
        .existence
        .latest_at_or_before(prev)
        .map(|t| (r.0 - t.0) as usize);
    let (lo, hi) = match (kind, sem, present) {
        (EventKind::Stability, Semantics::Strict, true) => (1, run),
        (EventKind::Stability, Semantics::Loose, true) => (gap?, max),
        (EventKind::Growth, Semantics::Strict, true) => (run + 1, max),
        (EventKind::Growth, Semantics::Loose, true) => (1, gap.map_or(max, |d| d - 1)),
        (EventKind::Shrinkage, Semantics::Strict, false) => (1, run),
        (EventKind::Shrinkage, Semantics::Loose, false) => (gap?, max),
        _ => return None,
    };
    (lo <= hi).then_some((lo, hi))
}

fn sweep_reference(
    g: &TemporalPropertyGraph,
    query: &Query,
    edges: &[&Edge],
    keys: &KeyTable,
    dims: usize,
    r: TimeInstant,
) -> Result<Vec<SkylineTuple>> {
    let max = r.index();
    // diff[pair * (max + 2) + L]
    let stride = max + 2;
    let mut diff = vec![0i64; dims * stride];
    for edge in edges {
        let Some((lo, hi)) = length_range(edge, r, query.kind, query.semantics) else {
            continue;
        };
        let widest = Window::preceding(r, hi)?;
        let classify = |n: NodeIdx| {
            classification_instant(g, n, r, widest)
                .and_then(|t| keys.key(n, t))
                .ok_or_else(|| {
                    Error::Schema(format!(
                        "cannot classify node {:?} at reference {r}",
                        g.node(n).id
                    ))
                })
        };
        let (s, d) = (classify(edge.src)?, classify(edge.dst)?);
        let p = keys.pair(s, d).ok_or_else(|| {
            Error::Domain(format!(
                "edge {:?} falls outside the combination universe",
                edge.label
            ))
        })?;
        diff[p * stride + lo] += 1;
        diff[p * stride + hi + 1] -= 1;
    }
    let mut by_len = vec![vec![0u64; dims]; max + 1];
    for p in 0..dims {
        let mut acc = 0i64;
        for (len, counts) in by_len.iter_mut().enumerate().skip(1) {
            acc += diff[p * stride + len];
            counts[p] = acc as u64;
        }
    }
    let lengths: Box<dyn Iterator<Item = usize>> = match query.direction() {
        CountDirection::Decreasing => Box::new((1..=max).rev()),
        CountDirection::Increasing => Box::new(1..=max),
    };
    lengths
        .map(|len| {
            Ok(SkylineTuple {
                reference: r,
                window: Window::preceding(r, len)?,
                counts: CountVector {
                    counts: std::mem::take(&mut by_len[len]),
                    length: len,
                },
            })
        })
        .collect()
}

pub(super) fn sweep(
    g: &TemporalPropertyGraph,
    query: &Query,
    universe: &CombinationUniverse,
) -> Result<Vec<SkylineTuple>> {
    if g.horizon_len() < 2 {
        return Ok(Vec::new());
    }
    let edges: Vec<&Edge> = g
        .edges()
        .iter()
        .filter(|e| e.label == query.edge_label)
        .collect();
    let keys = KeyTable::new(g, &edges, universe)?;
    let per_reference: Vec<Vec<SkylineTuple>> = (1..g.horizon_len() as u32)
        .into_par_iter()
        .map(|r| sweep_reference(g, query, &edges, &keys, universe.len(), TimeInstant(r)))
        .collect::<Result<_>>()?;
    Ok(per_reference.into_iter().flatten().collect())
}
