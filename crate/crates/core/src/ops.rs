//! Set operators over element sets and the stability, growth and shrinkage
//! event graphs of a reference point against its preceding window.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ElementSet, GraphView, NodeIdx, Semantics, TemporalPropertyGraph};
use crate::time::{TemporalElement, TimeInstant, Window};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    /// Elements present both in the window and at the reference point.
    Stability,
    /// Elements present at the reference point but not in the window.
    Growth,
    /// Elements present in the window but gone at the reference point.
    Shrinkage,
}

impl EventKind {
    pub const ALL: [EventKind; 3] = [
        EventKind::Stability,
        EventKind::Growth,
        EventKind::Shrinkage,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EventKind::Stability => "stability",
            EventKind::Growth => "growth",
            EventKind::Shrinkage => "shrinkage",
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for EventKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stability" => Ok(EventKind::Stability),
            "growth" => Ok(EventKind::Growth),
            "shrinkage" => Ok(EventKind::Shrinkage),
            other => Err(Error::Domain(format!("unknown event {other:?}"))),
        }
    }
}

/// How an event count moves as the preceding window grows into the past.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountDirection {
    /// Counts never drop as the window grows; short windows are preferred.
    Increasing,
    /// Counts never rise as the window grows; long windows are preferred.
    Decreasing,
}

pub fn count_direction(kind: EventKind, sem: Semantics) -> CountDirection {
    use CountDirection::*;
    match (kind, sem) {
        (EventKind::Stability, Semantics::Strict) => Decreasing,
        (EventKind::Stability, Semantics::Loose) => Increasing,
        (EventKind::Growth, Semantics::Strict) => Increasing,
        (EventKind::Growth, Semantics::Loose) => Decreasing,
        (EventKind::Shrinkage, Semantics::Strict) => Decreasing,
        (EventKind::Shrinkage, Semantics::Loose) => Increasing,
    }
}

pub fn graph_union(a: &ElementSet, b: &ElementSet) -> ElementSet {
    a.union(b)
}

pub fn graph_intersection(a: &ElementSet, b: &ElementSet) -> ElementSet {
    a.intersection(b)
}

pub fn graph_difference(a: &ElementSet, b: &ElementSet) -> ElementSet {
    a.difference(b)
}

/// The elements affected by an event at `reference` with respect to `window`.
///
/// Edges in a difference may outlive one of their endpoints' event membership
/// (an edge is deleted while both nodes persist). Such edges stay in the
/// edge set, and every endpoint gets an entry in `value_instants`, so
/// aggregation can classify it.
#[derive(Clone, Debug)]
pub struct EventGraph<'g> {
    graph: &'g TemporalPropertyGraph,
    pub kind: EventKind,
    pub semantics: Semantics,
    pub reference: TimeInstant,
    pub window: Window,
    pub elements: ElementSet,
    value_instants: BTreeMap<NodeIdx, TimeInstant>,
}

impl GraphView for EventGraph<'_> {
    fn graph(&self) -> &TemporalPropertyGraph {
        self.graph
    }

    fn elements(&self) -> &ElementSet {
        &self.elements
    }

    fn value_instant(&self, node: NodeIdx) -> Option<TimeInstant> {
        self.value_instants.get(&node).copied()
    }
}

/// Where a node's properties are read in an event graph: at the reference
/// point when the node exists there, else at its latest instant in the window.
pub fn classification_instant(
    g: &TemporalPropertyGraph,
    node: NodeIdx,
    reference: TimeInstant,
    window: Window,
) -> Option<TimeInstant> {
    let existence = &g.node(node).existence;
    if existence.contains(reference) {
        return Some(reference);
    }
    existence
        .latest_at_or_before(window.end)
        .filter(|t| *t >= window.start)
}

pub fn event_graph<'g>(
    g: &'g TemporalPropertyGraph,
    kind: EventKind,
    reference: TimeInstant,
    window: &TemporalElement,
    sem: Semantics,
) -> Result<EventGraph<'g>> {
    g.check_instant(reference)?;
    let win = Window::from_element(reference, window)?;
    let current = g.snapshot(reference)?.elements;
    let before = g.combine(window, sem)?;
    let elements = match kind {
        EventKind::Stability => graph_intersection(&current, &before),
        EventKind::Growth => graph_difference(&current, &before),
        EventKind::Shrinkage => graph_difference(&before, &current),
    };
    let mut value_instants = BTreeMap::new();
    let endpoints = elements.edges.iter().flat_map(|&e| {
        let edge = g.edge(e);
        [edge.src, edge.dst]
    });
    for n in elements.nodes.iter().copied().chain(endpoints) {
        if let std::collections::btree_map::Entry::Vacant(slot) = value_instants.entry(n) {
            if let Some(t) = classification_instant(g, n, reference, win) {
                slot.insert(t);
            }
        }
    }
    Ok(EventGraph {
        graph: g,
        kind,
        semantics: sem,
        reference,
        window: win,
        elements,
        value_instants,
    })
}
