//! Evolution skylines over temporal property graphs.
//!
//! A [`TemporalPropertyGraph`] records when nodes and edges exist and how
//! node properties change over a discrete horizon. Event graphs
//! ([`event_graph`]) compare a reference snapshot with a preceding window,
//! [`aggregate`] groups them by property combinations, and
//! [`Exploration`] finds the (reference point, window) pairs that are not
//! dominated in window length and per-combination event counts.

pub mod aggregate;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod ingest;
pub mod ops;
pub mod report;
pub mod skyline;
pub mod synth;
pub mod time;

pub use aggregate::{
    aggregate, count, count_vector, AggregatedGraph, AggregationSpec, Combination,
    CombinationUniverse, CountVector, EndpointKey,
};
pub use error::{Error, Result};
pub use graph::{
    ElementSet, GraphBuilder, GraphView, Semantics, Snapshot, TemporalPropertyGraph, Violation,
    ViolationKind,
};
pub use ops::{count_direction, event_graph, CountDirection, EventGraph, EventKind};
pub use skyline::{
    brute_force_skyline, dominates, top_k, Exploration, Query, Selection, SkylineResult,
    SkylineTuple, TupleId,
};
pub use time::{Interval, TemporalElement, TimeInstant, Window};
