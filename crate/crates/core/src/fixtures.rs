//! Small hand-built graphs used by tests, docs and the CLI examples.

use crate::graph::{GraphBuilder, TemporalPropertyGraph};
use crate::time::{Interval, TimeInstant};

// id, lifespan (time points), static value, per-instant values
type Row<'a> = (&'a str, (u32, u32), &'a str, &'a [&'a str]);

/// A bibliographic network over time points `1..=3` (instants `0..=2`).
///
/// Authors carry a static `gender` and a time-varying `#publications`;
/// conferences carry a static `topic` and a time-varying `location`.
/// `collaborate` is symmetric, `publish` goes author → conference.
/// The same graph ships as CSV under `fixtures/toy/`.
pub fn bibliographic_toy() -> TemporalPropertyGraph {
    let mut b = GraphBuilder::with_time_labels(vec!["1".into(), "2".into(), "3".into()]);
    b.symmetric("collaborate");
    let iv = |a: u32, z: u32| Interval::new(a - 1, z - 1).unwrap();

    let authors: [Row; 5] = [
        ("1", (1, 2), "male", &["1", "2"]),
        ("2", (1, 3), "male", &["1", "1", "2"]),
        ("3", (2, 3), "female", &["1", "1"]),
        ("6", (1, 3), "female", &["1", "2", "1"]),
        ("7", (3, 3), "male", &["1"]),
    ];
    for (id, (s, e), gender, pubs) in authors {
        b.node(id, "author", iv(s, e)).unwrap();
        b.static_prop(id, "gender", gender).unwrap();
        for (k, v) in pubs.iter().enumerate() {
            b.tv_prop(id, "#publications", TimeInstant(s - 1 + k as u32), v)
                .unwrap();
        }
    }
    let conferences: [Row; 2] = [
        ("4", (1, 3), "data mining", &["Athens", "Paris", "Rome"]),
        ("5", (2, 3), "data mining", &["Lyon", "Porto"]),
    ];
    for (id, (s, e), topic, locations) in conferences {
        b.node(id, "conference", iv(s, e)).unwrap();
        b.static_prop(id, "topic", topic).unwrap();
        for (k, v) in locations.iter().enumerate() {
            b.tv_prop(id, "location", TimeInstant(s - 1 + k as u32), v)
                .unwrap();
        }
    }

    b.edge("1", "2", "collaborate", iv(1, 2))
        .edge("2", "6", "collaborate", iv(1, 3))
        .edge("2", "3", "collaborate", iv(3, 3))
        .edge("1", "5", "publish", iv(2, 2))
        .edge("2", "4", "publish", iv(1, 1))
        .edge("2", "4", "publish", iv(3, 3))
        .edge("2", "5", "publish", iv(2, 3))
        .edge("7", "5", "publish", iv(3, 3))
        .edge("6", "4", "publish", iv(1, 2))
        .edge("3", "5", "publish", iv(2, 2));
    b.build().expect("toy graph is well formed")
}
