//! Random and synthetic temporal property graphs for tests and benchmarks.

use std::collections::HashMap;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::aggregate::AggregationSpec;
use crate::graph::{GraphBuilder, Semantics, TemporalPropertyGraph};
use crate::ops::EventKind;
use crate::skyline::Query;
use crate::time::{Interval, TemporalElement, TimeInstant};

/// Bounds for [`random_graph`].
#[derive(Clone, Debug)]
pub struct RandomGraphParams {
    pub max_instants: usize,
    pub max_nodes: usize,
    pub max_edge_instants: usize,
    /// Inclusive range of distinct values per property.
    pub values: (usize, usize),
}

impl Default for RandomGraphParams {
    fn default() -> Self {
        RandomGraphParams {
            max_instants: 12,
            max_nodes: 30,
            max_edge_instants: 120,
            values: (2, 3),
        }
    }
}

/// A small valid graph of `person` nodes with a static `gender` and a
/// time-varying `level`, joined by `link` edges (symmetric in about a third
/// of the graphs).
pub fn random_graph<R: Rng>(rng: &mut R, params: &RandomGraphParams) -> TemporalPropertyGraph {
    let horizon = rng.random_range(2..=params.max_instants.max(2));
    let n = rng.random_range(2..=params.max_nodes.max(2));
    let genders = rng.random_range(params.values.0..=params.values.1);
    let levels = rng.random_range(params.values.0..=params.values.1);
    let mut b = GraphBuilder::new(horizon);
    let symmetric = rng.random_bool(1.0 / 3.0);
    if symmetric {
        b.symmetric("link");
    }
    let last = horizon as u32 - 1;
    let mut existence = Vec::with_capacity(n);
    for i in 0..n {
        let id = format!("n{i:02}");
        let mut ivs = Vec::new();
        for k in 0..rng.random_range(1..=2) {
            // the first two nodes share instant 0 so an edge can always exist
            let s = if i < 2 && k == 0 {
                0
            } else {
                rng.random_range(0..=last)
            };
            let e = rng.random_range(s..=last);
            ivs.push(Interval::new(s, e).unwrap());
        }
        let te = TemporalElement::from_intervals(ivs);
        for iv in te.intervals() {
            b.node(&id, "person", *iv).unwrap();
        }
        b.static_prop(&id, "gender", &format!("g{}", rng.random_range(0..genders)))
            .unwrap();
        let mut level = rng.random_range(0..levels);
        for t in te.instants() {
            if rng.random_bool(0.3) {
                level = rng.random_range(0..levels);
            }
            b.tv_prop(&id, "level", t, &format!("l{level}")).unwrap();
        }
        existence.push((id, te));
    }
    let mut budget = rng.random_range(1..=params.max_edge_instants.max(1));
    let mut attempts = 0;
    while budget > 0 && attempts < 4 * params.max_edge_instants {
        attempts += 1;
        let (s, d) = (rng.random_range(0..n), rng.random_range(0..n));
        if s == d {
            continue;
        }
        let alive: Vec<TimeInstant> = existence[s]
            .1
            .intersection(&existence[d].1)
            .instants()
            .collect();
        if alive.is_empty() {
            continue;
        }
        let start = rng.random_range(0..alive.len());
        let take = rng.random_range(1..=4).min(budget).min(alive.len() - start);
        for &t in &alive[start..start + take] {
            b.edge(&existence[s].0, &existence[d].0, "link", Interval::point(t));
        }
        budget -= take;
    }
    if budget > 0 && attempts >= 4 * params.max_edge_instants {
        // make sure the label occurs at least once
        let (a, z) = (&existence[0], &existence[1]);
        b.edge(&a.0, &z.0, "link", Interval::point(0));
    }
    b.build()
        .expect("random graphs reference declared nodes only")
}

/// An aggregation spec for a [`random_graph`]: by `gender`, by `level`, or
/// by both.
pub fn random_spec<R: Rng>(rng: &mut R) -> AggregationSpec {
    let props: &[&str] = match rng.random_range(0..3) {
        0 => &["gender"],
        1 => &["level"],
        _ => &["gender", "level"],
    };
    AggregationSpec::new(["person"], props.iter().copied())
}

/// One query per valid (event, semantics) pair over the `link` label.
pub fn all_queries(spec: &AggregationSpec) -> Vec<Query> {
    EventKind::ALL
        .iter()
        .flat_map(|&kind| {
            Semantics::ALL.iter().map(move |&semantics| Query {
                kind,
                semantics,
                edge_label: "link".into(),
                spec: spec.clone(),
            })
        })
        .collect()
}

/// Per-instant sizes for [`synthetic_bibliographic`].
#[derive(Clone, Debug)]
pub struct SyntheticParams {
    pub time_labels: Vec<String>,
    pub authors: Vec<usize>,
    pub conferences: Vec<usize>,
    pub collaborations: Vec<usize>,
    pub publications: Vec<usize>,
    /// Probability that an author or edge active at `t - 1` stays active.
    pub persistence: f64,
    pub topics: usize,
    pub locations: usize,
}

impl SyntheticParams {
    /// Per-year sizes of a 21-year bibliographic network (2000..=2020).
    pub fn bibliographic() -> Self {
        SyntheticParams {
            time_labels: (2000..=2020).map(|y| y.to_string()).collect(),
            authors: vec![
                1708, 2165, 1761, 2827, 3278, 4466, 4730, 5193, 5501, 5363, 6236, 6535, 6769, 7457,
                7035, 8581, 8966, 9660, 11037, 12377, 12996,
            ],
            conferences: vec![
                15, 18, 20, 19, 24, 25, 25, 25, 23, 27, 27, 29, 25, 29, 27, 28, 28, 32, 35, 34, 28,
            ],
            collaborations: vec![
                2336, 2949, 2458, 4130, 4821, 7145, 7296, 7620, 8528, 8740, 10163, 10090, 11871,
                12989, 12072, 15844, 16873, 18470, 21197, 27455, 28546,
            ],
            publications: vec![
                1902, 2402, 2067, 3188, 3789, 5266, 5553, 6140, 6419, 6445, 7278, 7874, 7954, 8891,
                8338, 10205, 10617, 11538, 13463, 15203, 16246,
            ],
            persistence: 0.5,
            topics: 16,
            locations: 50,
        }
    }

    /// Divides every size by `factor` (at least one element per instant).
    pub fn scaled_down(mut self, factor: usize) -> Self {
        let f = factor.max(1);
        for v in [
            &mut self.authors,
            &mut self.collaborations,
            &mut self.publications,
        ] {
            v.iter_mut().for_each(|x| *x = (*x / f).max(1));
        }
        self
    }
}

/// A bibliographic network with the shape of `params`: `author` nodes
/// (static `gender`, time-varying `#publications`), `conference` nodes
/// (static `topic`, time-varying `location`), directed `collaborate` and
/// `publish` edges.
pub fn synthetic_bibliographic<R: Rng>(
    rng: &mut R,
    params: &SyntheticParams,
) -> TemporalPropertyGraph {
    let horizon = params.time_labels.len();
    let mut b = GraphBuilder::with_time_labels(params.time_labels.clone());
    b.bind("gender", "author")
        .bind("#publications", "author")
        .bind("topic", "conference")
        .bind("location", "conference");
    const PUBS: [&str; 3] = ["low", "average", "high"];

    let mut next_author = 0usize;
    let mut active: Vec<usize> = Vec::new();
    let mut conf_count = 0usize;
    let mut collab_prev: Vec<(usize, usize)> = Vec::new();
    let mut publish_prev: Vec<(usize, usize)> = Vec::new();
    let mut edge_instants: HashMap<(usize, usize, bool), Vec<u32>> = HashMap::new();
    let author_id = |i: usize| format!("a{i}");
    let conf_id = |i: usize| format!("c{i}");

    for t in 0..horizon {
        let ti = TimeInstant(t as u32);
        let target = params.authors[t];
        let mut now: Vec<usize> = active
            .iter()
            .copied()
            .filter(|_| rng.random_bool(params.persistence))
            .take(target)
            .collect();
        while now.len() < target {
            now.push(next_author);
            b.static_prop(
                &author_id(next_author),
                "gender",
                if rng.random_bool(0.3) {
                    "female"
                } else {
                    "male"
                },
            )
            .unwrap();
            next_author += 1;
        }
        for &a in &now {
            let id = author_id(a);
            b.node(&id, "author", Interval::point(ti)).unwrap();
            b.tv_prop(&id, "#publications", ti, PUBS.choose(rng).unwrap())
                .unwrap();
        }
        let confs = params.conferences[t];
        while conf_count < confs {
            b.static_prop(
                &conf_id(conf_count),
                "topic",
                &format!("topic{}", rng.random_range(0..params.topics)),
            )
            .unwrap();
            conf_count += 1;
        }
        for c in 0..confs {
            let id = conf_id(c);
            b.node(&id, "conference", Interval::point(ti)).unwrap();
            b.tv_prop(
                &id,
                "location",
                ti,
                &format!("loc{}", rng.random_range(0..params.locations)),
            )
            .unwrap();
        }

        let alive: std::collections::HashSet<usize> = now.iter().copied().collect();
        let emit =
            |prev: &mut Vec<(usize, usize)>,
             want: usize,
             collab: bool,
             rng: &mut R,
             edge_instants: &mut HashMap<(usize, usize, bool), Vec<u32>>| {
                let mut cur: Vec<(usize, usize)> = prev
                    .iter()
                    .copied()
                    .filter(|(s, d)| {
                        alive.contains(s)
                            && (if collab {
                                alive.contains(d)
                            } else {
                                *d < confs
                            })
                    })
                    .filter(|_| rng.random_bool(params.persistence))
                    .take(want)
                    .collect();
                let mut tries = 0;
                while cur.len() < want && tries < want * 4 {
                    tries += 1;
                    let s = *now.choose(rng).unwrap();
                    let d = if collab {
                        *now.choose(rng).unwrap()
                    } else {
                        rng.random_range(0..confs)
                    };
                    if collab && s == d {
                        continue;
                    }
                    cur.push((s, d));
                }
                cur.sort_unstable();
                cur.dedup();
                for &(s, d) in &cur {
                    edge_instants
                        .entry((s, d, collab))
                        .or_default()
                        .push(t as u32);
                }
                *prev = cur;
            };
        emit(
            &mut collab_prev,
            params.collaborations[t],
            true,
            rng,
            &mut edge_instants,
        );
        emit(
            &mut publish_prev,
            params.publications[t],
            false,
            rng,
            &mut edge_instants,
        );
        active = now;
    }
    let mut keys: Vec<_> = edge_instants.into_iter().collect();
    keys.sort();
    for ((s, d, collab), instants) in keys {
        let (dst, label) = if collab {
            (author_id(d), "collaborate")
        } else {
            (conf_id(d), "publish")
        };
        for iv in TemporalElement::from_instants(instants.into_iter().map(TimeInstant)).intervals()
        {
            b.edge(&author_id(s), &dst, label, *iv);
        }
    }
    b.build()
        .expect("synthetic graphs reference declared nodes only")
}
