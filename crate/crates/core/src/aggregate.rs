//! Grouping nodes by property-value combination into weighted aggregate
//! graphs, and counting event edges per ordered combination pair.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GraphView, NodeIdx, TemporalPropertyGraph};
use crate::ops::EventGraph;
use crate::time::TimeInstant;

/// Node labels to group, and the properties to group them by.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AggregationSpec {
    pub labels: BTreeSet<String>,
    pub props: Vec<String>,
}

/// `(property, value)` pairs, in the spec's property order, for the
/// properties a node's label carries.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Combination(pub Vec<(String, String)>);

impl Combination {
    pub fn of<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        Combination(
            pairs
                .into_iter()
                .map(|(p, v)| (p.to_string(), v.to_string()))
                .collect(),
        )
    }
}

impl fmt::Display for Combination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (_, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            f.write_str(v)?;
        }
        Ok(())
    }
}

/// What an edge endpoint becomes in the aggregate graph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndpointKey {
    /// An aggregated node.
    Group(Combination),
    /// A node whose label is not aggregated, by id.
    Node(String),
}

impl EndpointKey {
    pub fn group<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        EndpointKey::Group(Combination::of(pairs))
    }
}

impl fmt::Display for EndpointKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EndpointKey::Group(c) => c.fmt(f),
            EndpointKey::Node(id) => write!(f, "#{id}"),
        }
    }
}

impl AggregationSpec {
    pub fn new<L, P>(labels: L, props: P) -> Self
    where
        L: IntoIterator,
        L::Item: Into<String>,
        P: IntoIterator,
        P::Item: Into<String>,
    {
        AggregationSpec {
            labels: labels.into_iter().map(Into::into).collect(),
            props: props.into_iter().map(Into::into).collect(),
        }
    }

    /// Groups every label that carries one of `props`.
    pub fn by_props<P>(g: &TemporalPropertyGraph, props: P) -> Result<Self>
    where
        P: IntoIterator,
        P::Item: Into<String>,
    {
        let props: Vec<String> = props.into_iter().map(Into::into).collect();
        let labels = g
            .bindings()
            .iter()
            .filter(|(_, carried)| props.iter().any(|p| carried.contains(p)))
            .map(|(l, _)| l.clone())
            .collect();
        let spec = AggregationSpec { labels, props };
        spec.check(g)?;
        Ok(spec)
    }

    /// Every property must be carried by some grouped label, and every
    /// grouped label must carry at least one property.
    pub fn check(&self, g: &TemporalPropertyGraph) -> Result<()> {
        let carried = |l: &str| g.bindings().get(l);
        for prop in &self.props {
            if !self
                .labels
                .iter()
                .any(|l| carried(l).is_some_and(|c| c.contains(prop)))
            {
                return Err(Error::Schema(format!(
                    "property {prop:?} is not carried by any of the labels {:?}",
                    self.labels
                )));
            }
        }
        for label in &self.labels {
            if !self
                .props
                .iter()
                .any(|p| carried(label).is_some_and(|c| c.contains(p)))
            {
                return Err(Error::Schema(format!(
                    "label {label:?} carries none of the properties {:?}",
                    self.props
                )));
            }
        }
        Ok(())
    }

    fn carried<'a>(
        &'a self,
        g: &'a TemporalPropertyGraph,
        label: &str,
    ) -> impl Iterator<Item = &'a str> {
        let bound = g.bindings().get(label);
        self.props
            .iter()
            .filter(move |p| bound.is_some_and(|b| b.contains(*p)))
            .map(String::as_str)
    }

    /// The aggregate endpoint of `node` with its properties read at `t`.
    pub fn endpoint_key(
        &self,
        g: &TemporalPropertyGraph,
        node: NodeIdx,
        t: TimeInstant,
    ) -> Result<EndpointKey> {
        let n = g.node(node);
        if !self.labels.contains(&n.label) {
            return Ok(EndpointKey::Node(n.id.clone()));
        }
        let mut pairs = Vec::new();
        for prop in self.carried(g, &n.label) {
            let value = n.value_at(prop, t).ok_or_else(|| {
                Error::Schema(format!(
                    "node {:?} has no value for {prop:?} at instant {t}",
                    n.id
                ))
            })?;
            pairs.push((prop.to_string(), value.to_string()));
        }
        Ok(EndpointKey::Group(Combination(pairs)))
    }

    /// True when the key of `node` can change over time.
    pub(crate) fn is_time_varying(&self, g: &TemporalPropertyGraph, node: NodeIdx) -> bool {
        let n = g.node(node);
        self.labels.contains(&n.label)
            && self
                .carried(g, &n.label)
                .any(|p| !n.static_props.contains_key(p))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassthroughNode {
    pub label: String,
    pub props: BTreeMap<String, String>,
    pub weight: u64,
}

/// A graph aggregated by a spec: grouped nodes, pass-through nodes and
/// grouped edges, all weighted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AggregatedGraph {
    pub groups: BTreeMap<Combination, u64>,
    pub passthrough: BTreeMap<String, PassthroughNode>,
    pub edges: BTreeMap<(String, EndpointKey, EndpointKey), u64>,
}

impl AggregatedGraph {
    pub fn group_weight(&self, c: &Combination) -> u64 {
        self.groups.get(c).copied().unwrap_or(0)
    }

    /// Weight of the grouped edge, 0 when absent.
    pub fn edge_weight(&self, label: &str, src: &EndpointKey, dst: &EndpointKey) -> u64 {
        self.edges
            .get(&(label.to_string(), src.clone(), dst.clone()))
            .copied()
            .unwrap_or(0)
    }

    pub fn node_weight_total(&self) -> u64 {
        self.groups.values().sum::<u64>() + self.passthrough.values().map(|p| p.weight).sum::<u64>()
    }

    pub fn edge_weight_total(&self) -> u64 {
        self.edges.values().sum()
    }
}

fn key_at(view: &impl GraphView, spec: &AggregationSpec, node: NodeIdx) -> Result<EndpointKey> {
    let g = view.graph();
    let t = view.value_instant(node).ok_or_else(|| {
        Error::Schema(format!(
            "node {:?} has no instant to read properties at",
            g.node(node).id
        ))
    })?;
    spec.endpoint_key(g, node, t)
}

fn ordered(
    g: &TemporalPropertyGraph,
    label: &str,
    a: EndpointKey,
    b: EndpointKey,
) -> (EndpointKey, EndpointKey) {
    if g.is_symmetric(label) && b < a {
        (b, a)
    } else {
        (a, b)
    }
}

pub fn aggregate(view: &impl GraphView, spec: &AggregationSpec) -> Result<AggregatedGraph> {
    let g = view.graph();
    spec.check(g)?;
    let mut out = AggregatedGraph::default();
    for &n in &view.elements().nodes {
        match key_at(view, spec, n)? {
            EndpointKey::Group(c) => *out.groups.entry(c).or_insert(0) += 1,
            EndpointKey::Node(id) => {
                let node = g.node(n);
                let t = view.value_instant(n);
                let mut props = node.static_props.clone();
                if let Some(t) = t {
                    for (p, values) in &node.tv_props {
                        if let Some(v) = values.get(&t) {
                            props.insert(p.clone(), v.clone());
                        }
                    }
                }
                out.passthrough.insert(
                    id,
                    PassthroughNode {
                        label: node.label.clone(),
                        props,
                        weight: 1,
                    },
                );
            }
        }
    }
    for &e in &view.elements().edges {
        let edge = g.edge(e);
        let (s, d) = ordered(
            g,
            &edge.label,
            key_at(view, spec, edge.src)?,
            key_at(view, spec, edge.dst)?,
        );
        *out.edges.entry((edge.label.clone(), s, d)).or_insert(0) += 1;
    }
    Ok(out)
}

/// The fixed set of endpoint pairs a count vector is indexed by: the cross
/// product of the keys observed over the whole horizon on the source side and
/// on the target side of an edge label (unordered pairs for symmetric labels).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinationUniverse {
    edge_label: String,
    spec: AggregationSpec,
    symmetric: bool,
    pairs: Vec<(EndpointKey, EndpointKey)>,
    index: HashMap<(EndpointKey, EndpointKey), usize>,
}

impl CombinationUniverse {
    pub fn new(
        g: &TemporalPropertyGraph,
        edge_label: &str,
        spec: &AggregationSpec,
    ) -> Result<Self> {
        spec.check(g)?;
        let mut sources = BTreeSet::new();
        let mut targets = BTreeSet::new();
        let mut seen = false;
        let mut src_nodes = BTreeSet::new();
        let mut dst_nodes = BTreeSet::new();
        for e in g.edges().iter().filter(|e| e.label == edge_label) {
            seen = true;
            src_nodes.insert(e.src);
            dst_nodes.insert(e.dst);
        }
        if !seen {
            return Err(Error::Domain(format!(
                "edge label {edge_label:?} does not occur"
            )));
        }
        let keys_of = |node: NodeIdx, into: &mut BTreeSet<EndpointKey>| -> Result<()> {
            let existence = &g.node(node).existence;
            if spec.is_time_varying(g, node) {
                for t in existence.instants() {
                    into.insert(spec.endpoint_key(g, node, t)?);
                }
            } else if let Some(t) = existence.first() {
                into.insert(spec.endpoint_key(g, node, t)?);
            }
            Ok(())
        };
        // Grouped labels contribute every value observed on any node of that
        // label; pass-through labels only the nodes the edge label touches.
        let side = |touching: &BTreeSet<NodeIdx>, into: &mut BTreeSet<EndpointKey>| -> Result<()> {
            let labels: BTreeSet<&str> =
                touching.iter().map(|&n| g.node(n).label.as_str()).collect();
            for (i, node) in g.nodes().iter().enumerate() {
                let i = i as NodeIdx;
                let grouped =
                    spec.labels.contains(&node.label) && labels.contains(node.label.as_str());
                if grouped || touching.contains(&i) {
                    keys_of(i, into)?;
                }
            }
            Ok(())
        };
        side(&src_nodes, &mut sources)?;
        side(&dst_nodes, &mut targets)?;
        let symmetric = g.is_symmetric(edge_label);
        let pairs: Vec<(EndpointKey, EndpointKey)> = if symmetric {
            let all: Vec<EndpointKey> = sources.union(&targets).cloned().collect();
            let mut v = Vec::new();
            for (i, a) in all.iter().enumerate() {
                for b in &all[i..] {
                    v.push((a.clone(), b.clone()));
                }
            }
            v
        } else {
            sources
                .iter()
                .flat_map(|a| targets.iter().map(move |b| (a.clone(), b.clone())))
                .collect()
        };
        let index = pairs
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        Ok(CombinationUniverse {
            edge_label: edge_label.to_string(),
            spec: spec.clone(),
            symmetric,
            pairs,
            index,
        })
    }

    pub fn edge_label(&self) -> &str {
        &self.edge_label
    }

    pub fn spec(&self) -> &AggregationSpec {
        &self.spec
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn pairs(&self) -> &[(EndpointKey, EndpointKey)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Position of `(src, dst)`; symmetric universes accept either order.
    pub fn position(&self, src: &EndpointKey, dst: &EndpointKey) -> Option<usize> {
        let key = if self.symmetric && dst < src {
            (dst.clone(), src.clone())
        } else {
            (src.clone(), dst.clone())
        };
        self.index.get(&key).copied()
    }

    pub fn pair_name(&self, i: usize) -> String {
        let (a, b) = &self.pairs[i];
        if self.symmetric {
            format!("{a}~{b}")
        } else {
            format!("{a}->{b}")
        }
    }

    pub fn pair_names(&self) -> Vec<String> {
        (0..self.len()).map(|i| self.pair_name(i)).collect()
    }
}

/// Event edge counts for every pair of a universe, with the window length.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CountVector {
    pub counts: Vec<u64>,
    pub length: usize,
}

impl CountVector {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Edges of the universe's label in `view` whose endpoints classify as
/// `src` and `dst`.
pub fn count(
    view: &impl GraphView,
    universe: &CombinationUniverse,
    src: &EndpointKey,
    dst: &EndpointKey,
) -> Result<u64> {
    let target = universe.position(src, dst).ok_or_else(|| {
        Error::Domain(format!("({src}, {dst}) is not in the combination universe"))
    })?;
    let g = view.graph();
    let mut n = 0;
    for &e in &view.elements().edges {
        let edge = g.edge(e);
        if edge.label != universe.edge_label {
            continue;
        }
        let s = key_at(view, &universe.spec, edge.src)?;
        let d = key_at(view, &universe.spec, edge.dst)?;
        if universe.position(&s, &d) == Some(target) {
            n += 1;
        }
    }
    Ok(n)
}

pub fn count_vector(ev: &EventGraph<'_>, universe: &CombinationUniverse) -> Result<CountVector> {
    let g = ev.graph();
    let mut counts = vec![0u64; universe.len()];
    for &e in &ev.elements().edges {
        let edge = g.edge(e);
        if edge.label != universe.edge_label {
            continue;
        }
        let s = key_at(ev, &universe.spec, edge.src)?;
        let d = key_at(ev, &universe.spec, edge.dst)?;
        let i = universe.position(&s, &d).ok_or_else(|| {
            Error::Domain(format!("({s}, {d}) is not in the combination universe"))
        })?;
        counts[i] += 1;
    }
    Ok(CountVector {
        counts,
        length: ev.window.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::bibliographic_toy;
    use crate::graph::{GraphBuilder, Semantics};
    use crate::ops::{event_graph, EventKind};
    use crate::time::{Interval, TemporalElement};

    fn gender(v: &str) -> EndpointKey {
        EndpointKey::group([("gender", v)])
    }

    #[test]
    fn gender_aggregation_at_three() {
        let g = bibliographic_toy();
        let snap = g.snapshot(TimeInstant(2)).unwrap();
        let spec = AggregationSpec::new(["author"], ["gender"]);
        let agg = aggregate(&snap, &spec).unwrap();
        assert_eq!(agg.group_weight(&Combination::of([("gender", "male")])), 2);
        assert_eq!(
            agg.group_weight(&Combination::of([("gender", "female")])),
            2
        );
        assert_eq!(
            agg.edge_weight("collaborate", &gender("female"), &gender("male")),
            2
        );
        assert_eq!(
            agg.edge_weight("publish", &gender("male"), &EndpointKey::Node("4".into())),
            1
        );
        assert_eq!(agg.passthrough.len(), 2);
        assert_eq!(agg.passthrough["4"].weight, 1);
        assert_eq!(agg.passthrough["4"].props["location"], "Rome");
        assert_eq!(agg.node_weight_total(), snap.elements.nodes.len() as u64);
        assert_eq!(agg.edge_weight_total(), snap.elements.edges.len() as u64);
    }

    #[test]
    fn gender_topic_aggregation_at_three() {
        let g = bibliographic_toy();
        let snap = g.snapshot(TimeInstant(2)).unwrap();
        let spec = AggregationSpec::new(["author", "conference"], ["gender", "topic"]);
        let agg = aggregate(&snap, &spec).unwrap();
        let dm = EndpointKey::group([("topic", "data mining")]);
        assert_eq!(
            agg.group_weight(&Combination::of([("topic", "data mining")])),
            2
        );
        assert_eq!(agg.edge_weight("publish", &gender("male"), &dm), 3);
        assert!(agg.passthrough.is_empty());
    }

    #[test]
    fn grouping_on_unique_values_is_isomorphic() {
        let mut b = GraphBuilder::new(1);
        for id in ["a", "b", "c"] {
            b.node(id, "x", Interval::point(0)).unwrap();
            b.static_prop(id, "name", id).unwrap();
        }
        b.edge("a", "b", "e", Interval::point(0))
            .edge("b", "c", "e", Interval::point(0));
        let g = b.build().unwrap();
        let agg = aggregate(
            &g.snapshot(TimeInstant(0)).unwrap(),
            &AggregationSpec::new(["x"], ["name"]),
        )
        .unwrap();
        assert_eq!(agg.groups.len(), 3);
        assert!(agg.groups.values().all(|&w| w == 1));
        assert_eq!(agg.edges.len(), 2);
        assert!(agg.edges.values().all(|&w| w == 1));
    }

    #[test]
    fn stable_male_female_collaborations() {
        let g = bibliographic_toy();
        let w = TemporalElement::interval(0, 1).unwrap();
        let ev = event_graph(
            &g,
            EventKind::Stability,
            TimeInstant(2),
            &w,
            Semantics::Loose,
        )
        .unwrap();
        let spec = AggregationSpec::by_props(&g, ["gender"]).unwrap();
        let u = CombinationUniverse::new(&g, "collaborate", &spec).unwrap();
        assert_eq!(
            count(&ev, &u, &gender("male"), &gender("female")).unwrap(),
            1
        );
        // symmetric label: female-female, female-male, male-male
        assert_eq!(u.len(), 3);
        let v = count_vector(&ev, &u).unwrap();
        assert_eq!(v.length, 2);
        assert_eq!(
            v.counts[u.position(&gender("male"), &gender("female")).unwrap()],
            1
        );
    }

    #[test]
    fn unknown_combination_is_a_domain_error() {
        let g = bibliographic_toy();
        let spec = AggregationSpec::by_props(&g, ["gender"]).unwrap();
        let u = CombinationUniverse::new(&g, "collaborate", &spec).unwrap();
        let snap = g.snapshot(TimeInstant(0)).unwrap();
        assert!(matches!(
            count(&snap, &u, &gender("other"), &gender("male")),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn spec_must_match_schema() {
        let g = bibliographic_toy();
        assert!(matches!(
            aggregate(
                &g.snapshot(TimeInstant(0)).unwrap(),
                &AggregationSpec::new(["conference"], ["gender"])
            ),
            Err(Error::Schema(_))
        ));
    }

    // Three authors, two male and one female; edges m1->f and m1->m2 exist at
    // the reference point only, after an empty instant.
    #[test]
    fn growth_counts_on_three_node_fixture() {
        let mut b = GraphBuilder::new(2);
        for (id, gend) in [("m1", "male"), ("m2", "male"), ("f", "female")] {
            b.node(id, "author", Interval::new(0, 1).unwrap()).unwrap();
            b.static_prop(id, "gender", gend).unwrap();
        }
        b.edge("m1", "f", "e", Interval::point(1))
            .edge("m1", "m2", "e", Interval::point(1));
        let g = b.build().unwrap();
        let spec = AggregationSpec::by_props(&g, ["gender"]).unwrap();
        let u = CombinationUniverse::new(&g, "e", &spec).unwrap();
        let w = TemporalElement::interval(0, 0).unwrap();
        let ev = event_graph(&g, EventKind::Growth, TimeInstant(1), &w, Semantics::Loose).unwrap();
        let c = |a, b| count(&ev, &u, &gender(a), &gender(b)).unwrap();
        assert_eq!(c("male", "female"), 1);
        assert_eq!(c("male", "male"), 1);
        assert_eq!(c("female", "male"), 0);
        assert_eq!(c("female", "female"), 0);
        let v = count_vector(&ev, &u).unwrap();
        assert_eq!(v.total(), 2);
    }

    #[test]
    fn empty_event_graph_counts_zero() {
        let g = bibliographic_toy();
        let spec = AggregationSpec::by_props(&g, ["gender"]).unwrap();
        let u = CombinationUniverse::new(&g, "publish", &spec).unwrap();
        let w = TemporalElement::interval(0, 0).unwrap();
        let ev = event_graph(&g, EventKind::Growth, TimeInstant(1), &w, Semantics::Strict).unwrap();
        let mut empty = ev.clone();
        empty.elements = Default::default();
        let v = count_vector(&empty, &u).unwrap();
        assert!(v.counts.iter().all(|&c| c == 0));
        assert_eq!(v.counts.len(), u.len());
    }
}
