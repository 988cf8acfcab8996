//! The temporal property graph model: nodes and edges annotated with
//! existence elements, static and time-varying node properties, snapshots and
//! strict/loose combination over a temporal element.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::time::{Interval, TemporalElement, TimeInstant};

pub type NodeIdx = u32;
pub type EdgeIdx = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub id: String,
    pub label: String,
    pub existence: TemporalElement,
    pub static_props: BTreeMap<String, String>,
    pub tv_props: BTreeMap<String, BTreeMap<TimeInstant, String>>,
}

impl Node {
    /// Value of `prop` at `t`: the static value, or the time-varying value at `t`.
    pub fn value_at(&self, prop: &str, t: TimeInstant) -> Option<&str> {
        if let Some(v) = self.static_props.get(prop) {
            return Some(v);
        }
        self.tv_props.get(prop)?.get(&t).map(String::as_str)
    }

    pub fn has_prop(&self, prop: &str) -> bool {
        self.static_props.contains_key(prop) || self.tv_props.contains_key(prop)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub src: NodeIdx,
    pub dst: NodeIdx,
    pub label: String,
    pub existence: TemporalElement,
}

/// How a graph is combined over a temporal element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    /// Elements present at every instant.
    Strict,
    /// Elements present at one instant or more.
    Loose,
}

impl Semantics {
    pub const ALL: [Semantics; 2] = [Semantics::Strict, Semantics::Loose];

    pub fn name(self) -> &'static str {
        match self {
            Semantics::Strict => "strict",
            Semantics::Loose => "loose",
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Semantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Semantics::Strict),
            "loose" => Ok(Semantics::Loose),
            other => Err(Error::Domain(format!("unknown semantics {other:?}"))),
        }
    }
}

/// Sorted node and edge index sets drawn from one graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ElementSet {
    pub nodes: Vec<NodeIdx>,
    pub edges: Vec<EdgeIdx>,
}

fn merge(a: &[u32], b: &[u32], keep_a: bool, keep_b: bool, keep_both: bool) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                if keep_a {
                    out.push(a[i]);
                }
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                if keep_b {
                    out.push(b[j]);
                }
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                if keep_both {
                    out.push(a[i]);
                }
                i += 1;
                j += 1;
            }
        }
    }
    if keep_a {
        out.extend_from_slice(&a[i..]);
    }
    if keep_b {
        out.extend_from_slice(&b[j..]);
    }
    out
}

impl ElementSet {
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.edges.is_empty()
    }

    pub fn contains_node(&self, n: NodeIdx) -> bool {
        self.nodes.binary_search(&n).is_ok()
    }

    pub fn contains_edge(&self, e: EdgeIdx) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        ElementSet {
            nodes: merge(&self.nodes, &other.nodes, true, true, true),
            edges: merge(&self.edges, &other.edges, true, true, true),
        }
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        ElementSet {
            nodes: merge(&self.nodes, &other.nodes, false, false, true),
            edges: merge(&self.edges, &other.edges, false, false, true),
        }
    }

    pub fn difference(&self, other: &ElementSet) -> ElementSet {
        ElementSet {
            nodes: merge(&self.nodes, &other.nodes, true, false, false),
            edges: merge(&self.edges, &other.edges, true, false, false),
        }
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.difference(other).is_empty()
    }
}

/// Anything whose nodes can be classified by property value: a snapshot or
/// an event graph.
pub trait GraphView {
    fn graph(&self) -> &TemporalPropertyGraph;
    fn elements(&self) -> &ElementSet;
    /// The instant at which a node's time-varying properties are read.
    fn value_instant(&self, node: NodeIdx) -> Option<TimeInstant>;
}

/// The graph at a single instant.
#[derive(Clone, Debug)]
pub struct Snapshot<'g> {
    graph: &'g TemporalPropertyGraph,
    pub instant: TimeInstant,
    pub elements: ElementSet,
}

impl Snapshot<'_> {
    pub fn value(&self, node: NodeIdx, prop: &str) -> Option<&str> {
        self.graph.node(node).value_at(prop, self.instant)
    }
}

impl GraphView for Snapshot<'_> {
    fn graph(&self) -> &TemporalPropertyGraph {
        self.graph
    }

    fn elements(&self) -> &ElementSet {
        &self.elements
    }

    fn value_instant(&self, _node: NodeIdx) -> Option<TimeInstant> {
        Some(self.instant)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationKind {
    /// An edge exists at instants where one of its endpoints does not.
    ReferentialIntegrity { instants: TemporalElement },
    /// A property is missing or present at instants that disagree with existence.
    PropertyTotality { prop: String, detail: String },
    /// A node of a label that carries `prop` has no value for it at all.
    MissingProperty { prop: String },
    /// Existence reaches outside the horizon.
    OutsideHorizon,
    /// An edge names a node id that was never declared.
    UnknownEndpoint { node: String },
    /// Properties were given for a node id that was never declared.
    UnknownNode,
    /// The element never exists.
    EmptyExistence,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    /// Node id, or `src->dst:label` for edges.
    pub element: String,
    #[serde(flatten)]
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ViolationKind::ReferentialIntegrity { instants } => {
                write!(
                    f,
                    "{}: edge outlives an endpoint at {instants}",
                    self.element
                )
            }
            ViolationKind::PropertyTotality { prop, detail } => {
                write!(f, "{}: property {prop:?} {detail}", self.element)
            }
            ViolationKind::MissingProperty { prop } => {
                write!(f, "{}: missing property {prop:?}", self.element)
            }
            ViolationKind::OutsideHorizon => {
                write!(f, "{}: exists outside the horizon", self.element)
            }
            ViolationKind::UnknownEndpoint { node } => {
                write!(f, "{}: unknown endpoint {node:?}", self.element)
            }
            ViolationKind::UnknownNode => {
                write!(f, "{}: properties for an undeclared node", self.element)
            }
            ViolationKind::EmptyExistence => write!(f, "{}: never exists", self.element),
        }
    }
}

/// An immutable temporal property graph over the horizon `[0, horizon - 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemporalPropertyGraph {
    nodes: Vec<Node>,
    node_index: HashMap<String, NodeIdx>,
    edges: Vec<Edge>,
    horizon: usize,
    time_labels: Vec<String>,
    symmetric_labels: BTreeSet<String>,
    bindings: BTreeMap<String, BTreeSet<String>>,
}

impl TemporalPropertyGraph {
    pub fn horizon_len(&self) -> usize {
        self.horizon
    }

    pub fn horizon(&self) -> TemporalElement {
        TemporalElement::horizon(self.horizon)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node(&self, idx: NodeIdx) -> &Node {
        &self.nodes[idx as usize]
    }

    pub fn edge(&self, idx: EdgeIdx) -> &Edge {
        &self.edges[idx as usize]
    }

    pub fn node_idx(&self, id: &str) -> Option<NodeIdx> {
        self.node_index.get(id).copied()
    }

    pub fn find_edge(&self, src: &str, dst: &str, label: &str) -> Option<EdgeIdx> {
        let (mut s, mut d) = (self.node_idx(src)?, self.node_idx(dst)?);
        if self.is_symmetric(label) && self.node(s).id > self.node(d).id {
            std::mem::swap(&mut s, &mut d);
        }
        self.edges
            .binary_search_by(|e| (e.src, e.dst, e.label.as_str()).cmp(&(s, d, label)))
            .ok()
            .map(|i| i as EdgeIdx)
    }

    pub fn edge_display(&self, idx: EdgeIdx) -> String {
        let e = self.edge(idx);
        format!(
            "{}->{}:{}",
            self.node(e.src).id,
            self.node(e.dst).id,
            e.label
        )
    }

    pub fn time_labels(&self) -> &[String] {
        &self.time_labels
    }

    pub fn time_label(&self, t: TimeInstant) -> &str {
        &self.time_labels[t.index()]
    }

    pub fn is_symmetric(&self, edge_label: &str) -> bool {
        self.symmetric_labels.contains(edge_label)
    }

    pub fn symmetric_labels(&self) -> &BTreeSet<String> {
        &self.symmetric_labels
    }

    /// Node label → properties carried by nodes of that label.
    pub fn bindings(&self) -> &BTreeMap<String, BTreeSet<String>> {
        &self.bindings
    }

    pub fn node_labels(&self) -> BTreeSet<&str> {
        self.nodes.iter().map(|n| n.label.as_str()).collect()
    }

    pub fn edge_labels(&self) -> BTreeSet<&str> {
        self.edges.iter().map(|e| e.label.as_str()).collect()
    }

    pub(crate) fn check_instant(&self, t: TimeInstant) -> Result<()> {
        if t.index() >= self.horizon {
            return Err(Error::OutOfHorizon {
                instant: t,
                horizon: self.horizon,
            });
        }
        Ok(())
    }

    /// The elements present at `t`.
    pub fn snapshot(&self, t: TimeInstant) -> Result<Snapshot<'_>> {
        self.check_instant(t)?;
        let nodes = (0..self.nodes.len() as NodeIdx)
            .filter(|&i| self.nodes[i as usize].existence.contains(t))
            .collect();
        let edges = (0..self.edges.len() as EdgeIdx)
            .filter(|&i| self.edges[i as usize].existence.contains(t))
            .collect();
        Ok(Snapshot {
            graph: self,
            instant: t,
            elements: ElementSet { nodes, edges },
        })
    }

    /// Combines the graph over `te`: strict keeps elements present at every
    /// instant of `te`, loose keeps elements present at one instant or more.
    pub fn combine(&self, te: &TemporalElement, sem: Semantics) -> Result<ElementSet> {
        if te.is_empty() {
            return Err(Error::InvalidElement(
                "cannot combine over an empty element".into(),
            ));
        }
        if !te.is_subset(&self.horizon()) {
            return Err(Error::InvalidElement(format!(
                "{te} is not within the horizon of {} instants",
                self.horizon
            )));
        }
        let keep = |existence: &TemporalElement| match sem {
            Semantics::Strict => te.is_subset(existence),
            Semantics::Loose => existence.intersects(te),
        };
        Ok(ElementSet {
            nodes: (0..self.nodes.len() as NodeIdx)
                .filter(|&i| keep(&self.nodes[i as usize].existence))
                .collect(),
            edges: (0..self.edges.len() as EdgeIdx)
                .filter(|&i| keep(&self.edges[i as usize].existence))
                .collect(),
        })
    }

    /// Every violation of the model's side conditions; empty means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let horizon = self.horizon();
        for node in &self.nodes {
            let element = node.id.clone();
            if node.existence.is_empty() {
                out.push(Violation {
                    element: element.clone(),
                    kind: ViolationKind::EmptyExistence,
                });
            }
            if !node.existence.is_subset(&horizon) {
                out.push(Violation {
                    element: element.clone(),
                    kind: ViolationKind::OutsideHorizon,
                });
            }
            for (prop, values) in &node.tv_props {
                let at = TemporalElement::from_instants(values.keys().copied());
                if node.static_props.contains_key(prop) {
                    out.push(Violation {
                        element: element.clone(),
                        kind: ViolationKind::PropertyTotality {
                            prop: prop.clone(),
                            detail: "is both static and time-varying".into(),
                        },
                    });
                } else if at != node.existence {
                    let missing = TemporalElement::from_instants(
                        node.existence.instants().filter(|t| !at.contains(*t)),
                    );
                    let extra = TemporalElement::from_instants(
                        at.instants().filter(|t| !node.existence.contains(*t)),
                    );
                    let detail = match (missing.is_empty(), extra.is_empty()) {
                        (false, true) => format!("has no value at {missing}"),
                        (true, false) => format!("has values outside existence at {extra}"),
                        _ => format!(
                            "has no value at {missing} and values outside existence at {extra}"
                        ),
                    };
                    out.push(Violation {
                        element: element.clone(),
                        kind: ViolationKind::PropertyTotality {
                            prop: prop.clone(),
                            detail,
                        },
                    });
                }
            }
            if let Some(props) = self.bindings.get(&node.label) {
                for prop in props {
                    if !node.has_prop(prop) {
                        out.push(Violation {
                            element: element.clone(),
                            kind: ViolationKind::MissingProperty { prop: prop.clone() },
                        });
                    }
                }
            }
        }
        for (i, edge) in self.edges.iter().enumerate() {
            let element = self.edge_display(i as EdgeIdx);
            if edge.existence.is_empty() {
                out.push(Violation {
                    element: element.clone(),
                    kind: ViolationKind::EmptyExistence,
                });
            }
            if !edge.existence.is_subset(&horizon) {
                out.push(Violation {
                    element: element.clone(),
                    kind: ViolationKind::OutsideHorizon,
                });
            }
            let alive = self
                .node(edge.src)
                .existence
                .intersection(&self.node(edge.dst).existence);
            if !edge.existence.is_subset(&alive) {
                let instants = TemporalElement::from_instants(
                    edge.existence.instants().filter(|t| !alive.contains(*t)),
                );
                out.push(Violation {
                    element,
                    kind: ViolationKind::ReferentialIntegrity { instants },
                });
            }
        }
        out
    }

    /// The graph restricted to its first `n` instants.
    pub fn prefix(&self, n: usize) -> TemporalPropertyGraph {
        let n = n.min(self.horizon);
        let window = TemporalElement::horizon(n);
        let cut = TimeInstant(n as u32);
        let mut remap = vec![None; self.nodes.len()];
        let mut nodes = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            let existence = node.existence.intersection(&window);
            if existence.is_empty() {
                continue;
            }
            remap[i] = Some(nodes.len() as NodeIdx);
            nodes.push(Node {
                id: node.id.clone(),
                label: node.label.clone(),
                existence,
                static_props: node.static_props.clone(),
                tv_props: node
                    .tv_props
                    .iter()
                    .map(|(k, v)| {
                        (
                            k.clone(),
                            v.range(..cut).map(|(t, x)| (*t, x.clone())).collect(),
                        )
                    })
                    .collect(),
            });
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|e| {
                let existence = e.existence.intersection(&window);
                if existence.is_empty() {
                    return None;
                }
                Some(Edge {
                    src: remap[e.src as usize]?,
                    dst: remap[e.dst as usize]?,
                    label: e.label.clone(),
                    existence,
                })
            })
            .collect();
        let node_index = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.id.clone(), i as NodeIdx))
            .collect();
        TemporalPropertyGraph {
            nodes,
            node_index,
            edges,
            horizon: n,
            time_labels: self.time_labels[..n].to_vec(),
            symmetric_labels: self.symmetric_labels.clone(),
            bindings: self.bindings.clone(),
        }
    }
}

#[derive(Debug, Default)]
struct NodeDraft {
    label: Option<String>,
    existence: Vec<Interval>,
    static_props: BTreeMap<String, String>,
    tv_props: BTreeMap<String, BTreeMap<TimeInstant, String>>,
}

/// Accumulates rows into a graph. Repeated rows for the same node or edge
/// merge their temporal elements.
#[derive(Debug)]
pub struct GraphBuilder {
    time_labels: Vec<String>,
    nodes: BTreeMap<String, NodeDraft>,
    edges: BTreeMap<(String, String, String), Vec<Interval>>,
    symmetric: BTreeSet<String>,
    declared_bindings: BTreeMap<String, BTreeSet<String>>,
}

impl GraphBuilder {
    /// A builder over `horizon` instants labelled `0..horizon`.
    pub fn new(horizon: usize) -> Self {
        Self::with_time_labels((0..horizon).map(|t| t.to_string()).collect())
    }

    pub fn with_time_labels(time_labels: Vec<String>) -> Self {
        GraphBuilder {
            time_labels,
            nodes: BTreeMap::new(),
            edges: BTreeMap::new(),
            symmetric: BTreeSet::new(),
            declared_bindings: BTreeMap::new(),
        }
    }

    pub fn horizon_len(&self) -> usize {
        self.time_labels.len()
    }

    pub fn symmetric(&mut self, edge_label: impl Into<String>) -> &mut Self {
        self.symmetric.insert(edge_label.into());
        self
    }

    /// Declares that nodes labelled `node_label` carry `prop`.
    pub fn bind(&mut self, prop: impl Into<String>, node_label: impl Into<String>) -> &mut Self {
        self.declared_bindings
            .entry(node_label.into())
            .or_default()
            .insert(prop.into());
        self
    }

    pub fn node(&mut self, id: &str, label: &str, existence: Interval) -> Result<&mut Self> {
        let draft = self.nodes.entry(id.to_string()).or_default();
        match &draft.label {
            Some(l) if l != label => {
                return Err(Error::Schema(format!(
                    "node {id:?} declared with labels {l:?} and {label:?}"
                )))
            }
            Some(_) => {}
            None => draft.label = Some(label.to_string()),
        }
        draft.existence.push(existence);
        Ok(self)
    }

    pub fn static_prop(&mut self, id: &str, prop: &str, value: &str) -> Result<&mut Self> {
        let draft = self.nodes.entry(id.to_string()).or_default();
        if let Some(old) = draft.static_props.get(prop) {
            if old != value {
                return Err(Error::Schema(format!(
                    "node {id:?} has conflicting values {old:?} and {value:?} for {prop:?}"
                )));
            }
        }
        draft
            .static_props
            .insert(prop.to_string(), value.to_string());
        Ok(self)
    }

    pub fn tv_prop(
        &mut self,
        id: &str,
        prop: &str,
        t: TimeInstant,
        value: &str,
    ) -> Result<&mut Self> {
        let draft = self.nodes.entry(id.to_string()).or_default();
        let values = draft.tv_props.entry(prop.to_string()).or_default();
        if let Some(old) = values.get(&t) {
            if old != value {
                return Err(Error::Schema(format!(
                    "node {id:?} has conflicting values {old:?} and {value:?} for {prop:?} at {t}"
                )));
            }
        }
        values.insert(t, value.to_string());
        Ok(self)
    }

    pub fn edge(&mut self, src: &str, dst: &str, label: &str, existence: Interval) -> &mut Self {
        let (src, dst) = if self.symmetric.contains(label) && src > dst {
            (dst, src)
        } else {
            (src, dst)
        };
        self.edges
            .entry((src.to_string(), dst.to_string(), label.to_string()))
            .or_default()
            .push(existence);
        self
    }

    /// Finishes the graph. Edges naming undeclared nodes and properties of
    /// undeclared nodes are reported as an integrity error; every other side
    /// condition is left to [`TemporalPropertyGraph::validate`].
    pub fn build(self) -> Result<TemporalPropertyGraph> {
        let mut violations = Vec::new();
        let mut bindings = self.declared_bindings;
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for (id, draft) in self.nodes {
            let Some(label) = draft.label else {
                violations.push(Violation {
                    element: id,
                    kind: ViolationKind::UnknownNode,
                });
                continue;
            };
            let entry = bindings.entry(label.clone()).or_default();
            entry.extend(draft.static_props.keys().cloned());
            entry.extend(draft.tv_props.keys().cloned());
            nodes.push(Node {
                id,
                label,
                existence: TemporalElement::from_intervals(draft.existence),
                static_props: draft.static_props,
                tv_props: draft.tv_props,
            });
        }
        let node_index: HashMap<String, NodeIdx> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.id.clone(), i as NodeIdx))
            .collect();
        let mut edges = Vec::with_capacity(self.edges.len());
        for ((src, dst, label), intervals) in self.edges {
            let element = format!("{src}->{dst}:{label}");
            let (s, d) = (node_index.get(&src), node_index.get(&dst));
            for (id, idx) in [(&src, s), (&dst, d)] {
                if idx.is_none() {
                    violations.push(Violation {
                        element: element.clone(),
                        kind: ViolationKind::UnknownEndpoint { node: id.clone() },
                    });
                }
            }
            if let (Some(&s), Some(&d)) = (s, d) {
                edges.push(Edge {
                    src: s,
                    dst: d,
                    label,
                    existence: TemporalElement::from_intervals(intervals),
                });
            }
        }
        if !violations.is_empty() {
            violations.sort();
            return Err(Error::Integrity(violations));
        }
        // Node ids are sorted, so edges sort by (src, dst, label) in index space too.
        edges.sort_by(|a, b| (a.src, a.dst, &a.label).cmp(&(b.src, b.dst, &b.label)));
        Ok(TemporalPropertyGraph {
            nodes,
            node_index,
            edges,
            horizon: self.time_labels.len(),
            time_labels: self.time_labels,
            symmetric_labels: self.symmetric,
            bindings,
        })
    }
}
