//! Loading graphs from CSV files described by a TOML manifest, and writing
//! them back out.
//!
//! ```toml
//! time_labels = ["2019", "2020", "2021"]   # or: time_labels_file = "times.txt"
//! nodes = "nodes.csv"                      # id,label,start,end
//! edges = "edges.csv"                      # src,dst,label,start,end
//! static_props = "static_props.csv"        # id,prop,value
//! tv_props = "tv_props.csv"                # id,prop,time,value
//! symmetric_edge_labels = ["collaborate"]
//!
//! [properties]
//! gender = "author"
//! location = ["conference"]
//! ```
//!
//! Paths are relative to the manifest. Only `nodes` is required.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, TemporalPropertyGraph};
use crate::time::{Interval, TimeInstant};

pub const NODE_HEADER: [&str; 4] = ["id", "label", "start", "end"];
pub const EDGE_HEADER: [&str; 5] = ["src", "dst", "label", "start", "end"];
pub const STATIC_HEADER: [&str; 3] = ["id", "prop", "value"];
pub const TV_HEADER: [&str; 4] = ["id", "prop", "time", "value"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Labels {
    One(String),
    Many(Vec<String>),
}

impl Labels {
    fn iter(&self) -> impl Iterator<Item = &String> {
        match self {
            Labels::One(l) => std::slice::from_ref(l).iter(),
            Labels::Many(v) => v.iter(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    time_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    time_labels_file: Option<PathBuf>,
    nodes: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edges: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    static_props: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tv_props: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    symmetric_edge_labels: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    properties: BTreeMap<String, Labels>,
}

/// A dataset description with resolved paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatasetManifest {
    pub time_labels: Vec<String>,
    pub nodes: PathBuf,
    pub edges: Option<PathBuf>,
    pub static_props: Option<PathBuf>,
    pub tv_props: Option<PathBuf>,
    pub symmetric_edge_labels: Vec<String>,
    /// Property -> node labels carrying it.
    pub properties: BTreeMap<String, Vec<String>>,
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

impl DatasetManifest {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let raw: RawManifest = toml::from_str(&read_to_string(path)?)
            .map_err(|e| Error::Manifest(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let resolve = |p: &Path| base.join(p);
        let time_labels = match (raw.time_labels, raw.time_labels_file) {
            (Some(labels), None) => labels,
            (None, Some(file)) => {
                let file = resolve(&file);
                read_to_string(&file)?
                    .lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty())
                    .map(str::to_string)
                    .collect()
            }
            _ => {
                return Err(Error::Manifest(format!(
                    "{}: exactly one of time_labels and time_labels_file is required",
                    path.display()
                )))
            }
        };
        if time_labels.is_empty() {
            return Err(Error::Manifest(format!(
                "{}: no time labels",
                path.display()
            )));
        }
        let mut seen = HashMap::new();
        for (i, l) in time_labels.iter().enumerate() {
            if let Some(j) = seen.insert(l.as_str(), i) {
                return Err(Error::Manifest(format!(
                    "{}: time label {l:?} declared at positions {j} and {i}",
                    path.display()
                )));
            }
        }
        let m = DatasetManifest {
            time_labels,
            nodes: resolve(&raw.nodes),
            edges: raw.edges.as_deref().map(resolve),
            static_props: raw.static_props.as_deref().map(resolve),
            tv_props: raw.tv_props.as_deref().map(resolve),
            symmetric_edge_labels: raw.symmetric_edge_labels,
            properties: raw
                .properties
                .into_iter()
                .map(|(p, l)| (p, l.iter().cloned().collect()))
                .collect(),
        };
        for file in m.files() {
            if !file.is_file() {
                return Err(Error::io(
                    file,
                    std::io::Error::new(std::io::ErrorKind::NotFound, "file not found"),
                ));
            }
        }
        Ok(m)
    }

    fn files(&self) -> impl Iterator<Item = &PathBuf> {
        std::iter::once(&self.nodes)
            .chain(self.edges.iter())
            .chain(self.static_props.iter())
            .chain(self.tv_props.iter())
    }
}

struct Table {
    path: PathBuf,
    reader: csv::Reader<fs::File>,
}

impl Table {
    fn open(path: &Path, header: &[&str]) -> Result<Self> {
        let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(file);
        let found = reader.headers().map_err(|e| csv_error(path, e))?.clone();
        if found.iter().ne(header.iter().copied()) {
            return Err(Error::Parse {
                file: path.to_path_buf(),
                line: 1,
                column: 1,
                message: format!(
                    "expected header {:?}, found {:?}",
                    header.join(","),
                    found.iter().collect::<Vec<_>>().join(",")
                ),
            });
        }
        Ok(Table {
            path: path.to_path_buf(),
            reader,
        })
    }

    /// Yields `(line, record)`.
    fn rows(&mut self) -> impl Iterator<Item = Result<(u64, csv::StringRecord)>> + '_ {
        let path = self.path.clone();
        self.reader.records().map(move |r| {
            let r = r.map_err(|e| csv_error(&path, e))?;
            let line = r.position().map_or(0, |p| p.line());
            Ok((line, r))
        })
    }

    fn error(&self, line: u64, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            file: self.path.clone(),
            line,
            column,
            message: message.into(),
        }
    }
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let (line, column) = match e.kind() {
        csv::ErrorKind::UnequalLengths { pos, .. } => (pos.as_ref().map_or(0, |p| p.line()), 1),
        csv::ErrorKind::Utf8 { pos, err } => {
            (pos.as_ref().map_or(0, |p| p.line()), err.field() + 1)
        }
        csv::ErrorKind::Deserialize { pos, err } => (
            pos.as_ref().map_or(0, |p| p.line()),
            err.field().map_or(1, |f| f as usize + 1),
        ),
        _ => (0, 0),
    };
    Error::Parse {
        file: path.to_path_buf(),
        line,
        column,
        message: e.to_string(),
    }
}

struct TimeTable<'a> {
    index: HashMap<&'a str, TimeInstant>,
}

impl<'a> TimeTable<'a> {
    fn new(labels: &'a [String]) -> Self {
        TimeTable {
            index: labels
                .iter()
                .enumerate()
                .map(|(i, l)| (l.as_str(), TimeInstant(i as u32)))
                .collect(),
        }
    }

    fn get(&self, table: &Table, label: &str) -> Result<TimeInstant> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownTimeLabel {
                file: table.path.clone(),
                label: label.to_string(),
            })
    }

    fn interval(
        &self,
        table: &Table,
        line: u64,
        start: (usize, &str),
        end: (usize, &str),
    ) -> Result<Interval> {
        let (s, e) = (self.get(table, start.1)?, self.get(table, end.1)?);
        Interval::new(s, e).map_err(|_| {
            table.error(
                line,
                end.0 + 1,
                format!("interval ends ({}) before it starts ({})", end.1, start.1),
            )
        })
    }
}

fn field<'r>(table: &Table, line: u64, r: &'r csv::StringRecord, i: usize) -> Result<&'r str> {
    match r.get(i) {
        Some(v) if !v.is_empty() => Ok(v),
        _ => Err(table.error(line, i + 1, "empty field")),
    }
}

fn row_error(table: &Table, line: u64) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Schema(message) => table.error(line, 1, message),
        other => other,
    }
}

/// Reads the files of a manifest into a graph without running
/// [`TemporalPropertyGraph::validate`]. Edges naming undeclared nodes are
/// still rejected.
pub fn load_unvalidated(m: &DatasetManifest) -> Result<TemporalPropertyGraph> {
    let times = TimeTable::new(&m.time_labels);
    let mut b = GraphBuilder::with_time_labels(m.time_labels.clone());
    for label in &m.symmetric_edge_labels {
        b.symmetric(label.clone());
    }
    for (prop, labels) in &m.properties {
        for label in labels {
            b.bind(prop.clone(), label.clone());
        }
    }

    let mut t = Table::open(&m.nodes, &NODE_HEADER)?;
    let rows: Vec<_> = t.rows().collect::<Result<_>>()?;
    for (line, r) in rows {
        let (id, label) = (field(&t, line, &r, 0)?, field(&t, line, &r, 1)?);
        let iv = times.interval(
            &t,
            line,
            (2, field(&t, line, &r, 2)?),
            (3, field(&t, line, &r, 3)?),
        )?;
        b.node(id, label, iv).map_err(row_error(&t, line))?;
    }
    if let Some(path) = &m.static_props {
        let mut t = Table::open(path, &STATIC_HEADER)?;
        let rows: Vec<_> = t.rows().collect::<Result<_>>()?;
        for (line, r) in rows {
            let (id, prop, value) = (
                field(&t, line, &r, 0)?,
                field(&t, line, &r, 1)?,
                field(&t, line, &r, 2)?,
            );
            b.static_prop(id, prop, value)
                .map_err(row_error(&t, line))?;
        }
    }
    if let Some(path) = &m.tv_props {
        let mut t = Table::open(path, &TV_HEADER)?;
        let rows: Vec<_> = t.rows().collect::<Result<_>>()?;
        for (line, r) in rows {
            let (id, prop) = (field(&t, line, &r, 0)?, field(&t, line, &r, 1)?);
            let time = times.get(&t, field(&t, line, &r, 2)?)?;
            let value = field(&t, line, &r, 3)?;
            b.tv_prop(id, prop, time, value)
                .map_err(row_error(&t, line))?;
        }
    }
    if let Some(path) = &m.edges {
        let mut t = Table::open(path, &EDGE_HEADER)?;
        let rows: Vec<_> = t.rows().collect::<Result<_>>()?;
        for (line, r) in rows {
            let (src, dst, label) = (
                field(&t, line, &r, 0)?,
                field(&t, line, &r, 1)?,
                field(&t, line, &r, 2)?,
            );
            let iv = times.interval(
                &t,
                line,
                (3, field(&t, line, &r, 3)?),
                (4, field(&t, line, &r, 4)?),
            )?;
            b.edge(src, dst, label, iv);
        }
    }
    b.build()
}

/// Loads and validates a graph; violations are returned as
/// [`Error::Integrity`].
pub fn load_graph(m: &DatasetManifest) -> Result<TemporalPropertyGraph> {
    let g = load_unvalidated(m)?;
    let violations = g.validate();
    if violations.is_empty() {
        Ok(g)
    } else {
        Err(Error::Integrity(violations))
    }
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<TemporalPropertyGraph> {
    load_graph(&DatasetManifest::from_path(path)?)
}

fn writer(path: &Path, header: &[&str]) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(header)?;
    Ok(w)
}

fn flush(path: &Path, mut w: csv::Writer<fs::File>) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes `g` as `manifest.toml` plus the four CSV files into `dir`, and
/// returns the manifest path.
pub fn write_dataset(g: &TemporalPropertyGraph, dir: impl AsRef<Path>) -> Result<PathBuf> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let label = |t: TimeInstant| g.time_label(t);

    let nodes_path = dir.join("nodes.csv");
    let mut w = writer(&nodes_path, &NODE_HEADER)?;
    for n in g.nodes() {
        for iv in n.existence.intervals() {
            w.write_record([
                n.id.as_str(),
                n.label.as_str(),
                label(iv.start),
                label(iv.end),
            ])?;
        }
    }
    flush(&nodes_path, w)?;

    let static_path = dir.join("static_props.csv");
    let mut w = writer(&static_path, &STATIC_HEADER)?;
    for n in g.nodes() {
        for (p, v) in &n.static_props {
            w.write_record([n.id.as_str(), p, v])?;
        }
    }
    flush(&static_path, w)?;

    let tv_path = dir.join("tv_props.csv");
    let mut w = writer(&tv_path, &TV_HEADER)?;
    for n in g.nodes() {
        for (p, values) in &n.tv_props {
            for (t, v) in values {
                w.write_record([n.id.as_str(), p, label(*t), v])?;
            }
        }
    }
    flush(&tv_path, w)?;

    let edges_path = dir.join("edges.csv");
    let mut w = writer(&edges_path, &EDGE_HEADER)?;
    for e in g.edges() {
        let (s, d) = (&g.node(e.src).id, &g.node(e.dst).id);
        for iv in e.existence.intervals() {
            w.write_record([
                s.as_str(),
                d.as_str(),
                e.label.as_str(),
                label(iv.start),
                label(iv.end),
            ])?;
        }
    }
    flush(&edges_path, w)?;

    let mut properties: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (node_label, props) in g.bindings() {
        for p in props {
            properties
                .entry(p.clone())
                .or_default()
                .push(node_label.clone());
        }
    }
    let raw = RawManifest {
        time_labels: Some(g.time_labels().to_vec()),
        time_labels_file: None,
        nodes: "nodes.csv".into(),
        edges: Some("edges.csv".into()),
        static_props: Some("static_props.csv".into()),
        tv_props: Some("tv_props.csv".into()),
        symmetric_edge_labels: g.symmetric_labels().iter().cloned().collect(),
        properties: properties
            .into_iter()
            .map(|(p, l)| (p, Labels::Many(l)))
            .collect(),
    };
    let text = toml::to_string(&raw).map_err(|e| Error::Manifest(e.to_string()))?;
    let manifest = dir.join("manifest.toml");
    fs::write(&manifest, text).map_err(|e| Error::io(&manifest, e))?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::bibliographic_toy;
    use crate::graph::ViolationKind;

    fn dataset(dir: &Path, nodes: &str, edges: &str, extra: &str) -> PathBuf {
        fs::write(dir.join("nodes.csv"), nodes).unwrap();
        fs::write(dir.join("edges.csv"), edges).unwrap();
        let m = dir.join("manifest.toml");
        fs::write(
            &m,
            format!("time_labels = [\"a\", \"b\", \"c\"]\nnodes = \"nodes.csv\"\nedges = \"edges.csv\"\n{extra}"),
        )
        .unwrap();
        m
    }

    #[test]
    fn write_then_load_round_trips() {
        let g = bibliographic_toy();
        let dir = tempfile::tempdir().unwrap();
        let m = write_dataset(&g, dir.path()).unwrap();
        let loaded = load_manifest(&m).unwrap();
        assert_eq!(loaded, g);
        assert_eq!(load_manifest(&m).unwrap(), loaded);
    }

    #[test]
    fn empty_edges_file_gives_node_only_graph() {
        let dir = tempfile::tempdir().unwrap();
        let m = dataset(
            dir.path(),
            "id,label,start,end\nx,t,a,c\n",
            "src,dst,label,start,end\n",
            "",
        );
        let g = load_manifest(&m).unwrap();
        assert_eq!(g.nodes().len(), 1);
        assert!(g.edges().is_empty());
    }

    #[test]
    fn duplicate_and_adjacent_rows_coalesce() {
        let dir = tempfile::tempdir().unwrap();
        let m = dataset(
            dir.path(),
            "id,label,start,end\nx,t,a,a\nx,t,b,c\nx,t,a,a\ny,t,a,c\n",
            "src,dst,label,start,end\nx,y,e,a,b\nx,y,e,b,c\n",
            "",
        );
        let g = load_manifest(&m).unwrap();
        assert_eq!(g.nodes()[0].existence.to_string(), "{[0, 2]}");
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.edges()[0].existence.to_string(), "{[0, 2]}");
    }

    #[test]
    fn missing_endpoint_is_an_integrity_error() {
        let dir = tempfile::tempdir().unwrap();
        let m = dataset(
            dir.path(),
            "id,label,start,end\nx,t,a,c\n",
            "src,dst,label,start,end\nx,z,e,a,a\n",
            "",
        );
        match load_manifest(&m) {
            Err(Error::Integrity(v)) => {
                assert_eq!(v.len(), 1);
                assert!(
                    matches!(&v[0].kind, ViolationKind::UnknownEndpoint { node } if node == "z")
                );
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_time_label() {
        let dir = tempfile::tempdir().unwrap();
        let m = dataset(
            dir.path(),
            "id,label,start,end\nx,t,a,q\n",
            "src,dst,label,start,end\n",
            "",
        );
        assert!(
            matches!(load_manifest(&m), Err(Error::UnknownTimeLabel { label, .. }) if label == "q")
        );
    }

    #[test]
    fn parse_errors_carry_position() {
        let dir = tempfile::tempdir().unwrap();
        let m = dataset(
            dir.path(),
            "id,label,start,end\nx,t,a,c\ny,t,c,a\n",
            "src,dst,label,start,end\n",
            "",
        );
        match load_manifest(&m) {
            Err(Error::Parse {
                line, column, file, ..
            }) => {
                assert_eq!((line, column), (3, 4));
                assert!(file.ends_with("nodes.csv"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let m = dataset(
            dir.path(),
            "id,label,start,end\nx,t,a\n",
            "src,dst,label,start,end\n",
            "",
        );
        assert!(matches!(
            load_manifest(&m),
            Err(Error::Parse { line: 2, .. })
        ));
        let m = dataset(
            dir.path(),
            "id,kind,start,end\n",
            "src,dst,label,start,end\n",
            "",
        );
        assert!(matches!(
            load_manifest(&m),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn property_violations_survive_unvalidated_load() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(
            dir.path().join("tv.csv"),
            "id,prop,time,value\nx,mood,a,calm\n",
        )
        .unwrap();
        let m = dataset(
            dir.path(),
            "id,label,start,end\nx,t,a,b\n",
            "src,dst,label,start,end\n",
            "tv_props = \"tv.csv\"\n",
        );
        let m = DatasetManifest::from_path(m).unwrap();
        let g = load_unvalidated(&m).unwrap();
        assert_eq!(g.validate().len(), 1);
        assert!(matches!(load_graph(&m), Err(Error::Integrity(v)) if v.len() == 1));
    }

    #[test]
    fn manifest_errors() {
        let dir = tempfile::tempdir().unwrap();
        let m = dir.path().join("manifest.toml");
        fs::write(&m, "nodes = \"nodes.csv\"\n").unwrap();
        assert!(matches!(
            DatasetManifest::from_path(&m),
            Err(Error::Manifest(_))
        ));
        fs::write(&m, "time_labels = [\"a\"]\nnodes = \"missing.csv\"\n").unwrap();
        assert!(matches!(
            DatasetManifest::from_path(&m),
            Err(Error::Io { .. })
        ));
        assert!(matches!(
            DatasetManifest::from_path(dir.path().join("nope.toml")),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn time_labels_file_and_bindings() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("times.txt"), "may\njun\n").unwrap();
        fs::write(
            dir.path().join("nodes.csv"),
            "id,label,start,end\nx,t,may,jun\n",
        )
        .unwrap();
        let m = dir.path().join("manifest.toml");
        fs::write(
            &m,
            "time_labels_file = \"times.txt\"\nnodes = \"nodes.csv\"\n[properties]\ngender = \"t\"\n",
        )
        .unwrap();
        let err = load_manifest(&m).unwrap_err();
        // the bound property is missing on x
        assert!(matches!(err, Error::Integrity(_)));
        let man = DatasetManifest::from_path(&m).unwrap();
        assert_eq!(man.time_labels, ["may", "jun"]);
        assert_eq!(man.properties["gender"], ["t"]);
    }
}
