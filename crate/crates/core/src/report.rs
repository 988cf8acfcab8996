//! CSV and JSON renderings of skyline results.
//!
//! A report directory holds `unified.csv` (or `report.json`), optional
//! `individual_<i>.csv` files, `sizes.csv` with one size per combination pair
//! plus the unified size, and `plot.csv` with `(pair, reference, length,
//! count)` points of the unified skyline.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Semantics, TemporalPropertyGraph};
use crate::ops::{CountDirection, EventKind};
use crate::skyline::{top_k, Exploration, Selection, SkylineResult, SkylineTuple};
use crate::time::Window;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub event: EventKind,
    pub semantics: Semantics,
    pub direction: CountDirection,
    pub edge_label: String,
    pub agg_labels: Vec<String>,
    pub agg_props: Vec<String>,
    pub time_labels: Vec<String>,
    /// Combination pair names, in count-vector order.
    pub pairs: Vec<String>,
    pub candidates: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub reference: String,
    pub start: String,
    pub end: String,
    pub length: usize,
    pub counts: Vec<u64>,
    pub dod: usize,
    pub display: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkylineReport {
    /// Names of the counted pairs: all of them, or the single one.
    pub pairs: Vec<String>,
    pub rows: Vec<ReportRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeSummary {
    pub individual: Vec<usize>,
    pub unified: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub metadata: RunMetadata,
    pub sizes: SizeSummary,
    pub unified: SkylineReport,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub individual: Vec<SkylineReport>,
}

fn window_label(g: &TemporalPropertyGraph, w: Window) -> String {
    if w.start == w.end {
        format!("[{}]", g.time_label(w.start))
    } else {
        format!("[{}, {}]", g.time_label(w.start), g.time_label(w.end))
    }
}

/// `([t_r], [T_r], total)`, with `T_r` written `[s, e]` or `[s]`.
pub fn display_tuple(g: &TemporalPropertyGraph, t: &SkylineTuple) -> String {
    format!(
        "([{}], {}, {})",
        g.time_label(t.reference),
        window_label(g, t.window),
        t.counts.total()
    )
}

fn row(g: &TemporalPropertyGraph, t: &SkylineTuple, dod: usize) -> ReportRow {
    ReportRow {
        reference: g.time_label(t.reference).to_string(),
        start: g.time_label(t.window.start).to_string(),
        end: g.time_label(t.window.end).to_string(),
        length: t.len(),
        counts: t.counts.counts.clone(),
        dod,
        display: display_tuple(g, t),
    }
}

fn skyline_report(
    g: &TemporalPropertyGraph,
    pairs: Vec<String>,
    r: &SkylineResult,
) -> SkylineReport {
    SkylineReport {
        pairs,
        rows: r.rows().into_iter().map(|(t, d)| row(g, t, d)).collect(),
    }
}

impl Report {
    /// `individual` holds one result per universe position, in order, and is
    /// used for sizes; `detailed` also keeps their rows.
    pub fn build(
        ex: &Exploration<'_>,
        unified: &SkylineResult,
        individual: &[SkylineResult],
        detailed: bool,
    ) -> Result<Self> {
        let g = ex.graph();
        let names = ex.universe().pair_names();
        if individual.len() != names.len() {
            return Err(Error::Domain(format!(
                "{} individual skylines for {} pairs",
                individual.len(),
                names.len()
            )));
        }
        let q = ex.query();
        let metadata = RunMetadata {
            event: q.kind,
            semantics: q.semantics,
            direction: q.direction(),
            edge_label: q.edge_label.clone(),
            agg_labels: q.spec.labels.iter().cloned().collect(),
            agg_props: q.spec.props.clone(),
            time_labels: g.time_labels().to_vec(),
            pairs: names.clone(),
            candidates: unified.candidate_count,
        };
        let individual_reports = if detailed {
            individual
                .iter()
                .map(|r| {
                    let Selection::Individual(i) = r.selection else {
                        return Err(Error::Domain("expected an individual skyline".into()));
                    };
                    Ok(skyline_report(g, vec![names[i].clone()], r))
                })
                .collect::<Result<_>>()?
        } else {
            Vec::new()
        };
        Ok(Report {
            sizes: SizeSummary {
                individual: individual.iter().map(SkylineResult::len).collect(),
                unified: unified.len(),
            },
            unified: skyline_report(g, names.clone(), unified),
            individual: individual_reports,
            metadata,
        })
    }
}

/// The top-k block: one `"(...) dod N"` line per tuple.
pub fn top_k_lines(g: &TemporalPropertyGraph, result: &SkylineResult, k: usize) -> Vec<String> {
    top_k(result, k)
        .into_iter()
        .map(|(t, d)| format!("{} dod {d}", display_tuple(g, &t)))
        .collect()
}

fn csv_file(path: &Path) -> Result<csv::Writer<fs::File>> {
    let f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(f))
}

fn finish(path: &Path, mut w: csv::Writer<fs::File>) -> Result<PathBuf> {
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(path.to_path_buf())
}

pub fn write_skyline_csv(r: &SkylineReport, path: &Path) -> Result<PathBuf> {
    let mut w = csv_file(path)?;
    let mut header = vec!["reference", "start", "end", "length"];
    header.extend(r.pairs.iter().map(String::as_str));
    header.extend(["dod", "display"]);
    w.write_record(&header)?;
    for row in &r.rows {
        let mut rec = vec![
            row.reference.clone(),
            row.start.clone(),
            row.end.clone(),
            row.length.to_string(),
        ];
        rec.extend(row.counts.iter().map(u64::to_string));
        rec.push(row.dod.to_string());
        rec.push(row.display.clone());
        w.write_record(&rec)?;
    }
    finish(path, w)
}

pub fn write_sizes_csv(report: &Report, path: &Path) -> Result<PathBuf> {
    let mut w = csv_file(path)?;
    let mut header = vec!["event", "semantics"];
    header.extend(report.metadata.pairs.iter().map(String::as_str));
    header.push("unified");
    w.write_record(&header)?;
    let mut rec = vec![
        report.metadata.event.to_string(),
        report.metadata.semantics.to_string(),
    ];
    rec.extend(report.sizes.individual.iter().map(usize::to_string));
    rec.push(report.sizes.unified.to_string());
    w.write_record(&rec)?;
    finish(path, w)
}

pub fn write_plot_csv(report: &Report, path: &Path) -> Result<PathBuf> {
    let mut w = csv_file(path)?;
    w.write_record(["pair", "reference", "length", "count"])?;
    for (i, pair) in report.unified.pairs.iter().enumerate() {
        for row in &report.unified.rows {
            w.write_record([
                pair.clone(),
                row.reference.clone(),
                row.length.to_string(),
                row.counts[i].to_string(),
            ])?;
        }
    }
    finish(path, w)
}

/// Writes the report into `dir` and returns the files written.
pub fn write_report(report: &Report, dir: &Path, format: ReportFormat) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    match format {
        ReportFormat::Csv => {
            written.push(write_skyline_csv(
                &report.unified,
                &dir.join("unified.csv"),
            )?);
            for (i, r) in report.individual.iter().enumerate() {
                written.push(write_skyline_csv(
                    r,
                    &dir.join(format!("individual_{i}.csv")),
                )?);
            }
        }
        ReportFormat::Json => {
            let path = dir.join("report.json");
            let mut text = serde_json::to_string_pretty(report)?;
            text.push('\n');
            fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
            written.push(path);
        }
    }
    written.push(write_sizes_csv(report, &dir.join("sizes.csv"))?);
    written.push(write_plot_csv(report, &dir.join("plot.csv"))?);
    Ok(written)
}

pub fn read_json_report(path: &Path) -> Result<Report> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}
