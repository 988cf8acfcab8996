use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::anyhow;
use clap::{Args, ValueEnum};
use evosky::report::{top_k_lines, write_report, Report, ReportFormat};
use evosky::skyline::Selection;
use evosky::{Exploration, Query, SkylineResult, TupleId};

use crate::{load, AggArgs, CmdResult, EventArg, Failure, SemanticsArg};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct SkylineArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long, value_enum)]
    event: EventArg,
    #[arg(long, value_enum)]
    semantics: SemanticsArg,
    #[command(flatten)]
    agg: AggArgs,
    /// Print the k tuples with the highest domination degree.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    top_k: Option<u64>,
    /// Also write one skyline per combination pair.
    #[arg(long)]
    individual: bool,
    /// Cross-check every skyline against the exhaustive reference.
    #[arg(long)]
    oracle: bool,
    /// Report directory; nothing is written without it.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Maximum worker threads.
    #[arg(long)]
    parallel: Option<usize>,
}

type Rows = BTreeMap<TupleId, (Vec<u64>, usize)>;

fn fast_rows(r: &SkylineResult) -> Rows {
    r.rows()
        .into_iter()
        .map(|(t, d)| (t.id(), (t.counts.counts.clone(), d)))
        .collect()
}

fn check_oracle(ex: &Exploration<'_>, sel: Selection, got: &SkylineResult) -> Result<(), Failure> {
    let bf = ex.brute_force(sel)?;
    let want: Rows = bf
        .skyline_tuples()
        .map(|(t, d)| (t.id(), (t.counts.counts.clone(), d)))
        .collect();
    let got = fast_rows(got);
    if got == want {
        return Ok(());
    }
    let mut diff = Vec::new();
    for (id, v) in &want {
        match got.get(id) {
            None => diff.push(format!("- t_r={} len={} {v:?}", id.reference, id.length)),
            Some(g) if g != v => diff.push(format!(
                "~ t_r={} len={} expected {v:?} got {g:?}",
                id.reference, id.length
            )),
            _ => {}
        }
    }
    for (id, v) in &got {
        if !want.contains_key(id) {
            diff.push(format!("+ t_r={} len={} {v:?}", id.reference, id.length));
        }
    }
    Err(Failure::Oracle(anyhow!(
        "{sel:?} skyline differs from the exhaustive reference:\n{}",
        diff.join("\n")
    )))
}

pub fn run(args: &SkylineArgs) -> CmdResult {
    let g = load(&args.manifest)?;
    let spec = args.agg.spec(&g)?;
    let query = Query {
        kind: args.event.into(),
        semantics: args.semantics.into(),
        edge_label: args.agg.edge_label.clone(),
        spec,
    };
    let mut ex = Exploration::new(&g, query)?;
    if let Some(n) = args.parallel {
        ex = ex.with_threads(n);
    }
    let candidates = ex.candidates()?;
    let unified = ex.skyline_of(&candidates, Selection::Unified);
    let individual: Vec<SkylineResult> = (0..ex.universe().len())
        .map(|i| ex.skyline_of(&candidates, Selection::Individual(i)))
        .collect();
    let report = Report::build(&ex, &unified, &individual, args.individual)?;

    let q = ex.query();
    println!(
        "{}/{} on {} by {}: {} candidates",
        q.kind,
        q.semantics,
        q.edge_label,
        q.spec.props.join("+"),
        unified.candidate_count
    );
    let names = ex.universe().pair_names();
    let width = names.iter().map(String::len).max().unwrap_or(0).max(7);
    println!("{:width$}  size", "pair");
    for (name, size) in names.iter().zip(&report.sizes.individual) {
        println!("{name:width$}  {size}");
    }
    println!("{:width$}  {}", "unified", report.sizes.unified);
    if let Some(k) = args.top_k {
        println!("top-{k}:");
        for line in top_k_lines(&g, &unified, k as usize) {
            println!("{line}");
        }
    }

    if args.oracle {
        check_oracle(&ex, Selection::Unified, &unified)?;
        for (i, r) in individual.iter().enumerate() {
            check_oracle(&ex, Selection::Individual(i), r)?;
        }
        println!("oracle: agrees");
    }

    if let Some(dir) = &args.out {
        let format = match args.format {
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Json => ReportFormat::Json,
        };
        for path in write_report(&report, dir, format)? {
            log::info!("wrote {}", path.display());
        }
    }
    Ok(())
}
