use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::Args;
use evosky::skyline::Selection;
use evosky::{EventKind, Exploration, Query, Semantics};

use crate::{load, AggArgs, CmdResult};

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[command(flatten)]
    agg: AggArgs,
    /// Timing CSV to write.
    #[arg(long)]
    out: PathBuf,
    /// Time all six event/semantics pairs instead of the default four.
    #[arg(long)]
    all_events: bool,
    #[arg(long)]
    parallel: Option<usize>,
}

const DEFAULT_CONFIGS: [(EventKind, Semantics); 4] = [
    (EventKind::Stability, Semantics::Strict),
    (EventKind::Stability, Semantics::Loose),
    (EventKind::Growth, Semantics::Loose),
    (EventKind::Shrinkage, Semantics::Loose),
];

pub fn run(args: &BenchArgs) -> CmdResult {
    let g = load(&args.manifest)?;
    let horizon = g.horizon_len();
    if horizon < 3 {
        return Err(anyhow!("benchmarking needs at least 3 instants, found {horizon}").into());
    }
    let configs: Vec<(EventKind, Semantics)> = if args.all_events {
        EventKind::ALL
            .iter()
            .flat_map(|&k| Semantics::ALL.iter().map(move |&s| (k, s)))
            .collect()
    } else {
        DEFAULT_CONFIGS.to_vec()
    };
    let mut out = String::from("prefix,event,semantics,candidates,unified,individual,millis\n");
    for len in 3..=horizon {
        let prefix = g.prefix(len);
        let spec = args.agg.spec(&prefix)?;
        let mut strict_loose = [None, None];
        for &(kind, semantics) in &configs {
            let query = Query {
                kind,
                semantics,
                edge_label: args.agg.edge_label.clone(),
                spec: spec.clone(),
            };
            let mut ex = Exploration::new(&prefix, query)?;
            if let Some(n) = args.parallel {
                ex = ex.with_threads(n);
            }
            let start = Instant::now();
            let candidates = ex.candidates()?;
            let unified = ex.skyline_of(&candidates, Selection::Unified);
            let individual: usize = (0..ex.universe().len())
                .map(|i| ex.skyline_of(&candidates, Selection::Individual(i)).len())
                .sum();
            let millis = start.elapsed().as_secs_f64() * 1e3;
            if kind == EventKind::Stability {
                strict_loose[(semantics == Semantics::Loose) as usize] = Some(millis);
            }
            out.push_str(&format!(
                "{len},{kind},{semantics},{},{},{individual},{millis:.3}\n",
                candidates.len(),
                unified.len()
            ));
        }
        if let [Some(strict), Some(loose)] = strict_loose {
            eprintln!("prefix {len}: stability strict {strict:.1} ms, loose {loose:.1} ms");
        }
    }
    let mut f =
        fs::File::create(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    f.write_all(out.as_bytes())
        .with_context(|| format!("writing {}", args.out.display()))?;
    Ok(())
}
