mod bench;
mod skyline;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use evosky::ingest::{load_unvalidated, DatasetManifest};
use evosky::{AggregationSpec, Error, EventKind, Semantics, TemporalPropertyGraph};

#[derive(Parser)]
#[command(
    name = "evosky",
    version,
    about = "Evolution skylines over temporal property graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a dataset against the model's integrity rules.
    Validate {
        #[arg(long)]
        manifest: PathBuf,
    },
    /// Compute unified (and individual) evolution skylines.
    Skyline(skyline::SkylineArgs),
    /// Time skyline computation over growing prefixes of the horizon.
    Bench(bench::BenchArgs),
    /// Write a synthetic bibliographic dataset.
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Divide every per-instant size by this factor.
        #[arg(long, default_value_t = 1)]
        scale_down: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EventArg {
    Stability,
    Growth,
    Shrinkage,
}

impl From<EventArg> for EventKind {
    fn from(e: EventArg) -> Self {
        match e {
            EventArg::Stability => EventKind::Stability,
            EventArg::Growth => EventKind::Growth,
            EventArg::Shrinkage => EventKind::Shrinkage,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SemanticsArg {
    Strict,
    Loose,
}

impl From<SemanticsArg> for Semantics {
    fn from(s: SemanticsArg) -> Self {
        match s {
            SemanticsArg::Strict => Semantics::Strict,
            SemanticsArg::Loose => Semantics::Loose,
        }
    }
}

/// What to aggregate by.
#[derive(Args, Clone, Debug)]
struct AggArgs {
    #[arg(long)]
    edge_label: String,
    /// Node labels to group; defaults to every label carrying one of the properties.
    #[arg(long, value_delimiter = ',')]
    agg_labels: Vec<String>,
    #[arg(long, value_delimiter = ',', required = true)]
    agg_props: Vec<String>,
}

impl AggArgs {
    fn spec(&self, g: &TemporalPropertyGraph) -> evosky::Result<AggregationSpec> {
        if self.agg_labels.is_empty() {
            AggregationSpec::by_props(g, self.agg_props.iter().cloned())
        } else {
            let spec = AggregationSpec::new(
                self.agg_labels.iter().cloned(),
                self.agg_props.iter().cloned(),
            );
            spec.check(g)?;
            Ok(spec)
        }
    }
}

/// A failure with its exit status.
enum Failure {
    Usage(anyhow::Error),
    Invalid(anyhow::Error),
    Oracle(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Oracle(_) => 3,
        }
    }

    fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Usage(e) | Failure::Invalid(e) | Failure::Oracle(e) => e,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Integrity(_) | Error::Parse { .. } | Error::UnknownTimeLabel { .. } => {
                Failure::Invalid(e.into())
            }
            _ => Failure::Usage(e.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

type CmdResult = Result<(), Failure>;

/// Loads and validates, printing rejected graphs' violations to stderr.
fn load(manifest: &PathBuf) -> Result<TemporalPropertyGraph, Failure> {
    let m = DatasetManifest::from_path(manifest)?;
    let g = load_unvalidated(&m)?;
    let violations = g.validate();
    if violations.is_empty() {
        Ok(g)
    } else {
        for v in &violations {
            eprintln!("{v}");
        }
        Err(Error::Integrity(violations).into())
    }
}

fn validate(manifest: &PathBuf) -> CmdResult {
    let m = DatasetManifest::from_path(manifest)?;
    let violations = match load_unvalidated(&m) {
        Ok(g) => g.validate(),
        Err(Error::Integrity(v)) => v,
        Err(e) => return Err(e.into()),
    };
    let out = serde_json::json!({
        "valid": violations.is_empty(),
        "violations": violations,
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&out).map_err(anyhow::Error::from)?
    );
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::Invalid(anyhow::anyhow!(
            "{} violation(s) in {}",
            violations.len(),
            manifest.display()
        )))
    }
}

fn synth(out: &PathBuf, seed: u64, scale_down: usize) -> CmdResult {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let params = evosky::synth::SyntheticParams::bibliographic().scaled_down(scale_down);
    let g = evosky::synth::synthetic_bibliographic(&mut rng, &params);
    let manifest = evosky::ingest::write_dataset(&g, out)?;
    println!(
        "wrote {} nodes, {} edges over {} instants to {}",
        g.nodes().len(),
        g.edges().len(),
        g.horizon_len(),
        manifest.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Validate { manifest } => validate(manifest),
        Command::Skyline(args) => skyline::run(args),
        Command::Bench(args) => bench::run(args),
        Command::Synth {
            out,
            seed,
            scale_down,
        } => synth(out, *seed, *scale_down),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error());
            ExitCode::from(f.code())
        }
    }
}
