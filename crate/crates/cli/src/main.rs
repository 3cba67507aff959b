use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

mod config;
mod error;
mod run;
mod store;

use config::{Experiment, ExperimentConfig};
use error::CliError;

/// Bound states of soft quantum waveguides.
#[derive(Debug, Parser)]
#[command(name = "softguide", version)]
struct Args {
    /// Must agree with the `experiment` field of the configuration.
    #[arg(value_enum)]
    experiment: Experiment,

    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,

    /// Recompute even when a cached result exists.
    #[arg(long)]
    force: bool,

    /// Worker threads for sweeps (default: all cores).
    #[arg(long)]
    workers: Option<usize>,

    /// Output directory; overrides `out_dir` in the configuration.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn execute(args: &Args) -> Result<store::RunRecord, CliError> {
    let text = std::fs::read_to_string(&args.config)?;
    let cfg = ExperimentConfig::from_json(&text)?;
    if cfg.experiment != args.experiment {
        return Err(CliError::Validation(format!(
            "experiment: command line says {}, configuration says {}",
            args.experiment.name(),
            cfg.experiment.name()
        )));
    }
    if let Some(w) = args.workers {
        if w == 0 {
            return Err(CliError::Validation("--workers: must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| CliError::Validation(format!("--workers: {e}")))?;
    }
    let hash = cfg.hash();
    let out = args
        .out
        .clone()
        .or_else(|| cfg.out_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("softguide-out").join(&hash));
    let cache = store::cache_root();
    if !args.force {
        if let Some(rec) = store::lookup(&cache, &hash) {
            return store::restore(&cache, &rec, &out);
        }
    }
    let outcome = run::run(&cfg, &hash)?;
    store::store(&cache, &hash, cfg.experiment.name(), outcome, &out)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(rec) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&rec).expect("record serializes")
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("softguide: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
