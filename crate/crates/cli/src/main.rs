use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use csi_core::config::{AnalysisConfig, CorpusManifest};
use csi_core::interaction::SmellPair;
use csi_core::pipeline::{Pipeline, StageOutcome};

/// Code-smell interaction analysis for Java corpora.
#[derive(Debug, Parser)]
#[command(name = "csi", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse projects; write artifact, metric and dependency facts.
    Extract(Common),
    /// Detect smells from persisted metrics.
    Detect(Common),
    /// Build interaction records and frequencies.
    Interact(Common),
    /// Run union and per-system contrasts.
    Analyze(Common),
    /// Render CSV reports and the run summary.
    Report(Common),
    /// Draw stratified validation samples.
    Sample(Common),
    /// Run every stage in order.
    RunAll(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Corpus manifest (JSON).
    #[arg(long)]
    manifest: PathBuf,
    /// Analysis config (TOML, or JSON by extension).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Restrict to a project id (repeatable).
    #[arg(long = "project")]
    projects: Vec<String>,
    /// Restrict to a smell pair such as GC-DC (repeatable).
    #[arg(long = "pair")]
    pairs: Vec<SmellPair>,
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Extract(c)
            | Command::Detect(c)
            | Command::Interact(c)
            | Command::Analyze(c)
            | Command::Report(c)
            | Command::Sample(c)
            | Command::RunAll(c) => c,
        }
    }
}

fn pipeline(c: &Common) -> csi_core::Result<Pipeline> {
    let mut config = match &c.config {
        Some(path) => AnalysisConfig::load(path)?,
        None => AnalysisConfig::default(),
    };
    if let Some(out) = &c.out {
        config.out_dir = out.clone();
    }
    if let Some(seed) = c.seed {
        config.seed = seed;
    }
    let manifest = CorpusManifest::load(&c.manifest)?;
    manifest.validate()?;
    let mut p = Pipeline::new(manifest, config)?;
    p.restrict_projects(&c.projects)?;
    p.restrict_pairs(&c.pairs);
    Ok(p)
}

fn run(command: &Command) -> csi_core::Result<StageOutcome> {
    let p = pipeline(command.common())?;
    match command {
        Command::Extract(_) => p.extract(),
        Command::Detect(_) => p.detect(),
        Command::Interact(_) => p.interact(),
        Command::Analyze(_) => p.analyze(),
        Command::Report(_) => p.report(),
        Command::Sample(_) => p.sample(),
        Command::RunAll(_) => p.run_all(),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CSI_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli.command) {
        Ok(outcome) if outcome.is_partial() => {
            log::warn!("skipped projects: {}", outcome.skipped_projects.join(", "));
            ExitCode::from(2)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
