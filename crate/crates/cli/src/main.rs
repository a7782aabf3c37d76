//! `ibis`: synthesize cohorts, check datasets, fit baselines, replay twins
//! and evaluate every similarity metric against human judgements.
//!
//! Exit codes: 0 success, 1 usage, 2 data error, 3 numeric failure.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ibis_core::MetricKind;

use crate::config::RunConfig;

#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser, Debug)]
#[command(name = "ibis", version, about = "Individualized similarity from IBL digital twins")]
struct Cli {
    /// Global seed for every stochastic component.
    #[arg(long, env = "IBIS_SEED", global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// JSON run configuration; unknown keys are rejected.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct IblOverrides {
    #[arg(long)]
    decay: Option<f64>,
    #[arg(long)]
    noise: Option<f64>,
    #[arg(long)]
    mismatch_penalty: Option<f64>,
    #[arg(long)]
    temperature: Option<f64>,
    #[arg(long)]
    default_utility: Option<f64>,
    /// Use each agent's parameters from a synthetic `ground_truth.json`.
    #[arg(long)]
    ground_truth: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a synthetic cohort.
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        participants: Option<usize>,
        #[arg(long)]
        emails_per_category: Option<usize>,
        #[arg(long)]
        dimension: Option<usize>,
    },
    /// Load and validate a dataset directory, then print a summary.
    IngestCheck {
        #[arg(long)]
        data: PathBuf,
    },
    /// Fit the learned baselines.
    Fit {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// weighted, pruned or ensemble; repeatable.
        #[arg(long = "metric", required = true)]
        metrics: Vec<MetricKind>,
        /// Dimensions kept by the pruned metric.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Score metrics against human judgements and write the report.
    Eval {
        #[arg(long)]
        data: PathBuf,
        /// Directory written by `fit`.
        #[arg(long)]
        artifacts: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated metrics (default: all six).
        #[arg(long, value_delimiter = ',')]
        metrics: Option<Vec<MetricKind>>,
        #[arg(long)]
        splits: Option<usize>,
        #[command(flatten)]
        ibl: IblOverrides,
    },
    /// Replay one participant and write the trace and per-email IBIS points.
    Twin {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        participant: String,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        ibl: IblOverrides,
    },
    /// Print the comparison table from a report directory or report.json.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

/// Ground-truth parameters load first; explicit flags then override every
/// parameter set, shared or per participant.
fn apply_ibl(cfg: &mut RunConfig, o: &IblOverrides) -> anyhow::Result<()> {
    if let Some(path) = &o.ground_truth {
        commands::ground_truth_params(path, cfg)?;
    }
    for p in std::iter::once(&mut cfg.eval.ibl).chain(cfg.eval.participant_params.values_mut()) {
        if let Some(v) = o.decay {
            p.decay = v;
        }
        if let Some(v) = o.noise {
            p.noise = v;
        }
        if let Some(v) = o.mismatch_penalty {
            p.mismatch_penalty = v;
        }
        if let Some(v) = o.temperature {
            p.temperature = Some(v);
        }
        if let Some(v) = o.default_utility {
            p.default_utility = v;
        }
    }
    Ok(())
}

fn run(cli: Cli, invocation: Vec<String>) -> anyhow::Result<()> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| UsageError(format!("--jobs: {e}")))?;
    }
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    cfg.invocation = invocation;
    cfg.apply_seed(cli.seed);
    match cli.command {
        Command::Synth {
            out,
            participants,
            emails_per_category,
            dimension,
        } => {
            if let Some(n) = participants {
                cfg.cohort.n_participants = n;
            }
            if let Some(n) = emails_per_category {
                cfg.cohort.n_emails_per_category = n;
            }
            if let Some(d) = dimension {
                cfg.cohort.dimension = d;
            }
            commands::synth(&cfg, &out)
        }
        Command::IngestCheck { data } => commands::ingest_check(&data),
        Command::Fit { data, out, metrics, k } => {
            if k.is_some() {
                cfg.prune_k = k;
            }
            commands::fit(&cfg, &data, &out, &metrics)
        }
        Command::Eval {
            data,
            artifacts,
            out,
            metrics,
            splits,
            ibl,
        } => {
            if let Some(m) = metrics {
                cfg.eval.metrics = m;
            }
            if let Some(n) = splits {
                cfg.eval.split_plan.n_splits = n;
            }
            apply_ibl(&mut cfg, &ibl)?;
            commands::eval(&cfg, &data, artifacts.as_deref(), &out)
        }
        Command::Twin {
            data,
            participant,
            out,
            ibl,
        } => {
            apply_ibl(&mut cfg, &ibl)?;
            commands::twin(&cfg, &data, &participant, &out)
        }
        Command::Report { input } => commands::report(&input),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return 1;
        }
        if let Some(e) = cause.downcast_ref::<ibis_core::Error>() {
            return if e.is_numeric() { 3 } else { 2 };
        }
    }
    2
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let invocation: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli, invocation) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
