use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use anyhow::Context;
use ibis_core::data::{load_dataset, DatasetPaths};
use ibis_core::eval::{
    fit_artifacts, prediction_accuracy, train_split, write_report, EnsembleArtifact, EvalContext, FittedArtifacts,
    MaskArtifact, Report, TrainSplit, WeightArtifact,
};
use ibis_core::ibl::twin_replay;
use ibis_core::similarity::{ibis_points, write_points_csv, MetricKind};
use ibis_core::synth::{generate_cohort, write_cohort};
use ibis_core::{Category, Dataset, GroundTruth};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::config::RunConfig;
use crate::UsageError;

/// Routes a module error through the crate-level error so the exit code can
/// tell data problems from numeric ones.
pub trait Core<T> {
    fn core(self) -> anyhow::Result<T>;
}

impl<T, E: Into<ibis_core::Error>> Core<T> for Result<T, E> {
    fn core(self) -> anyhow::Result<T> {
        self.map_err(|e| anyhow::Error::new(e.into()))
    }
}

fn load(data: &Path) -> anyhow::Result<Dataset> {
    load_dataset(&DatasetPaths::in_dir(data)).core()
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    serde_json::to_writer_pretty(BufWriter::new(f), value).with_context(|| format!("writing {}", path.display()))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_optional<T: DeserializeOwned>(path: &Path) -> anyhow::Result<Option<T>> {
    if path.exists() {
        read_json(path).map(Some)
    } else {
        Ok(None)
    }
}

pub fn synth(cfg: &RunConfig, out: &Path) -> anyhow::Result<()> {
    let (dataset, truth) = generate_cohort(&cfg.cohort).core()?;
    let files = write_cohort(&dataset, &truth, out).core()?;
    cfg.write_resolved(out)?;
    for f in files {
        println!("{}", f.display());
    }
    Ok(())
}

pub fn ingest_check(data: &Path) -> anyhow::Result<()> {
    let ds = load(data)?;
    let count = |c: Category| ds.emails().iter().filter(|e| e.category == c).count();
    let participants = ds.participants();
    let judged: std::collections::HashSet<&str> = ds.judgements().iter().map(|j| j.email_id.as_str()).collect();
    println!(
        "emails: {} ({} phishing, {} ham)",
        ds.emails().len(),
        count(Category::Phishing),
        count(Category::Ham)
    );
    println!("embedding dimension: {}", ds.dimension());
    println!(
        "judgements: {} from {} participants",
        ds.judgements().len(),
        participants.len()
    );
    println!("emails with judgements: {}", judged.len());
    let short = participants
        .iter()
        .filter(|p| ds.judgements_for(p).count() < 10)
        .count();
    if short > 0 {
        println!("participants with fewer than 10 judgements: {short}");
    }
    Ok(())
}

const SPLIT_FILE: &str = "split.json";
const WEIGHTS_FILE: &str = "weights.json";
const MASK_FILE: &str = "mask.json";
const ENSEMBLE_FILE: &str = "ensemble.json";

pub fn fit(cfg: &RunConfig, data: &Path, out: &Path, metrics: &[MetricKind]) -> anyhow::Result<()> {
    for m in metrics {
        if !matches!(
            m,
            MetricKind::WeightedCosine | MetricKind::PrunedCosine | MetricKind::Ensemble
        ) {
            return Err(UsageError(format!(
                "metric {m} has nothing to fit; choose weighted, pruned or ensemble"
            ))
            .into());
        }
    }
    let ds = load(data)?;
    let art = fit_artifacts(&ds, metrics, &cfg.fit, cfg.prune_k, cfg.eval.human_mode).core()?;
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    write_json(&out.join(SPLIT_FILE), &art.split)?;
    if let Some(w) = &art.weights {
        write_json(&out.join(WEIGHTS_FILE), w)?;
        println!(
            "weighted: loss {:.6e} -> {:.6e} in {} iterations",
            w.report.initial_loss, w.report.final_loss, w.report.iterations_run
        );
    }
    if let Some(m) = &art.mask {
        write_json(&out.join(MASK_FILE), m)?;
        let note = if m.identity_with_cosine {
            " (all dimensions kept: identical to cosine)"
        } else {
            ""
        };
        println!("pruned: kept {} of {} dimensions{note}", m.k, ds.dimension());
    }
    if let Some(e) = &art.ensemble {
        write_json(&out.join(ENSEMBLE_FILE), e)?;
        let parts: Vec<String> = e.weights.0.iter().map(|(m, w)| format!("{m} {w:.3}")).collect();
        println!("ensemble: {} (loss {:.6e})", parts.join(", "), e.report.final_loss);
    }
    cfg.write_resolved(out)
}

fn load_artifacts(dir: Option<&Path>, ds: &Dataset, cfg: &RunConfig) -> anyhow::Result<FittedArtifacts> {
    let Some(dir) = dir else {
        return Ok(FittedArtifacts::unfitted(train_split(ds, &cfg.fit)));
    };
    let split: TrainSplit = read_json(&dir.join(SPLIT_FILE))?;
    Ok(FittedArtifacts {
        split,
        weights: read_optional::<WeightArtifact>(&dir.join(WEIGHTS_FILE))?,
        mask: read_optional::<MaskArtifact>(&dir.join(MASK_FILE))?,
        ensemble: read_optional::<EnsembleArtifact>(&dir.join(ENSEMBLE_FILE))?,
    })
}

/// Twin parameters for every agent of a synthetic cohort.
pub fn ground_truth_params(path: &Path, cfg: &mut RunConfig) -> anyhow::Result<()> {
    let truth: GroundTruth = read_json(path)?;
    let seed = cfg.eval.ibl.seed;
    cfg.eval.participant_params = truth
        .agents
        .into_iter()
        .map(|a| (a.participant_id, ibis_core::IblParameters { seed, ..a.params }))
        .collect::<BTreeMap<_, _>>();
    Ok(())
}

pub fn eval(cfg: &RunConfig, data: &Path, artifacts: Option<&Path>, out: &Path) -> anyhow::Result<()> {
    let ds = load(data)?;
    let art = load_artifacts(artifacts, &ds, cfg)?;
    let report = EvalContext::new(&ds, &art, &cfg.eval)
        .and_then(|c| c.evaluate())
        .core()?;
    let files = write_report(&report, &ds, out).core()?;
    cfg.write_resolved(out)?;
    print_table(&report);
    for f in files {
        log::info!("wrote {}", f.display());
    }
    Ok(())
}

pub fn twin(cfg: &RunConfig, data: &Path, participant: &str, out: &Path) -> anyhow::Result<()> {
    let ds = load(data)?;
    if !ds.participants().contains(&participant) {
        return Err(anyhow::Error::new(ibis_core::Error::from(
            ibis_core::eval::EvalError::UnknownParticipant(participant.to_string()),
        )));
    }
    let params = cfg.eval.participant_params.get(participant).unwrap_or(&cfg.eval.ibl);
    let (trace, twin) = twin_replay(ds.judgements_for(participant), &ds, params, cfg.eval.replay).core()?;
    let points = ibis_points(&ds, &twin).core()?;
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let trace_path = out.join("trace.csv");
    let f = File::create(&trace_path).with_context(|| format!("creating {}", trace_path.display()))?;
    trace
        .write_csv(BufWriter::new(f))
        .with_context(|| format!("writing {}", trace_path.display()))?;
    let points_path = out.join("ibis_points.csv");
    let f = File::create(&points_path).with_context(|| format!("creating {}", points_path.display()))?;
    write_points_csv(BufWriter::new(f), &points).with_context(|| format!("writing {}", points_path.display()))?;
    cfg.write_resolved(out)?;
    let acc = prediction_accuracy(&trace).core()?;
    println!(
        "participant {participant}: {} trials, prediction accuracy {acc:.4}",
        trace.len()
    );
    println!("{}", trace_path.display());
    println!("{}", points_path.display());
    Ok(())
}

pub fn report(dir: &Path) -> anyhow::Result<()> {
    let path = if dir.is_dir() {
        dir.join("report.json")
    } else {
        dir.to_path_buf()
    };
    let report: Report = read_json(&path)?;
    print_table(&report);
    Ok(())
}

fn mean_sd(v: &Option<ibis_core::eval::MeanSd>) -> String {
    match v {
        Some(m) => format!("{:.3} ± {:.3}", m.mean, m.sd),
        None => "-".into(),
    }
}

fn print_table(report: &Report) {
    println!(
        "{:<10} {:>14} {:>20} {:>16} {:>16}",
        "metric", "kde_average", "kde_individual", "regression_acc", "twin_acc"
    );
    for r in &report.rows {
        println!(
            "{:<10} {:>14.2} {:>20} {:>16} {:>16}",
            r.metric.as_str(),
            r.kde_score_average_participants,
            mean_sd(&r.kde_score_individuals),
            mean_sd(&r.regression_accuracy),
            mean_sd(&r.twin_prediction_accuracy),
        );
    }
}
