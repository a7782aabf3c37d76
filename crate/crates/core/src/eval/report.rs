use std::collections::HashMap;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use super::harness::Report;
use super::splits::MeanSd;
use super::EvalError;
use crate::data::Dataset;
use crate::similarity::{MetricKind, SimilarityPoint};

pub const REPORT_CSV_HEADER: [&str; 11] = [
    "metric",
    "kde_average",
    "kde_individual_mean",
    "kde_individual_sd",
    "regression_accuracy_mean",
    "regression_accuracy_sd",
    "twin_prediction_accuracy_mean",
    "twin_prediction_accuracy_sd",
    "category_accuracy_mean",
    "category_accuracy_sd",
    "n_participants",
];

const FIGURE_HEADER: [&str; 8] = [
    "participant_id",
    "email_id",
    "category",
    "metric",
    "sim_phishing",
    "sim_ham",
    "human_sim_phishing",
    "human_sim_ham",
];

/// Scatter-export number for a metric's average-level figure.
pub fn figure_number(metric: MetricKind) -> Option<u32> {
    match metric {
        MetricKind::Semantic => Some(1),
        MetricKind::Cosine => Some(2),
        MetricKind::WeightedCosine => Some(3),
        MetricKind::PrunedCosine => Some(4),
        MetricKind::Ensemble => Some(5),
        MetricKind::Ibis => Some(6),
        MetricKind::Human => None,
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> EvalError + '_ {
    move |source| EvalError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> EvalError + '_ {
    move |e| EvalError::Io {
        path: path.to_path_buf(),
        source: e.into(),
    }
}

fn pair(m: &Option<MeanSd>) -> [String; 2] {
    match m {
        Some(m) => [m.mean.to_string(), m.sd.to_string()],
        None => [String::new(), String::new()],
    }
}

fn write_figure(
    path: &Path,
    dataset: &Dataset,
    participant: &str,
    series: &[(MetricKind, &[SimilarityPoint])],
    human: &[SimilarityPoint],
) -> Result<(), EvalError> {
    let human: HashMap<&str, [f64; 2]> = human.iter().map(|h| (h.email_id.as_str(), h.coords())).collect();
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(FIGURE_HEADER).map_err(csv_err(path))?;
    for (metric, points) in series {
        for p in *points {
            let [x, y] = p.on_unit_scale();
            let (hx, hy) = match human.get(p.email_id.as_str()) {
                Some([a, b]) => (a.to_string(), b.to_string()),
                None => (String::new(), String::new()),
            };
            let category = dataset.email(&p.email_id).map(|e| e.category.as_str()).unwrap_or("");
            w.write_record([
                participant,
                &p.email_id,
                category,
                metric.as_str(),
                &x.to_string(),
                &y.to_string(),
                &hx,
                &hy,
            ])
            .map_err(csv_err(path))?;
        }
    }
    w.flush().map_err(io_err(path))
}

/// Writes `report.json`, `report.csv` and one scatter CSV per figure into
/// `dir`. Metric coordinates are on the unit scale used for scoring.
pub fn write_report(report: &Report, dataset: &Dataset, dir: &Path) -> Result<Vec<PathBuf>, EvalError> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut written = Vec::new();

    let json = dir.join("report.json");
    let f = File::create(&json).map_err(io_err(&json))?;
    serde_json::to_writer_pretty(BufWriter::new(f), report).map_err(|source| EvalError::Json {
        path: json.clone(),
        source,
    })?;
    written.push(json);

    let csv_path = dir.join("report.csv");
    let mut w = csv::Writer::from_path(&csv_path).map_err(csv_err(&csv_path))?;
    w.write_record(REPORT_CSV_HEADER).map_err(csv_err(&csv_path))?;
    for r in &report.rows {
        let [km, ks] = pair(&r.kde_score_individuals);
        let [rm, rs] = pair(&r.regression_accuracy);
        let [tm, ts] = pair(&r.twin_prediction_accuracy);
        let [cm, cs] = pair(&r.category_accuracy);
        w.write_record([
            r.metric.as_str().to_string(),
            r.kde_score_average_participants.to_string(),
            km,
            ks,
            rm,
            rs,
            tm,
            ts,
            cm,
            cs,
            r.n_participants_scored.to_string(),
        ])
        .map_err(csv_err(&csv_path))?;
    }
    w.flush().map_err(io_err(&csv_path))?;
    written.push(csv_path);

    for (metric, points) in &report.figures.average {
        if let Some(n) = figure_number(*metric) {
            let path = dir.join(format!("figure{n}_points.csv"));
            write_figure(&path, dataset, "", &[(*metric, points)], &report.figures.human_average)?;
            written.push(path);
        }
    }
    if let Some(ind) = &report.figures.individual {
        let path = dir.join("figure7_points.csv");
        let mut series: Vec<(MetricKind, &[SimilarityPoint])> = vec![(MetricKind::Human, &ind.human)];
        series.extend(
            ind.metrics
                .iter()
                .filter(|(m, _)| *m != MetricKind::Human)
                .map(|(m, p)| (*m, p.as_slice())),
        );
        write_figure(&path, dataset, &ind.participant_id, &series, &ind.human)?;
        written.push(path);
    }
    Ok(written)
}
