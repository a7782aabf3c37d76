use ibis_core::eval::{fit_artifacts, write_report, EvalContext, EvalOptions, SplitPlan, REPORT_CSV_HEADER};
use ibis_core::learn::FitConfig;
use ibis_core::similarity::{HumanNormalization, MetricKind};
use ibis_core::synth::{generate_cohort, CohortConfig};

#[test]
fn report_directory_holds_tables_and_figures() {
    let (ds, _) = generate_cohort(&CohortConfig {
        n_participants: 3,
        ..CohortConfig::default()
    })
    .unwrap();
    let metrics = MetricKind::COMPARED.to_vec();
    let artifacts = fit_artifacts(&ds, &metrics, &FitConfig::default(), None, HumanNormalization::Ratio).unwrap();
    let options = EvalOptions {
        metrics,
        split_plan: SplitPlan {
            n_splits: 3,
            ..SplitPlan::default()
        },
        ..EvalOptions::default()
    };
    let report = EvalContext::new(&ds, &artifacts, &options).unwrap().evaluate().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let written = write_report(&report, &ds, dir.path()).unwrap();
    let names: Vec<String> = written
        .iter()
        .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    for expected in [
        "report.json",
        "report.csv",
        "figure1_points.csv",
        "figure6_points.csv",
        "figure7_points.csv",
    ] {
        assert!(names.iter().any(|n| n == expected), "{expected} missing from {names:?}");
    }

    let mut rd = csv::Reader::from_path(dir.path().join("report.csv")).unwrap();
    assert_eq!(rd.headers().unwrap().iter().collect::<Vec<_>>(), REPORT_CSV_HEADER);
    let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 6);
    let ibis = rows.iter().find(|r| &r[0] == "ibis").unwrap();
    assert!(!ibis[6].is_empty(), "twin accuracy column empty for ibis");
    let cosine = rows.iter().find(|r| &r[0] == "cosine").unwrap();
    assert!(cosine[6].is_empty());

    // One row per judged email in the average-level scatter.
    let judged: std::collections::HashSet<&str> = ds.judgements().iter().map(|j| j.email_id.as_str()).collect();
    let fig = std::fs::read_to_string(dir.path().join("figure2_points.csv")).unwrap();
    assert_eq!(fig.lines().count(), judged.len() + 1);
    for line in fig.lines().skip(1) {
        let v: Vec<f64> = line.split(',').skip(4).map(|x| x.parse().unwrap()).collect();
        assert!(v.iter().all(|x| (0.0..=1.0).contains(x)), "{line}");
    }

    let back: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(back["rows"].as_array().unwrap().len(), 6);
    assert_eq!(back["participants"].as_array().unwrap().len(), 3);
}
