use ibis_core::eval::{prediction_accuracy, EvalError};
use ibis_core::ibl::{twin_replay, IblError, ReplayOptions, TraceRecord};
use ibis_core::similarity::{ibis_points, ibis_trial_points};
use ibis_core::synth::{generate_cohort, CohortConfig};
use ibis_core::{Category, Dataset, GroundTruth, IblParameters, TwinTrace};
use proptest::prelude::*;

fn small_cohort(noise: [f64; 2], seed: u64) -> (Dataset, GroundTruth) {
    generate_cohort(&CohortConfig {
        rng_seed: seed,
        n_participants: 4,
        noise_range: noise,
        ..CohortConfig::default()
    })
    .unwrap()
}

fn record(predicted: Category, actual: Category) -> TraceRecord {
    TraceRecord {
        trial_index: 0,
        email_id: "e".into(),
        v_phishing: 0.5,
        v_ham: 0.5,
        v_noise_free: [0.5, 0.5],
        predicted,
        actual,
        utility: 1.0,
        stored: true,
    }
}

#[test]
fn accuracy_of_a_perfect_trace_is_one() {
    let trace = TwinTrace {
        participant_id: "p".into(),
        records: vec![
            record(Category::Phishing, Category::Phishing),
            record(Category::Ham, Category::Ham),
        ],
    };
    assert_eq!(prediction_accuracy(&trace).unwrap(), 1.0);
}

#[test]
fn accuracy_of_an_empty_trace_is_an_error() {
    assert!(matches!(
        prediction_accuracy(&TwinTrace::default()),
        Err(EvalError::EmptyTrace)
    ));
}

#[test]
fn noiseless_agent_is_recovered_by_its_own_parameters() {
    let (ds, truth) = small_cohort([0.0, 0.0], 42);
    for agent in &truth.agents {
        let (trace, _) = twin_replay(
            ds.judgements_for(&agent.participant_id),
            &ds,
            &agent.params,
            ReplayOptions::default(),
        )
        .unwrap();
        let later = &trace.records[5..];
        let hits = later.iter().filter(|r| r.predicted == r.actual).count();
        let acc = hits as f64 / later.len() as f64;
        assert!(acc >= 0.9, "{}: {acc}", agent.participant_id);
    }
}

#[test]
fn single_trial_replay_stores_nothing_without_feedback() {
    let (ds, truth) = small_cohort([0.02, 0.1], 7);
    let pid = &truth.agents[0].participant_id;
    let first = ds.judgements_for(pid).take(1);
    let (trace, twin) = twin_replay(first, &ds, &IblParameters::default(), ReplayOptions::default()).unwrap();
    assert_eq!(trace.len(), 1);
    assert!(!trace.records[0].stored);
    // Only the two prior instances remain.
    assert_eq!(twin.memory().instances().len(), 2);
}

#[test]
fn replay_is_deterministic_and_seed_sensitive() {
    let (ds, truth) = small_cohort([0.02, 0.1], 3);
    let pid = &truth.agents[1].participant_id;
    let run = |seed| {
        let params = IblParameters {
            seed,
            ..IblParameters::default()
        };
        twin_replay(ds.judgements_for(pid), &ds, &params, ReplayOptions::default())
            .unwrap()
            .0
    };
    assert_eq!(run(5), run(5));
    let (a, b) = (run(5), run(6));
    assert!(a
        .records
        .iter()
        .zip(&b.records)
        .any(|(x, y)| x.v_phishing != y.v_phishing));
}

#[test]
fn unsorted_trials_are_rejected() {
    let (ds, truth) = small_cohort([0.02, 0.1], 3);
    let mut js: Vec<_> = ds.judgements_for(&truth.agents[0].participant_id).collect();
    js.swap(0, 1);
    let err = twin_replay(js, &ds, &IblParameters::default(), ReplayOptions::default()).unwrap_err();
    assert!(matches!(err, IblError::UnsortedTrials(_)));
}

#[test]
fn trace_csv_has_seven_columns() {
    let (ds, truth) = small_cohort([0.02, 0.1], 3);
    let pid = &truth.agents[0].participant_id;
    let (trace, _) = twin_replay(
        ds.judgements_for(pid),
        &ds,
        &IblParameters::default(),
        ReplayOptions::default(),
    )
    .unwrap();
    let mut buf = Vec::new();
    trace.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "participant_id,trial_index,v_phishing,v_ham,predicted,actual,utility"
    );
    assert_eq!(lines.len(), 61);
    assert!(lines.iter().all(|l| l.split(',').count() == 7));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn ibis_points_lie_on_the_simplex(seed in 0u64..1000, decay in 0.1f64..2.0, noise in 0.05f64..0.5) {
        let (ds, truth) = small_cohort([0.02, 0.1], seed);
        let params = IblParameters { decay, noise, ..IblParameters::default() };
        let pid = &truth.agents[0].participant_id;
        let (trace, twin) = twin_replay(ds.judgements_for(pid), &ds, &params, ReplayOptions::default()).unwrap();
        let all = ibis_points(&ds, &twin).unwrap();
        prop_assert_eq!(all.len(), ds.emails().len());
        for p in all.iter().chain(&ibis_trial_points(&trace).unwrap()) {
            prop_assert!((p.sim_phishing + p.sim_ham - 1.0).abs() < 1e-9);
            prop_assert!((0.0..=1.0).contains(&p.sim_phishing));
        }
        let acc = prediction_accuracy(&trace).unwrap();
        prop_assert!((0.0..=1.0).contains(&acc));
    }
}
