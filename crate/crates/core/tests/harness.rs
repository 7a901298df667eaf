use std::fs;

use cmabmt::harness::{
    load_instance, random_mdp, read_curve_csv, read_summary_csv, run_audit_suite, run_experiment,
    run_replication, run_sweep, CurveRow, EnvKind, ExperimentConfig,
};
use cmabmt::rl::format_mdp;
use cmabmt::Error;

fn config(text: &str, out: &std::path::Path) -> ExperimentConfig {
    let mut c = ExperimentConfig::from_ini_str(text).unwrap();
    c.output = out.to_path_buf();
    c
}

#[test]
fn single_round_writes_one_row_per_file() {
    let dir = tempfile::tempdir().unwrap();
    let c = config("rounds = 1\nreplications = 2\n", dir.path());
    run_experiment(&c).unwrap();
    for file in ["rep_0.csv", "rep_1.csv", "summary.csv"] {
        let text = fs::read_to_string(dir.path().join(file)).unwrap();
        assert_eq!(text.lines().count(), 2, "{file}");
    }
    let rows = read_curve_csv(fs::File::open(dir.path().join("rep_0.csv")).unwrap()).unwrap();
    assert_eq!(rows[0].cum_regret, rows[0].instant_regret);
}

#[test]
fn single_policy_environment_has_zero_regret() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.mdp");
    fs::write(&path, format_mdp(&random_mdp(1, 1, 3, 4).unwrap())).unwrap();
    let text = format!("instance = {}\nrounds = 50\nreplications = 2\n", path.display());
    for oracle in ["extended-vi", "optimistic-vi"] {
        let mut c = config(&text, &dir.path().join(oracle));
        c.set("oracle", oracle).unwrap();
        let out = run_experiment(&c).unwrap();
        assert!(out.curve.replications().iter().flatten().all(|&r| r == 0.0));
    }
}

#[test]
fn reruns_and_replication_seeds_are_isolated() {
    let dir = tempfile::tempdir().unwrap();
    let a = config("oracle = optimistic-vi\nrounds = 300\nreplications = 2\nseed = 5\n", &dir.path().join("a"));
    let b = config("oracle = optimistic-vi\nrounds = 300\nreplications = 2\nseed = 5\n", &dir.path().join("b"));
    run_experiment(&a).unwrap();
    run_experiment(&b).unwrap();
    assert_eq!(
        fs::read(dir.path().join("a/rep_0.csv")).unwrap(),
        fs::read(dir.path().join("b/rep_0.csv")).unwrap()
    );

    // replication i runs with seed + i regardless of the others
    let instance = load_instance(&a).unwrap();
    let mut shifted = a.clone();
    shifted.seed = 6;
    assert_eq!(
        run_replication(&a, &instance, 1).unwrap(),
        run_replication(&shifted, &instance, 0).unwrap()
    );
    let mut more = a.clone();
    more.replications = 5;
    assert_eq!(
        run_replication(&a, &instance, 0).unwrap(),
        run_replication(&more, &instance, 0).unwrap()
    );
}

#[test]
fn written_curves_reproduce_memory_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(
        "env = pmc-gd\noracle = pmc-greedy\ninstance = random:6,4,2\nrounds = 400\nreplications = 3\n",
        dir.path(),
    );
    let out = run_experiment(&c).unwrap();
    for (i, trace) in out.traces.iter().enumerate() {
        let rows = read_curve_csv(fs::File::open(dir.path().join(format!("rep_{i}.csv"))).unwrap()).unwrap();
        assert_eq!(rows, CurveRow::from_trace(trace));
    }
    let summary = read_summary_csv(fs::File::open(dir.path().join("summary.csv")).unwrap()).unwrap();
    assert_eq!(summary, out.curve.summary());
    for (t, row) in summary.iter().enumerate() {
        let mean = out.traces.iter().map(|tr| tr.records[t].cum_regret).sum::<f64>() / 3.0;
        assert!((row.mean_cum - mean).abs() <= 1e-12 * mean.abs().max(1.0));
    }
}

#[test]
fn audit_flags_are_recorded_when_enabled() {
    let dir = tempfile::tempdir().unwrap();
    let c = config("oracle = extended-vi\nrounds = 20\n", dir.path());
    let out = run_experiment(&c).unwrap();
    assert!(out.traces[0].records.iter().all(|r| r.audit.optimism_held.is_some()));
    assert_eq!(out.audits[0].optimism_checked, 20);

    let mut quiet = c.clone();
    quiet.audit = false;
    quiet.output = dir.path().join("quiet");
    let out = run_experiment(&quiet).unwrap();
    assert!(out.traces[0].records.iter().all(|r| r.audit.optimism_held.is_none()));
    let rows = read_curve_csv(fs::File::open(quiet.output.join("rep_0.csv")).unwrap()).unwrap();
    assert!(rows.iter().all(|r| r.truth_in_region.is_none()));
}

#[test]
fn rl_regret_is_non_negative_and_cumulative_non_decreasing() {
    let dir = tempfile::tempdir().unwrap();
    let c = config("oracle = optimistic-vi\nrounds = 500\nreplications = 2\n", dir.path());
    let out = run_experiment(&c).unwrap();
    for trace in &out.traces {
        assert!(trace.records.iter().all(|r| r.instant_regret >= -1e-12));
        assert!(trace.cumulative().windows(2).all(|w| w[1] >= w[0] - 1e-12));
    }
}

#[test]
fn configuration_errors() {
    let dir = tempfile::tempdir().unwrap();
    let missing = config("instance = does/not/exist.mdp\n", dir.path());
    assert!(matches!(run_experiment(&missing), Err(Error::Io { .. })));
    let mut bad = ExperimentConfig::default();
    bad.env = EnvKind::PmcGd;
    assert!(matches!(run_experiment(&bad), Err(Error::IncompatibleOracle { .. })));
}

#[test]
fn config_file_resolves_relative_instance() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("m.mdp"), format_mdp(&random_mdp(2, 2, 2, 1).unwrap())).unwrap();
    fs::write(dir.path().join("exp.ini"), "instance = m.mdp\nrounds = 5\n").unwrap();
    let c = ExperimentConfig::load(&dir.path().join("exp.ini")).unwrap();
    assert!(load_instance(&c).is_ok());
}

#[test]
fn audit_suites_pass_on_generated_instances() {
    for text in [
        "instance = random:3,2,3\naudit_trials = 300\n",
        "env = pmc-gd\noracle = pmc-greedy\ninstance = random:8,6,2\naudit_trials = 300\n",
    ] {
        let c = ExperimentConfig::from_ini_str(text).unwrap();
        let report = run_audit_suite(&c).unwrap();
        assert!(report.passed(), "{report}");
        assert!(report.checks.len() >= 4);
    }
}

#[test]
fn sweep_writes_one_experiment_per_value() {
    let dir = tempfile::tempdir().unwrap();
    let c = config("oracle = extended-vi\nreplications = 2\n", dir.path());
    let points = run_sweep(&c, "T", &["100".into(), "400".into()]).unwrap();
    assert_eq!(points.len(), 2);
    assert_eq!(points[1].rounds, 400);
    assert!(dir.path().join("T=400/summary.csv").exists());
    let sweep = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(sweep.lines().count(), 3);
    assert!(run_sweep(&c, "T", &[]).is_err());
    assert!(run_sweep(&c, "bogus", &["1".into()]).is_err());
}
