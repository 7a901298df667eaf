use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cmabmt(args: &[&str], seed_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cmabmt"));
    cmd.args(args).env_remove("CMABMT_SEED");
    if let Some(seed) = seed_env {
        cmd.env("CMABMT_SEED", seed);
    }
    cmd.output().unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("exp.ini");
    fs::write(&path, format!("{body}\noutput = {}\n", dir.join("out").display())).unwrap();
    path.display().to_string()
}

fn resolved(dir: &Path) -> String {
    fs::read_to_string(dir.join("out/config.ini")).unwrap()
}

#[test]
fn gen_then_run_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let mdp = dir.path().join("m.mdp");
    let out = cmabmt(&["gen", "mdp", "(3,2,3)", "--seed", "4", "-o", mdp.to_str().unwrap()], None);
    assert!(out.status.success());
    let pmc = dir.path().join("g.pmc");
    let out = cmabmt(&["gen", "pmcgd", "5,3,2", "-o", pmc.to_str().unwrap()], None);
    assert!(out.status.success());
    assert!(fs::read_to_string(&pmc).unwrap().starts_with("5 3 2"));

    let config = write_config(dir.path(), "instance = m.mdp\noracle = optimistic-vi\nrounds = 30\nreplications = 2");
    let out = cmabmt(&["run", &config], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for file in ["rep_0.csv", "rep_1.csv", "summary.csv", "audit.csv", "config.ini"] {
        assert!(dir.path().join("out").join(file).exists(), "{file}");
    }
}

#[test]
fn precedence_is_cli_over_env_over_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "rounds = 5\nseed = 1");
    assert!(cmabmt(&["run", &config], None).status.success());
    assert!(resolved(dir.path()).contains("seed = 1\n"));

    assert!(cmabmt(&["run", &config], Some("7")).status.success());
    assert!(resolved(dir.path()).contains("seed = 7\n"));

    let out = cmabmt(&["run", &config, "--seed", "9", "--set", "rounds=3"], Some("7"));
    assert!(out.status.success());
    let text = resolved(dir.path());
    assert!(text.contains("seed = 9\n") && text.contains("rounds = 3\n"));
}

#[test]
fn configuration_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "env = pmc-gd\noracle = extended-vi");
    assert_eq!(cmabmt(&["run", &config], None).status.code(), Some(1));
    let config = write_config(dir.path(), "rounds = 0");
    assert_eq!(cmabmt(&["run", &config], None).status.code(), Some(1));
    assert_eq!(cmabmt(&["run", "/nonexistent/exp.ini"], None).status.code(), Some(1));
    let config = write_config(dir.path(), "rounds = 5");
    assert_eq!(cmabmt(&["run", &config], Some("abc")).status.code(), Some(1));
    assert_eq!(cmabmt(&["gen", "mdp", "3,2", "-o", "x"], None).status.code(), Some(1));
}

#[test]
fn audit_reports_every_check() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "env = pmc-gd\noracle = pmc-greedy\ninstance = random:6,4,2\naudit_trials = 200");
    let out = cmabmt(&["audit", &config], None);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() >= 4);
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn sweep_over_rounds() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "oracle = extended-vi");
    let out = cmabmt(&["sweep", &config, "--param", "T=50,100"], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("out/T=100/summary.csv").exists());
    assert!(dir.path().join("out/sweep.csv").exists());
    assert_eq!(cmabmt(&["sweep", &config, "--param", "T"], None).status.code(), Some(1));
}
