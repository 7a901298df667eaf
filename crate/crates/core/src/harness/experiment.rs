//! Replicated CUCB-MT runs with per-replication output files.

use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::framework::{run_cucb_mt, LearnerConfig, Trace};
use crate::pmc::{parse_pmc, PmcEnvironment, PmcGreedyOracle};
use crate::rl::{parse_mdp, ExtendedViOracle, MdpEnvironment, OptimisticViOracle};

use super::baseline::PerDimensionBaseline;
use super::config::{EnvKind, ExperimentConfig, InstanceSource, OracleKind};
use super::curve::{write_curve_csv, write_file, write_summary_csv, CurveRow, RegretCurve};
use super::generate::{random_mdp, random_pmc};

/// A loaded environment with its exact evaluator.
#[derive(Clone, Debug)]
pub enum Instance {
    Mdp(MdpEnvironment),
    Pmc(PmcEnvironment),
}

impl Instance {
    pub fn kind(&self) -> EnvKind {
        match self {
            Instance::Mdp(_) => EnvKind::EpisodicRl,
            Instance::Pmc(_) => EnvKind::PmcGd,
        }
    }
}

pub fn load_instance(config: &ExperimentConfig) -> Result<Instance> {
    match (&config.instance, config.env) {
        (InstanceSource::Random { dims: [s, a, h], seed }, EnvKind::EpisodicRl) => {
            Ok(Instance::Mdp(MdpEnvironment::new(random_mdp(*s, *a, *h, *seed)?)))
        }
        (InstanceSource::Random { dims: [u, v, k], seed }, EnvKind::PmcGd) => {
            Ok(Instance::Pmc(PmcEnvironment::new(random_pmc(*u, *v, *k, *seed)?)))
        }
        (InstanceSource::File(path), kind) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            match kind {
                EnvKind::EpisodicRl => Ok(Instance::Mdp(MdpEnvironment::new(parse_mdp(&text)?))),
                EnvKind::PmcGd => Ok(Instance::Pmc(PmcEnvironment::new(parse_pmc(&text)?))),
            }
        }
    }
}

/// Audit-flag tallies for one replication.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReplicationAudit {
    pub replication: usize,
    pub rounds: u64,
    pub optimism_checked: u64,
    pub optimism_violations: u64,
    pub truth_checked: u64,
    pub truth_outside: u64,
    /// Rounds where the truth was inside the region but optimism failed.
    pub optimism_violations_given_truth: u64,
}

impl ReplicationAudit {
    pub fn from_trace(replication: usize, trace: &Trace) -> Self {
        let mut a = ReplicationAudit {
            replication,
            rounds: trace.len() as u64,
            ..Default::default()
        };
        for r in &trace.records {
            if let Some(ok) = r.audit.optimism_held {
                a.optimism_checked += 1;
                a.optimism_violations += u64::from(!ok);
                if !ok && r.audit.truth_in_region == Some(true) {
                    a.optimism_violations_given_truth += 1;
                }
            }
            if let Some(inside) = r.audit.truth_in_region {
                a.truth_checked += 1;
                a.truth_outside += u64::from(!inside);
            }
        }
        a
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentOutcome {
    pub curve: RegretCurve,
    pub traces: Vec<Trace>,
    pub audits: Vec<ReplicationAudit>,
}

fn learner_config(config: &ExperimentConfig, replication: usize) -> LearnerConfig {
    LearnerConfig {
        rounds: config.rounds,
        seed: config.seed.wrapping_add(replication as u64),
        audit: config.audit,
    }
}

/// Runs one replication with seed `config.seed + replication`.
pub fn run_replication(config: &ExperimentConfig, instance: &Instance, replication: usize) -> Result<Trace> {
    let lc = learner_config(config, replication);
    let (rounds, delta) = (config.rounds, config.delta);
    match (instance, config.oracle) {
        (Instance::Mdp(env), OracleKind::ExtendedVi) => {
            let oracle = ExtendedViOracle::new(env.mdp().model().clone(), rounds, delta)?;
            run_cucb_mt(env, &oracle, lc)
        }
        (Instance::Mdp(env), OracleKind::OptimisticVi) => {
            let oracle = OptimisticViOracle::new(env.mdp().model().clone(), rounds, delta)?;
            run_cucb_mt(env, &oracle, lc)
        }
        (Instance::Pmc(env), OracleKind::PmcGreedy) => {
            let i = env.instance();
            let oracle = PmcGreedyOracle::new(i.sources(), i.targets(), i.budget(), rounds, delta)?
                .with_mode(config.greedy)
                .with_warm_start(config.warm_start);
            run_cucb_mt(env, &oracle, lc)
        }
        (Instance::Pmc(env), OracleKind::BaselinePerDimension) => {
            let i = env.instance();
            let oracle = PerDimensionBaseline::new(i.targets(), i.budget(), config.greedy);
            run_cucb_mt(env, &oracle, lc)
        }
        (instance, oracle) => Err(Error::IncompatibleOracle {
            env: instance.kind().to_string(),
            oracle: oracle.to_string(),
        }),
    }
}

fn replicate(config: &ExperimentConfig, instance: &Instance, out: Option<&Path>) -> Result<Vec<Trace>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| {
        (0..config.replications)
            .into_par_iter()
            .map(|rep| {
                let trace = run_replication(config, instance, rep)?;
                if let Some(dir) = out {
                    let rows = CurveRow::from_trace(&trace);
                    write_file(&dir.join(format!("rep_{rep}.csv")), |buf| write_curve_csv(buf, &rows))?;
                }
                Ok(trace)
            })
            .collect()
    })
}

/// Runs all replications in memory without writing files.
pub fn simulate(config: &ExperimentConfig, instance: &Instance) -> Result<ExperimentOutcome> {
    config.validate()?;
    let traces = replicate(config, instance, None)?;
    outcome(traces)
}

fn outcome(traces: Vec<Trace>) -> Result<ExperimentOutcome> {
    let curve = RegretCurve::from_traces(&traces)?;
    let audits = traces
        .iter()
        .enumerate()
        .map(|(i, t)| ReplicationAudit::from_trace(i, t))
        .collect();
    Ok(ExperimentOutcome { curve, traces, audits })
}

/// Loads the instance, runs the replications and writes into
/// `config.output`: `rep_<i>.csv` per replication, `summary.csv`,
/// `audit.csv` and the resolved `config.ini`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    config.validate()?;
    let instance = load_instance(config)?;
    let dir = config.output.as_path();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let traces = replicate(config, &instance, Some(dir))?;
    let result = outcome(traces)?;

    write_file(&dir.join("summary.csv"), |buf| write_summary_csv(buf, &result.curve.summary()))?;
    write_file(&dir.join("audit.csv"), |buf| write_audit_csv(buf, &result.audits))?;
    write_file(&dir.join("config.ini"), |buf| {
        buf.extend_from_slice(config.to_ini_string().as_bytes());
        Ok(())
    })?;
    Ok(result)
}

fn write_audit_csv(out: &mut Vec<u8>, audits: &[ReplicationAudit]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "replication",
        "rounds",
        "optimism_checked",
        "optimism_violations",
        "truth_checked",
        "truth_outside",
        "optimism_violations_given_truth",
    ])?;
    for a in audits {
        w.write_record(
            [
                a.replication as u64,
                a.rounds,
                a.optimism_checked,
                a.optimism_violations,
                a.truth_checked,
                a.truth_outside,
                a.optimism_violations_given_truth,
            ]
            .map(|x| x.to_string()),
        )?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

