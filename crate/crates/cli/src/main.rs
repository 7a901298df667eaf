//! `cmabmt` command-line front end.
//!
//! Exit codes: 0 on success, 1 on configuration or input errors, 2 when an
//! invariant audit fails.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cmabmt::harness::{random_mdp, random_pmc, run_audit_suite, run_experiment, run_sweep, ExperimentConfig};
use cmabmt::pmc::format_pmc;
use cmabmt::rl::format_mdp;

#[derive(Parser)]
#[command(name = "cmabmt", version, about = "CUCB-MT experiments for episodic RL and PMC-GD")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a replicated experiment and write regret curves.
    Run {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run the invariant suites on the configured instance.
    Audit {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Repeat the experiment over several values of one key.
    Sweep {
        config: PathBuf,
        /// `KEY=v1,v2,...`, e.g. `T=1000,4000,16000`.
        #[arg(long)]
        param: String,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Generate a seeded random instance file.
    Gen {
        kind: GenKind,
        /// `S,A,H` for mdp or `U,V,k` for pmcgd; parentheses are optional.
        spec: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Mdp,
    Pmcgd,
}

/// Command-line overrides; these take precedence over the file and the
/// `CMABMT_SEED` environment variable.
#[derive(Args, Default)]
struct Overrides {
    #[arg(long)]
    env: Option<String>,
    #[arg(long)]
    instance: Option<String>,
    #[arg(long)]
    instance_seed: Option<u64>,
    #[arg(long)]
    oracle: Option<String>,
    #[arg(long, short = 'T')]
    rounds: Option<u64>,
    #[arg(long)]
    replications: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    audit_trials: Option<usize>,
    /// Disable the per-round audit flags.
    #[arg(long)]
    no_audit: bool,
    /// Any config key as `KEY=VALUE`; may be repeated.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn split_pair(pair: &str) -> anyhow::Result<(&str, &str)> {
    pair.split_once('=')
        .with_context(|| format!("expected KEY=VALUE, got `{pair}`"))
}

fn load_config(path: &Path, overrides: &Overrides) -> anyhow::Result<ExperimentConfig> {
    let mut config = ExperimentConfig::read(path)?;
    if let Ok(seed) = std::env::var("CMABMT_SEED") {
        config.set("seed", &seed).context("CMABMT_SEED")?;
    }
    let o = overrides;
    let pairs: [(&str, Option<String>); 11] = [
        ("env", o.env.clone()),
        ("instance", o.instance.clone()),
        ("instance_seed", o.instance_seed.map(|v| v.to_string())),
        ("oracle", o.oracle.clone()),
        ("rounds", o.rounds.map(|v| v.to_string())),
        ("replications", o.replications.map(|v| v.to_string())),
        ("seed", o.seed.map(|v| v.to_string())),
        ("delta", o.delta.map(|v| v.to_string())),
        ("output", o.output.as_ref().map(|p| p.display().to_string())),
        ("jobs", o.jobs.map(|v| v.to_string())),
        ("audit_trials", o.audit_trials.map(|v| v.to_string())),
    ];
    for (key, value) in pairs {
        if let Some(value) = value {
            config.set(key, &value)?;
        }
    }
    if o.no_audit {
        config.audit = false;
    }
    for pair in &o.set {
        let (k, v) = split_pair(pair)?;
        config.set(k, v)?;
    }
    config.validate()?;
    Ok(config)
}

enum Outcome {
    Done,
    AuditFailed,
}

fn execute(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Run { config, overrides } => {
            let config = load_config(&config, &overrides)?;
            let outcome = run_experiment(&config)?;
            let mean = outcome.curve.mean();
            let stderr = outcome.curve.stderr();
            let t = mean.len();
            println!(
                "{} rounds x {} replications: mean cumulative regret {:.6} (stderr {:.6}); output in {}",
                t,
                config.replications,
                mean[t - 1],
                stderr[t - 1],
                config.output.display()
            );
            Ok(Outcome::Done)
        }
        Command::Audit { config, overrides } => {
            let config = load_config(&config, &overrides)?;
            let report = run_audit_suite(&config)?;
            print!("{report}");
            Ok(if report.passed() { Outcome::Done } else { Outcome::AuditFailed })
        }
        Command::Sweep { config, param, overrides } => {
            let config = load_config(&config, &overrides)?;
            let (key, values) = split_pair(&param)?;
            let values: Vec<String> = values.split(',').map(|v| v.trim().to_string()).collect();
            let points = run_sweep(&config, key, &values)?;
            for p in points {
                let slope = p.slope.map_or("n/a".to_string(), |s| format!("{s:.4}"));
                println!(
                    "{key}={}: mean cumulative regret {:.6} (stderr {:.6}), slope {slope}",
                    p.value, p.final_mean_cum, p.final_stderr_cum
                );
            }
            Ok(Outcome::Done)
        }
        Command::Gen { kind, spec, seed, output } => {
            let inner = spec.trim().trim_start_matches('(').trim_end_matches(')');
            let dims: Vec<usize> = inner
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .with_context(|| format!("invalid size spec `{spec}`"))?;
            let [a, b, c] = dims[..] else {
                bail!("expected three sizes, got `{spec}`");
            };
            let text = match kind {
                GenKind::Mdp => format_mdp(&random_mdp(a, b, c, seed)?),
                GenKind::Pmcgd => format_pmc(&random_pmc(a, b, c, seed)?),
            };
            std::fs::write(&output, text).with_context(|| format!("writing {}", output.display()))?;
            Ok(Outcome::Done)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::AuditFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
