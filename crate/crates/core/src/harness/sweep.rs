//! One-parameter scaling studies over repeated experiments.

use crate::error::{Error, Result};

use super::config::ExperimentConfig;
use super::curve::{log_log_slope, write_file};
use super::experiment::run_experiment;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub value: String,
    pub rounds: u64,
    pub final_mean_cum: f64,
    pub final_stderr_cum: f64,
    /// Log-log slope of the mean curve over `[T/4, T]`, when defined.
    pub slope: Option<f64>,
}

/// Runs one experiment per value of `param`, each writing into
/// `<output>/<param>=<value>/`, and writes `<output>/sweep.csv`.
pub fn run_sweep(base: &ExperimentConfig, param: &str, values: &[String]) -> Result<Vec<SweepPoint>> {
    if values.is_empty() {
        return Err(Error::Config(format!("no values given for `{param}`")));
    }
    let mut points = Vec::with_capacity(values.len());
    for value in values {
        let mut config = base.clone();
        config.set(param, value)?;
        config.output = base.output.join(format!("{param}={value}"));
        config.validate()?;
        let outcome = run_experiment(&config)?;
        let mean = outcome.curve.mean();
        let stderr = outcome.curve.stderr();
        let t = mean.len();
        points.push(SweepPoint {
            value: value.clone(),
            rounds: config.rounds,
            final_mean_cum: mean[t - 1],
            final_stderr_cum: stderr[t - 1],
            slope: log_log_slope(&mean, ((t / 4).max(2), t)),
        });
    }
    let path = base.output.join("sweep.csv");
    write_file(&path, |buf| {
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(["param", "value", "rounds", "final_mean_cum", "final_stderr_cum", "slope"])?;
        for p in &points {
            w.write_record([
                param.to_string(),
                p.value.clone(),
                p.rounds.to_string(),
                format!("{:.16e}", p.final_mean_cum),
                format!("{:.16e}", p.final_stderr_cum),
                p.slope.map_or(String::new(), |s| format!("{s:.16e}")),
            ])?;
        }
        w.flush().map_err(|e| Error::Csv(e.into()))?;
        Ok(())
    })?;
    Ok(points)
}
