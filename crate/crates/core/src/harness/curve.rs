//! Regret curves and their CSV form.
//!
//! Per-replication files have the columns
//! `round,instant_regret,cum_regret,optimism_held,truth_in_region`; audit
//! flags are `1`, `0`, or empty when the check was not run. The summary has
//! `round,mean_cum,stderr_cum`. Floats are written with 17 significant
//! digits so that reading a file back reproduces the values exactly.

use std::path::Path;

use crate::error::{Error, Result};
use crate::framework::Trace;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveRow {
    pub round: u64,
    pub instant_regret: f64,
    pub cum_regret: f64,
    pub optimism_held: Option<bool>,
    pub truth_in_region: Option<bool>,
}

impl CurveRow {
    pub fn from_trace(trace: &Trace) -> Vec<CurveRow> {
        trace
            .records
            .iter()
            .map(|r| CurveRow {
                round: r.round,
                instant_regret: r.instant_regret,
                cum_regret: r.cum_regret,
                optimism_held: r.audit.optimism_held,
                truth_in_region: r.audit.truth_in_region,
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SummaryRow {
    pub round: u64,
    pub mean_cum: f64,
    pub stderr_cum: f64,
}

/// Cumulative regret per replication, all of the same length.
#[derive(Clone, Debug, PartialEq)]
pub struct RegretCurve {
    replications: Vec<Vec<f64>>,
}

impl RegretCurve {
    pub fn new(replications: Vec<Vec<f64>>) -> Result<Self> {
        let len = replications
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::Config("a curve needs at least one replication".into()))?;
        if let Some(bad) = replications.iter().find(|r| r.len() != len) {
            return Err(Error::DimensionMismatch {
                context: "replication length",
                expected: len,
                actual: bad.len(),
            });
        }
        Ok(Self { replications })
    }

    pub fn from_traces(traces: &[Trace]) -> Result<Self> {
        Self::new(traces.iter().map(Trace::cumulative).collect())
    }

    pub fn replications(&self) -> &[Vec<f64>] {
        &self.replications
    }

    pub fn rounds(&self) -> usize {
        self.replications[0].len()
    }

    /// Mean cumulative regret per round.
    pub fn mean(&self) -> Vec<f64> {
        let n = self.replications.len() as f64;
        (0..self.rounds())
            .map(|t| self.replications.iter().map(|r| r[t]).sum::<f64>() / n)
            .collect()
    }

    /// Standard error of the mean per round (sample standard deviation over
    /// `sqrt(n)`; zero for a single replication).
    pub fn stderr(&self) -> Vec<f64> {
        let n = self.replications.len();
        let mean = self.mean();
        if n < 2 {
            return vec![0.0; self.rounds()];
        }
        mean.iter()
            .enumerate()
            .map(|(t, &m)| {
                let ss: f64 = self.replications.iter().map(|r| (r[t] - m).powi(2)).sum();
                (ss / (n - 1) as f64).sqrt() / (n as f64).sqrt()
            })
            .collect()
    }

    pub fn summary(&self) -> Vec<SummaryRow> {
        self.mean()
            .into_iter()
            .zip(self.stderr())
            .enumerate()
            .map(|(i, (mean_cum, stderr_cum))| SummaryRow {
                round: i as u64 + 1,
                mean_cum,
                stderr_cum,
            })
            .collect()
    }
}

/// Least-squares slope of `ln(mean cumulative regret)` against `ln t` over
/// the 1-based rounds `t0..=t1`. `None` when the window is invalid or some
/// value in it is not positive.
pub fn summarize_slope(curve: &RegretCurve, window: (usize, usize)) -> Option<f64> {
    log_log_slope(&curve.mean(), window)
}

pub(crate) fn log_log_slope(cum: &[f64], (t0, t1): (usize, usize)) -> Option<f64> {
    if t0 < 2 || t1 <= t0 || t1 > cum.len() {
        return None;
    }
    let points: Vec<(f64, f64)> = (t0..=t1)
        .map(|t| (t, cum[t - 1]))
        .filter(|&(_, c)| c > 0.0)
        .map(|(t, c)| ((t as f64).ln(), c.ln()))
        .collect();
    if points.len() != t1 - t0 + 1 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_flag(flag: Option<bool>) -> &'static str {
    match flag {
        Some(true) => "1",
        Some(false) => "0",
        None => "",
    }
}

fn parse_flag(field: &str, line: u64) -> Result<Option<bool>> {
    match field {
        "1" => Ok(Some(true)),
        "0" => Ok(Some(false)),
        "" => Ok(None),
        other => Err(Error::Parse {
            position: line as usize,
            message: format!("invalid audit flag `{other}`"),
        }),
    }
}

fn parse_field<T: std::str::FromStr>(field: &str, what: &str, line: u64) -> Result<T> {
    field.parse().map_err(|_| Error::Parse {
        position: line as usize,
        message: format!("invalid {what} `{field}`"),
    })
}

fn parse_float(field: &str, what: &str, line: u64) -> Result<f64> {
    let x: f64 = parse_field(field, what, line)?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Parse {
            position: line as usize,
            message: format!("non-finite {what}"),
        })
    }
}

const CURVE_HEADER: [&str; 5] = ["round", "instant_regret", "cum_regret", "optimism_held", "truth_in_region"];
const SUMMARY_HEADER: [&str; 3] = ["round", "mean_cum", "stderr_cum"];

pub fn write_curve_csv<W: std::io::Write>(out: W, rows: &[CurveRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CURVE_HEADER)?;
    for r in rows {
        w.write_record([
            r.round.to_string(),
            fmt_f64(r.instant_regret),
            fmt_f64(r.cum_regret),
            fmt_flag(r.optimism_held).to_string(),
            fmt_flag(r.truth_in_region).to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

fn check_header(reader: &mut csv::Reader<impl std::io::Read>, expected: &[&str]) -> Result<()> {
    let header = reader.headers()?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(Error::Parse {
            position: 1,
            message: format!("expected `{}`", expected.join(",")),
        });
    }
    Ok(())
}

pub fn read_curve_csv<R: std::io::Read>(input: R) -> Result<Vec<CurveRow>> {
    let mut reader = csv::Reader::from_reader(input);
    check_header(&mut reader, &CURVE_HEADER)?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != CURVE_HEADER.len() {
            return Err(Error::Parse {
                position: line as usize,
                message: format!("expected {} fields", CURVE_HEADER.len()),
            });
        }
        rows.push(CurveRow {
            round: parse_field(&record[0], "round", line)?,
            instant_regret: parse_float(&record[1], "instant_regret", line)?,
            cum_regret: parse_float(&record[2], "cum_regret", line)?,
            optimism_held: parse_flag(&record[3], line)?,
            truth_in_region: parse_flag(&record[4], line)?,
        });
    }
    Ok(rows)
}

pub fn write_summary_csv<W: std::io::Write>(out: W, rows: &[SummaryRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER)?;
    for r in rows {
        w.write_record([r.round.to_string(), fmt_f64(r.mean_cum), fmt_f64(r.stderr_cum)])?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn read_summary_csv<R: std::io::Read>(input: R) -> Result<Vec<SummaryRow>> {
    let mut reader = csv::Reader::from_reader(input);
    check_header(&mut reader, &SUMMARY_HEADER)?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != SUMMARY_HEADER.len() {
            return Err(Error::Parse {
                position: line as usize,
                message: format!("expected {} fields", SUMMARY_HEADER.len()),
            });
        }
        rows.push(SummaryRow {
            round: parse_field(&record[0], "round", line)?,
            mean_cum: parse_float(&record[1], "mean_cum", line)?,
            stderr_cum: parse_float(&record[2], "stderr_cum", line)?,
        });
    }
    Ok(rows)
}

pub(crate) fn write_file(path: &Path, write: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<()> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    std::fs::write(path, buf).map_err(|e| Error::io(path, e))
}
