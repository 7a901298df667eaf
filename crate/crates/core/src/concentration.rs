//! Confidence-radius formulas and Monte-Carlo coverage audits.
//!
//! The radius functions are used by the oracles. The `coverage` submodule
//! samples from a known distribution to measure how often each radius is
//! violated; it reads the true parameter and is only used by tests and the
//! `audit` command.

use crate::error::{Error, Result};
use crate::framework::{Radius, SIMPLEX_TOLERANCE};

/// Log factor `L`, e.g. `log(SAHT/δ')`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LogTerm(f64);

impl LogTerm {
    pub fn new(value: f64) -> Result<Self> {
        if value >= 0.0 && value.is_finite() {
            Ok(Self(value))
        } else {
            Err(Error::Config(format!("log term must be finite and >= 0, got {value}")))
        }
    }

    /// `log(count / delta)`, clamped at zero.
    pub fn from_union(count: f64, delta: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::Config(format!("confidence level must be positive, got {delta}")));
        }
        Self::new((count / delta).ln().max(0.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// L1 radius for an empirical categorical distribution: `sqrt(2 d L / n)`.
pub fn l1_multinoulli_radius(dimension: usize, n: u64, log_term: LogTerm) -> Radius {
    Radius::from_counter(n, |n| (2.0 * dimension as f64 * log_term.0 / n).sqrt())
}

/// Per-entry Bernstein radius `sqrt(p(1-p) L / n) + L / n`. Takes the true
/// entry, so it is only meaningful in audits.
pub fn bernstein_entry_radius(p_entry: f64, n: u64, log_term: LogTerm) -> Radius {
    Radius::from_counter(n, |n| {
        (p_entry * (1.0 - p_entry) * log_term.0 / n).sqrt() + log_term.0 / n
    })
}

/// `Var_{s ~ dist}(values)`; `dist` must be a simplex row.
pub fn empirical_variance(dist: &[f64], values: &[f64]) -> Result<f64> {
    if dist.len() != values.len() {
        return Err(Error::DimensionMismatch {
            context: "variance",
            expected: dist.len(),
            actual: values.len(),
        });
    }
    let sum: f64 = dist.iter().sum();
    if dist.iter().any(|&p| p < 0.0) || (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
        return Err(Error::NotSimplex {
            context: "variance distribution".into(),
            sum,
        });
    }
    Ok(variance_under(dist, values))
}

/// `E[v²] − (E[v])²`, clamped at zero.
pub(crate) fn variance_under(dist: &[f64], values: &[f64]) -> f64 {
    let (m1, m2) = dist
        .iter()
        .zip(values)
        .fold((0.0, 0.0), |(m1, m2), (&p, &v)| (m1 + p * v, m2 + p * v * v));
    (m2 - m1 * m1).max(0.0)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Variance-aware bonus built from an upper and a lower value estimate:
///
/// ```text
/// 2 sqrt(Var_p̂(V̄) L / n) + 2 sqrt(E_p̂[(V̄ − V̲)²] L / n) + 5 H L / n
/// ```
pub fn variance_aware_bonus(
    p_hat: &[f64],
    v_upper: &[f64],
    v_lower: &[f64],
    n: u64,
    log_term: LogTerm,
    horizon: usize,
) -> Radius {
    debug_assert_eq!(p_hat.len(), v_upper.len());
    debug_assert_eq!(p_hat.len(), v_lower.len());
    Radius::from_counter(n, |n| {
        let l = log_term.0;
        let var = variance_under(p_hat, v_upper);
        let gap_sq: f64 = p_hat
            .iter()
            .zip(v_upper.iter().zip(v_lower))
            .map(|(&p, (&u, &w))| p * (u - w) * (u - w))
            .sum();
        2.0 * (var * l / n).sqrt() + 2.0 * (gap_sq * l / n).sqrt() + 5.0 * horizon as f64 * l / n
    })
}

pub mod coverage {
    //! Empirical violation rates of the radii against a known distribution.

    use super::*;
    use crate::rng::{categorical, RunRng};

    #[derive(Clone, Copy, Debug, PartialEq)]
    pub struct CoverageReport {
        pub trials: u64,
        pub violations: u64,
        pub nominal_delta: f64,
    }

    impl CoverageReport {
        pub fn rate(&self) -> f64 {
            self.violations as f64 / self.trials as f64
        }

        /// `δ + 2 · sqrt(δ(1 − δ)/trials)`.
        pub fn threshold(&self) -> f64 {
            let d = self.nominal_delta;
            d + 2.0 * (d * (1.0 - d) / self.trials as f64).sqrt()
        }

        pub fn passes(&self) -> bool {
            self.rate() <= self.threshold()
        }
    }

    fn empirical_row(p: &[f64], n: u64, trial: u64, run: &RunRng) -> Vec<f64> {
        let mut rng = run.round(trial).stream(0, 0);
        let mut counts = vec![0u64; p.len()];
        for _ in 0..n {
            counts[categorical(&mut rng, p)] += 1;
        }
        counts.iter().map(|&c| c as f64 / n as f64).collect()
    }

    fn count_violations(trials: u64, seed: u64, mut violated: impl FnMut(u64, &RunRng) -> bool) -> u64 {
        let run = RunRng::new(seed);
        (0..trials).filter(|&i| violated(i, &run)).count() as u64
    }

    /// `||p̂ − p||₁ > sqrt(2 d log(2/δ) / n)`.
    pub fn l1_coverage(p: &[f64], n: u64, delta: f64, trials: u64, seed: u64) -> Result<CoverageReport> {
        let log_term = LogTerm::from_union(2.0, delta)?;
        let radius = l1_multinoulli_radius(p.len(), n, log_term).value();
        let violations = count_violations(trials, seed, |i, run| {
            let p_hat = empirical_row(p, n, i, run);
            let l1: f64 = p_hat.iter().zip(p).map(|(a, b)| (a - b).abs()).sum();
            l1 > radius
        });
        Ok(CoverageReport { trials, violations, nominal_delta: delta })
    }

    /// `|p̂_j − p_j| > sqrt(p_j(1 − p_j) log(2/δ) / n) + log(2/δ) / n` for a
    /// Bernoulli entry with mean `p_entry`.
    pub fn bernstein_coverage(p_entry: f64, n: u64, delta: f64, trials: u64, seed: u64) -> Result<CoverageReport> {
        let log_term = LogTerm::from_union(2.0, delta)?;
        let radius = bernstein_entry_radius(p_entry, n, log_term).value();
        let row = [p_entry, 1.0 - p_entry];
        let violations = count_violations(trials, seed, |i, run| {
            let p_hat = empirical_row(&row, n, i, run);
            (p_hat[0] - p_entry).abs() > radius
        });
        Ok(CoverageReport { trials, violations, nominal_delta: delta })
    }

    /// `|(p̂ − p)ᵀ V*| > bonus(p̂, V*, V*, n, log(2/δ), H)`, i.e. the
    /// variance-aware radius evaluated with the true future values.
    pub fn variance_bonus_coverage(
        p: &[f64],
        v_star: &[f64],
        horizon: usize,
        n: u64,
        delta: f64,
        trials: u64,
        seed: u64,
    ) -> Result<CoverageReport> {
        let log_term = LogTerm::from_union(2.0, delta)?;
        let truth = dot(p, v_star);
        let violations = count_violations(trials, seed, |i, run| {
            let p_hat = empirical_row(p, n, i, run);
            let bonus = variance_aware_bonus(&p_hat, v_star, v_star, n, log_term, horizon).value();
            (dot(&p_hat, v_star) - truth).abs() > bonus
        });
        Ok(CoverageReport { trials, violations, nominal_delta: delta })
    }
}
