use std::collections::HashSet;

use crate::error::{Error, Result};

use super::MeanMatrix;

/// A confidence radius. `Unbounded` stands for an arm that has never been
/// observed, whose region is the whole parameter space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Radius {
    Finite(f64),
    Unbounded,
}

impl Radius {
    /// Numeric value; `Unbounded` maps to `f64::INFINITY`.
    pub fn value(self) -> f64 {
        match self {
            Radius::Finite(r) => r,
            Radius::Unbounded => f64::INFINITY,
        }
    }

    pub fn is_unbounded(self) -> bool {
        matches!(self, Radius::Unbounded)
    }

    /// `Unbounded` when `n == 0`, otherwise `Finite(f(n))`.
    pub fn from_counter(n: u64, f: impl FnOnce(f64) -> f64) -> Self {
        if n == 0 {
            Radius::Unbounded
        } else {
            Radius::Finite(f(n as f64))
        }
    }
}

/// Per-arm scales of the `1/sqrt(N)` and `1/N` terms of a radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadiusParams {
    pub sqrt_scale: f64,
    pub linear_scale: f64,
}

impl RadiusParams {
    pub fn new(sqrt_scale: f64, linear_scale: f64) -> Self {
        debug_assert!(sqrt_scale >= 0.0 && linear_scale >= 0.0);
        Self {
            sqrt_scale,
            linear_scale,
        }
    }
}

/// `F / sqrt(n) + I / n`, or [`Radius::Unbounded`] for an unvisited arm.
pub fn confidence_radius(params: RadiusParams, n: u64) -> Radius {
    Radius::from_counter(n, |n| params.sqrt_scale / n.sqrt() + params.linear_scale / n)
}

/// Outcome of one triggered base arm in one round.
#[derive(Clone, Debug, PartialEq)]
pub struct TriggeredObservation {
    pub arm: usize,
    pub outcome: Vec<f64>,
}

impl TriggeredObservation {
    pub fn one_hot(arm: usize, dimension: usize, hot: usize) -> Self {
        let mut outcome = vec![0.0; dimension];
        outcome[hot] = 1.0;
        Self { arm, outcome }
    }
}

/// Counters `N_i` and running empirical means for every base arm.
#[derive(Clone, Debug, PartialEq)]
pub struct ArmStatistics {
    counters: Vec<u64>,
    means: MeanMatrix,
}

impl ArmStatistics {
    pub fn new(arms: usize, dimension: usize) -> Self {
        Self {
            counters: vec![0; arms],
            means: MeanMatrix::zeros(arms, dimension),
        }
    }

    pub fn arms(&self) -> usize {
        self.counters.len()
    }

    pub fn dimension(&self) -> usize {
        self.means.dimension()
    }

    pub fn count(&self, arm: usize) -> u64 {
        self.counters[arm]
    }

    pub fn counters(&self) -> &[u64] {
        &self.counters
    }

    pub fn mean(&self, arm: usize) -> &[f64] {
        self.means.row(arm)
    }

    pub fn means(&self) -> &MeanMatrix {
        &self.means
    }

    /// Applies one round of observations. The whole batch is validated
    /// before anything is written, so a rejected round leaves the
    /// statistics untouched.
    pub fn update(&mut self, observations: &[TriggeredObservation]) -> Result<()> {
        let mut seen = HashSet::with_capacity(observations.len());
        for obs in observations {
            if obs.arm >= self.arms() {
                return Err(Error::ArmOutOfRange {
                    index: obs.arm,
                    arms: self.arms(),
                });
            }
            if obs.outcome.len() != self.dimension() {
                return Err(Error::DimensionMismatch {
                    context: "observation outcome",
                    expected: self.dimension(),
                    actual: obs.outcome.len(),
                });
            }
            if let Some(&bad) = obs.outcome.iter().find(|x| !(0.0..=1.0).contains(*x)) {
                return Err(Error::NotAProbability {
                    context: format!("outcome of arm {}", obs.arm),
                    value: bad,
                });
            }
            if !seen.insert(obs.arm) {
                return Err(Error::DuplicateArm(obs.arm));
            }
        }
        for obs in observations {
            self.counters[obs.arm] += 1;
            let n = self.counters[obs.arm] as f64;
            for (m, &x) in self.means.row_mut(obs.arm).iter_mut().zip(&obs.outcome) {
                *m += (x - *m) / n;
                // the incremental rule can drift a few ulps outside [0, 1]
                *m = m.clamp(0.0, 1.0);
            }
        }
        Ok(())
    }
}
