use crate::error::{Error, Result};
use crate::framework::{MeanMatrix, Radius, TriggeredObservation, SIMPLEX_TOLERANCE};
use crate::rng::{categorical, RoundDraws, OUTCOME_CHANNEL};

/// Bipartite PMC-GD instance with null-augmented rows.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteInstance {
    sources: usize,
    targets: usize,
    budget: usize,
    /// `U x (V + 1)`; the last column is the null outcome.
    rows: MeanMatrix,
}

impl BipartiteInstance {
    /// `edges[u][v] = p(u, v)`; each row must sum to at most one.
    pub fn new<R: AsRef<[f64]>>(targets: usize, budget: usize, edges: &[R]) -> Result<Self> {
        let sources = edges.len();
        if sources == 0 || targets == 0 {
            return Err(Error::InvalidInstance("need at least one source and one target".into()));
        }
        if budget == 0 || budget > sources {
            return Err(Error::InvalidInstance(format!(
                "budget k = {budget} must lie in 1..={sources}"
            )));
        }
        let mut augmented = Vec::with_capacity(sources);
        for (u, row) in edges.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != targets {
                return Err(Error::DimensionMismatch {
                    context: "edge row",
                    expected: targets,
                    actual: row.len(),
                });
            }
            let sum: f64 = row.iter().sum();
            if sum > 1.0 + SIMPLEX_TOLERANCE {
                return Err(Error::NotSimplex {
                    context: format!("edge row {u} (must sum to at most 1)"),
                    sum,
                });
            }
            let mut r = row.to_vec();
            r.push((1.0 - sum).max(0.0));
            augmented.push(r);
        }
        let rows = MeanMatrix::from_rows(&augmented)?;
        Ok(Self {
            sources,
            targets,
            budget,
            rows,
        })
    }

    pub fn sources(&self) -> usize {
        self.sources
    }

    pub fn targets(&self) -> usize {
        self.targets
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Null-augmented rows, `U x (V + 1)`.
    pub fn rows(&self) -> &MeanMatrix {
        &self.rows
    }

    pub fn edge(&self, u: usize, v: usize) -> f64 {
        self.rows.row(u)[v]
    }

    pub fn coverage(&self, seeds: &SeedSet) -> f64 {
        coverage_reward(&self.rows, self.targets, seeds.members())
    }
}

/// At most `k` distinct sources, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeedSet {
    members: Vec<usize>,
}

impl SeedSet {
    pub fn new(mut members: Vec<usize>, sources: usize, budget: usize) -> Result<Self> {
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInstance(format!("seed set {members:?} repeats a source")));
        }
        if members.len() > budget {
            return Err(Error::InvalidInstance(format!(
                "seed set of size {} exceeds budget {budget}",
                members.len()
            )));
        }
        if let Some(&u) = members.iter().find(|&&u| u >= sources) {
            return Err(Error::ArmOutOfRange { index: u, arms: sources });
        }
        Ok(Self { members })
    }

    /// Builds without validation; used by the oracles, whose output the
    /// learner loop checks against the environment anyway.
    pub(crate) fn from_sorted(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Self { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn fits(&self, sources: usize, budget: usize) -> bool {
        self.members.len() <= budget
            && self.members.windows(2).all(|w| w[0] < w[1])
            && self.members.iter().all(|&u| u < sources)
    }

    pub fn id(&self) -> String {
        let parts: Vec<String> = self.members.iter().map(|u| u.to_string()).collect();
        parts.join(".")
    }
}

/// `Σ_{v < targets} (1 − Π_{u ∈ seeds} (1 − p(u, v)))`. Columns at or past
/// `targets` (the null column) are ignored.
pub fn coverage_reward(p: &MeanMatrix, targets: usize, seeds: &[usize]) -> f64 {
    (0..targets)
        .map(|v| 1.0 - seeds.iter().map(|&u| 1.0 - p.row(u)[v]).product::<f64>())
        .sum()
}

/// One categorical draw per selected source. Outcomes have length `V + 1`;
/// restricted to `V` they are one-hot or all zero (the good went nowhere).
pub fn sample_round(
    instance: &BipartiteInstance,
    seeds: &SeedSet,
    draws: RoundDraws<'_>,
) -> Vec<TriggeredObservation> {
    let width = instance.targets + 1;
    seeds
        .members()
        .iter()
        .map(|&u| {
            let mut rng = draws.stream(u as u64, OUTCOME_CHANNEL);
            let hit = categorical(&mut rng, instance.rows.row(u));
            TriggeredObservation::one_hot(u, width, hit)
        })
        .collect()
}

/// Maximises `||p − p̂||₁` over the simplex ball of radius `φ` around `p̂`.
///
/// The maximum is `q = min(φ, 2 (1 − min_j p̂_j))`, attained by moving
/// `q/2` onto the smallest entry from the others in ascending order.
/// Returns `(p̃, q)`.
pub fn max_l1_deviation(p_hat: &[f64], radius: Radius) -> (Vec<f64>, f64) {
    let mut target = 0;
    for (j, &p) in p_hat.iter().enumerate().skip(1) {
        if p < p_hat[target] {
            target = j;
        }
    }
    let ceiling = 2.0 * (1.0 - p_hat[target]);
    let q = match radius {
        Radius::Unbounded => ceiling,
        Radius::Finite(phi) => phi.max(0.0).min(ceiling),
    };
    let mut p = p_hat.to_vec();
    p[target] += q / 2.0;
    let mut remaining = q / 2.0;
    let mut order: Vec<usize> = (0..p.len()).filter(|&j| j != target).collect();
    order.sort_by(|&i, &j| p_hat[i].total_cmp(&p_hat[j]));
    for j in order {
        if remaining <= 0.0 {
            break;
        }
        let take = p[j].min(remaining);
        p[j] -= take;
        remaining -= take;
    }
    p[target] = p[target].min(1.0);
    (p, q)
}
