use crate::concentration::{l1_multinoulli_radius, LogTerm};
use crate::error::Result;
use crate::framework::{ArmStatistics, AuditFlags, JointOracle, MeanMatrix, Proposal, Radius};

use super::env::PmcEnvironment;
use super::greedy::{greedy_max, GreedyMode};
use super::instance::{coverage_reward, max_l1_deviation, SeedSet};
use super::GREEDY_ALPHA;

/// `log(|U|·|V|·T / δ')`.
pub fn pmc_log_term(sources: usize, targets: usize, rounds: u64, delta: f64) -> Result<LogTerm> {
    LogTerm::from_union(sources as f64 * targets as f64 * rounds as f64, delta)
}

#[derive(Clone, Debug)]
pub struct PmcPlan {
    /// L1 radius per source.
    pub radii: Vec<Radius>,
    /// Maximal deviation `q_u = ||p̃(u,·) − p̂(u,·)||₁` per source.
    pub deviations: Vec<f64>,
    /// Pseudo-reward `r(π; p̂) + Σ_{u∈π} q_u` of the chosen set.
    pub pseudo_value: f64,
    /// The set was chosen by the warm-start rule rather than by greedy.
    pub warm_start: bool,
}

/// Greedy joint oracle over the pseudo-reward. `δ' = 1/(2T)` unless
/// overridden.
#[derive(Clone, Debug)]
pub struct PmcGreedyOracle {
    sources: usize,
    targets: usize,
    budget: usize,
    log_term: LogTerm,
    mode: GreedyMode,
    warm_start: bool,
}

impl PmcGreedyOracle {
    pub fn new(
        sources: usize,
        targets: usize,
        budget: usize,
        rounds: u64,
        delta: Option<f64>,
    ) -> Result<Self> {
        let delta = delta.unwrap_or(1.0 / (2.0 * rounds as f64));
        Ok(Self {
            sources,
            targets,
            budget,
            log_term: pmc_log_term(sources, targets, rounds, delta)?,
            mode: GreedyMode::Lazy,
            warm_start: true,
        })
    }

    pub fn with_mode(mut self, mode: GreedyMode) -> Self {
        self.mode = mode;
        self
    }

    /// While some source is unobserved, play the lowest-index one alone.
    pub fn with_warm_start(mut self, on: bool) -> Self {
        self.warm_start = on;
        self
    }

    /// Radius over the null-augmented row, so the dimension is `|V| + 1`.
    pub fn radius(&self, n: u64) -> Radius {
        l1_multinoulli_radius(self.targets + 1, n, self.log_term)
    }

    pub fn plan(&self, stats: &ArmStatistics) -> (SeedSet, MeanMatrix, PmcPlan) {
        let p_hat = stats.means();
        let mut optimistic = MeanMatrix::zeros(self.sources, self.targets + 1);
        let mut radii = Vec::with_capacity(self.sources);
        let mut deviations = Vec::with_capacity(self.sources);
        for u in 0..self.sources {
            let radius = self.radius(stats.count(u));
            let (row, q) = max_l1_deviation(p_hat.row(u), radius);
            optimistic.row_mut(u).copy_from_slice(&row);
            radii.push(radius);
            deviations.push(q);
        }
        let pseudo = |set: &[usize]| {
            coverage_reward(p_hat, self.targets, set) + set.iter().map(|&u| deviations[u]).sum::<f64>()
        };
        let unvisited = stats.counters().iter().position(|&n| n == 0);
        let (seeds, warm) = match unvisited {
            Some(u) if self.warm_start => (SeedSet::from_sorted(vec![u]), true),
            _ => (greedy_max(pseudo, self.sources, self.budget, self.mode), false),
        };
        let pseudo_value = pseudo(seeds.members());
        (
            seeds,
            optimistic,
            PmcPlan {
                radii,
                deviations,
                pseudo_value,
                warm_start: warm,
            },
        )
    }
}

impl JointOracle<PmcEnvironment> for PmcGreedyOracle {
    type Plan = PmcPlan;

    fn propose(&self, stats: &ArmStatistics, _round: u64) -> Proposal<SeedSet, PmcPlan> {
        let (action, optimistic, plan) = self.plan(stats);
        Proposal {
            action,
            optimistic,
            plan,
        }
    }

    /// Truth in region: every observed source's true row lies in its L1
    /// ball. Optimism: the chosen set's pseudo-reward reaches
    /// `(1 − 1/e) · r(π*; p)`.
    fn audit(
        &self,
        env: &PmcEnvironment,
        stats: &ArmStatistics,
        proposal: &Proposal<SeedSet, PmcPlan>,
    ) -> AuditFlags {
        let truth = env.instance().rows();
        let inside = (0..self.sources).all(|u| {
            let l1: f64 = stats
                .mean(u)
                .iter()
                .zip(truth.row(u))
                .map(|(a, b)| (a - b).abs())
                .sum();
            stats.count(u) == 0 || l1 <= proposal.plan.radii[u].value()
        });
        AuditFlags {
            optimism_held: Some(proposal.plan.pseudo_value >= GREEDY_ALPHA * env.optimum() - 1e-9),
            truth_in_region: Some(inside),
        }
    }
}
