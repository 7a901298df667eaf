use crate::framework::{Environment, TriggeredObservation};
use crate::rng::RoundDraws;

use super::greedy::{brute_force_best, greedy_max, GreedyMode, BRUTE_FORCE_LIMIT};
use super::instance::{coverage_reward, sample_round, BipartiteInstance, SeedSet};
use super::GREEDY_ALPHA;

/// PMC-GD played with `α = 1 − 1/e`.
///
/// The benchmark `r(π*; p)` is exact for instances up to
/// [`BRUTE_FORCE_LIMIT`] sources; beyond that it is the greedy value on the
/// true parameter.
#[derive(Clone, Debug)]
pub struct PmcEnvironment {
    instance: BipartiteInstance,
    optimum: f64,
    optimum_set: SeedSet,
    exact: bool,
}

impl PmcEnvironment {
    pub fn new(instance: BipartiteInstance) -> Self {
        let rows = instance.rows();
        let (optimum_set, optimum, exact) = if instance.sources() <= BRUTE_FORCE_LIMIT {
            let (set, value) = brute_force_best(rows, instance.targets(), instance.budget())
                .expect("size checked against the brute-force limit");
            (set, value, true)
        } else {
            let f = |s: &[usize]| coverage_reward(rows, instance.targets(), s);
            let set = greedy_max(f, instance.sources(), instance.budget(), GreedyMode::Plain);
            let value = instance.coverage(&set);
            (set, value, false)
        };
        Self {
            instance,
            optimum,
            optimum_set,
            exact,
        }
    }

    pub fn instance(&self) -> &BipartiteInstance {
        &self.instance
    }

    pub fn optimum(&self) -> f64 {
        self.optimum
    }

    pub fn optimum_set(&self) -> &SeedSet {
        &self.optimum_set
    }

    /// Whether [`PmcEnvironment::optimum`] is the exact maximum.
    pub fn optimum_is_exact(&self) -> bool {
        self.exact
    }
}

impl Environment for PmcEnvironment {
    type Action = SeedSet;

    fn num_arms(&self) -> usize {
        self.instance.sources()
    }

    fn dimension(&self) -> usize {
        self.instance.targets() + 1
    }

    fn is_feasible(&self, seeds: &SeedSet) -> bool {
        seeds.fits(self.instance.sources(), self.instance.budget())
    }

    fn action_id(&self, seeds: &SeedSet) -> String {
        seeds.id()
    }

    fn sample_round(&self, seeds: &SeedSet, draws: RoundDraws<'_>) -> Vec<TriggeredObservation> {
        sample_round(&self.instance, seeds, draws)
    }

    fn expected_reward(&self, seeds: &SeedSet) -> f64 {
        self.instance.coverage(seeds)
    }

    fn optimal_value(&self) -> f64 {
        self.optimum
    }

    fn alpha(&self) -> f64 {
        GREEDY_ALPHA
    }
}
