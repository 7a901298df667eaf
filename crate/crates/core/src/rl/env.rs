use crate::concentration::{dot, LogTerm};
use crate::error::Result;
use crate::framework::{
    ArmStatistics, AuditFlags, Environment, JointOracle, Proposal, TriggeredObservation,
};
use crate::rng::RoundDraws;

use super::mdp::{optimal_values, sample_episode, value_of_policy, Policy, RewardModel, TabularMdp, ValueTable};
use super::planning::{
    extended_value_iteration, optimistic_value_iteration, rl_log_term, ExtendedViPlan,
    OptimisticViPlan,
};

/// Slack for floating-point comparisons in per-round audits.
const AUDIT_TOLERANCE: f64 = 1e-9;

/// An episodic MDP played one episode per round.
#[derive(Clone, Debug)]
pub struct MdpEnvironment {
    mdp: TabularMdp,
    optimal: ValueTable,
}

impl MdpEnvironment {
    pub fn new(mdp: TabularMdp) -> Self {
        let (optimal, _) = optimal_values(&mdp);
        Self { mdp, optimal }
    }

    pub fn mdp(&self) -> &TabularMdp {
        &self.mdp
    }

    /// `V*` of the true MDP.
    pub fn optimal_table(&self) -> &ValueTable {
        &self.optimal
    }
}

impl Environment for MdpEnvironment {
    type Action = Policy;

    fn num_arms(&self) -> usize {
        self.mdp.model().num_arms()
    }

    fn dimension(&self) -> usize {
        self.mdp.states()
    }

    fn is_feasible(&self, pi: &Policy) -> bool {
        pi.fits(self.mdp.states(), self.mdp.actions(), self.mdp.horizon())
    }

    fn action_id(&self, pi: &Policy) -> String {
        pi.id()
    }

    fn sample_round(&self, pi: &Policy, draws: RoundDraws<'_>) -> Vec<TriggeredObservation> {
        sample_episode(&self.mdp, pi, draws).observations
    }

    fn expected_reward(&self, pi: &Policy) -> f64 {
        value_of_policy(&self.mdp, pi).get(0, self.mdp.initial_state())
    }

    fn optimal_value(&self) -> f64 {
        self.optimal.get(0, self.mdp.initial_state())
    }

    fn alpha(&self) -> f64 {
        1.0
    }
}

/// Joint oracle backed by extended value iteration, `δ' = 1/(2T)` unless
/// overridden.
#[derive(Clone, Debug)]
pub struct ExtendedViOracle {
    model: RewardModel,
    log_term: LogTerm,
}

impl ExtendedViOracle {
    pub fn new(model: RewardModel, rounds: u64, delta: Option<f64>) -> Result<Self> {
        let delta = delta.unwrap_or(1.0 / (2.0 * rounds as f64));
        let log_term = rl_log_term(&model, rounds, delta)?;
        Ok(Self { model, log_term })
    }

    pub fn log_term(&self) -> LogTerm {
        self.log_term
    }

    pub fn plan(&self, stats: &ArmStatistics) -> ExtendedViPlan {
        extended_value_iteration(&self.model, stats, self.log_term)
    }
}

impl JointOracle<MdpEnvironment> for ExtendedViOracle {
    type Plan = ExtendedViPlan;

    fn propose(&self, stats: &ArmStatistics, _round: u64) -> Proposal<Policy, ExtendedViPlan> {
        let plan = self.plan(stats);
        Proposal {
            action: plan.policy.clone(),
            optimistic: plan.optimistic.clone(),
            plan,
        }
    }

    /// Truth in region: every visited arm's true row lies in its L1 ball.
    /// Optimism: `V̄₁(s₁) ≥ V*₁(s₁)`.
    fn audit(
        &self,
        env: &MdpEnvironment,
        stats: &ArmStatistics,
        proposal: &Proposal<Policy, ExtendedViPlan>,
    ) -> AuditFlags {
        let truth = env.mdp().transitions();
        let inside = (0..stats.arms()).all(|arm| {
            let l1: f64 = stats
                .mean(arm)
                .iter()
                .zip(truth.row(arm))
                .map(|(a, b)| (a - b).abs())
                .sum();
            stats.count(arm) == 0 || l1 <= proposal.plan.radii[arm].value()
        });
        let s1 = env.mdp().initial_state();
        let optimistic =
            proposal.plan.upper.get(0, s1) >= env.optimal_table().get(0, s1) - AUDIT_TOLERANCE;
        AuditFlags {
            optimism_held: Some(optimistic),
            truth_in_region: Some(inside),
        }
    }
}

/// Joint oracle backed by optimistic/pessimistic value iteration,
/// `δ' = 1/(8T)` unless overridden.
#[derive(Clone, Debug)]
pub struct OptimisticViOracle {
    model: RewardModel,
    log_term: LogTerm,
}

impl OptimisticViOracle {
    pub fn new(model: RewardModel, rounds: u64, delta: Option<f64>) -> Result<Self> {
        let delta = delta.unwrap_or(1.0 / (8.0 * rounds as f64));
        let log_term = rl_log_term(&model, rounds, delta)?;
        Ok(Self { model, log_term })
    }

    pub fn log_term(&self) -> LogTerm {
        self.log_term
    }

    pub fn plan(&self, stats: &ArmStatistics) -> OptimisticViPlan {
        optimistic_value_iteration(&self.model, stats, self.log_term)
    }
}

impl JointOracle<MdpEnvironment> for OptimisticViOracle {
    type Plan = OptimisticViPlan;

    fn propose(&self, stats: &ArmStatistics, _round: u64) -> Proposal<Policy, OptimisticViPlan> {
        let plan = self.plan(stats);
        Proposal {
            action: plan.policy.clone(),
            optimistic: plan.optimistic.clone(),
            plan,
        }
    }

    /// Truth in region: `|(p̂ − p)ᵀ V*_{h+1}| ≤ φ(s, a, h)` for every visited
    /// arm. Optimism: `V̲_h(s) ≤ V*_h(s) ≤ V̄_h(s)` for all `(s, h)`.
    fn audit(
        &self,
        env: &MdpEnvironment,
        stats: &ArmStatistics,
        proposal: &Proposal<Policy, OptimisticViPlan>,
    ) -> AuditFlags {
        let model = env.mdp().model();
        let v_star = env.optimal_table();
        let truth = env.mdp().transitions();
        let inside = (0..stats.arms()).all(|arm| {
            if stats.count(arm) == 0 {
                return true;
            }
            let (_, _, h) = model.arm_coords(arm);
            let next = v_star.step(h + 1);
            let err = dot(stats.mean(arm), next) - dot(truth.row(arm), next);
            err.abs() <= proposal.plan.bonuses[arm].value()
        });
        let plan = &proposal.plan;
        let sandwich = (0..model.horizon()).all(|h| {
            (0..model.states()).all(|s| {
                let v = v_star.get(h, s);
                plan.lower.get(h, s) <= v + AUDIT_TOLERANCE && v <= plan.upper.get(h, s) + AUDIT_TOLERANCE
            })
        });
        AuditFlags {
            optimism_held: Some(sandwich),
            truth_in_region: Some(inside),
        }
    }
}
