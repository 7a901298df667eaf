use std::fmt;

use crate::error::{Error, Result};
use crate::rng::{RoundDraws, RunRng};

use super::{ArmStatistics, MeanMatrix, TriggeredObservation};

/// A CMAB-MT instance: arms `[m]`, outcome dimension `d`, a feasible action
/// set, the outcome and triggering distributions, and an exact evaluator
/// of the expected reward.
///
/// `expected_reward` and `optimal_value` read the true parameter and are
/// only used for regret accounting, never by the learner.
pub trait Environment: Sync {
    type Action: Clone + fmt::Debug + Send;

    fn num_arms(&self) -> usize;
    fn dimension(&self) -> usize;
    fn is_feasible(&self, action: &Self::Action) -> bool;
    /// Compact identifier of an action, used in traces.
    fn action_id(&self, action: &Self::Action) -> String;
    fn sample_round(&self, action: &Self::Action, draws: RoundDraws<'_>) -> Vec<TriggeredObservation>;
    fn expected_reward(&self, action: &Self::Action) -> f64;
    /// `r(π*; μ)`, or the best value the environment can certify.
    fn optimal_value(&self) -> f64;
    /// Approximation ratio the regret is measured against.
    fn alpha(&self) -> f64;
}

/// Output of a joint oracle for one round.
#[derive(Clone, Debug)]
pub struct Proposal<A, P> {
    pub action: A,
    /// The optimistic parameter paired with `action`.
    pub optimistic: MeanMatrix,
    /// Oracle-specific byproducts (value tables, bonuses) kept for audits.
    pub plan: P,
}

pub trait JointOracle<E: Environment>: Sync {
    type Plan: Send;

    /// `round` is 1-based.
    fn propose(&self, stats: &ArmStatistics, round: u64) -> Proposal<E::Action, Self::Plan>;

    /// Test-plane check of this round's proposal against the true
    /// parameter held by `env`.
    fn audit(
        &self,
        _env: &E,
        _stats: &ArmStatistics,
        _proposal: &Proposal<E::Action, Self::Plan>,
    ) -> AuditFlags {
        AuditFlags::default()
    }
}

/// Per-round audit outcome; `None` when the check was not run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AuditFlags {
    pub optimism_held: Option<bool>,
    pub truth_in_region: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoundRecord {
    pub round: u64,
    pub action: String,
    pub triggered: Vec<TriggeredObservation>,
    pub instant_regret: f64,
    pub cum_regret: f64,
    pub audit: AuditFlags,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trace {
    pub records: Vec<RoundRecord>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn cumulative(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.cum_regret).collect()
    }

    pub fn instantaneous(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.instant_regret).collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LearnerConfig {
    pub rounds: u64,
    pub seed: u64,
    pub audit: bool,
}

/// Runs CUCB-MT for `config.rounds` rounds.
///
/// Instantaneous regret is `α · r(π*; μ) − r(π_t; μ)` from the
/// environment's exact evaluator.
pub fn run_cucb_mt<E, O>(env: &E, oracle: &O, config: LearnerConfig) -> Result<Trace>
where
    E: Environment,
    O: JointOracle<E>,
{
    if config.rounds == 0 {
        return Err(Error::Config("horizon must be at least one round".into()));
    }
    let run = RunRng::new(config.seed);
    let mut stats = ArmStatistics::new(env.num_arms(), env.dimension());
    let benchmark = env.alpha() * env.optimal_value();
    let mut records = Vec::with_capacity(config.rounds as usize);
    let mut cum = 0.0;

    for t in 1..=config.rounds {
        let proposal = oracle.propose(&stats, t);
        if !env.is_feasible(&proposal.action) {
            return Err(Error::InfeasibleAction {
                round: t,
                action: format!("{:?}", proposal.action),
            });
        }
        let audit = if config.audit {
            oracle.audit(env, &stats, &proposal)
        } else {
            AuditFlags::default()
        };
        let triggered = env.sample_round(&proposal.action, run.round(t));
        stats.update(&triggered)?;

        let instant = benchmark - env.expected_reward(&proposal.action);
        cum += instant;
        records.push(RoundRecord {
            round: t,
            action: env.action_id(&proposal.action),
            triggered,
            instant_regret: instant,
            cum_regret: cum,
            audit,
        });
    }
    Ok(Trace { records })
}
