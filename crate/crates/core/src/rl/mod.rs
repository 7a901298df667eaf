//! Tabular episodic reinforcement learning as a CMAB-MT instance.
//!
//! Base arms are the `S·A·H` transition rows `p(·|s, a, h)`, each a
//! categorical outcome of dimension `S`. A deterministic policy is the
//! combinatorial action; the arms it triggers are the `H` state-action-step
//! tuples visited in the episode, so the triggering probability of an arm
//! is its occupancy measure. Rewards are known to the learner.
//!
//! Steps are 0-based throughout: `h` ranges over `0..H` and value tables
//! carry an extra terminal row `h = H` fixed at zero.

mod env;
mod io;
mod mdp;
mod planning;
mod smoothness;

pub use env::{ExtendedViOracle, MdpEnvironment, OptimisticViOracle};
pub use io::{format_mdp, parse_mdp};
pub use mdp::{
    occupancy_measure, optimal_values, q_values, sample_episode, value_of_policy, Episode,
    OccupancyTable, Policy, RewardModel, TabularMdp, ValueTable,
};
pub use planning::{
    extended_value_iteration, inner_l1_max, optimistic_value_iteration, rl_log_term,
    ExtendedViPlan, OptimisticViPlan,
};
pub use smoothness::{mtpm_bound_terms, performance_difference, SmoothnessTerms};
