//! Probabilistic maximum coverage for goods distribution (PMC-GD).
//!
//! Each source `u` hands one indivisible good to at most one target, drawn
//! from a categorical row over `V ∪ {null}`. Sources are the base arms;
//! a seed set of at most `k` sources is the action and triggers exactly its
//! members. Rows carry an explicit trailing null column so they lie on the
//! simplex; the null column never contributes to coverage.

mod env;
mod greedy;
mod instance;
mod io;
mod oracle;

pub use env::PmcEnvironment;
pub use greedy::{brute_force_best, greedy_max, GreedyMode, BRUTE_FORCE_LIMIT};
pub use instance::{coverage_reward, max_l1_deviation, sample_round, BipartiteInstance, SeedSet};
pub use io::{format_pmc, parse_pmc};
pub use oracle::{pmc_log_term, PmcGreedyOracle, PmcPlan};

/// `1 − 1/e`, the greedy approximation ratio.
pub const GREEDY_ALPHA: f64 = 1.0 - 1.0 / std::f64::consts::E;
