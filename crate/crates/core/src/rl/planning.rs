//! Joint oracles for episodic RL.
//!
//! Both planners run backward over steps. Extended value iteration picks,
//! per `(s, a, h)`, the most optimistic transition row inside an L1 ball
//! around the empirical row. Optimistic value iteration instead adds a
//! variance-aware bonus to the empirical future value and keeps a
//! pessimistic table alongside the optimistic one.

use crate::concentration::{dot, l1_multinoulli_radius, variance_aware_bonus, LogTerm};
use crate::error::Result;
use crate::framework::{ArmStatistics, MeanMatrix, Radius};

use super::mdp::{Policy, RewardModel, ValueTable};

/// `log(S·A·H·T / δ')`.
pub fn rl_log_term(model: &RewardModel, rounds: u64, delta: f64) -> Result<LogTerm> {
    LogTerm::from_union(model.num_arms() as f64 * rounds as f64, delta)
}

fn argmax_lowest(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

fn one_hot(len: usize, hot: usize) -> Vec<f64> {
    let mut v = vec![0.0; len];
    v[hot] = 1.0;
    v
}

/// Maximises `p'ᵀ values` over `{p' ∈ Δ : ||p' − p̂||₁ ≤ φ}`.
///
/// Mass `min(φ/2, 1 − p̂[best])` is added to the highest-value state and
/// the same amount is taken from the remaining states in ascending value
/// order. An unbounded radius yields the one-hot on the best state.
pub fn inner_l1_max(p_hat: &[f64], values: &[f64], radius: Radius) -> Vec<f64> {
    debug_assert_eq!(p_hat.len(), values.len());
    let best = argmax_lowest(values);
    let phi = match radius {
        Radius::Unbounded => return one_hot(p_hat.len(), best),
        Radius::Finite(phi) => phi.max(0.0),
    };
    let mut p = p_hat.to_vec();
    let lift = (phi / 2.0).min(1.0 - p_hat[best]).max(0.0);
    p[best] += lift;
    let mut excess = lift;
    let mut order: Vec<usize> = (0..p.len()).filter(|&i| i != best).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    for i in order {
        if excess <= 0.0 {
            break;
        }
        let take = p[i].min(excess);
        p[i] -= take;
        excess -= take;
    }
    p
}

#[derive(Clone, Debug)]
pub struct ExtendedViPlan {
    pub policy: Policy,
    /// Optimistic transition rows, one per arm.
    pub optimistic: MeanMatrix,
    pub upper: ValueTable,
    /// L1 radius used for each arm.
    pub radii: Vec<Radius>,
}

/// Extended value iteration over L1 balls of radius
/// `sqrt(2 S L / N(s, a, h))`.
pub fn extended_value_iteration(
    model: &RewardModel,
    stats: &ArmStatistics,
    log_term: LogTerm,
) -> ExtendedViPlan {
    let (ns, na, nh) = (model.states(), model.actions(), model.horizon());
    let mut upper = ValueTable::zeros(ns, nh);
    let mut optimistic = MeanMatrix::zeros(model.num_arms(), ns);
    let mut radii = vec![Radius::Unbounded; model.num_arms()];
    let mut table = vec![0; ns * nh];
    let mut q = vec![0.0; na];

    for h in (0..nh).rev() {
        let cap = (nh - h) as f64;
        let next = upper.step(h + 1).to_vec();
        for s in 0..ns {
            for (a, qa) in q.iter_mut().enumerate() {
                let arm = model.arm(s, a, h);
                let radius = l1_multinoulli_radius(ns, stats.count(arm), log_term);
                let p_tilde = inner_l1_max(stats.mean(arm), &next, radius);
                *qa = model.reward(s, a, h) + dot(&p_tilde, &next);
                optimistic.row_mut(arm).copy_from_slice(&p_tilde);
                radii[arm] = radius;
            }
            let a = argmax_lowest(&q);
            table[h * ns + s] = a;
            upper.set(h, s, q[a].min(cap));
        }
    }
    ExtendedViPlan {
        policy: Policy::new(ns, nh, na, table).expect("planner emits in-range actions"),
        optimistic,
        upper,
        radii,
    }
}

#[derive(Clone, Debug)]
pub struct OptimisticViPlan {
    pub policy: Policy,
    pub optimistic: MeanMatrix,
    pub upper: ValueTable,
    pub lower: ValueTable,
    /// Variance-aware bonus `φ(s, a, h)` for each arm.
    pub bonuses: Vec<Radius>,
}

/// Optimistic/pessimistic value iteration with the variance-aware bonus.
///
/// When the bonus would push the future value past `max_s V̄_{h+1}`, the
/// optimistic row is the one-hot on the best next state; otherwise it is
/// the mix `(1 − λ) p̂ + λ e_{s*}` that lifts the expectation by exactly
/// the bonus.
pub fn optimistic_value_iteration(
    model: &RewardModel,
    stats: &ArmStatistics,
    log_term: LogTerm,
) -> OptimisticViPlan {
    let (ns, na, nh) = (model.states(), model.actions(), model.horizon());
    let mut upper = ValueTable::zeros(ns, nh);
    let mut lower = ValueTable::zeros(ns, nh);
    let mut optimistic = MeanMatrix::zeros(model.num_arms(), ns);
    let mut bonuses = vec![Radius::Unbounded; model.num_arms()];
    let mut table = vec![0; ns * nh];
    let mut q = vec![0.0; na];

    for h in (0..nh).rev() {
        let cap = (nh - h) as f64;
        let next_upper = upper.step(h + 1).to_vec();
        let next_lower = lower.step(h + 1).to_vec();
        let s_star = argmax_lowest(&next_upper);
        let best_future = next_upper[s_star];

        for s in 0..ns {
            for (a, qa) in q.iter_mut().enumerate() {
                let arm = model.arm(s, a, h);
                let p_hat = stats.mean(arm);
                let bonus = variance_aware_bonus(
                    p_hat,
                    &next_upper,
                    &next_lower,
                    stats.count(arm),
                    log_term,
                    nh,
                );
                let phi = bonus.value();
                let expected = dot(p_hat, &next_upper);
                let row = optimistic.row_mut(arm);
                if best_future < expected + phi {
                    row.fill(0.0);
                    row[s_star] = 1.0;
                } else {
                    let gap = best_future - expected;
                    let lambda = if gap > 0.0 { (phi / gap).clamp(0.0, 1.0) } else { 0.0 };
                    for (i, (r, &p)) in row.iter_mut().zip(p_hat).enumerate() {
                        let target = if i == s_star { 1.0 } else { 0.0 };
                        *r = ((1.0 - lambda) * p + lambda * target).clamp(0.0, 1.0);
                    }
                }
                *qa = model.reward(s, a, h) + dot(row, &next_upper);
                bonuses[arm] = bonus;
            }
            let a = argmax_lowest(&q);
            table[h * ns + s] = a;
            upper.set(h, s, q[a].min(cap));

            let arm = model.arm(s, a, h);
            let pessimistic = model.reward(s, a, h) + dot(stats.mean(arm), &next_lower)
                - bonuses[arm].value();
            lower.set(h, s, pessimistic.max(0.0));
        }
    }
    OptimisticViPlan {
        policy: Policy::new(ns, nh, na, table).expect("planner emits in-range actions"),
        optimistic,
        upper,
        lower,
        bonuses,
    }
}
