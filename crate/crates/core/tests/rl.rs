mod common;

use cmabmt::concentration::{variance_aware_bonus, LogTerm};
use cmabmt::framework::{ArmStatistics, MeanMatrix, Radius, TriggeredObservation};
use cmabmt::harness::checks::{random_perturbation, random_policy};
use cmabmt::harness::random_mdp;
use cmabmt::rl::{
    extended_value_iteration, mtpm_bound_terms, occupancy_measure, optimal_values,
    optimistic_value_iteration, performance_difference, q_values, sample_episode, value_of_policy,
    Policy, RewardModel, TabularMdp,
};
use cmabmt::rng::RunRng;
use common::*;
use proptest::prelude::*;

fn mdp(s: usize, a: usize, h: usize, rewards: Vec<f64>, rows: &[Vec<f64>]) -> TabularMdp {
    let model = RewardModel::new(s, a, h, 0, rewards).unwrap();
    TabularMdp::new(model, MeanMatrix::from_rows(rows).unwrap()).unwrap()
}

/// Statistics whose empirical rows equal the true transitions.
fn exact_stats(m: &TabularMdp) -> ArmStatistics {
    let p = m.transitions();
    let mut stats = ArmStatistics::new(p.arms(), p.dimension());
    for arm in 0..p.arms() {
        stats
            .update(&[TriggeredObservation {
                arm,
                outcome: p.row(arm).to_vec(),
            }])
            .unwrap();
    }
    stats
}

#[test]
fn one_step_return() {
    let m = mdp(1, 2, 1, vec![0.7, 0.2], &[vec![1.0], vec![1.0]]);
    let v = value_of_policy(&m, &Policy::constant(1, 1, 0));
    assert_eq!(v.get(0, 0), 0.7);
}

#[test]
fn deterministic_chain_sums_rewards() {
    // state 0 at h=0 moves to state 1; reward 0.3 then 0.4
    let rewards = vec![0.3, 0.0, 0.0, 0.4];
    let rows = vec![vec![0.0, 1.0], vec![0.0, 1.0], vec![0.0, 1.0], vec![0.0, 1.0]];
    let m = mdp(2, 1, 2, rewards, &rows);
    let pi = Policy::constant(2, 2, 0);
    assert!((value_of_policy(&m, &pi).get(0, 0) - 0.7).abs() < 1e-15);

    // the sampled path is the unique reachable one
    let run = RunRng::new(4);
    let ep = sample_episode(&m, &pi, run.round(1));
    let arms: Vec<usize> = ep.observations.iter().map(|o| o.arm).collect();
    assert_eq!(arms, vec![m.model().arm(0, 0, 0), m.model().arm(1, 0, 1)]);
    assert!(ep.observations.iter().all(|o| o.outcome == vec![0.0, 1.0]));
}

#[test]
fn value_matches_monte_carlo() {
    let m = random_mdp(3, 2, 3, 123).unwrap();
    let pi = random_policy(&mut rng(5), &m);
    let exact = value_of_policy(&m, &pi).get(0, 0);
    let run = RunRng::new(77);
    let n = 1_000_000u64;
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for t in 1..=n {
        let ret: f64 = sample_episode(&m, &pi, run.round(t)).rewards.iter().sum();
        sum += ret;
        sum_sq += ret * ret;
    }
    let mean = sum / n as f64;
    let se = ((sum_sq / n as f64 - mean * mean) / n as f64).sqrt();
    assert!((mean - exact).abs() <= 3.0 * se, "MC {mean} vs exact {exact} (se {se})");
}

#[test]
fn visit_frequencies_match_occupancy() {
    let m = random_mdp(3, 2, 3, 321).unwrap();
    let pi = random_policy(&mut rng(6), &m);
    let q = occupancy_measure(&m, &pi);
    let run = RunRng::new(8);
    let n = 100_000u64;
    let mut counts = vec![0u64; m.model().num_arms()];
    for t in 1..=n {
        for o in sample_episode(&m, &pi, run.round(t)).observations {
            counts[o.arm] += 1;
        }
    }
    for (arm, &c) in counts.iter().enumerate() {
        let p = q.as_arms()[arm];
        let se = (p * (1.0 - p) / n as f64).sqrt();
        let freq = c as f64 / n as f64;
        assert!((freq - p).abs() <= 3.0 * se + 1e-12, "arm {arm}: {freq} vs {p}");
    }
}

#[test]
fn single_state_observations_are_trivial() {
    let m = random_mdp(1, 2, 3, 9).unwrap();
    let run = RunRng::new(1);
    let ep = sample_episode(&m, &Policy::constant(1, 3, 1), run.round(1));
    assert!(ep.observations.iter().all(|o| o.outcome == vec![1.0]));
}

#[test]
fn single_action_optimum_is_the_only_policy() {
    let m = random_mdp(3, 1, 3, 10).unwrap();
    let (v, pi) = optimal_values(&m);
    assert_eq!(pi, Policy::constant(3, 3, 0));
    assert_eq!(v, value_of_policy(&m, &pi));
}

#[test]
fn optimal_values_match_enumeration() {
    for seed in 0..20 {
        let m = random_mdp(2, 2, 2, seed).unwrap();
        let (v, pi) = optimal_values(&m);
        let oracle = brute_force_optimal(&m);
        for h in 0..2 {
            for s in 0..2 {
                assert!((v.get(h, s) - oracle[h][s]).abs() <= 1e-12);
            }
        }
        let attained = evaluate(&m, &pi);
        assert!((attained[0][0] - oracle[0][0]).abs() <= 1e-12);
    }
}

#[test]
fn zero_rewards_give_zero_values() {
    let base = random_mdp(3, 2, 3, 11).unwrap();
    let model = RewardModel::new(3, 2, 3, 0, vec![0.0; 18]).unwrap();
    let m = TabularMdp::new(model, base.transitions().clone()).unwrap();
    let (v, pi) = optimal_values(&m);
    assert!((0..3).all(|h| (0..3).all(|s| v.get(h, s) == 0.0)));
    assert_eq!(pi, Policy::constant(3, 3, 0));
}

#[test]
fn occupancy_examples() {
    let m = random_mdp(3, 2, 1, 12).unwrap();
    let pi = Policy::new(3, 1, 2, vec![1, 0, 0]).unwrap();
    let q = occupancy_measure(&m, &pi);
    assert_eq!(q.get(0, 1, 0), 1.0);
    assert_eq!(q.total_mass(), 1.0);

    // uniform move to states 0 and 1 at the second step
    let rows = vec![
        vec![0.5, 0.5, 0.0],
        vec![0.5, 0.5, 0.0],
        vec![0.5, 0.5, 0.0],
        vec![1.0, 0.0, 0.0],
        vec![1.0, 0.0, 0.0],
        vec![1.0, 0.0, 0.0],
    ];
    let m = mdp(3, 1, 2, vec![0.1; 6], &rows);
    let q = occupancy_measure(&m, &Policy::constant(3, 2, 0));
    assert_eq!((q.get(0, 0, 1), q.get(1, 0, 1), q.get(2, 0, 1)), (0.5, 0.5, 0.0));
    assert!((q.total_mass() - 2.0).abs() < 1e-15);
}

#[test]
fn evi_with_exact_statistics_recovers_optimum() {
    for seed in 0..20 {
        let m = random_mdp(3, 2, 3, 100 + seed).unwrap();
        let plan = extended_value_iteration(m.model(), &exact_stats(&m), LogTerm::new(0.0).unwrap());
        let (v, pi) = optimal_values(&m);
        assert_eq!(plan.policy, pi);
        for h in 0..3 {
            for s in 0..3 {
                assert!((plan.upper.get(h, s) - v.get(h, s)).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn evi_cold_start_is_best_next_state_vi() {
    for seed in 0..20 {
        let m = random_mdp(3, 2, 3, 200 + seed).unwrap();
        let stats = ArmStatistics::new(18, 3);
        let plan = extended_value_iteration(m.model(), &stats, LogTerm::new(5.0).unwrap());
        // VI on the MDP where every (s, a, h) jumps to the best next state
        let mut next = [0.0f64; 3];
        for h in (0..3).rev() {
            let best_next = next.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let mut cur = [0.0; 3];
            for (s, c) in cur.iter_mut().enumerate() {
                let q = (0..2).map(|a| m.reward(s, a, h) + best_next).fold(f64::NEG_INFINITY, f64::max);
                *c = q.min((3 - h) as f64);
            }
            for s in 0..3 {
                assert!((plan.upper.get(h, s) - cur[s]).abs() <= 1e-12);
            }
            next = cur;
        }
    }
}

#[test]
fn evi_single_state_maximises_step_rewards() {
    let m = random_mdp(1, 3, 4, 13).unwrap();
    let plan = extended_value_iteration(m.model(), &ArmStatistics::new(12, 1), LogTerm::new(3.0).unwrap());
    let oracle: f64 = (0..4)
        .map(|h| (0..3).map(|a| m.reward(0, a, h)).fold(0.0, f64::max))
        .sum();
    assert!((plan.upper.get(0, 0) - oracle).abs() <= 1e-12);
    for h in 0..4 {
        let a = plan.policy.action(0, h);
        assert!((0..3).all(|b| m.reward(0, a, h) >= m.reward(0, b, h)));
    }
}

#[test]
fn ovi_exact_statistics_sandwich_optimum() {
    for seed in 0..30 {
        let m = random_mdp(3, 2, 3, 300 + seed).unwrap();
        let plan = optimistic_value_iteration(m.model(), &exact_stats(&m), LogTerm::new(2.0).unwrap());
        let (v, _) = optimal_values(&m);
        for h in 0..3 {
            for s in 0..3 {
                assert!(plan.lower.get(h, s) <= v.get(h, s) + 1e-12);
                assert!(v.get(h, s) <= plan.upper.get(h, s) + 1e-12);
                assert!(plan.upper.get(h, s) <= (3 - h) as f64 + 1e-12);
            }
        }
    }
}

#[test]
fn ovi_cold_start_takes_the_one_hot_branch() {
    let m = random_mdp(3, 2, 3, 14).unwrap();
    let plan = optimistic_value_iteration(m.model(), &ArmStatistics::new(18, 3), LogTerm::new(2.0).unwrap());
    for arm in 0..18 {
        let row = plan.optimistic.row(arm);
        assert_eq!(row.iter().filter(|&&x| x == 1.0).count(), 1);
        assert_eq!(plan.bonuses[arm], Radius::Unbounded);
    }
}

/// Randomly observed statistics: between 0 and 12 draws of the true row
/// per arm.
fn sampled_stats(m: &TabularMdp, seed: u64) -> ArmStatistics {
    use rand::Rng;
    let mut r = rng(seed);
    let p = m.transitions();
    let mut stats = ArmStatistics::new(p.arms(), p.dimension());
    for arm in 0..p.arms() {
        for _ in 0..r.random_range(0..=12) {
            let next = cmabmt::rng::categorical(&mut r, p.row(arm));
            stats
                .update(&[TriggeredObservation::one_hot(arm, p.dimension(), next)])
                .unwrap();
        }
    }
    stats
}

#[test]
fn ovi_optimistic_rows_lift_by_the_bonus() {
    for seed in 0..50 {
        let m = random_mdp(3, 2, 3, 400 + seed).unwrap();
        let stats = sampled_stats(&m, seed);
        let log_term = LogTerm::new(0.05).unwrap();
        let plan = optimistic_value_iteration(m.model(), &stats, log_term);
        for arm in 0..18 {
            let (_, _, h) = m.model().arm_coords(arm);
            let next_upper = plan.upper.step(h + 1);
            let next_lower = plan.lower.step(h + 1);
            let p_hat = stats.mean(arm);
            let phi = variance_aware_bonus(p_hat, next_upper, next_lower, stats.count(arm), log_term, 3).value();
            let best = next_upper.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lhs = dot(plan.optimistic.row(arm), next_upper);
            let rhs = (dot(p_hat, next_upper) + phi).min(best);
            assert!((lhs - rhs).abs() <= 1e-10, "arm {arm}: {lhs} vs {rhs}");
            let row = plan.optimistic.row(arm);
            assert!((row.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn ovi_constant_future_gives_reward_plus_constant() {
    // H = 1: the future is the zero terminal row, so Q = r
    let m = random_mdp(3, 2, 1, 15).unwrap();
    let plan = optimistic_value_iteration(m.model(), &sampled_stats(&m, 1), LogTerm::new(1.0).unwrap());
    for s in 0..3 {
        let best = m.reward(s, 0, 0).max(m.reward(s, 1, 0));
        assert!((plan.upper.get(0, s) - best).abs() <= 1e-15);
        for a in 0..2 {
            assert_eq!(plan.optimistic.row(m.model().arm(s, a, 0)), &[1.0, 0.0, 0.0]);
        }
    }
}

#[test]
fn identical_statistics_give_identical_policies() {
    let m = random_mdp(3, 2, 3, 16).unwrap();
    let stats = sampled_stats(&m, 3);
    let l = LogTerm::new(1.0).unwrap();
    assert_eq!(
        optimistic_value_iteration(m.model(), &stats, l).policy,
        optimistic_value_iteration(m.model(), &stats.clone(), l).policy
    );
    assert_eq!(
        extended_value_iteration(m.model(), &stats, l).policy,
        extended_value_iteration(m.model(), &stats.clone(), l).policy
    );
}

#[test]
fn smoothness_degenerate_cases() {
    let m = random_mdp(3, 2, 3, 17).unwrap();
    let pi = random_policy(&mut rng(1), &m);
    let t = mtpm_bound_terms(&m, m.transitions(), &pi).unwrap();
    assert_eq!((t.lhs, t.rhs_tight, t.rhs_loose), (0.0, 0.0, 0.0));

    let m = random_mdp(1, 2, 3, 18).unwrap();
    let p_tilde = random_perturbation(&mut rng(2), m.transitions());
    let t = mtpm_bound_terms(&m, &p_tilde, &Policy::constant(1, 3, 1)).unwrap();
    assert_eq!((t.lhs, t.rhs_tight, t.rhs_loose), (0.0, 0.0, 0.0));
}

#[test]
fn performance_difference_cases() {
    for seed in 0..30 {
        let m = random_mdp(3, 2, 3, 500 + seed).unwrap();
        let (v, pi_star) = optimal_values(&m);
        assert!(performance_difference(&m, &v, &pi_star).abs() <= 1e-12);
        let pi = random_policy(&mut rng(seed), &m);
        let direct = v.get(0, 0) - evaluate(&m, &pi)[0][0];
        assert!((performance_difference(&m, &v, &pi) - direct).abs() <= 1e-10);
    }
    // H = 1: the gap of the single step
    let m = random_mdp(3, 2, 1, 19).unwrap();
    let (v, _) = optimal_values(&m);
    let pi = Policy::constant(3, 1, 1);
    let q = q_values(&m, &v);
    let gap = v.get(0, 0) - q[m.model().arm(0, 1, 0)];
    assert!((performance_difference(&m, &v, &pi) - gap).abs() <= 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn occupancy_normalised_and_reward_identity(seed in any::<u64>()) {
        let m = small_mdp(seed);
        let pi = random_policy(&mut rng(seed), &m);
        let q = occupancy_measure(&m, &pi);
        for h in 0..m.horizon() {
            prop_assert!((q.step_mass(h) - 1.0).abs() <= 1e-12);
        }
        prop_assert!((q.total_mass() - m.horizon() as f64).abs() <= 1e-12);
        let reward: f64 = q.as_arms().iter().zip(m.model().rewards()).map(|(a, b)| a * b).sum();
        prop_assert!((reward - evaluate(&m, &pi)[0][m.initial_state()]).abs() <= 1e-10);
    }

    #[test]
    fn smoothness_chain_holds(seed in any::<u64>()) {
        let m = small_mdp(seed);
        let mut r = rng(seed ^ 1);
        let p_tilde = random_perturbation(&mut r, m.transitions());
        let pi = random_policy(&mut r, &m);
        prop_assert!(mtpm_bound_terms(&m, &p_tilde, &pi).unwrap().holds(1e-10));
    }

    #[test]
    fn optimistic_values_respect_cap(seed in any::<u64>()) {
        let m = small_mdp(seed);
        let stats = sampled_stats(&m, seed);
        let l = LogTerm::new(1.0).unwrap();
        let evi = extended_value_iteration(m.model(), &stats, l);
        let ovi = optimistic_value_iteration(m.model(), &stats, l);
        for h in 0..m.horizon() {
            for s in 0..m.states() {
                let cap = (m.horizon() - h) as f64;
                prop_assert!(evi.upper.get(h, s) <= cap + 1e-12);
                prop_assert!(ovi.upper.get(h, s) <= cap + 1e-12);
                prop_assert!(ovi.lower.get(h, s) >= 0.0);
            }
        }
    }
}
