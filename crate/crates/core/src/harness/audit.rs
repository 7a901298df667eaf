//! Invariant suites run by the `audit` command. Each check draws seeded
//! random inputs around a given instance and counts violations of an
//! inequality or identity that must hold exactly (up to rounding).

use std::fmt;

use crate::error::Result;

use super::config::ExperimentConfig;
use super::experiment::{load_instance, Instance};

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub trials: u64,
    pub violations: u64,
    /// Violations tolerated; zero except for statistical coverage checks.
    pub allowed: u64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.violations <= self.allowed
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} violations in {} trials (allowed {})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.violations,
            self.trials,
            self.allowed
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AuditReport {
    pub checks: Vec<CheckResult>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Runs every suite that applies to the configured environment with
/// `config.audit_trials` draws per check.
pub fn run_audit_suite(config: &ExperimentConfig) -> Result<AuditReport> {
    config.validate()?;
    let trials = config.audit_trials as u64;
    let seed = config.seed;
    let checks = match load_instance(config)? {
        Instance::Mdp(env) => {
            let mdp = env.mdp();
            let mut v = vec![
                checks::occupancy_identities(mdp, trials, seed),
                checks::performance_difference(mdp, trials, seed),
                checks::planning_dominates(mdp, trials, seed),
                checks::rl_smoothness(mdp, trials, seed)?,
                checks::l1_inner_max(mdp, trials, seed),
            ];
            v.extend(checks::rl_coverage(mdp, trials, seed)?);
            v
        }
        Instance::Pmc(env) => {
            let instance = env.instance();
            let mut v = vec![
                checks::pmc_smoothness(instance, trials, seed),
                checks::pseudo_reward_dominance(instance, config.rounds, trials, seed)?,
                checks::pseudo_reward_submodular(instance, config.rounds, trials, seed)?,
            ];
            if let Some(c) = checks::greedy_guarantee(instance)? {
                v.push(c);
            }
            v
        }
    };
    Ok(AuditReport { checks })
}

pub mod checks {
    //! Individual invariant checks. All are deterministic in `seed`.

    use rand::seq::index::sample;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::CheckResult;
    use crate::concentration::coverage::{bernstein_coverage, l1_coverage, variance_bonus_coverage};
    use crate::error::Result;
    use crate::framework::{ArmStatistics, MeanMatrix, Radius, TriggeredObservation};
    use crate::harness::generate::random_simplex;
    use crate::pmc::{
        brute_force_best, coverage_reward, greedy_max, max_l1_deviation, BipartiteInstance, GreedyMode,
        PmcGreedyOracle, BRUTE_FORCE_LIMIT, GREEDY_ALPHA,
    };
    use crate::rl::{
        inner_l1_max, mtpm_bound_terms, occupancy_measure, optimal_values, performance_difference as pd,
        value_of_policy, Policy, TabularMdp,
    };
    use crate::rng::categorical;

    /// Slack for exact identities evaluated in floating point.
    pub const IDENTITY_TOLERANCE: f64 = 1e-10;

    fn result(name: &str, trials: u64, violations: u64) -> CheckResult {
        CheckResult {
            name: name.to_string(),
            trials,
            violations,
            allowed: 0,
        }
    }

    pub fn random_policy<R: Rng + ?Sized>(rng: &mut R, mdp: &TabularMdp) -> Policy {
        let (s, a, h) = (mdp.states(), mdp.actions(), mdp.horizon());
        let table = (0..s * h).map(|_| rng.random_range(0..a)).collect();
        Policy::new(s, h, a, table).expect("table has S·H entries below A")
    }

    /// Row-wise mixture `(1 − ε) p + ε d` with a random simplex row `d` and
    /// `ε = u³` for uniform `u`, so both small and large deviations occur.
    pub fn random_perturbation<R: Rng + ?Sized>(rng: &mut R, p: &MeanMatrix) -> MeanMatrix {
        let mut out = p.clone();
        for arm in 0..p.arms() {
            let eps = rng.random::<f64>().powi(3);
            let d = random_simplex(rng, p.dimension());
            for (x, y) in out.row_mut(arm).iter_mut().zip(d) {
                *x = (1.0 - eps) * *x + eps * y;
            }
        }
        out
    }

    /// Per-step occupancy mass is one and `Σ q·r = V₁^π(s₁)`.
    pub fn occupancy_identities(mdp: &TabularMdp, trials: u64, seed: u64) -> CheckResult {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let violations = (0..trials)
            .filter(|_| {
                let pi = random_policy(&mut rng, mdp);
                let q = occupancy_measure(mdp, &pi);
                let mass_ok = (0..mdp.horizon()).all(|h| (q.step_mass(h) - 1.0).abs() <= IDENTITY_TOLERANCE);
                let reward: f64 = q.as_arms().iter().zip(mdp.model().rewards()).map(|(a, b)| a * b).sum();
                let v = value_of_policy(mdp, &pi).get(0, mdp.initial_state());
                !(mass_ok && (reward - v).abs() <= IDENTITY_TOLERANCE)
            })
            .count();
        result("occupancy identities", trials, violations as u64)
    }

    /// `Σ q^π (V* − Q*) = V*₁(s₁) − V^π₁(s₁)`.
    pub fn performance_difference(mdp: &TabularMdp, trials: u64, seed: u64) -> CheckResult {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9d);
        let (optimal, _) = optimal_values(mdp);
        let s1 = mdp.initial_state();
        let violations = (0..trials)
            .filter(|_| {
                let pi = random_policy(&mut rng, mdp);
                let gap = optimal.get(0, s1) - value_of_policy(mdp, &pi).get(0, s1);
                (pd(mdp, &optimal, &pi) - gap).abs() > IDENTITY_TOLERANCE
            })
            .count();
        result("performance difference identity", trials, violations as u64)
    }

    /// `V*` dominates every sampled policy in every `(h, s)`, and the
    /// greedy policy attains it.
    pub fn planning_dominates(mdp: &TabularMdp, trials: u64, seed: u64) -> CheckResult {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x71);
        let (optimal, greedy) = optimal_values(mdp);
        let attained = value_of_policy(mdp, &greedy);
        let mut violations = 0;
        for h in 0..mdp.horizon() {
            for s in 0..mdp.states() {
                if (attained.get(h, s) - optimal.get(h, s)).abs() > IDENTITY_TOLERANCE {
                    violations += 1;
                }
            }
        }
        for _ in 0..trials {
            let v = value_of_policy(mdp, &random_policy(&mut rng, mdp));
            let dominated = (0..mdp.horizon())
                .all(|h| (0..mdp.states()).all(|s| v.get(h, s) <= optimal.get(h, s) + IDENTITY_TOLERANCE));
            violations += u64::from(!dominated);
        }
        result("optimal values dominate", trials + 1, violations)
    }

    /// `lhs ≤ rhs_tight ≤ rhs_loose` for random perturbations and policies.
    pub fn rl_smoothness(mdp: &TabularMdp, trials: u64, seed: u64) -> Result<CheckResult> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5a);
        let mut violations = 0;
        for _ in 0..trials {
            let p_tilde = random_perturbation(&mut rng, mdp.transitions());
            let pi = random_policy(&mut rng, mdp);
            violations += u64::from(!mtpm_bound_terms(mdp, &p_tilde, &pi)?.holds(IDENTITY_TOLERANCE));
        }
        Ok(result("episodic smoothness chain", trials, violations))
    }

    /// The inner maximiser stays in the simplex and the L1 ball, and beats
    /// random feasible points of the ball.
    pub fn l1_inner_max(mdp: &TabularMdp, trials: u64, seed: u64) -> CheckResult {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x33);
        let s = mdp.states();
        let mut violations = 0;
        for _ in 0..trials {
            let arm = rng.random_range(0..mdp.transitions().arms());
            let p_hat = mdp.transitions().row(arm);
            let values: Vec<f64> = (0..s).map(|_| rng.random::<f64>() * mdp.horizon() as f64).collect();
            let radius = rng.random::<f64>() * 2.0;
            let best = inner_l1_max(p_hat, &values, Radius::Finite(radius));
            let l1: f64 = best.iter().zip(p_hat).map(|(a, b)| (a - b).abs()).sum();
            let sum: f64 = best.iter().sum();
            let objective: f64 = best.iter().zip(&values).map(|(a, b)| a * b).sum();
            let d = random_simplex(&mut rng, s);
            let d_l1: f64 = d.iter().zip(p_hat).map(|(a, b)| (a - b).abs()).sum();
            let lambda = if d_l1 > radius { radius / d_l1 } else { 1.0 };
            let other: f64 = d
                .iter()
                .zip(p_hat)
                .zip(&values)
                .map(|((x, p), v)| ((1.0 - lambda) * p + lambda * x) * v)
                .sum();
            let ok = l1 <= radius + IDENTITY_TOLERANCE
                && (sum - 1.0).abs() <= IDENTITY_TOLERANCE
                && best.iter().all(|&x| x >= -IDENTITY_TOLERANCE)
                && other <= objective + IDENTITY_TOLERANCE;
            violations += u64::from(!ok);
        }
        result("inner L1 maximiser", trials, violations)
    }

    fn coverage_result(name: &str, report: crate::concentration::coverage::CoverageReport) -> CheckResult {
        CheckResult {
            name: name.to_string(),
            trials: report.trials,
            violations: report.violations,
            allowed: (report.threshold() * report.trials as f64).floor() as u64,
        }
    }

    /// Coverage of the three radii on the instance's first transition row,
    /// with `n = 20` samples and `δ = 0.05`.
    pub fn rl_coverage(mdp: &TabularMdp, trials: u64, seed: u64) -> Result<Vec<CheckResult>> {
        let delta = 0.05;
        let n = 20;
        let p = mdp.transitions().row(0);
        let (optimal, _) = optimal_values(mdp);
        Ok(vec![
            coverage_result("L1 radius coverage", l1_coverage(p, n, delta, trials, seed)?),
            coverage_result("Bernstein radius coverage", bernstein_coverage(p[0], n, delta, trials, seed)?),
            coverage_result(
                "variance-aware bonus coverage",
                variance_bonus_coverage(p, optimal.step(1), mdp.horizon(), n, delta, trials, seed)?,
            ),
        ])
    }

    pub fn random_seed_set<R: Rng + ?Sized>(rng: &mut R, sources: usize, budget: usize) -> Vec<usize> {
        let size = rng.random_range(0..=budget.min(sources));
        let mut set = sample(rng, sources, size).into_vec();
        set.sort_unstable();
        set
    }

    /// `|r(π; p̃) − r(π; p)| ≤ Σ_{u∈π} ||p̃_u − p_u||₁` over the target
    /// columns, for random perturbed rows.
    pub fn pmc_smoothness(instance: &BipartiteInstance, trials: u64, seed: u64) -> CheckResult {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x3c);
        let p = instance.rows();
        let v = instance.targets();
        let mut violations = 0;
        for _ in 0..trials {
            let p_tilde = random_perturbation(&mut rng, p);
            let set = random_seed_set(&mut rng, instance.sources(), instance.budget());
            let lhs = (coverage_reward(&p_tilde, v, &set) - coverage_reward(p, v, &set)).abs();
            let rhs: f64 = set
                .iter()
                .map(|&u| (0..v).map(|j| (p_tilde.row(u)[j] - p.row(u)[j]).abs()).sum::<f64>())
                .sum();
            violations += u64::from(lhs > rhs + IDENTITY_TOLERANCE);
        }
        result("coverage smoothness", trials, violations)
    }

    /// Statistics built from `n_u ∈ [0, 20]` true draws per source.
    pub fn random_statistics<R: Rng + ?Sized>(rng: &mut R, instance: &BipartiteInstance) -> ArmStatistics {
        let d = instance.targets() + 1;
        let mut stats = ArmStatistics::new(instance.sources(), d);
        for u in 0..instance.sources() {
            for _ in 0..rng.random_range(0..=20) {
                let hot = categorical(rng, instance.rows().row(u));
                stats.update(&[TriggeredObservation::one_hot(u, d, hot)]).expect("valid one-hot");
            }
        }
        stats
    }

    /// A random point of the L1 ball of radius `radius` around `p_hat`
    /// intersected with the simplex.
    fn random_in_ball<R: Rng + ?Sized>(rng: &mut R, p_hat: &[f64], radius: Radius) -> Vec<f64> {
        let d = random_simplex(rng, p_hat.len());
        if p_hat.iter().sum::<f64>() < 0.5 {
            // unobserved source: the region is the whole simplex
            return d;
        }
        let l1: f64 = d.iter().zip(p_hat).map(|(a, b)| (a - b).abs()).sum();
        let lambda = match radius {
            Radius::Unbounded => 1.0,
            Radius::Finite(r) if l1 > r => r / l1,
            Radius::Finite(_) => 1.0,
        } * rng.random::<f64>();
        p_hat.iter().zip(&d).map(|(p, x)| (1.0 - lambda) * p + lambda * x).collect()
    }

    /// `r(π; p̃) ≤ r(π; p̂) + Σ_{u∈π} q_u` for the oracle's own optimistic
    /// parameter and for random points of the confidence region.
    pub fn pseudo_reward_dominance(
        instance: &BipartiteInstance,
        rounds: u64,
        trials: u64,
        seed: u64,
    ) -> Result<CheckResult> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xd0);
        let (u_n, v, k) = (instance.sources(), instance.targets(), instance.budget());
        let oracle = PmcGreedyOracle::new(u_n, v, k, rounds, None)?;
        let mut violations = 0;
        for _ in 0..trials {
            let stats = random_statistics(&mut rng, instance);
            let (_, optimistic, plan) = oracle.plan(&stats);
            let p_hat = stats.means();
            let set = random_seed_set(&mut rng, u_n, k);
            let pseudo =
                coverage_reward(p_hat, v, &set) + set.iter().map(|&u| plan.deviations[u]).sum::<f64>();
            let mut region = MeanMatrix::zeros(u_n, v + 1);
            for u in 0..u_n {
                region
                    .row_mut(u)
                    .copy_from_slice(&random_in_ball(&mut rng, p_hat.row(u), plan.radii[u]));
            }
            let ok = coverage_reward(&optimistic, v, &set) <= pseudo + IDENTITY_TOLERANCE
                && coverage_reward(&region, v, &set) <= pseudo + IDENTITY_TOLERANCE;
            violations += u64::from(!ok);
        }
        Ok(result("pseudo-reward dominance", trials, violations))
    }

    /// Monotone and diminishing returns:
    /// `f(A ∪ {x}) − f(A) ≥ f(B ∪ {x}) − f(B) ≥ 0` for `A ⊆ B`, `x ∉ B`.
    pub fn pseudo_reward_submodular(
        instance: &BipartiteInstance,
        rounds: u64,
        trials: u64,
        seed: u64,
    ) -> Result<CheckResult> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5b);
        let (u_n, v, k) = (instance.sources(), instance.targets(), instance.budget());
        let oracle = PmcGreedyOracle::new(u_n, v, k, rounds, None)?;
        let mut violations = 0;
        for _ in 0..trials {
            let stats = random_statistics(&mut rng, instance);
            let (_, _, plan) = oracle.plan(&stats);
            let f = |set: &[usize]| {
                coverage_reward(stats.means(), v, set) + set.iter().map(|&u| plan.deviations[u]).sum::<f64>()
            };
            let mut order = sample(&mut rng, u_n, u_n).into_vec();
            let x = order.pop().expect("at least one source");
            let b_len = rng.random_range(0..=order.len());
            let a_len = rng.random_range(0..=b_len);
            let b = &order[..b_len];
            let a = &order[..a_len];
            let with = |s: &[usize]| {
                let mut t = s.to_vec();
                t.push(x);
                t
            };
            let gain_a = f(&with(a)) - f(a);
            let gain_b = f(&with(b)) - f(b);
            violations += u64::from(gain_a + IDENTITY_TOLERANCE < gain_b || gain_b < -IDENTITY_TOLERANCE);
        }
        Ok(result("pseudo-reward submodularity", trials, violations))
    }

    /// Greedy on the true rows reaches `(1 − 1/e)` of the exact optimum.
    /// `None` when the instance is too large to enumerate.
    pub fn greedy_guarantee(instance: &BipartiteInstance) -> Result<Option<CheckResult>> {
        if instance.sources() > BRUTE_FORCE_LIMIT {
            return Ok(None);
        }
        let (p, v) = (instance.rows(), instance.targets());
        let (_, best) = brute_force_best(p, v, instance.budget())?;
        let mut violations = 0;
        for mode in [GreedyMode::Plain, GreedyMode::Lazy] {
            let set = greedy_max(|s| coverage_reward(p, v, s), instance.sources(), instance.budget(), mode);
            violations += u64::from(coverage_reward(p, v, set.members()) + IDENTITY_TOLERANCE < GREEDY_ALPHA * best);
        }
        Ok(Some(result("greedy approximation guarantee", 2, violations)))
    }

    /// For a simplex row `p_hat`, `max_l1_deviation` returns a simplex row
    /// at L1 distance exactly `q` within the radius.
    pub fn l1_deviation_consistent(p_hat: &[f64], radius: Radius) -> bool {
        let (row, q) = max_l1_deviation(p_hat, radius);
        let l1: f64 = row.iter().zip(p_hat).map(|(a, b)| (a - b).abs()).sum();
        let in_radius = match radius {
            Radius::Finite(r) => q <= r + IDENTITY_TOLERANCE,
            Radius::Unbounded => true,
        };
        in_radius && (l1 - q).abs() <= IDENTITY_TOLERANCE && (row.iter().sum::<f64>() - 1.0).abs() <= IDENTITY_TOLERANCE
    }
}
