//! Independent reference implementations used as test oracles. They read
//! only the raw tables and recompute everything by direct enumeration.

#![allow(dead_code)]

use cmabmt::framework::MeanMatrix;
use cmabmt::harness::random_mdp;
use cmabmt::rl::{Policy, TabularMdp};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random MDP with `S ≤ 3`, `A ≤ 2`, `H ≤ 3`.
pub fn small_mdp(seed: u64) -> TabularMdp {
    let mut r = rng(seed.wrapping_mul(0x9e37_79b9));
    let s = r.random_range(1..=3);
    let a = r.random_range(1..=2);
    let h = r.random_range(1..=3);
    random_mdp(s, a, h, seed).unwrap()
}

/// `V[h][s]` of a policy by backward recursion, with `V[H] = 0`.
pub fn evaluate(mdp: &TabularMdp, pi: &Policy) -> Vec<Vec<f64>> {
    let (ns, nh) = (mdp.states(), mdp.horizon());
    let mut v = vec![vec![0.0; ns]; nh + 1];
    for h in (0..nh).rev() {
        for s in 0..ns {
            let a = pi.action(s, h);
            let future: f64 = mdp
                .transition(s, a, h)
                .iter()
                .enumerate()
                .map(|(t, p)| p * v[h + 1][t])
                .sum();
            v[h][s] = mdp.reward(s, a, h) + future;
        }
    }
    v
}

/// Every deterministic non-stationary policy.
pub fn all_policies(states: usize, actions: usize, horizon: usize) -> Vec<Policy> {
    let cells = states * horizon;
    let count = actions.pow(cells as u32);
    (0..count)
        .map(|mut code| {
            let table = (0..cells)
                .map(|_| {
                    let a = code % actions;
                    code /= actions;
                    a
                })
                .collect();
            Policy::new(states, horizon, actions, table).unwrap()
        })
        .collect()
}

/// `max_π V^π_h(s)` for every `(h, s)` by enumeration.
pub fn brute_force_optimal(mdp: &TabularMdp) -> Vec<Vec<f64>> {
    let (ns, nh) = (mdp.states(), mdp.horizon());
    let mut best = vec![vec![f64::NEG_INFINITY; ns]; nh + 1];
    best[nh] = vec![0.0; ns];
    for pi in all_policies(ns, mdp.actions(), nh) {
        let v = evaluate(mdp, &pi);
        for h in 0..nh {
            for s in 0..ns {
                best[h][s] = best[h][s].max(v[h][s]);
            }
        }
    }
    best
}

/// State-visit distribution per step by forward propagation; returns
/// `q[h][s][a]`.
pub fn occupancy(mdp: &TabularMdp, pi: &Policy) -> Vec<Vec<Vec<f64>>> {
    let (ns, na, nh) = (mdp.states(), mdp.actions(), mdp.horizon());
    let mut dist = vec![0.0; ns];
    dist[mdp.initial_state()] = 1.0;
    let mut q = vec![vec![vec![0.0; na]; ns]; nh];
    for h in 0..nh {
        let mut next = vec![0.0; ns];
        for s in 0..ns {
            let a = pi.action(s, h);
            q[h][s][a] = dist[s];
            for (t, p) in mdp.transition(s, a, h).iter().enumerate() {
                next[t] += dist[s] * p;
            }
        }
        dist = next;
    }
    q
}

/// `Σ_{v<V} 1 − Π_{u∈set} (1 − p(u, v))`.
pub fn coverage(p: &MeanMatrix, targets: usize, set: &[usize]) -> f64 {
    (0..targets)
        .map(|v| 1.0 - set.iter().map(|&u| 1.0 - p.row(u)[v]).product::<f64>())
        .sum()
}

/// Best coverage over all sets of size at most `k`.
pub fn best_subset(p: &MeanMatrix, targets: usize, k: usize) -> f64 {
    let u = p.arms();
    (0u32..1 << u)
        .filter(|m| m.count_ones() as usize <= k)
        .map(|m| {
            let set: Vec<usize> = (0..u).filter(|i| m >> i & 1 == 1).collect();
            coverage(p, targets, &set)
        })
        .fold(0.0, f64::max)
}

pub fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Visits every point of the simplex in `d ≤ 3` dimensions whose
/// coordinates are multiples of `1 / steps`.
pub fn for_each_grid_point(d: usize, steps: usize, mut f: impl FnMut(&[f64])) {
    let h = steps as f64;
    match d {
        1 => f(&[1.0]),
        2 => {
            for i in 0..=steps {
                f(&[i as f64 / h, (steps - i) as f64 / h]);
            }
        }
        3 => {
            for i in 0..=steps {
                for j in 0..=steps - i {
                    f(&[i as f64 / h, j as f64 / h, (steps - i - j) as f64 / h]);
                }
            }
        }
        _ => panic!("grid oracle supports d ≤ 3"),
    }
}

/// A random point of the simplex grid with resolution `1 / steps`.
pub fn random_grid_simplex<R: Rng>(r: &mut R, d: usize, steps: usize) -> Vec<f64> {
    let mut cuts: Vec<usize> = (0..d - 1).map(|_| r.random_range(0..=steps)).collect();
    cuts.sort_unstable();
    let mut prev = 0;
    let mut out = Vec::with_capacity(d);
    for c in cuts.into_iter().chain(std::iter::once(steps)) {
        out.push((c - prev) as f64 / steps as f64);
        prev = c;
    }
    out
}
