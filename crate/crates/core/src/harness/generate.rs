//! Seeded instance generators: uniform-Dirichlet rows and uniform rewards.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::error::Result;
use crate::framework::MeanMatrix;
use crate::pmc::BipartiteInstance;
use crate::rl::{RewardModel, TabularMdp};

/// A draw from the uniform Dirichlet on the `n`-simplex, via normalised
/// exponentials.
pub fn random_simplex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut row: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = row.iter().sum();
    if total > 0.0 {
        row.iter_mut().for_each(|x| *x /= total);
    } else {
        row.iter_mut().for_each(|x| *x = 1.0 / n as f64);
    }
    row
}

/// Random episodic MDP with `S` states, `A` actions and horizon `H`,
/// starting in state 0.
pub fn random_mdp(states: usize, actions: usize, horizon: usize, seed: u64) -> Result<TabularMdp> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arms = states * actions * horizon;
    let rewards: Vec<f64> = (0..arms).map(|_| rng.random::<f64>()).collect();
    let model = RewardModel::new(states, actions, horizon, 0, rewards)?;
    let mut data = Vec::with_capacity(arms * states);
    for _ in 0..arms {
        data.extend(random_simplex(&mut rng, states));
    }
    TabularMdp::new(model, MeanMatrix::from_flat(arms, states, data)?)
}

/// Random PMC-GD instance: each source's row is uniform-Dirichlet over the
/// `V` targets plus the null outcome.
pub fn random_pmc(sources: usize, targets: usize, budget: usize, seed: u64) -> Result<BipartiteInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<f64>> = (0..sources)
        .map(|_| {
            let mut row = random_simplex(&mut rng, targets + 1);
            row.truncate(targets);
            row
        })
        .collect();
    BipartiteInstance::new(targets, budget, &rows)
}
