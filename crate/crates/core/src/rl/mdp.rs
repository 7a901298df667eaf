use crate::error::{Error, Result};
use crate::framework::{MeanMatrix, TriggeredObservation};
use crate::rng::{categorical, RoundDraws, OUTCOME_CHANNEL, REWARD_CHANNEL};
use rand::Rng;

/// The learner-visible part of an episodic MDP: sizes, initial state and
/// the (known) mean rewards `r(s, a, h)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RewardModel {
    states: usize,
    actions: usize,
    horizon: usize,
    initial_state: usize,
    rewards: Vec<f64>,
}

impl RewardModel {
    /// `rewards` is indexed like arms: `(h · S + s) · A + a`.
    pub fn new(
        states: usize,
        actions: usize,
        horizon: usize,
        initial_state: usize,
        rewards: Vec<f64>,
    ) -> Result<Self> {
        if states == 0 || actions == 0 || horizon == 0 {
            return Err(Error::InvalidInstance(format!(
                "S, A and H must be positive (got {states}, {actions}, {horizon})"
            )));
        }
        if initial_state >= states {
            return Err(Error::InvalidInstance(format!(
                "initial state {initial_state} out of range for S = {states}"
            )));
        }
        let arms = states * actions * horizon;
        if rewards.len() != arms {
            return Err(Error::DimensionMismatch {
                context: "reward table",
                expected: arms,
                actual: rewards.len(),
            });
        }
        if let Some((i, &r)) = rewards.iter().enumerate().find(|(_, r)| !(0.0..=1.0).contains(*r)) {
            return Err(Error::NotAProbability {
                context: format!("reward of arm {i}"),
                value: r,
            });
        }
        Ok(Self {
            states,
            actions,
            horizon,
            initial_state,
            rewards,
        })
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn actions(&self) -> usize {
        self.actions
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn initial_state(&self) -> usize {
        self.initial_state
    }

    pub fn num_arms(&self) -> usize {
        self.states * self.actions * self.horizon
    }

    #[inline]
    pub fn arm(&self, s: usize, a: usize, h: usize) -> usize {
        (h * self.states + s) * self.actions + a
    }

    /// Inverse of [`RewardModel::arm`]: `(s, a, h)`.
    pub fn arm_coords(&self, arm: usize) -> (usize, usize, usize) {
        let a = arm % self.actions;
        let sh = arm / self.actions;
        (sh % self.states, a, sh / self.states)
    }

    #[inline]
    pub fn reward(&self, s: usize, a: usize, h: usize) -> f64 {
        self.rewards[self.arm(s, a, h)]
    }

    pub fn rewards(&self) -> &[f64] {
        &self.rewards
    }
}

/// Episodic MDP with time-inhomogeneous transitions and a fixed initial
/// state. Transition rows are stored as a `S·A·H x S` [`MeanMatrix`].
#[derive(Clone, Debug, PartialEq)]
pub struct TabularMdp {
    model: RewardModel,
    transitions: MeanMatrix,
}

impl TabularMdp {
    pub fn new(model: RewardModel, transitions: MeanMatrix) -> Result<Self> {
        if transitions.arms() != model.num_arms() || transitions.dimension() != model.states() {
            return Err(Error::DimensionMismatch {
                context: "transition table",
                expected: model.num_arms() * model.states(),
                actual: transitions.arms() * transitions.dimension(),
            });
        }
        transitions.check_simplex_rows()?;
        Ok(Self { model, transitions })
    }

    /// Same rewards, different transition kernel.
    pub fn with_transitions(&self, transitions: MeanMatrix) -> Result<Self> {
        Self::new(self.model.clone(), transitions)
    }

    pub fn model(&self) -> &RewardModel {
        &self.model
    }

    pub fn transitions(&self) -> &MeanMatrix {
        &self.transitions
    }

    pub fn states(&self) -> usize {
        self.model.states
    }

    pub fn actions(&self) -> usize {
        self.model.actions
    }

    pub fn horizon(&self) -> usize {
        self.model.horizon
    }

    pub fn initial_state(&self) -> usize {
        self.model.initial_state
    }

    pub fn transition(&self, s: usize, a: usize, h: usize) -> &[f64] {
        self.transitions.row(self.model.arm(s, a, h))
    }

    pub fn reward(&self, s: usize, a: usize, h: usize) -> f64 {
        self.model.reward(s, a, h)
    }
}

/// Deterministic non-stationary policy `π(s, h)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Policy {
    states: usize,
    horizon: usize,
    table: Vec<usize>,
}

impl Policy {
    /// `table[h · S + s]` is the action taken in state `s` at step `h`.
    pub fn new(states: usize, horizon: usize, actions: usize, table: Vec<usize>) -> Result<Self> {
        if table.len() != states * horizon {
            return Err(Error::DimensionMismatch {
                context: "policy table",
                expected: states * horizon,
                actual: table.len(),
            });
        }
        if let Some(&a) = table.iter().find(|&&a| a >= actions) {
            return Err(Error::InvalidInstance(format!(
                "policy action {a} out of range for A = {actions}"
            )));
        }
        Ok(Self {
            states,
            horizon,
            table,
        })
    }

    pub fn constant(states: usize, horizon: usize, action: usize) -> Self {
        Self {
            states,
            horizon,
            table: vec![action; states * horizon],
        }
    }

    #[inline]
    pub fn action(&self, s: usize, h: usize) -> usize {
        self.table[h * self.states + s]
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn fits(&self, mdp_states: usize, mdp_actions: usize, mdp_horizon: usize) -> bool {
        self.states == mdp_states
            && self.horizon == mdp_horizon
            && self.table.iter().all(|&a| a < mdp_actions)
    }

    /// Step-separated action digits, e.g. `01-10-11`.
    pub fn id(&self) -> String {
        self.table
            .chunks(self.states.max(1))
            .map(|step| step.iter().map(|a| a.to_string()).collect::<Vec<_>>().join("."))
            .collect::<Vec<_>>()
            .join("-")
    }
}

/// `V_h(s)` for `h` in `0..=H`; row `H` is the terminal zero row.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueTable {
    states: usize,
    horizon: usize,
    values: Vec<f64>,
}

impl ValueTable {
    pub fn zeros(states: usize, horizon: usize) -> Self {
        Self {
            states,
            horizon,
            values: vec![0.0; (horizon + 1) * states],
        }
    }

    #[inline]
    pub fn get(&self, h: usize, s: usize) -> f64 {
        self.values[h * self.states + s]
    }

    #[inline]
    pub fn set(&mut self, h: usize, s: usize, v: f64) {
        self.values[h * self.states + s] = v;
    }

    pub fn step(&self, h: usize) -> &[f64] {
        &self.values[h * self.states..(h + 1) * self.states]
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }
}

/// Occupancy `q(s, a, h)`, indexed like arms.
#[derive(Clone, Debug, PartialEq)]
pub struct OccupancyTable {
    states: usize,
    actions: usize,
    horizon: usize,
    q: Vec<f64>,
}

impl OccupancyTable {
    #[inline]
    pub fn get(&self, s: usize, a: usize, h: usize) -> f64 {
        self.q[(h * self.states + s) * self.actions + a]
    }

    /// Occupancies in arm order.
    pub fn as_arms(&self) -> &[f64] {
        &self.q
    }

    pub fn step_mass(&self, h: usize) -> f64 {
        let w = self.states * self.actions;
        self.q[h * w..(h + 1) * w].iter().sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.q.iter().sum()
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }
}

/// Bellman backup of a fixed policy from `V_H = 0`.
pub fn value_of_policy(mdp: &TabularMdp, pi: &Policy) -> ValueTable {
    let (ns, nh) = (mdp.states(), mdp.horizon());
    let mut v = ValueTable::zeros(ns, nh);
    for h in (0..nh).rev() {
        for s in 0..ns {
            let a = pi.action(s, h);
            let next: f64 = mdp
                .transition(s, a, h)
                .iter()
                .zip(v.step(h + 1))
                .map(|(p, x)| p * x)
                .sum();
            v.set(h, s, mdp.reward(s, a, h) + next);
        }
    }
    v
}

/// `Q_h(s, a) = r(s, a, h) + p(s, a, h)ᵀ V_{h+1}` in arm order.
pub fn q_values(mdp: &TabularMdp, values: &ValueTable) -> Vec<f64> {
    let model = mdp.model();
    (0..model.num_arms())
        .map(|arm| {
            let (s, a, h) = model.arm_coords(arm);
            let next: f64 = mdp
                .transition(s, a, h)
                .iter()
                .zip(values.step(h + 1))
                .map(|(p, x)| p * x)
                .sum();
            mdp.reward(s, a, h) + next
        })
        .collect()
}

/// Backward induction. Ties between actions go to the lowest index.
pub fn optimal_values(mdp: &TabularMdp) -> (ValueTable, Policy) {
    let (ns, na, nh) = (mdp.states(), mdp.actions(), mdp.horizon());
    let mut v = ValueTable::zeros(ns, nh);
    let mut table = vec![0; ns * nh];
    for h in (0..nh).rev() {
        for s in 0..ns {
            let mut best = (0, f64::NEG_INFINITY);
            for a in 0..na {
                let next: f64 = mdp
                    .transition(s, a, h)
                    .iter()
                    .zip(v.step(h + 1))
                    .map(|(p, x)| p * x)
                    .sum();
                let q = mdp.reward(s, a, h) + next;
                if q > best.1 {
                    best = (a, q);
                }
            }
            table[h * ns + s] = best.0;
            v.set(h, s, best.1);
        }
    }
    (
        v,
        Policy {
            states: ns,
            horizon: nh,
            table,
        },
    )
}

/// Forward pass from the point mass on `(s₁, π(s₁, 0), 0)`.
pub fn occupancy_measure(mdp: &TabularMdp, pi: &Policy) -> OccupancyTable {
    let (ns, na, nh) = (mdp.states(), mdp.actions(), mdp.horizon());
    let mut q = vec![0.0; ns * na * nh];
    let mut state_mass = vec![0.0; ns];
    state_mass[mdp.initial_state()] = 1.0;
    for h in 0..nh {
        let mut next_mass = vec![0.0; ns];
        for s in 0..ns {
            let mass = state_mass[s];
            if mass == 0.0 {
                continue;
            }
            let a = pi.action(s, h);
            q[(h * ns + s) * na + a] = mass;
            for (n, p) in next_mass.iter_mut().zip(mdp.transition(s, a, h)) {
                *n += mass * p;
            }
        }
        state_mass = next_mass;
    }
    OccupancyTable {
        states: ns,
        actions: na,
        horizon: nh,
        q,
    }
}

/// One sampled episode: the `H` triggered arms with one-hot next-state
/// outcomes, plus realised Bernoulli rewards.
#[derive(Clone, Debug, PartialEq)]
pub struct Episode {
    pub observations: Vec<TriggeredObservation>,
    pub rewards: Vec<f64>,
}

pub fn sample_episode(mdp: &TabularMdp, pi: &Policy, draws: RoundDraws<'_>) -> Episode {
    let model = mdp.model();
    let mut s = mdp.initial_state();
    let mut observations = Vec::with_capacity(mdp.horizon());
    let mut rewards = Vec::with_capacity(mdp.horizon());
    for h in 0..mdp.horizon() {
        let a = pi.action(s, h);
        let arm = model.arm(s, a, h);
        let next = categorical(&mut draws.stream(arm as u64, OUTCOME_CHANNEL), mdp.transition(s, a, h));
        let u: f64 = draws.stream(arm as u64, REWARD_CHANNEL).random();
        rewards.push(if u < mdp.reward(s, a, h) { 1.0 } else { 0.0 });
        observations.push(TriggeredObservation::one_hot(arm, mdp.states(), next));
        s = next;
    }
    Episode {
        observations,
        rewards,
    }
}
