//! Plain-text MDP format.
//!
//! ```text
//! S A H s1
//! <H·S rows of A rewards>        # row (h, s), h-major, s in 0..S
//! <H·S·A rows of S probabilities> # row (h, s, a), h-major, then s, then a
//! ```
//!
//! All fields are whitespace-separated; line breaks are not significant.
//! `s1` is the 0-based initial state. `#` starts a comment.

use std::fmt::Write;

use crate::error::Result;
use crate::framework::MeanMatrix;
use crate::tokens::{checked_size, Tokens};

use super::mdp::{RewardModel, TabularMdp};

/// Upper bound on `S·A·H·S` accepted by the parser.
const MAX_TABLE: usize = 1 << 22;

pub fn parse_mdp(text: &str) -> Result<TabularMdp> {
    let mut tokens = Tokens::new(text);
    let states = tokens.usize("S")?;
    let actions = tokens.usize("A")?;
    let horizon = tokens.usize("H")?;
    let initial = tokens.usize("s1")?;
    if states == 0 || actions == 0 || horizon == 0 {
        return Err(tokens.error("S, A and H must be positive"));
    }
    let arms = checked_size(&tokens, &[states, actions, horizon], MAX_TABLE)?;
    checked_size(&tokens, &[arms, states], MAX_TABLE)?;

    let mut rewards = vec![0.0; arms];
    for h in 0..horizon {
        for s in 0..states {
            for a in 0..actions {
                rewards[(h * states + s) * actions + a] = tokens.f64("reward")?;
            }
        }
    }
    let mut probs = Vec::with_capacity(arms * states);
    for _ in 0..arms * states {
        probs.push(tokens.f64("transition probability")?);
    }
    tokens.finish()?;

    let model = RewardModel::new(states, actions, horizon, initial, rewards)?;
    TabularMdp::new(model, MeanMatrix::from_flat(arms, states, probs)?)
}

/// Writes an instance in the format read by [`parse_mdp`]. Values use the
/// shortest representation that parses back to the same `f64`.
pub fn format_mdp(mdp: &TabularMdp) -> String {
    let (ns, na, nh) = (mdp.states(), mdp.actions(), mdp.horizon());
    let mut out = String::new();
    let _ = writeln!(out, "{ns} {na} {nh} {}", mdp.initial_state());
    out.push_str("# rewards r(s, a, h): one row per (h, s)\n");
    for h in 0..nh {
        for s in 0..ns {
            let row: Vec<String> = (0..na).map(|a| format!("{:?}", mdp.reward(s, a, h))).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
    }
    out.push_str("# transitions p(. | s, a, h): one row per (h, s, a)\n");
    for row in mdp.transitions().rows() {
        let row: Vec<String> = row.iter().map(|p| format!("{p:?}")).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}
