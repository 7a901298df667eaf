//! Exact evaluation of the smoothness bounds and of the
//! performance-difference identity, used for audits and regret accounting.

use crate::concentration::dot;
use crate::error::Result;
use crate::framework::MeanMatrix;

use super::mdp::{occupancy_measure, q_values, value_of_policy, Policy, TabularMdp, ValueTable};

/// The three sides of the value-smoothness chain
/// `lhs ≤ rhs_tight ≤ rhs_loose`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmoothnessTerms {
    /// `|V₁^{p̃,π}(s₁) − V₁^{p,π}(s₁)|`
    pub lhs: f64,
    /// `H · Σ q^{p,π} ||p̃ − p||₁`
    pub rhs_loose: f64,
    /// `Σ q^{p,π} |(p̃ − p)ᵀ V^{p̃,π}_{h+1}|`
    pub rhs_tight: f64,
}

impl SmoothnessTerms {
    pub fn holds(&self, tolerance: f64) -> bool {
        self.lhs <= self.rhs_tight + tolerance && self.rhs_tight <= self.rhs_loose + tolerance
    }
}

/// `mdp` carries the reference transitions `p`; `p_tilde` must be a valid
/// transition table of the same shape.
pub fn mtpm_bound_terms(mdp: &TabularMdp, p_tilde: &MeanMatrix, pi: &Policy) -> Result<SmoothnessTerms> {
    let perturbed = mdp.with_transitions(p_tilde.clone())?;
    let v = value_of_policy(mdp, pi);
    let v_tilde = value_of_policy(&perturbed, pi);
    let occupancy = occupancy_measure(mdp, pi);
    let model = mdp.model();
    let s1 = mdp.initial_state();

    let mut rhs_loose = 0.0;
    let mut rhs_tight = 0.0;
    for (arm, &q) in occupancy.as_arms().iter().enumerate() {
        if q == 0.0 {
            continue;
        }
        let (_, _, h) = model.arm_coords(arm);
        let p = mdp.transitions().row(arm);
        let pt = p_tilde.row(arm);
        let l1: f64 = p.iter().zip(pt).map(|(a, b)| (a - b).abs()).sum();
        let diff: Vec<f64> = pt.iter().zip(p).map(|(a, b)| a - b).collect();
        rhs_loose += q * l1;
        rhs_tight += q * dot(&diff, v_tilde.step(h + 1)).abs();
    }
    Ok(SmoothnessTerms {
        lhs: (v_tilde.get(0, s1) - v.get(0, s1)).abs(),
        rhs_loose: mdp.horizon() as f64 * rhs_loose,
        rhs_tight,
    })
}

/// `Σ_{s,a,h} q^{p,π}(s, a, h) · [V*_h(s) − Q*_h(s, a)]`, which equals
/// `V*₁(s₁) − V^π₁(s₁)`.
pub fn performance_difference(mdp: &TabularMdp, optimal: &ValueTable, pi: &Policy) -> f64 {
    let q_star = q_values(mdp, optimal);
    let occupancy = occupancy_measure(mdp, pi);
    let model = mdp.model();
    occupancy
        .as_arms()
        .iter()
        .enumerate()
        .filter(|(_, &q)| q > 0.0)
        .map(|(arm, &q)| {
            let (s, _, h) = model.arm_coords(arm);
            q * (optimal.get(h, s) - q_star[arm])
        })
        .sum()
}
