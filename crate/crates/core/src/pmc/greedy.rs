use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::framework::MeanMatrix;

use super::instance::{coverage_reward, SeedSet};

/// Largest source count accepted by [`brute_force_best`].
pub const BRUTE_FORCE_LIMIT: usize = 15;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GreedyMode {
    /// Re-evaluate every candidate each step: `k · |U|` objective calls.
    Plain,
    /// Keep stale marginal gains in a max-heap and re-evaluate lazily.
    #[default]
    Lazy,
}

#[derive(PartialEq)]
struct Candidate {
    gain: f64,
    element: Reverse<usize>,
    fresh_at: usize,
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .total_cmp(&other.gain)
            .then(self.element.cmp(&other.element))
    }
}

/// Greedy maximisation of a set function over `0..ground`: `k` times, add
/// the element with the largest marginal gain, ties to the lowest index.
pub fn greedy_max<F>(objective: F, ground: usize, k: usize, mode: GreedyMode) -> SeedSet
where
    F: Fn(&[usize]) -> f64,
{
    let k = k.min(ground);
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    let mut current = objective(&chosen);
    let mut scratch = Vec::with_capacity(k + 1);
    let mut gain_of = |chosen: &[usize], current: f64, e: usize| {
        scratch.clear();
        scratch.extend_from_slice(chosen);
        scratch.push(e);
        objective(&scratch) - current
    };

    match mode {
        GreedyMode::Plain => {
            let mut taken = vec![false; ground];
            for _ in 0..k {
                let mut best: Option<(usize, f64)> = None;
                for e in (0..ground).filter(|&e| !taken[e]) {
                    let g = gain_of(&chosen, current, e);
                    if best.is_none_or(|(_, bg)| g > bg) {
                        best = Some((e, g));
                    }
                }
                let (e, g) = best.expect("k <= ground leaves a candidate");
                taken[e] = true;
                chosen.push(e);
                current += g;
            }
        }
        GreedyMode::Lazy => {
            let mut heap: BinaryHeap<Candidate> = (0..ground)
                .map(|e| Candidate {
                    gain: gain_of(&chosen, current, e),
                    element: Reverse(e),
                    fresh_at: 0,
                })
                .collect();
            while chosen.len() < k {
                let top = heap.pop().expect("k <= ground leaves a candidate");
                if top.fresh_at == chosen.len() {
                    chosen.push(top.element.0);
                    current += top.gain;
                } else {
                    heap.push(Candidate {
                        gain: gain_of(&chosen, current, top.element.0),
                        element: top.element,
                        fresh_at: chosen.len(),
                    });
                }
            }
        }
    }
    chosen.sort_unstable();
    SeedSet::from_sorted(chosen)
}

/// Exhaustive maximisation of the coverage reward over all seed sets of
/// size at most `k`; ties go to the lexicographically smallest set.
pub fn brute_force_best(p: &MeanMatrix, targets: usize, k: usize) -> Result<(SeedSet, f64)> {
    let sources = p.arms();
    if sources > BRUTE_FORCE_LIMIT {
        return Err(Error::InstanceTooLarge {
            sources,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut best = (Vec::new(), coverage_reward(p, targets, &[]));
    let mut stack = Vec::with_capacity(k);
    // depth-first preorder visits sorted sets in lexicographic order
    fn visit(
        p: &MeanMatrix,
        targets: usize,
        k: usize,
        start: usize,
        stack: &mut Vec<usize>,
        best: &mut (Vec<usize>, f64),
    ) {
        if stack.len() == k {
            return;
        }
        for u in start..p.arms() {
            stack.push(u);
            let value = coverage_reward(p, targets, stack);
            if value > best.1 {
                *best = (stack.clone(), value);
            }
            visit(p, targets, k, u + 1, stack, best);
            stack.pop();
        }
    }
    visit(p, targets, k, 0, &mut stack, &mut best);
    Ok((SeedSet::from_sorted(best.0), best.1))
}
