//! Combinatorial multi-armed bandits with multivariant, probabilistically
//! triggered arms.
//!
//! The crate is organised around the generic learner in [`framework`]
//! (arm statistics, confidence radii and the CUCB-MT round loop) and two
//! concrete problem families that plug into it:
//!
//! - [`rl`]: tabular episodic MDPs with unknown transitions, solved by
//!   extended value iteration or by optimistic/pessimistic value iteration
//!   with a variance-aware bonus.
//! - [`pmc`]: probabilistic maximum coverage for goods distribution, solved
//!   by a greedy pseudo-reward oracle.
//!
//! [`concentration`] holds the radius formulas shared by both, and
//! [`harness`] drives seeded experiments, writes regret curves and runs the
//! invariant audits.

pub mod concentration;
pub mod error;
pub mod framework;
pub mod harness;
pub mod pmc;
pub mod rl;
pub mod rng;
mod tokens;

pub use error::{Error, Result};
