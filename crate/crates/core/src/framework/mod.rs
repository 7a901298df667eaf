//! Generic CMAB-MT data model and the CUCB-MT learner loop.
//!
//! A problem instance is an [`Environment`] over `m` base arms, each with a
//! `d`-dimensional mean vector stored as a row of a [`MeanMatrix`]. Every
//! round the learner hands its [`ArmStatistics`] to a [`JointOracle`], which
//! returns an action together with an optimistic parameter; the environment
//! plays the action and reports the triggered arms' outcomes.

mod learner;
mod matrix;
mod stats;

pub use learner::{
    run_cucb_mt, AuditFlags, Environment, JointOracle, LearnerConfig, Proposal, RoundRecord,
    Trace,
};
pub use matrix::MeanMatrix;
pub use stats::{confidence_radius, ArmStatistics, Radius, RadiusParams, TriggeredObservation};

/// Tolerance used when checking that a row lies on the probability simplex.
pub const SIMPLEX_TOLERANCE: f64 = 1e-9;
