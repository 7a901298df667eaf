//! Experiment orchestration: configuration, seeded instance generation,
//! the per-dimension baseline, regret curves and invariant audits.

mod audit;
mod baseline;
mod config;
mod curve;
mod experiment;
mod generate;
mod sweep;

pub use audit::{run_audit_suite, AuditReport, CheckResult};
pub use audit::checks;
pub use baseline::{per_dimension_baseline, per_dimension_ucb, PerDimensionBaseline};
pub use config::{EnvKind, ExperimentConfig, InstanceSource, OracleKind};
pub use curve::{
    read_curve_csv, read_summary_csv, summarize_slope, write_curve_csv, write_summary_csv, CurveRow,
    RegretCurve, SummaryRow,
};
pub use experiment::{
    load_instance, run_experiment, run_replication, simulate, ExperimentOutcome, Instance, ReplicationAudit,
};
pub use generate::{random_mdp, random_pmc, random_simplex};
pub use sweep::{run_sweep, SweepPoint};
