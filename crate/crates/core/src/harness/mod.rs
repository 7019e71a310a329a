//! Random demand generation, the slackness detector, and sweep experiments.

pub mod crosscheck;
pub mod detector;
pub mod experiment;
pub mod generate;
pub mod tables;
pub mod tiny;

pub use crosscheck::{oracle_check, CheckOutcome, CheckSummary};
pub use detector::{z_test, DetectorConfig, ZTest};
pub use experiment::{
    run_experiment, AttackSpec, Column, ExperimentResult, OperatorSpec, PointResult, Scenario, Sweep, SweepParam,
    TrialRecord,
};
pub use generate::{generate_jobs, generate_pair, GenConfig, MixComponent, Range, Slackness};
pub use tables::{emit_tables, plot_script, to_csv};
