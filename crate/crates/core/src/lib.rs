//! Scheduling time-elastic energy demands, and attacking the scheduler.
//!
//! An operator receives demands `(a_j, d_j, e_j)` (total-energy model) or
//! `(a_j, d_j, s_j, p_j)` (constant-power model) and schedules them to
//! minimise a convex per-slot cost. An attacker who can rewrite the demand
//! windows, while keeping every forged window inside the true one, tries to
//! make that minimum as large as possible.

pub mod admissible;
pub mod attacks;
pub mod bounds;
pub mod cost;
pub mod error;
pub mod harness;
pub mod model;
pub mod operator;
pub mod oracle;
pub mod schedule;

pub use admissible::{validate_admissible, Violation};
pub use attacks::{AttackResult, Budget, Clique, CliquePartition};
pub use cost::{Coefficients, CostModel};
pub use error::{Error, Result};
pub use model::{Demand, Job, JobSet, Model, Slot};
pub use operator::{IntervalStat, OperatorResult};
pub use schedule::{baseline_cost, baseline_schedule, evaluate_cost, Schedule};
