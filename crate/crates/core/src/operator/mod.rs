//! Operator-side schedulers.

mod avr;
mod cr;
pub mod equalizer;
mod relaxed;
mod yds;

use serde::Serialize;

use crate::model::Slot;
use crate::schedule::{AllocationEntry, Schedule};

pub use avr::{avr_schedule, avr_schedule_with, AvrDivisor};
pub use cr::{cr_schedule_online, Threshold};
pub use relaxed::cp_relaxed_lower_bound;
pub use yds::{optimal_schedule, yds_schedule, yds_time_dependent};

/// Statistics of an interval `[k, l]` of the (contracted) timeline.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalStat {
    pub k: Slot,
    pub l: Slot,
    /// Contained energy per available slot.
    pub intensity: f64,
    /// Smallest marginal cost in the interval's local optimum (per-slot costs only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derivative: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct OperatorResult {
    pub schedule: Schedule,
    pub cost: f64,
    /// Critical intervals in the order they were peeled off (offline schedulers only).
    pub critical_intervals: Vec<IntervalStat>,
}

#[derive(Serialize)]
struct OperatorResultJson {
    cost: f64,
    loads: Vec<f64>,
    allocation: Vec<AllocationEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    critical_intervals: Vec<IntervalStat>,
}

impl Serialize for OperatorResult {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        OperatorResultJson {
            cost: self.cost,
            loads: self.schedule.loads(),
            allocation: self.schedule.entries().collect(),
            critical_intervals: self.critical_intervals.clone(),
        }
        .serialize(serializer)
    }
}
