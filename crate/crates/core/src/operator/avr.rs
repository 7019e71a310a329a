use crate::cost::CostModel;
use crate::error::Result;
use crate::model::{JobSet, Model};
use crate::schedule::{cost_of_loads, Schedule};

use super::OperatorResult;

/// Per-slot rate used by the average-rate heuristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AvrDivisor {
    /// `e_j / l_j`: the job's energy exactly fills its window.
    #[default]
    Allowance,
    /// `e_j / (l_j + 1)`: the rate used in the upper-bound argument. The
    /// resulting schedule delivers only `l_j / (l_j + 1)` of each demand.
    AllowancePlusOne,
}

/// Average-rate heuristic: every job runs at a constant rate over its window.
pub fn avr_schedule(forged: &JobSet, cost: &CostModel) -> Result<OperatorResult> {
    avr_schedule_with(forged, cost, AvrDivisor::Allowance)
}

pub fn avr_schedule_with(forged: &JobSet, cost: &CostModel, divisor: AvrDivisor) -> Result<OperatorResult> {
    forged.require(Model::TotalEnergy)?;
    let mut schedule = Schedule::new(forged.horizon());
    for job in forged.jobs() {
        let slots = match divisor {
            AvrDivisor::Allowance => job.allowance(),
            AvrDivisor::AllowancePlusOne => job.allowance() + 1,
        } as f64;
        let rate = job.energy() / slots;
        for t in job.arrival..=job.deadline {
            schedule.add(job.id, t, rate);
        }
    }
    let cost_value = cost_of_loads(&schedule.loads(), cost);
    Ok(OperatorResult { schedule, cost: cost_value, critical_intervals: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_job_instance() {
        let set = JobSet::te(&[(1, 3, 6.0), (2, 4, 6.0)]).unwrap();
        let r = avr_schedule(&set, &CostModel::quadratic()).unwrap();
        assert_eq!(r.schedule.loads()[1..=4], [2.0, 4.0, 4.0, 2.0]);
        assert_eq!(r.cost, 40.0);
        // Competitive bound 2^(b-1) b^b against the optimum 36.
        assert!(r.cost <= 2.0 * 4.0 * 36.0);
        assert!(r.schedule.check_serves(&set).is_ok());
    }

    #[test]
    fn single_job_spreads_evenly() {
        let set = JobSet::te(&[(1, 4, 8.0)]).unwrap();
        let r = avr_schedule(&set, &CostModel::quadratic()).unwrap();
        assert_eq!(r.cost, 16.0);
    }

    #[test]
    fn plus_one_divisor_underserves() {
        let set = JobSet::te(&[(1, 3, 6.0)]).unwrap();
        let r = avr_schedule_with(&set, &CostModel::quadratic(), AvrDivisor::AllowancePlusOne).unwrap();
        assert_eq!(r.schedule.served(0), 4.5);
    }
}
