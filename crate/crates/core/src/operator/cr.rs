use crate::cost::CostModel;
use crate::error::Result;
use crate::model::{JobSet, Model, Slot};
use crate::schedule::{cost_of_loads, Schedule};

use super::OperatorResult;

/// Load threshold below which the controlled-release policy admits optional work.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Threshold {
    Fixed(f64),
    /// `sum p_j s_j / (max d_j - min a_j + 1)` over the jobs revealed so far.
    #[default]
    RunningAverage,
}

/// Online controlled release for constant-power jobs, revealed at their
/// (forged) arrival. Each slot serves every job that can no longer wait, then
/// admits pending jobs earliest-deadline-first while the load is under the
/// threshold. Jobs may be preempted between slots.
pub fn cr_schedule_online(jobs: &JobSet, threshold: Threshold, cost: &CostModel) -> Result<OperatorResult> {
    jobs.require(Model::ConstantPower)?;
    let mut schedule = Schedule::new(jobs.horizon());
    let mut remaining: Vec<u32> = jobs.jobs().iter().map(|j| j.service()).collect();
    let (Some(start), Some(end)) =
        (jobs.jobs().first().map(|j| j.arrival), jobs.jobs().iter().map(|j| j.deadline).max())
    else {
        return Ok(OperatorResult { schedule, cost: 0.0, critical_intervals: Vec::new() });
    };

    let mut revealed = 0usize;
    let (mut work, mut first_a, mut last_d) = (0.0, Slot::MAX, 0);
    for t in start..=end {
        while revealed < jobs.len() && jobs.job(revealed).arrival <= t {
            let j = jobs.job(revealed);
            work += j.energy();
            first_a = first_a.min(j.arrival);
            last_d = last_d.max(j.deadline);
            revealed += 1;
        }
        let level = match threshold {
            Threshold::Fixed(v) => v,
            Threshold::RunningAverage => work / (last_d - first_a + 1) as f64,
        };

        let mut load = 0.0;
        let mut optional = Vec::new();
        for j in &jobs.jobs()[..revealed] {
            let rem = remaining[j.id];
            if rem == 0 || j.deadline < t {
                continue;
            }
            if rem > j.deadline - t {
                schedule.add(j.id, t, j.power());
                remaining[j.id] -= 1;
                load += j.power();
            } else {
                optional.push(j);
            }
        }
        optional.sort_by_key(|j| (j.deadline, j.id));
        for j in optional {
            if load >= level {
                break;
            }
            schedule.add(j.id, t, j.power());
            remaining[j.id] -= 1;
            load += j.power();
        }
    }
    debug_assert!(remaining.iter().all(|&r| r == 0));
    let cost_value = cost_of_loads(&schedule.loads(), cost);
    Ok(OperatorResult { schedule, cost: cost_value, critical_intervals: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_threshold_waits_until_forced() {
        let set = JobSet::cp(&[(1, 3, 1, 2.0)]).unwrap();
        let r = cr_schedule_online(&set, Threshold::Fixed(0.0), &CostModel::quadratic()).unwrap();
        assert_eq!(r.schedule.get(0, 3), 2.0);
        assert_eq!(r.schedule.get(0, 1), 0.0);
    }

    #[test]
    fn infinite_threshold_serves_immediately() {
        let set = JobSet::cp(&[(1, 3, 1, 2.0)]).unwrap();
        let r = cr_schedule_online(&set, Threshold::Fixed(f64::INFINITY), &CostModel::quadratic()).unwrap();
        assert_eq!(r.schedule.get(0, 1), 2.0);
    }

    #[test]
    fn empty_stream() {
        let set = JobSet::cp(&[]).unwrap();
        let r = cr_schedule_online(&set, Threshold::default(), &CostModel::quadratic()).unwrap();
        assert_eq!(r.cost, 0.0);
    }

    #[test]
    fn always_feasible() {
        let set = JobSet::cp(&[(0, 5, 3, 2.0), (1, 3, 2, 1.0), (1, 1, 1, 4.0), (2, 6, 1, 1.5)]).unwrap();
        for th in [Threshold::Fixed(0.0), Threshold::Fixed(3.0), Threshold::RunningAverage] {
            let r = cr_schedule_online(&set, th, &CostModel::quadratic()).unwrap();
            assert!(r.schedule.check_serves(&set).is_ok());
        }
    }
}
