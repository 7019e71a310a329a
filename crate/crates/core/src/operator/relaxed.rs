use crate::cost::CostModel;
use crate::error::Result;
use crate::model::{JobSet, Model};
use crate::schedule::{cost_of_loads, Schedule};

use super::equalizer::{equalize, AllocJob};
use super::OperatorResult;

/// Continuous relaxation of constant-power scheduling: job `j` may draw any
/// rate in `[0, p_j]` per slot, as long as it receives `s_j p_j` in its window.
///
/// The cost is a lower bound on every integral schedule. The returned
/// schedule is fractional and so does not pass [`Schedule::check_serves`].
pub fn cp_relaxed_lower_bound(jobs: &JobSet, cost: &CostModel) -> Result<OperatorResult> {
    jobs.require(Model::ConstantPower)?;
    let blocks: Vec<AllocJob> = jobs
        .jobs()
        .iter()
        .map(|j| AllocJob { slots: (j.arrival..=j.deadline).collect(), total: j.energy(), cap: j.power() })
        .collect();
    let solved = equalize(&blocks, cost, jobs.horizon());
    let mut schedule = Schedule::new(jobs.horizon());
    for ((job, block), x) in jobs.jobs().iter().zip(&blocks).zip(&solved.amounts) {
        for (&t, &v) in block.slots.iter().zip(x) {
            schedule.add(job.id, t, v);
        }
    }
    let cost_value = cost_of_loads(&schedule.loads(), cost);
    Ok(OperatorResult { schedule, cost: cost_value, critical_intervals: Vec::new() })
}
