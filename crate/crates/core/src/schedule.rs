//! Energy allocations, their cost, and the serve-on-arrival baseline.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cost::CostModel;
use crate::error::{Error, Result};
use crate::model::{Demand, JobSet, Slot, ENERGY_TOL};

/// Energy served per `(job, slot)`; the load of a slot is the sum over jobs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Schedule {
    horizon: Slot,
    allocation: BTreeMap<(usize, Slot), f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AllocationEntry {
    pub job: usize,
    pub slot: Slot,
    pub amount: f64,
}

impl Schedule {
    pub fn new(horizon: Slot) -> Self {
        Schedule { horizon, allocation: BTreeMap::new() }
    }

    pub fn horizon(&self) -> Slot {
        self.horizon
    }

    /// Adds `amount` to `S[job, slot]`; nonpositive amounts are ignored.
    pub fn add(&mut self, job: usize, slot: Slot, amount: f64) {
        assert!(slot <= self.horizon, "slot {slot} beyond horizon {}", self.horizon);
        if amount > 0.0 {
            *self.allocation.entry((job, slot)).or_insert(0.0) += amount;
        }
    }

    pub fn get(&self, job: usize, slot: Slot) -> f64 {
        self.allocation.get(&(job, slot)).copied().unwrap_or(0.0)
    }

    pub fn entries(&self) -> impl Iterator<Item = AllocationEntry> + '_ {
        self.allocation.iter().map(|(&(job, slot), &amount)| AllocationEntry { job, slot, amount })
    }

    /// Total energy given to one job.
    pub fn served(&self, job: usize) -> f64 {
        self.allocation.range((job, 0)..=(job, Slot::MAX)).map(|(_, v)| v).sum()
    }

    /// `E(t)` for `t` in `0..=T`.
    pub fn loads(&self) -> Vec<f64> {
        let mut loads = vec![0.0; self.horizon as usize + 1];
        for (&(_, t), &v) in &self.allocation {
            loads[t as usize] += v;
        }
        loads
    }

    /// Checks the schedule serves `jobs` exactly as its demand model requires.
    pub fn check_serves(&self, jobs: &JobSet) -> Result<()> {
        for (&(j, t), &v) in &self.allocation {
            let job = jobs
                .jobs()
                .get(j)
                .ok_or_else(|| Error::Invalid(format!("schedule serves unknown job {j}")))?;
            if !job.contains(t) && v > ENERGY_TOL {
                return Err(Error::Invalid(format!("job {j} served at {t} outside its window")));
            }
            if let Demand::ConstantPower { power, .. } = job.demand {
                if (v - power).abs() > ENERGY_TOL {
                    return Err(Error::Invalid(format!("job {j} served {v} at {t}, needs {power}")));
                }
            }
        }
        for job in jobs.jobs() {
            match job.demand {
                Demand::TotalEnergy { energy } => {
                    let served = self.served(job.id);
                    if (served - energy).abs() > ENERGY_TOL * (1.0 + energy) {
                        return Err(Error::Invalid(format!("job {} served {served}, needs {energy}", job.id)));
                    }
                }
                Demand::ConstantPower { service, .. } => {
                    let slots = self.allocation.range((job.id, 0)..=(job.id, Slot::MAX)).count();
                    if slots != service as usize {
                        return Err(Error::Invalid(format!(
                            "job {} served in {slots} slots, needs {service}",
                            job.id
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `sum_t C_t(E(t))`.
pub fn evaluate_cost(schedule: &Schedule, cost: &CostModel) -> Result<f64> {
    cost.check_horizon(schedule.horizon())?;
    Ok(cost_of_loads(&schedule.loads(), cost))
}

/// `sum_t C_t(loads[t])` without horizon checks.
pub fn cost_of_loads(loads: &[f64], cost: &CostModel) -> f64 {
    loads.iter().enumerate().map(|(t, &e)| cost.cost(t as Slot, e)).sum()
}

/// Serves every job in full from its arrival: all energy at `a_j` (total energy),
/// or `p_j` in slots `a_j..a_j + s_j` (constant power).
pub fn baseline_schedule(jobs: &JobSet) -> Schedule {
    let mut s = Schedule::new(jobs.horizon());
    for job in jobs.jobs() {
        match job.demand {
            Demand::TotalEnergy { energy } => s.add(job.id, job.arrival, energy),
            Demand::ConstantPower { service, power } => {
                for t in job.arrival..job.arrival + service {
                    s.add(job.id, t, power);
                }
            }
        }
    }
    s
}

/// The "dumb grid" cost: every demand served immediately on arrival.
pub fn baseline_cost(jobs: &JobSet, cost: &CostModel) -> f64 {
    cost_of_loads(&baseline_schedule(jobs).loads(), cost)
}
