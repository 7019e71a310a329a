//! Offline optimal scheduling of total-energy demands by repeatedly peeling
//! off a critical interval.
//!
//! Intervals live on a contracted timeline: slots already claimed by an
//! earlier critical interval are removed, and each remaining job's window is
//! shrunk to its still-available slots.

use crate::cost::CostModel;
use crate::error::{Error, Result};
use crate::model::{JobSet, Model, Slot};
use crate::schedule::{cost_of_loads, Schedule};

use super::equalizer::{equalize, AllocJob};
use super::{IntervalStat, OperatorResult};

/// Relative slack under which two interval scores count as tied.
const TIE_TOL: f64 = 1e-12;

struct Timeline {
    available: Vec<bool>,
}

impl Timeline {
    fn new(horizon: Slot) -> Self {
        Timeline { available: vec![true; horizon as usize + 1] }
    }

    fn first_at_or_after(&self, t: Slot, limit: Slot) -> Option<Slot> {
        (t..=limit).find(|&s| self.available[s as usize])
    }

    fn last_at_or_before(&self, t: Slot, limit: Slot) -> Option<Slot> {
        (limit..=t).rev().find(|&s| self.available[s as usize])
    }

    fn slots(&self, k: Slot, l: Slot) -> Vec<Slot> {
        (k..=l).filter(|&s| self.available[s as usize]).collect()
    }

    fn count(&self, k: Slot, l: Slot) -> usize {
        (k..=l).filter(|&s| self.available[s as usize]).count()
    }

    fn remove(&mut self, k: Slot, l: Slot) {
        for s in k..=l {
            self.available[s as usize] = false;
        }
    }
}

/// A job still waiting, with its window clipped to available slots.
#[derive(Clone, Copy)]
struct Pending {
    id: usize,
    arrival: Slot,
    deadline: Slot,
    energy: f64,
}

fn effective_windows(jobs: &JobSet, remaining: &[usize], timeline: &Timeline) -> Vec<Pending> {
    remaining
        .iter()
        .map(|&id| {
            let job = jobs.job(id);
            let arrival = timeline
                .first_at_or_after(job.arrival, job.deadline)
                .expect("a pending job always keeps an available slot");
            let deadline = timeline.last_at_or_before(job.deadline, job.arrival).expect("see above");
            Pending { id, arrival, deadline, energy: job.energy() }
        })
        .collect()
}

/// Candidate interval endpoints: effective arrivals (left) and deadlines (right).
fn endpoints(pending: &[Pending]) -> (Vec<Slot>, Vec<Slot>) {
    let mut ks: Vec<Slot> = pending.iter().map(|p| p.arrival).collect();
    let mut ls: Vec<Slot> = pending.iter().map(|p| p.deadline).collect();
    ks.sort_unstable();
    ks.dedup();
    ls.sort_unstable();
    ls.dedup();
    (ks, ls)
}

/// Optimal schedule under a uniform power cost `E^b`.
///
/// Ties between equally intense intervals go to the smallest `k`, then the
/// smallest `l`. With `b = 1` every admissible schedule is optimal; this one
/// is still valid.
pub fn yds_schedule(forged: &JobSet, cost: &CostModel) -> Result<OperatorResult> {
    forged.require(Model::TotalEnergy)?;
    if !cost.is_uniform() {
        return Err(Error::Config(
            "intensity-based scheduling needs a uniform cost; use yds_time_dependent".into(),
        ));
    }
    let mut timeline = Timeline::new(forged.horizon());
    let mut remaining: Vec<usize> = (0..forged.len()).collect();
    let mut schedule = Schedule::new(forged.horizon());
    let mut intervals = Vec::new();

    while !remaining.is_empty() {
        let pending = effective_windows(forged, &remaining, &timeline);
        let (ks, _) = endpoints(&pending);

        let mut best: Option<(f64, Slot, Slot)> = None;
        for &k in &ks {
            let mut inside: Vec<&Pending> = pending.iter().filter(|p| p.arrival >= k).collect();
            inside.sort_by_key(|p| p.deadline);
            let mut energy = 0.0;
            let mut i = 0;
            while i < inside.len() {
                let l = inside[i].deadline;
                while i < inside.len() && inside[i].deadline == l {
                    energy += inside[i].energy;
                    i += 1;
                }
                let g = energy / timeline.count(k, l) as f64;
                let better = match best {
                    None => true,
                    Some((bg, _, _)) => g > bg + TIE_TOL * bg.abs().max(1.0),
                };
                if better {
                    best = Some((g, k, l));
                }
            }
        }
        let (g, k, l) = best.expect("nonempty pending set has a candidate");

        let contained: Vec<Pending> =
            pending.iter().copied().filter(|p| p.arrival >= k && p.deadline <= l).collect();
        edf_fill(&contained, &timeline.slots(k, l), g, &mut schedule);

        intervals.push(IntervalStat { k, l, intensity: g, derivative: None });
        timeline.remove(k, l);
        remaining.retain(|id| !contained.iter().any(|p| p.id == *id));
    }

    let cost_value = cost_of_loads(&schedule.loads(), cost);
    Ok(OperatorResult { schedule, cost: cost_value, critical_intervals: intervals })
}

/// Serves `jobs` earliest-deadline-first at a flat `rate` over `slots`.
fn edf_fill(jobs: &[Pending], slots: &[Slot], rate: f64, schedule: &mut Schedule) {
    let mut rem: Vec<f64> = jobs.iter().map(|p| p.energy).collect();
    let mut order: Vec<usize> = (0..jobs.len()).collect();
    order.sort_by_key(|&i| (jobs[i].deadline, jobs[i].id));

    for &t in slots {
        let mut cap = rate;
        for &i in &order {
            if cap <= 0.0 {
                break;
            }
            let p = &jobs[i];
            if p.arrival > t || p.deadline < t || rem[i] <= 0.0 {
                continue;
            }
            let take = rem[i].min(cap);
            schedule.add(p.id, t, take);
            rem[i] -= take;
            cap -= take;
        }
    }
    // Rounding residue goes into the job's last usable slot.
    for (i, p) in jobs.iter().enumerate() {
        if rem[i] > 0.0 {
            debug_assert!(rem[i] <= 1e-9 * (1.0 + p.energy), "EDF left {} of job {}", rem[i], p.id);
            let last = slots.iter().rev().find(|&&t| t >= p.arrival && t <= p.deadline).copied();
            if let Some(t) = last {
                schedule.add(p.id, t, rem[i]);
            }
        }
    }
}

/// Optimal schedule under per-slot costs `c_t E^b`, `b > 1`.
///
/// The critical interval is the one whose locally optimal schedule has the
/// largest minimum marginal cost; that local schedule is kept as is.
pub fn yds_time_dependent(forged: &JobSet, cost: &CostModel) -> Result<OperatorResult> {
    forged.require(Model::TotalEnergy)?;
    if cost.exponent() <= 1.0 {
        return Err(Error::Config("time-dependent scheduling needs a strictly convex cost (b > 1)".into()));
    }
    if cost.c_min() <= 0.0 {
        return Err(Error::Config("per-slot coefficients must be positive".into()));
    }
    let mut timeline = Timeline::new(forged.horizon());
    let mut remaining: Vec<usize> = (0..forged.len()).collect();
    let mut schedule = Schedule::new(forged.horizon());
    let mut intervals = Vec::new();

    while !remaining.is_empty() {
        let pending = effective_windows(forged, &remaining, &timeline);
        let (ks, ls) = endpoints(&pending);

        let mut best: Option<Candidate> = None;
        for &k in &ks {
            for &l in ls.iter().filter(|&&l| l >= k) {
                let contained: Vec<Pending> =
                    pending.iter().copied().filter(|p| p.arrival >= k && p.deadline <= l).collect();
                if contained.is_empty() {
                    continue;
                }
                let slots = timeline.slots(k, l);
                let blocks: Vec<AllocJob> = contained
                    .iter()
                    .map(|p| AllocJob {
                        slots: slots.iter().copied().filter(|&t| t >= p.arrival && t <= p.deadline).collect(),
                        total: p.energy,
                        cap: f64::INFINITY,
                    })
                    .collect();
                let local = equalize(&blocks, cost, forged.horizon());
                let gamma = slots
                    .iter()
                    .map(|&t| cost.marginal(t, local.loads[t as usize]))
                    .fold(f64::INFINITY, f64::min);
                let better = match &best {
                    None => true,
                    Some(c) => gamma > c.gamma + TIE_TOL * c.gamma.abs().max(1.0),
                };
                if better {
                    best = Some(Candidate { gamma, k, l, contained, amounts: local.amounts, blocks });
                }
            }
        }
        let Candidate { gamma, k, l, contained, amounts, blocks } = best.expect("nonempty pending set has a candidate");
        let mut energy = 0.0;
        for ((p, x), block) in contained.iter().zip(&amounts).zip(&blocks) {
            for (&v, &t) in x.iter().zip(&block.slots) {
                schedule.add(p.id, t, v);
            }
            energy += p.energy;
        }
        let g = energy / timeline.count(k, l) as f64;
        intervals.push(IntervalStat { k, l, intensity: g, derivative: Some(gamma) });
        timeline.remove(k, l);
        remaining.retain(|id| !contained.iter().any(|p| p.id == *id));
    }

    let cost_value = cost_of_loads(&schedule.loads(), cost);
    Ok(OperatorResult { schedule, cost: cost_value, critical_intervals: intervals })
}

/// Best interval so far in the per-slot search, with its local schedule.
struct Candidate {
    gamma: f64,
    k: Slot,
    l: Slot,
    contained: Vec<Pending>,
    amounts: Vec<Vec<f64>>,
    blocks: Vec<AllocJob>,
}

/// Dispatches to the uniform or per-slot optimal scheduler.
pub fn optimal_schedule(forged: &JobSet, cost: &CostModel) -> Result<OperatorResult> {
    if cost.is_uniform() {
        yds_schedule(forged, cost)
    } else {
        yds_time_dependent(forged, cost)
    }
}
