use crate::error::Result;
use crate::model::{JobSet, Slot};

/// A job set on a finer timeline where every slot of the original is split
/// into `factor` sub-slots.
#[derive(Debug, Clone, PartialEq)]
pub struct Refined {
    pub jobs: JobSet,
    pub factor: u32,
}

impl Refined {
    /// Original slot containing refined slot `t`.
    pub fn original_slot(&self, t: Slot) -> Slot {
        t / self.factor
    }
}

/// Spreads jobs sharing an arrival slot over distinct sub-slots.
///
/// Among jobs that arrive together, later deadlines get earlier sub-slots, so
/// a window strictly inside another stays inside it. Deadlines move to the
/// last sub-slot of their slot. Windows that were identical end up nested.
pub fn refine_slots(jobs: &JobSet) -> Result<Refined> {
    let mut per_arrival = std::collections::BTreeMap::<Slot, Vec<usize>>::new();
    for j in jobs.jobs() {
        per_arrival.entry(j.arrival).or_default().push(j.id);
    }
    let factor = per_arrival.values().map(|v| v.len() as u32).max().unwrap_or(1).max(1);
    if factor == 1 {
        return Ok(Refined { jobs: jobs.clone(), factor });
    }
    let mut rank = vec![0u32; jobs.len()];
    for ids in per_arrival.values_mut() {
        ids.sort_by_key(|&id| (std::cmp::Reverse(jobs.job(id).deadline), id));
        for (r, &id) in ids.iter().enumerate() {
            rank[id] = r as u32;
        }
    }
    let raw = jobs
        .jobs()
        .iter()
        .map(|j| (j.arrival * factor + rank[j.id], j.deadline * factor + factor - 1, j.demand))
        .collect();
    let refined = JobSet::build(jobs.model(), jobs.horizon() * factor + factor - 1, raw)?;
    Ok(Refined { jobs: refined, factor })
}
