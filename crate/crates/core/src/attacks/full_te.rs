use crate::cost::CostModel;
use crate::error::Result;
use crate::model::{JobSet, Model, Slot};

use super::{compress_te, enforced_te_cost, AttackResult, Clique, CliquePartition};

const TIE_TOL: f64 = 1e-12;

#[derive(Clone, Copy)]
struct Cell {
    value: f64,
    split: Option<Slot>,
}

/// Interval DP over `I(k, l)`, indexed by (arrival rank, deadline rank).
struct PartitionDp<'a> {
    jobs: &'a JobSet,
    cost: &'a CostModel,
    arrivals: Vec<Slot>,
    deadlines: Vec<Slot>,
    memo: Vec<Option<Cell>>,
}

impl<'a> PartitionDp<'a> {
    fn new(jobs: &'a JobSet, cost: &'a CostModel) -> Self {
        let arrivals = jobs.arrivals();
        let deadlines = jobs.deadlines();
        let memo = vec![None; arrivals.len() * deadlines.len()];
        PartitionDp { jobs, cost, arrivals, deadlines, memo }
    }

    /// Normalises `[k, l]` to the tightest (arrival, deadline) pair with the same contents.
    fn key(&self, k: Slot, l: Slot) -> Option<(usize, usize)> {
        if k > l {
            return None;
        }
        let i = self.arrivals.partition_point(|&a| a < k);
        let j = self.deadlines.partition_point(|&d| d <= l).checked_sub(1)?;
        (i < self.arrivals.len() && self.arrivals[i] <= self.deadlines[j]).then_some((i, j))
    }

    fn solve(&mut self, k: Slot, l: Slot) -> Cell {
        let Some((i, j)) = self.key(k, l) else {
            return Cell { value: 0.0, split: None };
        };
        let idx = i * self.deadlines.len() + j;
        if let Some(cell) = self.memo[idx] {
            return cell;
        }
        let (k, l) = (self.arrivals[i], self.deadlines[j]);
        let inside: Vec<usize> =
            self.jobs.jobs().iter().filter(|job| job.window_within(k, l)).map(|job| job.id).collect();
        let candidates: Vec<Slot> = if self.cost.is_uniform() {
            let mut ds: Vec<Slot> = inside.iter().map(|&id| self.jobs.job(id).deadline).collect();
            ds.sort_unstable();
            ds.dedup();
            ds
        } else {
            (k..=l).collect()
        };

        let mut best = Cell { value: 0.0, split: None };
        for z in candidates {
            let members: Vec<_> = inside.iter().map(|&id| self.jobs.job(id)).filter(|job| job.contains(z)).collect();
            if members.is_empty() {
                continue;
            }
            let energy: f64 = members.iter().map(|job| job.energy()).sum();
            let left = if z == 0 { 0.0 } else { self.solve(k, z - 1).value };
            let right = self.solve(z + 1, l).value;
            let value = self.cost.cost(z, energy) + left + right;
            if best.split.is_none() || value > best.value + TIE_TOL * best.value.abs().max(1.0) {
                best = Cell { value, split: Some(z) };
            }
        }
        self.memo[idx] = Some(best);
        best
    }

    fn collect(&mut self, k: Slot, l: Slot, out: &mut Vec<Clique>) {
        let Some(z) = self.solve(k, l).split else { return };
        let (k, l) = self.key(k, l).map(|(i, j)| (self.arrivals[i], self.deadlines[j])).unwrap_or((k, l));
        let members =
            self.jobs.jobs().iter().filter(|job| job.window_within(k, l) && job.contains(z)).map(|job| job.id).collect();
        out.push(Clique { members, slot: z });
        if z > 0 {
            self.collect(k, z - 1, out);
        }
        self.collect(z + 1, l, out);
    }
}

/// Maximum-cost clique partition of a total-energy job set.
pub(crate) fn max_partition_te(jobs: &JobSet, cost: &CostModel) -> Result<CliquePartition> {
    jobs.require(Model::TotalEnergy)?;
    let mut cliques = Vec::new();
    if let (Some(&k), Some(&l)) = (jobs.arrivals().first(), jobs.deadlines().last()) {
        let mut dp = PartitionDp::new(jobs, cost);
        dp.collect(k, l, &mut cliques);
    }
    cliques.sort_by_key(|c| c.slot);
    Ok(CliquePartition::priced(jobs, cliques, cost))
}

/// Offline attack with full knowledge and no budget: every job is compressed
/// onto the slot of its clique in a maximum-cost clique partition.
pub fn offline_full_attack_te(jobs: &JobSet, cost: &CostModel) -> Result<AttackResult> {
    cost.check_horizon(jobs.horizon())?;
    let partition = max_partition_te(jobs, cost)?;
    let mut slots = vec![None; jobs.len()];
    for clique in &partition.cliques {
        for &j in &clique.members {
            slots[j] = Some(clique.slot);
        }
    }
    let (forged, origin, modified) = compress_te(jobs, &slots)?;
    let enforced_cost = enforced_te_cost(&forged, cost)?;
    Ok(AttackResult { forged, origin, partition: Some(partition), modified, enforced_cost })
}
