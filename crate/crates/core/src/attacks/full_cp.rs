use std::collections::HashMap;

use crate::cost::CostModel;
use crate::error::{Error, Result};
use crate::model::{JobSet, Model, Slot};

use super::{enforced_cp_cost, pin_cp, AttackResult, Clique, CliquePartition};

/// Largest total service the subjob DP accepts by default.
pub const DEFAULT_SUBJOB_LIMIT: usize = 14;

const TIE_TOL: f64 = 1e-12;

type Counts = Vec<u8>;

#[derive(Clone)]
struct Cell {
    value: f64,
    /// Clique slot and the counts handed to the left subproblem.
    choice: Option<(Slot, Counts)>,
}

struct SubjobDp<'a> {
    jobs: &'a JobSet,
    cost: &'a CostModel,
    memo: HashMap<(Slot, Slot, Counts), Cell>,
}

fn overlap(a: Slot, d: Slot, k: Slot, l: Slot) -> u32 {
    let (lo, hi) = (a.max(k), d.min(l));
    if lo > hi {
        0
    } else {
        hi - lo + 1
    }
}

impl SubjobDp<'_> {
    fn solve(&mut self, k: Slot, l: Slot, m: &Counts) -> Cell {
        if m.iter().all(|&c| c == 0) {
            return Cell { value: 0.0, choice: None };
        }
        let infeasible = Cell { value: f64::NEG_INFINITY, choice: None };
        if k > l {
            return infeasible;
        }
        let key = (k, l, m.clone());
        if let Some(cell) = self.memo.get(&key) {
            return cell.clone();
        }
        let active: Vec<usize> = (0..m.len()).filter(|&j| m[j] > 0).collect();
        if active.iter().any(|&j| {
            let job = self.jobs.job(j);
            u32::from(m[j]) > overlap(job.arrival, job.deadline, k, l)
        }) {
            self.memo.insert(key, infeasible.clone());
            return infeasible;
        }

        let lo = active.iter().map(|&j| self.jobs.job(j).arrival).min().unwrap_or(k).max(k);
        let hi = active.iter().map(|&j| self.jobs.job(j).deadline).max().unwrap_or(l).min(l);
        let mut best = infeasible;
        for z in lo..=hi {
            let here: Vec<usize> = active.iter().copied().filter(|&j| self.jobs.job(j).contains(z)).collect();
            if here.is_empty() {
                continue;
            }
            let clique = self.cost.cost(z, here.iter().map(|&j| self.jobs.job(j).power()).sum());

            // Per job: the range of subjobs that may go left of z.
            let mut fixed_left = vec![0u8; m.len()];
            let mut ranges = Vec::new();
            let mut feasible = true;
            for &j in &active {
                let job = self.jobs.job(j);
                if job.contains(z) {
                    let rest = m[j] - 1;
                    let cap_l = if z > k { overlap(job.arrival, job.deadline, k, z - 1) } else { 0 };
                    let cap_r = overlap(job.arrival, job.deadline, z + 1, l);
                    let min_l = u32::from(rest).saturating_sub(cap_r);
                    let max_l = u32::from(rest).min(cap_l);
                    if min_l > max_l {
                        feasible = false;
                        break;
                    }
                    ranges.push((j, min_l as u8, max_l as u8));
                } else if job.deadline < z {
                    fixed_left[j] = m[j];
                }
            }
            if !feasible {
                continue;
            }

            let mut left = fixed_left;
            for &(j, a, _) in &ranges {
                left[j] = a;
            }
            loop {
                let right: Counts = (0..m.len())
                    .map(|j| m[j] - left[j] - u8::from(here.contains(&j)))
                    .collect();
                let lv = if z > k { self.solve(k, z - 1, &left).value } else if left.iter().all(|&c| c == 0) { 0.0 } else { f64::NEG_INFINITY };
                let rv = self.solve(z + 1, l, &right).value;
                let value = clique + lv + rv;
                if value.is_finite()
                    && (best.choice.is_none() || value > best.value + TIE_TOL * best.value.abs().max(1.0))
                {
                    best = Cell { value, choice: Some((z, left.clone())) };
                }
                // Odometer over the left counts, earliest job varying slowest.
                let mut advanced = false;
                for &(j, a, b) in ranges.iter().rev() {
                    if left[j] < b {
                        left[j] += 1;
                        advanced = true;
                        break;
                    }
                    left[j] = a;
                }
                if !advanced {
                    break;
                }
            }
        }
        self.memo.insert(key, best.clone());
        best
    }

    fn collect(&mut self, k: Slot, l: Slot, m: &Counts, out: &mut Vec<Clique>) {
        let Some((z, left)) = self.solve(k, l, m).choice else { return };
        let members: Vec<usize> = (0..m.len()).filter(|&j| m[j] > 0 && self.jobs.job(j).contains(z)).collect();
        let right: Counts = (0..m.len()).map(|j| m[j] - left[j] - u8::from(members.contains(&j))).collect();
        out.push(Clique { members, slot: z });
        if z > k {
            self.collect(k, z - 1, &left, out);
        }
        self.collect(z + 1, l, &right, out);
    }
}

/// Maximum-cost subjob clique partition of a constant-power job set.
pub(crate) fn max_partition_cp(jobs: &JobSet, cost: &CostModel, limit: usize) -> Result<CliquePartition> {
    jobs.require(Model::ConstantPower)?;
    let total: usize = jobs.jobs().iter().map(|j| j.service() as usize).sum();
    if total > limit {
        return Err(Error::Size { what: "total service of constant-power jobs", actual: total, limit });
    }
    let mut cliques = Vec::new();
    if let (Some(first), Some(last)) = (jobs.jobs().first(), jobs.jobs().iter().map(|j| j.deadline).max()) {
        let m: Counts = jobs.jobs().iter().map(|j| j.service() as u8).collect();
        let mut dp = SubjobDp { jobs, cost, memo: HashMap::new() };
        dp.collect(first.arrival, last, &m, &mut cliques);
    }
    cliques.sort_by_key(|c| c.slot);
    Ok(CliquePartition::priced(jobs, cliques, cost))
}

/// Offline full attack in the constant-power model, with the default size guard.
pub fn offline_full_attack_cp(jobs: &JobSet, cost: &CostModel) -> Result<AttackResult> {
    offline_full_attack_cp_with_limit(jobs, cost, DEFAULT_SUBJOB_LIMIT)
}

/// Every subjob is pinned to its clique's slot. The search is exponential in
/// the number of jobs, so instances with more than `limit` subjobs are refused.
pub fn offline_full_attack_cp_with_limit(jobs: &JobSet, cost: &CostModel, limit: usize) -> Result<AttackResult> {
    cost.check_horizon(jobs.horizon())?;
    let partition = max_partition_cp(jobs, cost, limit)?;
    let mut slots: Vec<Option<Vec<Slot>>> = vec![None; jobs.len()];
    for clique in &partition.cliques {
        for &j in &clique.members {
            slots[j].get_or_insert_with(Vec::new).push(clique.slot);
        }
    }
    let (forged, origin, modified) = pin_cp(jobs, &slots)?;
    let enforced_cost = enforced_cp_cost(&forged, cost)?;
    Ok(AttackResult { forged, origin, partition: Some(partition), modified, enforced_cost })
}
