use std::cmp::Ordering;

use serde::Serialize;

use crate::cost::CostModel;
use crate::error::Result;
use crate::model::{JobSet, Model, Slot};

use super::full_cp::{max_partition_cp, DEFAULT_SUBJOB_LIMIT};
use super::full_te::max_partition_te;
use super::knapsack::greedy_with_capacity;
use super::upper::upper_bound_limited_te;
use super::{
    clique_cost, compress_te, enforced_cp_cost, enforced_te_cost, pin_cp, AttackResult, Budget, CliquePartition,
};

/// Result of a budget-limited offline attack.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitedAttack {
    pub attack: AttackResult,
    pub budget: Budget,
    /// Clique value secured by the greedy choice, before the operator reacts.
    pub greedy_value: f64,
}

/// Lower and upper estimates of the best budget-limited attack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitedBounds {
    /// Operator's optimal cost under the greedy attack.
    pub c1: f64,
    /// Best attack against the arrival-time baseline operator.
    pub c2: f64,
}

/// Cliques chosen by the greedy, or part of the first clique it skipped,
/// whichever is worth more.
fn choose(jobs: &JobSet, partition: &CliquePartition, budget: usize, cost: &CostModel) -> (Vec<(usize, Vec<usize>)>, f64) {
    let items: Vec<(f64, f64)> =
        partition.cliques.iter().map(|k| (clique_cost(jobs, k, cost), k.members.len() as f64)).collect();
    let greedy = greedy_with_capacity(&items, budget as f64);
    let c1 = greedy.value;
    let alternative = greedy.next.map(|i| {
        let clique = &partition.cliques[i];
        let mut top = clique.members.clone();
        top.sort_by(|&x, &y| {
            jobs.job(y).power().partial_cmp(&jobs.job(x).power()).unwrap_or(Ordering::Equal).then(x.cmp(&y))
        });
        top.truncate(budget.min(top.len()));
        let value = cost.cost(clique.slot, top.iter().map(|&j| jobs.job(j).power()).sum());
        (i, top, value)
    });
    match alternative {
        Some((i, top, c2)) if c2 > c1 => (vec![(i, top)], c2),
        _ => (greedy.chosen.iter().map(|&i| (i, partition.cliques[i].members.clone())).collect(), c1),
    }
}

/// Offline attack on total-energy jobs that alters at most `floor(beta n)` jobs.
///
/// Cliques of the full-budget partition are picked greedily by cost per job;
/// their members are compressed and everything else is left alone.
pub fn offline_limited_attack_te(jobs: &JobSet, beta: f64, cost: &CostModel) -> Result<LimitedAttack> {
    jobs.require(Model::TotalEnergy)?;
    cost.check_horizon(jobs.horizon())?;
    let budget = Budget::new(beta, jobs.len())?;
    let partition = max_partition_te(jobs, cost)?;
    let (picked, greedy_value) = choose(jobs, &partition, budget.jobs, cost);

    let mut slots: Vec<Option<Slot>> = vec![None; jobs.len()];
    let mut cliques = Vec::new();
    for (i, members) in picked {
        let slot = partition.cliques[i].slot;
        for &j in &members {
            slots[j] = Some(slot);
        }
        cliques.push(super::Clique { members, slot });
    }
    let (forged, origin, modified) = compress_te(jobs, &slots)?;
    let enforced_cost = enforced_te_cost(&forged, cost)?;
    let partition = Some(CliquePartition::priced(jobs, cliques, cost));
    Ok(LimitedAttack {
        attack: AttackResult { forged, origin, partition, modified, enforced_cost },
        budget,
        greedy_value,
    })
}

/// Constant-power counterpart: the budget counts subjobs. A job touched by a
/// chosen clique is pinned to all of its slots from the full-budget partition.
pub fn offline_limited_attack_cp(jobs: &JobSet, beta: f64, cost: &CostModel) -> Result<LimitedAttack> {
    jobs.require(Model::ConstantPower)?;
    cost.check_horizon(jobs.horizon())?;
    let budget = Budget::new(beta, jobs.len())?;
    let partition = max_partition_cp(jobs, cost, DEFAULT_SUBJOB_LIMIT)?;
    let (picked, greedy_value) = choose(jobs, &partition, budget.jobs, cost);

    let mut touched = vec![false; jobs.len()];
    for (_, members) in &picked {
        for &j in members {
            touched[j] = true;
        }
    }
    let mut slots: Vec<Option<Vec<Slot>>> = vec![None; jobs.len()];
    for clique in &partition.cliques {
        for &j in clique.members.iter().filter(|&&j| touched[j]) {
            slots[j].get_or_insert_with(Vec::new).push(clique.slot);
        }
    }
    let cliques = picked
        .into_iter()
        .map(|(i, members)| super::Clique { members, slot: partition.cliques[i].slot })
        .collect();
    let (forged, origin, modified) = pin_cp(jobs, &slots)?;
    let enforced_cost = enforced_cp_cost(&forged, cost)?;
    let partition = Some(CliquePartition::priced(jobs, cliques, cost));
    Ok(LimitedAttack {
        attack: AttackResult { forged, origin, partition, modified, enforced_cost },
        budget,
        greedy_value,
    })
}

/// Both estimates for a total-energy instance with distinct arrivals.
pub fn limited_bounds(jobs: &JobSet, beta: f64, cost: &CostModel) -> Result<LimitedBounds> {
    let c1 = offline_limited_attack_te(jobs, beta, cost)?.attack.enforced_cost;
    let c2 = upper_bound_limited_te(jobs, Budget::new(beta, jobs.len())?, cost)?;
    Ok(LimitedBounds { c1, c2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> CostModel {
        CostModel::quadratic()
    }

    fn four_jobs() -> JobSet {
        JobSet::te(&[(1, 1, 5.0), (1, 3, 2.0), (2, 3, 2.0), (5, 6, 3.0)]).unwrap()
    }

    #[test]
    fn greedy_picks_densest_clique() {
        let set = four_jobs();
        let full = super::super::offline_full_attack_te(&set, &q()).unwrap();
        assert_eq!(full.partition.unwrap().total_cost, 62.0);
        let r = offline_limited_attack_te(&set, 0.5, &q()).unwrap();
        assert_eq!(r.budget.jobs, 2);
        assert_eq!(r.greedy_value, 49.0);
        assert_eq!(r.attack.modified.iter().copied().collect::<Vec<_>>(), vec![1]);
        let j1 = r.attack.origin.iter().position(|&o| o == 1).unwrap();
        assert_eq!((r.attack.forged.job(j1).arrival, r.attack.forged.job(j1).deadline), (1, 1));
        assert!(r.attack.check_admissible(&set).is_ok());
        // Untouched jobs are still spread by the operator: 49 + 2 * 1 + 2 * 1.5^2.
        assert!((r.attack.enforced_cost - 55.5).abs() < 1e-9);
        assert!(r.greedy_value >= 0.5f64.powi(2) / 2.0 * 62.0);
    }

    #[test]
    fn greedy_meets_its_guarantee() {
        let set = four_jobs();
        let full = super::super::offline_full_attack_te(&set, &q()).unwrap().enforced_cost;
        for beta in [0.25, 0.5, 0.75, 1.0] {
            let r = offline_limited_attack_te(&set, beta, &q()).unwrap();
            assert!(r.attack.enforced_cost >= beta * beta / 2.0 * full - 1e-9);
        }
        let all = offline_limited_attack_te(&set, 1.0, &q()).unwrap();
        assert_eq!(all.attack.enforced_cost, full);
    }

    #[test]
    fn zero_budget_is_the_optimum() {
        let set = JobSet::te(&[(1, 3, 6.0), (2, 4, 6.0)]).unwrap();
        let r = offline_limited_attack_te(&set, 0.0, &q()).unwrap();
        assert!(r.attack.modified.is_empty());
        assert!((r.attack.enforced_cost - 36.0).abs() < 1e-9);
    }

    #[test]
    fn skipped_clique_can_win() {
        // One big clique of four; a budget of two cannot take it whole.
        let set = JobSet::te(&[(0, 3, 4.0), (1, 3, 4.0), (2, 3, 4.0), (3, 3, 4.0)]).unwrap();
        let r = offline_limited_attack_te(&set, 0.5, &q()).unwrap();
        assert_eq!(r.greedy_value, 64.0);
        assert!(r.attack.modified.len() <= 2);
    }

    #[test]
    fn cp_budget_counts_subjobs() {
        let set = JobSet::cp(&[(1, 3, 2, 2.0), (1, 3, 1, 3.0)]).unwrap();
        let r = offline_limited_attack_cp(&set, 1.0, &q()).unwrap();
        assert!((r.attack.enforced_cost - 29.0).abs() < 1e-9);
        let none = offline_limited_attack_cp(&set, 0.0, &q()).unwrap();
        assert!(none.attack.modified.is_empty());
        assert!(r.attack.check_admissible(&set).is_ok());
    }
}
