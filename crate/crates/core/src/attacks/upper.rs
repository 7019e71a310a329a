use std::cmp::Ordering;

use crate::cost::CostModel;
use crate::error::{Error, Result};
use crate::model::{JobSet, Model, Slot};

use super::Budget;

/// Best value over budget splits: `out[m] = max_{i <= m} a[i] + b[m - i]`.
fn max_convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    (0..a.len())
        .map(|m| (0..=m).map(|i| a[i] + b[m - i]).fold(f64::NEG_INFINITY, f64::max))
        .collect()
}

struct UpperDp<'a> {
    jobs: &'a JobSet,
    cost: &'a CostModel,
    budget: usize,
    arrivals: Vec<Slot>,
    deadlines: Vec<Slot>,
    memo: Vec<Option<Vec<f64>>>,
}

impl UpperDp<'_> {
    fn key(&self, k: Slot, l: Slot) -> Option<(usize, usize)> {
        if k > l {
            return None;
        }
        let i = self.arrivals.partition_point(|&a| a < k);
        let j = self.deadlines.partition_point(|&d| d <= l).checked_sub(1)?;
        (i < self.arrivals.len() && self.arrivals[i] <= self.deadlines[j]).then_some((i, j))
    }

    /// `v[m]`: best baseline cost of jobs inside `[k, l]` with at most `m` altered.
    fn solve(&mut self, k: Slot, l: Slot) -> Vec<f64> {
        let zeros = vec![0.0; self.budget + 1];
        let Some((i, j)) = self.key(k, l) else { return zeros };
        let idx = i * self.deadlines.len() + j;
        if let Some(v) = &self.memo[idx] {
            return v.clone();
        }
        let (k, l) = (self.arrivals[i], self.deadlines[j]);
        let inside: Vec<usize> = self.jobs.jobs().iter().filter(|job| job.window_within(k, l)).map(|job| job.id).collect();
        let mut anchors: Vec<Slot> = inside.iter().map(|&id| self.jobs.job(id).arrival).collect();
        anchors.sort_unstable();

        let mut best = if inside.is_empty() { zeros } else { vec![f64::NEG_INFINITY; self.budget + 1] };
        for z in anchors {
            let mut clique: Vec<usize> = inside.iter().copied().filter(|&id| self.jobs.job(id).contains(z)).collect();
            clique.sort_by(|&x, &y| {
                let (ex, ey) = (self.jobs.job(x).energy(), self.jobs.job(y).energy());
                ey.partial_cmp(&ex).unwrap_or(Ordering::Equal).then(x.cmp(&y))
            });
            let left = if z > k { self.solve(k, z - 1) } else { vec![0.0; self.budget + 1] };
            let right = self.solve(z + 1, l);
            let rest = max_convolve(&left, &right);

            // value[i]: top i + 1 jobs stacked on the anchor, the others left at their arrivals.
            let singles: Vec<f64> = clique.iter().map(|&id| self.cost.cost(z, self.jobs.job(id).energy())).collect();
            let mut stacked = 0.0;
            let mut values = Vec::with_capacity(clique.len());
            for (n, &id) in clique.iter().enumerate() {
                stacked += self.jobs.job(id).energy();
                let unaltered: f64 = singles[n + 1..].iter().sum();
                values.push(self.cost.cost(z, stacked) + unaltered);
            }
            for m in 0..=self.budget {
                for (i, v) in values.iter().enumerate().take(m + 1) {
                    best[m] = best[m].max(v + rest[m - i]);
                }
            }
        }
        self.memo[idx] = Some(best.clone());
        best
    }
}

/// Best attack altering at most `budget.jobs` jobs against the operator that
/// serves each job at its arrival. Needs distinct arrival slots and a uniform cost.
pub fn upper_bound_limited_te(jobs: &JobSet, budget: Budget, cost: &CostModel) -> Result<f64> {
    jobs.require(Model::TotalEnergy)?;
    if !cost.is_uniform() {
        return Err(Error::Config("the baseline upper bound needs a uniform cost".into()));
    }
    if jobs.arrivals().len() != jobs.len() {
        return Err(Error::Precondition("arrival slots must be pairwise distinct; refine the timeline first".into()));
    }
    let (Some(&k), Some(&l)) = (jobs.arrivals().first(), jobs.deadlines().last()) else {
        return Ok(0.0);
    };
    let arrivals = jobs.arrivals();
    let deadlines = jobs.deadlines();
    let memo = vec![None; arrivals.len() * deadlines.len()];
    let mut dp = UpperDp { jobs, cost, budget: budget.jobs.min(jobs.len()), arrivals, deadlines, memo };
    let v = dp.solve(k, l);
    Ok(v[dp.budget])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::baseline_cost;

    fn q() -> CostModel {
        CostModel::quadratic()
    }

    #[test]
    fn zero_budget_is_baseline() {
        let set = JobSet::te(&[(0, 3, 2.0), (1, 2, 3.0), (2, 5, 1.0), (4, 4, 2.0)]).unwrap();
        let c2 = upper_bound_limited_te(&set, Budget::new(0.0, 4).unwrap(), &q()).unwrap();
        assert_eq!(c2, baseline_cost(&set, &q()));
    }

    #[test]
    fn one_change_stacks_on_the_later_arrival() {
        let set = JobSet::te(&[(1, 3, 6.0), (2, 4, 6.0)]).unwrap();
        let c2 = upper_bound_limited_te(&set, Budget::new(0.5, 2).unwrap(), &q()).unwrap();
        assert_eq!(c2, 144.0);
    }

    #[test]
    fn budget_limits_stack_height() {
        let set = JobSet::te(&[(0, 3, 1.0), (1, 3, 1.0), (2, 3, 1.0), (3, 3, 1.0)]).unwrap();
        let c2 = upper_bound_limited_te(&set, Budget::new(0.25, 4).unwrap(), &q()).unwrap();
        // One job joins another: 4 + 1 + 1.
        assert_eq!(c2, 6.0);
        let all = upper_bound_limited_te(&set, Budget::full(4), &q()).unwrap();
        assert_eq!(all, 16.0);
    }

    #[test]
    fn rejects_shared_arrivals() {
        let set = JobSet::te(&[(1, 3, 1.0), (1, 2, 1.0)]).unwrap();
        assert!(matches!(upper_bound_limited_te(&set, Budget::full(2), &q()), Err(Error::Precondition(_))));
    }
}
