//! Convex allocation by cyclic per-job water-filling.
//!
//! Minimises `sum_t c_t E_t^b` where each job spreads a fixed total over its
//! allowed slots with a per-slot cap. Every sweep re-solves one job exactly
//! against the loads of the others; the loop stops once each job's positive
//! slots share (to tolerance) the smallest marginal cost available to it.

use crate::cost::CostModel;
use crate::model::Slot;

pub const MAX_SWEEPS: usize = 10_000;
pub const KKT_TOL: f64 = 1e-8;

/// One block of the allocation problem.
#[derive(Debug, Clone)]
pub struct AllocJob {
    pub slots: Vec<Slot>,
    pub total: f64,
    /// Per-slot upper bound (`f64::INFINITY` when uncapped).
    pub cap: f64,
}

#[derive(Debug, Clone)]
pub struct Equalized {
    /// `amounts[i][x]` is served to job `i` in `jobs[i].slots[x]`.
    pub amounts: Vec<Vec<f64>>,
    pub loads: Vec<f64>,
    pub sweeps: usize,
    /// Largest marginal-cost gap left at exit.
    pub kkt_gap: f64,
}

/// Solves the allocation on slots `0..=horizon`.
pub fn equalize(jobs: &[AllocJob], cost: &CostModel, horizon: Slot) -> Equalized {
    let mut loads = vec![0.0; horizon as usize + 1];
    let mut amounts: Vec<Vec<f64>> = jobs.iter().map(|j| vec![0.0; j.slots.len()]).collect();

    // Even start keeps the first sweep well conditioned.
    for (job, x) in jobs.iter().zip(amounts.iter_mut()) {
        if job.slots.is_empty() {
            continue;
        }
        let share = (job.total / job.slots.len() as f64).min(job.cap);
        for (xi, &t) in x.iter_mut().zip(&job.slots) {
            *xi = share;
            loads[t as usize] += share;
        }
    }

    let mut sweeps = 0;
    let mut gap = kkt_gap(jobs, &amounts, &loads, cost);
    while gap > KKT_TOL && sweeps < MAX_SWEEPS {
        for (job, x) in jobs.iter().zip(amounts.iter_mut()) {
            for (xi, &t) in x.iter().zip(&job.slots) {
                loads[t as usize] -= xi;
            }
            fill(job, &loads, cost, x);
            for (xi, &t) in x.iter().zip(&job.slots) {
                loads[t as usize] += xi;
            }
        }
        sweeps += 1;
        gap = kkt_gap(jobs, &amounts, &loads, cost);
        if cost.exponent() == 1.0 {
            // Linear cost decouples the jobs: one sweep is exact.
            break;
        }
    }
    Equalized { amounts, loads, sweeps, kkt_gap: gap }
}

/// Relative KKT residual: for each job, the highest marginal among slots it
/// uses minus the lowest marginal among slots it could still raise.
fn kkt_gap(jobs: &[AllocJob], amounts: &[Vec<f64>], loads: &[f64], cost: &CostModel) -> f64 {
    let mut worst: f64 = 0.0;
    for (job, x) in jobs.iter().zip(amounts) {
        if job.total <= 0.0 {
            continue;
        }
        let mut used = f64::NEG_INFINITY;
        let mut free = f64::INFINITY;
        for (&xi, &t) in x.iter().zip(&job.slots) {
            let m = cost.marginal(t, loads[t as usize]);
            if xi > 1e-12 {
                used = used.max(m);
            }
            if xi < job.cap - 1e-12 {
                free = free.min(m);
            }
        }
        if used.is_finite() && free.is_finite() {
            worst = worst.max((used - free) / used.max(1.0));
        }
    }
    worst
}

/// Best response of one job to the background `loads`.
fn fill(job: &AllocJob, loads: &[f64], cost: &CostModel, x: &mut [f64]) {
    x.iter_mut().for_each(|v| *v = 0.0);
    if job.total <= 0.0 || job.slots.is_empty() {
        return;
    }
    let b = cost.exponent();
    if b == 1.0 {
        let mut order: Vec<usize> = (0..job.slots.len()).collect();
        order.sort_by(|&i, &j| {
            cost.coeff(job.slots[i]).total_cmp(&cost.coeff(job.slots[j])).then(job.slots[i].cmp(&job.slots[j]))
        });
        let mut left = job.total;
        for i in order {
            let take = left.min(job.cap);
            x[i] = take;
            left -= take;
            if left <= 0.0 {
                break;
            }
        }
        return;
    }

    let level_load = |t: Slot, lambda: f64| (lambda / (cost.coeff(t) * b)).powf(1.0 / (b - 1.0));
    let amount_at = |lambda: f64, out: &mut [f64]| -> f64 {
        let mut sum = 0.0;
        for (o, &t) in out.iter_mut().zip(&job.slots) {
            *o = (level_load(t, lambda) - loads[t as usize]).clamp(0.0, job.cap);
            sum += *o;
        }
        sum
    };

    let mut lo = 0.0;
    let mut hi = job
        .slots
        .iter()
        .map(|&t| cost.marginal(t, loads[t as usize] + job.total))
        .fold(0.0, f64::max);
    let mut scratch = vec![0.0; job.slots.len()];
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if amount_at(mid, &mut scratch) >= job.total {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    let sum = amount_at(hi, x);
    if sum > 0.0 {
        let scale = job.total / sum;
        x.iter_mut().for_each(|v| *v = (*v * scale).min(job.cap));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn marginal_equalisation_on_two_slots() {
        // c = [., 1, 4], b = 2: 2 E1 = 8 E2 and E1 + E2 = 2.
        let cost = CostModel::per_slot(2.0, vec![1.0, 1.0, 4.0]).unwrap();
        let jobs = [AllocJob { slots: vec![1, 2], total: 2.0, cap: f64::INFINITY }];
        let out = equalize(&jobs, &cost, 2);
        assert!((out.amounts[0][0] - 1.6).abs() < 1e-9);
        assert!((out.amounts[0][1] - 0.4).abs() < 1e-9);
    }

    #[test]
    fn caps_are_respected() {
        let cost = CostModel::quadratic();
        let jobs = [
            AllocJob { slots: vec![0], total: 3.0, cap: 3.0 },
            AllocJob { slots: vec![0, 1], total: 2.0, cap: 1.5 },
        ];
        let out = equalize(&jobs, &cost, 1);
        assert!((out.amounts[1][1] - 1.5).abs() < 1e-9);
        assert!((out.amounts[1][0] - 0.5).abs() < 1e-9);
        assert!(out.kkt_gap <= KKT_TOL);
    }

    #[test]
    fn linear_cost_fills_cheapest_slots() {
        let cost = CostModel::per_slot(1.0, vec![3.0, 1.0, 2.0]).unwrap();
        let jobs = [AllocJob { slots: vec![0, 1, 2], total: 3.0, cap: 2.0 }];
        let out = equalize(&jobs, &cost, 2);
        assert_eq!(out.amounts[0], vec![0.0, 2.0, 1.0]);
    }

    #[test]
    fn overlapping_jobs_flatten() {
        let cost = CostModel::quadratic();
        let jobs = [
            AllocJob { slots: vec![1, 2, 3], total: 6.0, cap: f64::INFINITY },
            AllocJob { slots: vec![2, 3, 4], total: 6.0, cap: f64::INFINITY },
        ];
        let out = equalize(&jobs, &cost, 4);
        for t in 1..=4 {
            assert!((out.loads[t] - 3.0).abs() < 1e-6, "{:?}", out.loads);
        }
    }
}
