//! Exhaustive and brute-force references for tiny instances.
//!
//! Nothing here calls the schedulers or attacks it is used to check; only
//! the job and cost types are shared.

use std::str::FromStr;

use crate::attacks::{Budget, Clique, CliquePartition};
use crate::cost::CostModel;
use crate::error::{Error, Result};
use crate::model::{JobSet, Model, Slot};

pub const MAX_PARTITION_JOBS: usize = 10;
pub const MAX_CP_COMBINATIONS: u64 = 1_000_000;
pub const MAX_LIMITED_JOBS: usize = 4;
/// Sweep cap for [`brute_force_min_schedule_te`] when callers have no preference.
pub const DEFAULT_SWEEPS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Min,
    Max,
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(Objective::Min),
            "max" => Ok(Objective::Max),
            other => Err(Error::Parse(format!("unknown objective `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleOperator {
    /// Serves every job in full at its arrival.
    Baseline,
    /// Minimum-cost schedule, found by descent.
    Optimal,
}

fn loads_cost(loads: &[f64], cost: &CostModel) -> f64 {
    loads.iter().enumerate().map(|(t, &e)| cost.cost(t as Slot, e)).sum()
}

/// Most expensive slot of `[lo, hi]`, earliest on ties.
fn priciest(cost: &CostModel, lo: Slot, hi: Slot) -> Slot {
    let mut best = lo;
    for t in lo..=hi {
        if cost.coeff(t) > cost.coeff(best) {
            best = t;
        }
    }
    best
}

/// Visits every set partition of `0..n` as a restricted growth string.
fn for_each_partition(n: usize, mut visit: impl FnMut(&[usize], usize)) {
    if n == 0 {
        visit(&[], 0);
        return;
    }
    let mut labels = vec![0usize; n];
    let mut maxes = vec![0usize; n];
    loop {
        visit(&labels, maxes[n - 1] + 1);
        // Find the last position that can still grow.
        let mut i = n - 1;
        loop {
            if i == 0 {
                return;
            }
            let cap = maxes[i - 1] + 1;
            if labels[i] < cap {
                labels[i] += 1;
                break;
            }
            labels[i] = 0;
            i -= 1;
        }
        for p in i..n {
            let prev = if p == 0 { 0 } else { maxes[p - 1] };
            maxes[p] = prev.max(labels[p]);
        }
    }
}

/// Best clique partition by trying every set partition of the jobs.
pub fn brute_force_max_clique_partition(jobs: &JobSet, cost: &CostModel) -> Result<CliquePartition> {
    jobs.require(Model::TotalEnergy)?;
    let n = jobs.len();
    if n > MAX_PARTITION_JOBS {
        return Err(Error::Size { what: "jobs for partition enumeration", actual: n, limit: MAX_PARTITION_JOBS });
    }
    let mut best: Option<(f64, Vec<Clique>)> = None;
    for_each_partition(n, |labels, blocks| {
        let mut lo = vec![0 as Slot; blocks];
        let mut hi = vec![Slot::MAX; blocks];
        let mut energy = vec![0.0; blocks];
        for (j, &b) in labels.iter().enumerate() {
            let job = jobs.job(j);
            lo[b] = lo[b].max(job.arrival);
            hi[b] = hi[b].min(job.deadline);
            energy[b] += job.energy();
        }
        if (0..blocks).any(|b| lo[b] > hi[b]) {
            return;
        }
        let slots: Vec<Slot> = (0..blocks).map(|b| priciest(cost, lo[b], hi[b])).collect();
        let value: f64 = (0..blocks).map(|b| cost.cost(slots[b], energy[b])).sum();
        if best.as_ref().is_none_or(|(v, _)| value > *v) {
            let cliques = (0..blocks)
                .map(|b| Clique { members: (0..n).filter(|&j| labels[j] == b).collect(), slot: slots[b] })
                .collect();
            best = Some((value, cliques));
        }
    });
    let (total_cost, mut cliques) = best.unwrap_or((0.0, Vec::new()));
    cliques.sort_by_key(|c| c.slot);
    Ok(CliquePartition { cliques, total_cost })
}

/// Minimum operator cost for total-energy jobs by pairwise-transfer descent.
///
/// Starts from every job at its average rate and repeatedly moves energy of
/// one job between two slots of its window to the exact line minimum. The
/// problem is convex, so the fixed point is the optimum. `sweeps` caps the
/// number of passes over all (job, slot pair) combinations.
pub fn brute_force_min_schedule_te(jobs: &JobSet, cost: &CostModel, sweeps: usize) -> Result<f64> {
    jobs.require(Model::TotalEnergy)?;
    if sweeps == 0 {
        return Err(Error::Config("sweep count must be positive".into()));
    }
    let mut loads = vec![0.0; jobs.horizon() as usize + 1];
    let mut x: Vec<Vec<f64>> = jobs
        .jobs()
        .iter()
        .map(|j| {
            let rate = j.energy() / j.allowance() as f64;
            for t in j.arrival..=j.deadline {
                loads[t as usize] += rate;
            }
            vec![rate; j.allowance() as usize]
        })
        .collect();
    let scale = 1.0 + jobs.e_max().unwrap_or(0.0);
    let b = cost.exponent();

    for _ in 0..sweeps {
        let mut moved: f64 = 0.0;
        for job in jobs.jobs() {
            let a = job.arrival as usize;
            let w = x[job.id].len();
            for p in 0..w {
                for q in p + 1..w {
                    let (s, t) = (a + p, a + q);
                    let (cs, ct) = (cost.coeff(s as Slot), cost.coeff(t as Slot));
                    // Move delta from t to s, delta in [-x_s, x_t].
                    let (lo, hi) = (-x[job.id][p], x[job.id][q]);
                    let (ls, lt) = (loads[s], loads[t]);
                    let slope = |d: f64| cs * (ls + d).max(0.0).powf(b - 1.0) - ct * (lt - d).max(0.0).powf(b - 1.0);
                    let delta = if b == 1.0 {
                        if cs < ct {
                            hi
                        } else if cs > ct {
                            lo
                        } else {
                            0.0
                        }
                    } else if cs == ct {
                        ((lt - ls) / 2.0).clamp(lo, hi)
                    } else if slope(lo) >= 0.0 {
                        lo
                    } else if slope(hi) <= 0.0 {
                        hi
                    } else {
                        let (mut l, mut h) = (lo, hi);
                        for _ in 0..200 {
                            let mid = 0.5 * (l + h);
                            if slope(mid) > 0.0 {
                                h = mid;
                            } else {
                                l = mid;
                            }
                        }
                        0.5 * (l + h)
                    };
                    if delta != 0.0 {
                        x[job.id][p] += delta;
                        x[job.id][q] -= delta;
                        loads[s] += delta;
                        loads[t] -= delta;
                        moved = moved.max(delta.abs());
                    }
                }
            }
        }
        if moved <= 1e-13 * scale {
            break;
        }
    }
    Ok(loads_cost(&loads, cost))
}

/// Extreme cost over every integral constant-power schedule.
pub fn brute_force_cp(jobs: &JobSet, cost: &CostModel, objective: Objective) -> Result<f64> {
    jobs.require(Model::ConstantPower)?;
    let mut combos: u64 = 1;
    for j in jobs.jobs() {
        combos = combos.saturating_mul(binomial(j.allowance() as u64, j.service() as u64));
        if combos > MAX_CP_COMBINATIONS {
            return Err(Error::Size {
                what: "constant-power schedule combinations",
                actual: combos as usize,
                limit: MAX_CP_COMBINATIONS as usize,
            });
        }
    }
    if jobs.is_empty() {
        return Ok(0.0);
    }
    let mut loads = vec![0.0; jobs.horizon() as usize + 1];
    let mut best = match objective {
        Objective::Min => f64::INFINITY,
        Objective::Max => f64::NEG_INFINITY,
    };
    place(jobs, 0, jobs.job(0).arrival, jobs.job(0).service(), &mut loads, cost, objective, &mut best);
    Ok(best)
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Picks the remaining `left` slots of job `j` from `from..=d_j`, then moves on.
#[allow(clippy::too_many_arguments)]
fn place(
    jobs: &JobSet,
    j: usize,
    from: Slot,
    left: u32,
    loads: &mut [f64],
    cost: &CostModel,
    objective: Objective,
    best: &mut f64,
) {
    if left == 0 {
        if j + 1 == jobs.len() {
            let value = loads_cost(loads, cost);
            *best = match objective {
                Objective::Min => best.min(value),
                Objective::Max => best.max(value),
            };
        } else {
            let next = jobs.job(j + 1);
            place(jobs, j + 1, next.arrival, next.service(), loads, cost, objective, best);
        }
        return;
    }
    let job = jobs.job(j);
    let last = job.deadline + 1 - left;
    for t in from..=last {
        loads[t as usize] += job.power();
        place(jobs, j, t + 1, left - 1, loads, cost, objective, best);
        loads[t as usize] -= job.power();
    }
}

/// Best attack altering at most `budget.jobs` jobs, each compressed to one
/// slot of its window, against the given operator.
pub fn brute_force_limited_attack(
    jobs: &JobSet,
    budget: Budget,
    operator: OracleOperator,
    cost: &CostModel,
) -> Result<f64> {
    jobs.require(Model::TotalEnergy)?;
    let n = jobs.len();
    if n > MAX_LIMITED_JOBS {
        return Err(Error::Size { what: "jobs for limited-attack enumeration", actual: n, limit: MAX_LIMITED_JOBS });
    }
    let mut best = f64::NEG_INFINITY;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize > budget.jobs {
            continue;
        }
        let chosen: Vec<usize> = (0..n).filter(|&j| mask & (1 << j) != 0).collect();
        let mut pick: Vec<Slot> = chosen.iter().map(|&j| jobs.job(j).arrival).collect();
        'odometer: loop {
            let mut raw: Vec<(Slot, Slot, f64)> =
                jobs.jobs().iter().map(|j| (j.arrival, j.deadline, j.energy())).collect();
            for (c, &j) in chosen.iter().enumerate() {
                raw[j] = (pick[c], pick[c], raw[j].2);
            }
            best = best.max(evaluate(&raw, jobs.horizon(), operator, cost)?);

            for c in (0..chosen.len()).rev() {
                let j = jobs.job(chosen[c]);
                if pick[c] < j.deadline {
                    pick[c] += 1;
                    continue 'odometer;
                }
                pick[c] = j.arrival;
            }
            break;
        }
    }
    Ok(best)
}

fn evaluate(raw: &[(Slot, Slot, f64)], horizon: Slot, operator: OracleOperator, cost: &CostModel) -> Result<f64> {
    match operator {
        OracleOperator::Baseline => {
            let mut loads = vec![0.0; horizon as usize + 1];
            for &(a, _, e) in raw {
                loads[a as usize] += e;
            }
            Ok(loads_cost(&loads, cost))
        }
        OracleOperator::Optimal => {
            let forged = JobSet::build(
                Model::TotalEnergy,
                horizon,
                raw.iter().map(|&(a, d, e)| (a, d, crate::model::Demand::TotalEnergy { energy: e })).collect(),
            )?;
            brute_force_min_schedule_te(&forged, cost, DEFAULT_SWEEPS)
        }
    }
}
