//! Closed-form guarantees and bounds for a job set.

use serde::Serialize;

use crate::attacks::Budget;
use crate::cost::CostModel;
use crate::error::{Error, Result};
use crate::model::{JobSet, Model};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundsReport {
    /// `ceil(l_max / l_min) + 1`.
    pub r1: u64,
    /// Constant-power counterpart of `r1`; zero for total-energy jobs.
    pub r2: u64,
    /// Lower bound on the full-attack cost.
    pub max_lower: f64,
    /// Full-attack cost over optimal cost is at most this.
    pub max_upper_factor: f64,
    /// Online full attack reaches at least this share of the offline one.
    pub online_fraction: f64,
    /// Greedy limited attack reaches at least this share of the full one.
    pub limited_fraction: f64,
    pub cp_limited_fraction: f64,
    /// Competitive ratio bound of the average-rate heuristic.
    pub avr_ratio_upper: f64,
    /// Online fraction under slot-dependent prices.
    pub td_fraction: f64,
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// Evaluates every bound for `jobs` under `budget` and `cost`.
pub fn compute_bounds(jobs: &JobSet, budget: Budget, cost: &CostModel) -> Result<BoundsReport> {
    let (Some(first), Some(last)) = (jobs.jobs().first(), jobs.jobs().last()) else {
        return Err(Error::Domain("bounds need at least one job".into()));
    };
    let b = cost.exponent();
    let l_min = u64::from(jobs.l_min().unwrap_or(1));
    let l_max = u64::from(jobs.l_max().unwrap_or(1));
    let r1 = ceil_div(l_max, l_min) + 1;
    let r2 = match jobs.model() {
        Model::TotalEnergy => 0,
        Model::ConstantPower => {
            let s_min = u64::from(jobs.s_min().unwrap_or(1));
            let s_max = u64::from(jobs.s_max().unwrap_or(1));
            let room = jobs.jobs().iter().map(|j| u64::from(j.allowance() - j.service()) + 1);
            let (lo, hi) = room.fold((u64::MAX, 0), |(lo, hi), x| (lo.min(x), hi.max(x)));
            (s_max - s_min + 1) * (ceil_div(hi, lo) + 1)
        }
    };
    let span = f64::from(last.arrival - first.arrival);
    let l_min_f = l_min as f64;
    let max_lower = (l_min_f * jobs.total_energy() / (2.0 * l_min_f + span)).powf(b);
    let max_upper_factor = 2f64.powf(b - 1.0) * ((l_max + 1) as f64).powf(b) * b.powf(b);
    let online_fraction = 1.0 / (r1 as f64).powf(b - 1.0);
    let s_avg = match jobs.model() {
        Model::TotalEnergy => 1.0,
        Model::ConstantPower => {
            jobs.jobs().iter().map(|j| f64::from(j.service())).sum::<f64>() / jobs.len() as f64
        }
    };
    Ok(BoundsReport {
        r1,
        r2,
        max_lower,
        max_upper_factor,
        online_fraction,
        limited_fraction: budget.beta.powf(b) / 2.0,
        cp_limited_fraction: 0.5 * (budget.beta / s_avg).powf(b),
        avr_ratio_upper: 2f64.powf(b - 1.0) * b.powf(b),
        td_fraction: cost.c_min() / cost.c_max() * online_fraction,
    })
}

/// One point of the full-attack lower bound as a function of `l_min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub n: u32,
    pub l_min: u32,
    pub bound: f64,
}

/// Lower bound for `n` jobs of average energy `avg_energy` arriving every
/// `avg_interarrival` slots on average, for each `l_min`.
pub fn figure1_curve(
    n_values: &[u32],
    lmin_values: &[u32],
    avg_energy: f64,
    avg_interarrival: f64,
    b: f64,
) -> Vec<CurvePoint> {
    let mut out = Vec::with_capacity(n_values.len() * lmin_values.len());
    for &n in n_values {
        let total = avg_energy * f64::from(n);
        let span = avg_interarrival * f64::from(n.saturating_sub(1));
        for &l_min in lmin_values {
            let l = f64::from(l_min);
            out.push(CurvePoint { n, l_min, bound: (l * total / (2.0 * l + span)).powf(b) });
        }
    }
    out
}
