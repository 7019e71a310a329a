//! Randomised comparison of the algorithms against the brute-force oracles.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::attacks::{offline_full_attack_cp, offline_full_attack_te, offline_limited_attack_te, upper_bound_limited_te, Budget};
use crate::cost::CostModel;
use crate::error::Result;
use crate::operator::yds_schedule;
use crate::oracle::{
    brute_force_cp, brute_force_limited_attack, brute_force_max_clique_partition, brute_force_min_schedule_te,
    Objective, OracleOperator, DEFAULT_SWEEPS,
};

use super::tiny::{tiny_cp, tiny_te};

pub const CHECKS: [&str; 5] = ["full_partition_te", "full_partition_cp", "min_schedule_te", "upper_bound_te", "limited_sandwich_te"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub runs: usize,
    pub failures: usize,
    /// Seed and values of the first mismatch.
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSummary {
    pub trials: usize,
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
    pub passed: bool,
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-6 * (1.0 + a.abs().max(b.abs()))
}

/// Mismatch messages per check for one seed, in [`CHECKS`] order.
fn one_trial(seed: u64, cost: &CostModel) -> Result<[Option<String>; 5]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: [Option<String>; 5] = Default::default();

    let te = tiny_te(&mut rng, 7, false);
    let dp = offline_full_attack_te(&te, cost)?.partition.map_or(0.0, |p| p.total_cost);
    let bf = brute_force_max_clique_partition(&te, cost)?.total_cost;
    if !close(dp, bf) {
        out[0] = Some(format!("seed {seed}: dp {dp} vs oracle {bf}"));
    }

    let cp = tiny_cp(&mut rng, 4, 6);
    let dp = offline_full_attack_cp(&cp, cost)?.enforced_cost;
    let bf = brute_force_cp(&cp, cost, Objective::Max)?;
    if !close(dp, bf) {
        out[1] = Some(format!("seed {seed}: dp {dp} vs oracle {bf}"));
    }

    let te = tiny_te(&mut rng, 6, false);
    let opt = yds_schedule(&te, cost)?.cost;
    let bf = brute_force_min_schedule_te(&te, cost, DEFAULT_SWEEPS)?;
    if !close(opt, bf) {
        out[2] = Some(format!("seed {seed}: scheduler {opt} vs oracle {bf}"));
    }

    let te = tiny_te(&mut rng, 4, true);
    let budget = Budget::new(0.5, te.len())?;
    let c2 = upper_bound_limited_te(&te, budget, cost)?;
    let base = brute_force_limited_attack(&te, budget, OracleOperator::Baseline, cost)?;
    if !close(c2, base) {
        out[3] = Some(format!("seed {seed}: bound {c2} vs oracle {base}"));
    }
    let c1 = offline_limited_attack_te(&te, 0.5, cost)?.attack.enforced_cost;
    let best = brute_force_limited_attack(&te, budget, OracleOperator::Optimal, cost)?;
    let tol = 1e-6 * (1.0 + best.abs());
    if c1 > best + tol || best > c2 + tol {
        out[4] = Some(format!("seed {seed}: {c1} <= {best} <= {c2} fails"));
    }
    Ok(out)
}

/// Runs `trials` random comparisons with seeds `seed..seed + trials`.
pub fn oracle_check(trials: usize, seed: u64, cost: &CostModel) -> Result<CheckSummary> {
    let results: Vec<[Option<String>; 5]> = (0..trials as u64)
        .into_par_iter()
        .map(|i| one_trial(seed.wrapping_add(i), cost))
        .collect::<Result<_>>()?;
    let checks: Vec<CheckOutcome> = CHECKS
        .iter()
        .enumerate()
        .map(|(k, &name)| CheckOutcome {
            name,
            runs: trials,
            failures: results.iter().filter(|r| r[k].is_some()).count(),
            first_failure: results.iter().find_map(|r| r[k].clone()),
        })
        .collect();
    let passed = checks.iter().all(|c| c.failures == 0);
    Ok(CheckSummary { trials, seed, checks, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let s = oracle_check(10, 3, &CostModel::quadratic()).unwrap();
        assert!(s.passed, "{s:?}");
        assert_eq!(s.checks.len(), 5);
    }
}
