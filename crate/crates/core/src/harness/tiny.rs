//! Small random instances sized for the brute-force oracles.

use rand::seq::index::sample;
use rand::Rng;

use crate::model::{Demand, JobSet, Model, Slot};

/// Total-energy jobs with integer energies in `[1, 9]` and windows of up to
/// five slots. With `distinct_arrivals` no two jobs arrive together.
pub fn tiny_te<R: Rng>(rng: &mut R, max_n: usize, distinct_arrivals: bool) -> JobSet {
    let n = rng.random_range(1..=max_n);
    let span = 2 * n as u32 + 1;
    let arrivals: Vec<Slot> = if distinct_arrivals {
        sample(rng, span as usize, n).into_iter().map(|a| a as Slot).collect()
    } else {
        (0..n).map(|_| rng.random_range(0..span)).collect()
    };
    let raw = arrivals
        .into_iter()
        .map(|a| {
            let width = rng.random_range(0..=4);
            (a, a + width, Demand::TotalEnergy { energy: f64::from(rng.random_range(1u32..=9)) })
        })
        .collect::<Vec<_>>();
    let horizon = raw.iter().map(|x| x.1).max().unwrap_or(0) + 1;
    JobSet::build(Model::TotalEnergy, horizon, raw).expect("generated jobs are valid")
}

/// Constant-power jobs with at most `max_service` subjobs in total, integer
/// powers in `[1, 5]` and up to two slots of slack.
pub fn tiny_cp<R: Rng>(rng: &mut R, max_n: usize, max_service: u32) -> JobSet {
    let n = rng.random_range(1..=max_n.min(max_service as usize));
    let mut budget = max_service - n as u32;
    let span = 2 * n as u32 + 1;
    let raw = (0..n)
        .map(|_| {
            let extra = rng.random_range(0..=budget.min(2));
            budget -= extra;
            let s = 1 + extra;
            let a = rng.random_range(0..span);
            let slack = rng.random_range(0..=2);
            (a, a + s - 1 + slack, Demand::ConstantPower { service: s, power: f64::from(rng.random_range(1u32..=5)) })
        })
        .collect::<Vec<_>>();
    let horizon = raw.iter().map(|x| x.1).max().unwrap_or(0) + 1;
    JobSet::build(Model::ConstantPower, horizon, raw).expect("generated jobs are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn respects_limits() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..200 {
            let te = tiny_te(&mut rng, 6, true);
            assert!(te.len() <= 6);
            assert_eq!(te.arrivals().len(), te.len());
            let cp = tiny_cp(&mut rng, 4, 6);
            assert!(cp.len() <= 4);
            assert!(cp.jobs().iter().map(|j| j.service()).sum::<u32>() <= 6);
        }
    }
}
