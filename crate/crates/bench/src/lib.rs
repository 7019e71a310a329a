//! Fixtures shared by the benchmarks.

use elastic_grid::harness::{generate_jobs, GenConfig, Slackness};
use elastic_grid::{JobSet, Model};

/// Seeded random job set with exponential slackness of mean 4.
pub fn fixture(n: usize, model: Model, seed: u64) -> JobSet {
    let mut config = GenConfig::new(n, model, Slackness::Exponential { mean: 4.0 });
    config.seed = seed;
    generate_jobs(&config).expect("fixture configuration is valid")
}

pub fn te(n: usize) -> JobSet {
    fixture(n, Model::TotalEnergy, 1)
}

pub fn cp(n: usize) -> JobSet {
    fixture(n, Model::ConstantPower, 1)
}
