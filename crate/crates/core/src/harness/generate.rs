use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Demand, JobSet, Model, Slot};

/// Integer range `[lo, hi]` picked from with equal probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixComponent {
    pub weight: f64,
    pub lo: u32,
    pub hi: u32,
}

/// Distribution of a job's slackness, in slots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Slackness {
    /// `mean * Exp(1)`, rounded half up.
    Exponential { mean: f64 },
    Uniform { lo: u32, hi: u32 },
    Mixture { components: Vec<MixComponent> },
}

impl Slackness {
    fn validate(&self) -> Result<()> {
        match self {
            Slackness::Exponential { mean } if !(*mean >= 0.0 && mean.is_finite()) => {
                Err(Error::Config(format!("slackness mean {mean} must be finite and nonnegative")))
            }
            Slackness::Uniform { lo, hi } if lo > hi => Err(Error::Config(format!("slackness range [{lo}, {hi}] is empty"))),
            Slackness::Mixture { components } => {
                let total: f64 = components.iter().map(|c| c.weight).sum();
                if components.is_empty() || (total - 1.0).abs() > 1e-9 || components.iter().any(|c| c.weight < 0.0) {
                    return Err(Error::Config("mixture weights must be nonnegative and sum to 1".into()));
                }
                if let Some(c) = components.iter().find(|c| c.lo > c.hi) {
                    return Err(Error::Config(format!("mixture range [{}, {}] is empty", c.lo, c.hi)));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Inverse-CDF draw from two independent uniforms.
    fn sample(&self, u_pick: f64, u: f64) -> u32 {
        match self {
            Slackness::Exponential { mean } => round_half_up(mean * exp1(u)),
            Slackness::Uniform { lo, hi } => uniform_int(*lo, *hi, u),
            Slackness::Mixture { components } => {
                let mut acc = 0.0;
                let last = components.len() - 1;
                for (i, c) in components.iter().enumerate() {
                    acc += c.weight;
                    if u_pick < acc || i == last {
                        return uniform_int(c.lo, c.hi, u);
                    }
                }
                unreachable!("mixture has at least one component")
            }
        }
    }

    /// Exact mean and standard deviation of the integer-valued distribution.
    pub fn moments(&self) -> (f64, f64) {
        let (m1, m2) = self.raw_moments();
        (m1, (m2 - m1 * m1).max(0.0).sqrt())
    }

    fn raw_moments(&self) -> (f64, f64) {
        let uniform = |lo: u32, hi: u32| {
            let (mut m1, mut m2) = (0.0, 0.0);
            let w = 1.0 / f64::from(hi - lo + 1);
            for k in lo..=hi {
                m1 += w * f64::from(k);
                m2 += w * f64::from(k) * f64::from(k);
            }
            (m1, m2)
        };
        match self {
            Slackness::Exponential { mean } => {
                if *mean == 0.0 {
                    return (0.0, 0.0);
                }
                // P(X = k) = P(k - 1/2 <= mean E < k + 1/2).
                let survival = |y: f64| if y <= 0.0 { 1.0 } else { (-y / mean).exp() };
                let (mut m1, mut m2) = (0.0, 0.0);
                let mut k = 1u64;
                loop {
                    let kf = k as f64;
                    let p = survival(kf - 0.5) - survival(kf + 0.5);
                    m1 += p * kf;
                    m2 += p * kf * kf;
                    if survival(kf + 0.5) * (kf + 1.0) * (kf + 1.0) < 1e-16 {
                        break;
                    }
                    k += 1;
                }
                (m1, m2)
            }
            Slackness::Uniform { lo, hi } => uniform(*lo, *hi),
            Slackness::Mixture { components } => components.iter().fold((0.0, 0.0), |(a, b), c| {
                let (m1, m2) = uniform(c.lo, c.hi);
                (a + c.weight * m1, b + c.weight * m2)
            }),
        }
    }
}

/// Real range `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

fn default_interarrival() -> f64 {
    3.0
}

fn default_power() -> Range {
    Range { lo: 1.0, hi: 5.0 }
}

fn default_service() -> f64 {
    2.0
}

/// Random demand stream: exponential gaps between arrivals, random
/// slackness, uniform power and exponential service length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub n: usize,
    pub model: Model,
    #[serde(default = "default_interarrival")]
    pub interarrival_mean: f64,
    pub slackness: Slackness,
    #[serde(default = "default_power")]
    pub power: Range,
    #[serde(default = "default_service")]
    pub service_mean: f64,
    #[serde(default)]
    pub seed: u64,
}

impl GenConfig {
    /// Default arrival, power and service distributions, seed 0.
    pub fn new(n: usize, model: Model, slackness: Slackness) -> Self {
        GenConfig {
            n,
            model,
            interarrival_mean: default_interarrival(),
            slackness,
            power: default_power(),
            service_mean: default_service(),
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.interarrival_mean > 0.0 && self.interarrival_mean.is_finite()) {
            return Err(Error::Config("interarrival mean must be positive".into()));
        }
        if !(self.power.lo > 0.0 && self.power.lo <= self.power.hi) {
            return Err(Error::Config("power range must be positive and nonempty".into()));
        }
        if !(self.service_mean > 0.0 && self.service_mean.is_finite()) {
            return Err(Error::Config("service mean must be positive".into()));
        }
        self.slackness.validate()
    }
}

fn exp1(u: f64) -> f64 {
    -(1.0 - u).ln()
}

fn round_half_up(y: f64) -> u32 {
    (y + 0.5).floor() as u32
}

fn uniform_int(lo: u32, hi: u32, u: f64) -> u32 {
    let width = f64::from(hi - lo + 1);
    lo + ((u * width) as u32).min(hi - lo)
}

/// Generates a constant-power stream together with its total-energy twin:
/// same arrival and slackness, energy `p * s`.
pub fn generate_pair(config: &GenConfig) -> Result<(JobSet, JobSet)> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut cp = Vec::with_capacity(config.n);
    let mut te = Vec::with_capacity(config.n);
    let mut arrival: Slot = 0;
    for i in 0..config.n {
        // Five draws per job whatever the parameters, so streams stay paired across sweeps.
        let u: [f64; 5] = std::array::from_fn(|_| rng.random());
        if i > 0 {
            arrival += round_half_up(config.interarrival_mean * exp1(u[0])).max(1);
        }
        let slack = config.slackness.sample(u[1], u[2]);
        let power = config.power.lo + (config.power.hi - config.power.lo) * u[3];
        let service = round_half_up(config.service_mean * exp1(u[4])).max(1);
        cp.push((arrival, arrival + service - 1 + slack, Demand::ConstantPower { service, power }));
        te.push((arrival, arrival + slack, Demand::TotalEnergy { energy: power * f64::from(service) }));
    }
    let horizon = |v: &[(Slot, Slot, Demand)]| v.iter().map(|x| x.1).max().map_or(0, |d| d + 1);
    let (hc, ht) = (horizon(&cp), horizon(&te));
    Ok((JobSet::build(Model::ConstantPower, hc, cp)?, JobSet::build(Model::TotalEnergy, ht, te)?))
}

/// The stream of `config.model`.
pub fn generate_jobs(config: &GenConfig) -> Result<JobSet> {
    let (cp, te) = generate_pair(config)?;
    Ok(match config.model {
        Model::ConstantPower => cp,
        Model::TotalEnergy => te,
    })
}
