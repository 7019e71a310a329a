//! Demands, job sets and their JSON form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a time slot on the finite horizon `[0, T]`.
pub type Slot = u32;

/// Absolute tolerance for energy equality checks.
pub const ENERGY_TOL: f64 = 1e-9;

/// Which of the two demand models a job set follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Model {
    #[serde(rename = "te")]
    TotalEnergy,
    #[serde(rename = "cp")]
    ConstantPower,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::TotalEnergy => "te",
            Model::ConstantPower => "cp",
        }
    }
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "te" => Ok(Model::TotalEnergy),
            "cp" => Ok(Model::ConstantPower),
            other => Err(Error::Config(format!("unknown model '{other}' (expected te or cp)"))),
        }
    }
}

/// What a job asks for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Demand {
    /// A total amount of energy, deliverable at any rate inside the window.
    TotalEnergy { energy: f64 },
    /// `service` whole slots at exactly `power` each.
    ConstantPower { service: u32, power: f64 },
}

impl Demand {
    pub fn model(&self) -> Model {
        match self {
            Demand::TotalEnergy { .. } => Model::TotalEnergy,
            Demand::ConstantPower { .. } => Model::ConstantPower,
        }
    }
}

/// A time-elastic demand servable in slots `arrival..=deadline`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Job {
    pub id: usize,
    pub arrival: Slot,
    pub deadline: Slot,
    pub demand: Demand,
}

impl Job {
    pub fn te(id: usize, arrival: Slot, deadline: Slot, energy: f64) -> Self {
        Job { id, arrival, deadline, demand: Demand::TotalEnergy { energy } }
    }

    pub fn cp(id: usize, arrival: Slot, deadline: Slot, service: u32, power: f64) -> Self {
        Job { id, arrival, deadline, demand: Demand::ConstantPower { service, power } }
    }

    /// Number of slots in the window, `d - a + 1`.
    pub fn allowance(&self) -> u32 {
        self.deadline - self.arrival + 1
    }

    /// `l - 1` for total-energy jobs, `l - s` for constant-power jobs.
    pub fn slackness(&self) -> u32 {
        match self.demand {
            Demand::TotalEnergy { .. } => self.allowance() - 1,
            Demand::ConstantPower { service, .. } => self.allowance() - service,
        }
    }

    /// Total energy delivered: `e` or `s * p`.
    pub fn energy(&self) -> f64 {
        match self.demand {
            Demand::TotalEnergy { energy } => energy,
            Demand::ConstantPower { service, power } => service as f64 * power,
        }
    }

    pub fn service(&self) -> u32 {
        match self.demand {
            Demand::TotalEnergy { .. } => 1,
            Demand::ConstantPower { service, .. } => service,
        }
    }

    /// Per-slot power of a constant-power job; the energy of a total-energy job.
    pub fn power(&self) -> f64 {
        match self.demand {
            Demand::TotalEnergy { energy } => energy,
            Demand::ConstantPower { power, .. } => power,
        }
    }

    pub fn contains(&self, t: Slot) -> bool {
        self.arrival <= t && t <= self.deadline
    }

    pub fn window_within(&self, k: Slot, l: Slot) -> bool {
        self.arrival >= k && self.deadline <= l
    }

    fn validate(&self) -> Result<()> {
        if self.arrival > self.deadline {
            return Err(Error::Invalid(format!(
                "job {}: arrival {} after deadline {}",
                self.id, self.arrival, self.deadline
            )));
        }
        match self.demand {
            Demand::TotalEnergy { energy } => {
                if !(energy >= 0.0 && energy.is_finite()) {
                    return Err(Error::Invalid(format!("job {}: energy {energy} must be >= 0", self.id)));
                }
            }
            Demand::ConstantPower { service, power } => {
                if service == 0 {
                    return Err(Error::Invalid(format!("job {}: service must be positive", self.id)));
                }
                if service > self.allowance() {
                    return Err(Error::Invalid(format!(
                        "job {}: service {} exceeds allowance {}",
                        self.id,
                        service,
                        self.allowance()
                    )));
                }
                if !(power > 0.0 && power.is_finite()) {
                    return Err(Error::Invalid(format!("job {}: power {power} must be > 0", self.id)));
                }
            }
        }
        Ok(())
    }
}

/// A homogeneous collection of jobs on a finite horizon, sorted by arrival,
/// with ids equal to positions.
#[derive(Debug, Clone, PartialEq)]
pub struct JobSet {
    model: Model,
    horizon: Slot,
    jobs: Vec<Job>,
}

impl JobSet {
    /// Validates an already ordered job list (ids must be `0..n` in arrival order).
    pub fn new(model: Model, horizon: Slot, jobs: Vec<Job>) -> Result<Self> {
        for (i, job) in jobs.iter().enumerate() {
            if job.id != i {
                return Err(Error::Invalid(format!("job at position {i} has id {}", job.id)));
            }
            if i > 0 && jobs[i - 1].arrival > job.arrival {
                return Err(Error::Invalid("jobs must be sorted by arrival".into()));
            }
            if job.demand.model() != model {
                return Err(Error::Model { expected: model.name(), found: job.demand.model().name() });
            }
            job.validate()?;
            if job.deadline > horizon {
                return Err(Error::Invalid(format!(
                    "job {}: deadline {} beyond horizon {horizon}",
                    job.id, job.deadline
                )));
            }
        }
        Ok(JobSet { model, horizon, jobs })
    }

    /// Sorts `(arrival, deadline, demand)` triples stably by arrival and numbers them.
    pub fn build(model: Model, horizon: Slot, mut raw: Vec<(Slot, Slot, Demand)>) -> Result<Self> {
        raw.sort_by_key(|r| r.0);
        let jobs = raw
            .into_iter()
            .enumerate()
            .map(|(id, (arrival, deadline, demand))| Job { id, arrival, deadline, demand })
            .collect();
        Self::new(model, horizon, jobs)
    }

    /// Total-energy set from `(a, d, e)` triples; horizon is the largest deadline plus one.
    pub fn te(items: &[(Slot, Slot, f64)]) -> Result<Self> {
        let horizon = items.iter().map(|x| x.1).max().map_or(0, |d| d + 1);
        Self::build(
            Model::TotalEnergy,
            horizon,
            items.iter().map(|&(a, d, e)| (a, d, Demand::TotalEnergy { energy: e })).collect(),
        )
    }

    /// Constant-power set from `(a, d, s, p)` tuples; horizon is the largest deadline plus one.
    pub fn cp(items: &[(Slot, Slot, u32, f64)]) -> Result<Self> {
        let horizon = items.iter().map(|x| x.1).max().map_or(0, |d| d + 1);
        Self::build(
            Model::ConstantPower,
            horizon,
            items
                .iter()
                .map(|&(a, d, s, p)| (a, d, Demand::ConstantPower { service: s, power: p }))
                .collect(),
        )
    }

    pub fn empty(model: Model, horizon: Slot) -> Self {
        JobSet { model, horizon, jobs: Vec::new() }
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn horizon(&self) -> Slot {
        self.horizon
    }

    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    pub fn len(&self) -> usize {
        self.jobs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jobs.is_empty()
    }

    pub fn job(&self, id: usize) -> &Job {
        &self.jobs[id]
    }

    pub fn require(&self, model: Model) -> Result<()> {
        if self.model != model {
            return Err(Error::Model { expected: model.name(), found: self.model.name() });
        }
        Ok(())
    }

    /// Same jobs on a (larger) horizon.
    pub fn with_horizon(&self, horizon: Slot) -> Result<Self> {
        Self::new(self.model, horizon, self.jobs.clone())
    }

    pub fn total_energy(&self) -> f64 {
        self.jobs.iter().map(Job::energy).sum()
    }

    pub fn l_min(&self) -> Option<u32> {
        self.jobs.iter().map(Job::allowance).min()
    }

    pub fn l_max(&self) -> Option<u32> {
        self.jobs.iter().map(Job::allowance).max()
    }

    pub fn s_min(&self) -> Option<u32> {
        self.jobs.iter().map(Job::service).min()
    }

    pub fn s_max(&self) -> Option<u32> {
        self.jobs.iter().map(Job::service).max()
    }

    pub fn e_min(&self) -> Option<f64> {
        self.jobs.iter().map(Job::energy).reduce(f64::min)
    }

    pub fn e_max(&self) -> Option<f64> {
        self.jobs.iter().map(Job::energy).reduce(f64::max)
    }

    pub fn p_min(&self) -> Option<f64> {
        self.jobs.iter().map(Job::power).reduce(f64::min)
    }

    pub fn p_max(&self) -> Option<f64> {
        self.jobs.iter().map(Job::power).reduce(f64::max)
    }

    pub fn slackness(&self) -> Vec<f64> {
        self.jobs.iter().map(|j| j.slackness() as f64).collect()
    }

    /// Sorted, deduplicated arrival slots.
    pub fn arrivals(&self) -> Vec<Slot> {
        let mut v: Vec<Slot> = self.jobs.iter().map(|j| j.arrival).collect();
        v.dedup();
        v
    }

    /// Sorted, deduplicated deadline slots.
    pub fn deadlines(&self) -> Vec<Slot> {
        let mut v: Vec<Slot> = self.jobs.iter().map(|j| j.deadline).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&JobSetFile::from(self)).expect("job sets always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: JobSetFile = serde_json::from_str(text)?;
        file.try_into()
    }
}

/// One entry of the `jobs` array in the JSON form.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JobEntry {
    ConstantPower { a: Slot, d: Slot, s: u32, p: f64 },
    TotalEnergy { a: Slot, d: Slot, e: f64 },
}

impl From<&Job> for JobEntry {
    fn from(j: &Job) -> Self {
        match j.demand {
            Demand::TotalEnergy { energy } => JobEntry::TotalEnergy { a: j.arrival, d: j.deadline, e: energy },
            Demand::ConstantPower { service, power } => {
                JobEntry::ConstantPower { a: j.arrival, d: j.deadline, s: service, p: power }
            }
        }
    }
}

/// `{"horizon": T, "model": "te"|"cp", "jobs": [...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JobSetFile {
    pub horizon: Slot,
    pub model: Model,
    pub jobs: Vec<JobEntry>,
}

impl From<&JobSet> for JobSetFile {
    fn from(set: &JobSet) -> Self {
        JobSetFile { horizon: set.horizon, model: set.model, jobs: set.jobs.iter().map(JobEntry::from).collect() }
    }
}

impl TryFrom<JobSetFile> for JobSet {
    type Error = Error;

    fn try_from(file: JobSetFile) -> Result<Self> {
        let raw = file
            .jobs
            .into_iter()
            .map(|entry| match entry {
                JobEntry::TotalEnergy { a, d, e } => (a, d, Demand::TotalEnergy { energy: e }),
                JobEntry::ConstantPower { a, d, s, p } => (a, d, Demand::ConstantPower { service: s, power: p }),
            })
            .collect();
        JobSet::build(file.model, file.horizon, raw)
    }
}

impl Serialize for JobSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        JobSetFile::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for JobSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = JobSetFile::deserialize(deserializer)?;
        JobSet::try_from(file).map_err(serde::de::Error::custom)
    }
}
