use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost::CostModel;
use crate::error::Result;
use crate::model::{Demand, Job, JobSet, Model, Slot};

use super::{assemble, enforced_cp_cost, enforced_te_cost, AttackResult, Budget, Clique, CliquePartition, Piece};

/// A forged demand released to the operator at slot `arrival`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Emitted {
    pub origin: usize,
    pub arrival: Slot,
    pub deadline: Slot,
    pub demand: Demand,
    /// Set for jobs released by a flush, clear for jobs forwarded unchanged.
    pub flushed: bool,
}

#[derive(Debug, Clone)]
struct Limiter {
    beta: f64,
    budget: usize,
    remaining: usize,
    used: usize,
    rng: ChaCha8Rng,
}

impl Limiter {
    /// One uniform draw per arriving job, taken whether or not it is used.
    fn admit(&mut self) -> bool {
        let r: f64 = self.rng.random();
        let take = self.used < self.budget && (r <= self.beta || self.remaining + self.used <= self.budget);
        self.remaining = self.remaining.saturating_sub(1);
        if take {
            self.used += 1;
        }
        take
    }
}

/// Online attacker that sees each job only at its true arrival and releases
/// forged jobs no earlier than their forged arrival.
///
/// Active jobs are held back; once some active job cannot be delayed further,
/// every held job is compressed to start at the current slot.
#[derive(Debug, Clone)]
pub struct OnlineAttacker {
    model: Model,
    limiter: Option<Limiter>,
    active: Vec<Job>,
    held: Vec<Job>,
    last: Option<Slot>,
}

impl OnlineAttacker {
    pub fn full(model: Model) -> Self {
        OnlineAttacker { model, limiter: None, active: Vec::new(), held: Vec::new(), last: None }
    }

    /// Randomised budget-limited attacker. `budget.n` must be the stream length.
    pub fn limited(model: Model, budget: Budget, seed: u64) -> Self {
        let limiter = Limiter {
            beta: budget.beta,
            budget: budget.jobs,
            remaining: budget.n,
            used: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        OnlineAttacker { limiter: Some(limiter), ..Self::full(model) }
    }

    /// Advances to slot `t`, taking the jobs that truly arrive there.
    /// Slots must be visited in increasing order, including those without arrivals.
    pub fn step(&mut self, t: Slot, arrivals: &[Job]) -> Vec<Emitted> {
        assert!(self.last.is_none_or(|s| s < t), "slots must increase");
        self.last = Some(t);
        let mut out = Vec::new();
        for job in arrivals {
            debug_assert_eq!(job.arrival, t);
            let forge = self.limiter.as_mut().is_none_or(Limiter::admit);
            if forge {
                self.held.push(*job);
            } else {
                out.push(Emitted {
                    origin: job.id,
                    arrival: job.arrival,
                    deadline: job.deadline,
                    demand: job.demand,
                    flushed: false,
                });
            }
            self.active.push(*job);
        }
        let model = self.model;
        let urgent = self.active.iter().any(|j| match model {
            Model::TotalEnergy => j.deadline == t,
            Model::ConstantPower => j.deadline == t + j.service() - 1,
        });
        if urgent {
            for j in self.held.drain(..) {
                out.push(Emitted { origin: j.id, arrival: t, deadline: t + j.service() - 1, demand: j.demand, flushed: true });
            }
            self.active.clear();
        }
        out
    }

    /// Jobs forged so far, counted against the budget.
    pub fn used(&self) -> Option<usize> {
        self.limiter.as_ref().map(|l| l.used)
    }
}

fn run(jobs: &JobSet, mut attacker: OnlineAttacker, cost: &CostModel) -> Result<AttackResult> {
    jobs.require(attacker.model)?;
    cost.check_horizon(jobs.horizon())?;
    let mut pieces = Vec::with_capacity(jobs.len());
    let mut cliques = Vec::new();
    if let (Some(first), Some(end)) = (jobs.jobs().first(), jobs.jobs().iter().map(|j| j.deadline).max()) {
        let mut next = 0;
        for t in first.arrival..=end {
            let start = next;
            while next < jobs.len() && jobs.job(next).arrival == t {
                next += 1;
            }
            let emitted = attacker.step(t, &jobs.jobs()[start..next]);
            let mut members = Vec::new();
            for e in emitted {
                debug_assert_eq!(e.arrival, t);
                if e.flushed {
                    members.push(e.origin);
                }
                pieces.push(Piece { origin: e.origin, arrival: e.arrival, deadline: e.deadline, demand: e.demand });
            }
            if !members.is_empty() {
                cliques.push(Clique { members, slot: t });
            }
        }
    }
    let (forged, origin, modified) = assemble(jobs, pieces)?;
    let enforced_cost = match jobs.model() {
        Model::TotalEnergy => enforced_te_cost(&forged, cost)?,
        Model::ConstantPower => enforced_cp_cost(&forged, cost)?,
    };
    let partition = Some(CliquePartition::priced(jobs, cliques, cost));
    Ok(AttackResult { forged, origin, partition, modified, enforced_cost })
}

/// Online full attack on total-energy jobs: held jobs are flushed to the
/// deadline of the first active job that expires.
pub fn online_full_attack_te(jobs: &JobSet, cost: &CostModel) -> Result<AttackResult> {
    run(jobs, OnlineAttacker::full(Model::TotalEnergy), cost)
}

/// Online full attack on constant-power jobs: flush once some active job has
/// exactly enough slots left for its service.
pub fn online_full_attack_cp(jobs: &JobSet, cost: &CostModel) -> Result<AttackResult> {
    run(jobs, OnlineAttacker::full(Model::ConstantPower), cost)
}

/// Online attack that alters at most `budget.jobs` total-energy jobs, chosen at random.
pub fn online_limited_attack_te(jobs: &JobSet, beta: f64, seed: u64, cost: &CostModel) -> Result<AttackResult> {
    let budget = Budget::new(beta, jobs.len())?;
    run(jobs, OnlineAttacker::limited(Model::TotalEnergy, budget, seed), cost)
}

/// Constant-power counterpart of [`online_limited_attack_te`].
pub fn online_limited_attack_cp(jobs: &JobSet, beta: f64, seed: u64, cost: &CostModel) -> Result<AttackResult> {
    let budget = Budget::new(beta, jobs.len())?;
    run(jobs, OnlineAttacker::limited(Model::ConstantPower, budget, seed), cost)
}
