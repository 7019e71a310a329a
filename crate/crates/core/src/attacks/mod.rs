//! Attacker-side strategies: forging admissible demand windows that drive up
//! the operator's cost.

mod full_cp;
mod full_te;
pub mod knapsack;
mod limited;
mod online;
mod refine;
mod upper;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::admissible::{mapping_from_origin, validate_admissible, Violation};
use crate::cost::CostModel;
use crate::error::{Error, Result};
use crate::model::{Demand, JobEntry, JobSet, Model, Slot};
use crate::operator::{cp_relaxed_lower_bound, optimal_schedule};
use crate::schedule::cost_of_loads;

pub use full_cp::{offline_full_attack_cp, offline_full_attack_cp_with_limit, DEFAULT_SUBJOB_LIMIT};
pub use full_te::offline_full_attack_te;
pub use knapsack::{fractional_knapsack_greedy, KnapsackChoice};
pub use limited::{limited_bounds, offline_limited_attack_cp, offline_limited_attack_te, LimitedAttack, LimitedBounds};
pub use online::{
    online_full_attack_cp, online_full_attack_te, online_limited_attack_cp, online_limited_attack_te, Emitted,
    OnlineAttacker,
};
pub use refine::{refine_slots, Refined};
pub use upper::upper_bound_limited_te;

/// Jobs whose windows share `slot`, served together there.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Clique {
    /// Original job ids. In the constant-power model each member contributes one subjob.
    pub members: Vec<usize>,
    pub slot: Slot,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliquePartition {
    pub cliques: Vec<Clique>,
    pub total_cost: f64,
}

impl CliquePartition {
    /// Cost of the partition: each clique's power summed and priced at its slot.
    pub fn priced(jobs: &JobSet, cliques: Vec<Clique>, cost: &CostModel) -> Self {
        let total_cost = cliques.iter().map(|k| clique_cost(jobs, k, cost)).sum();
        CliquePartition { cliques, total_cost }
    }
}

/// `C_{t_K}(sum of members' per-slot power)`.
pub fn clique_cost(jobs: &JobSet, clique: &Clique, cost: &CostModel) -> f64 {
    cost.cost(clique.slot, clique.members.iter().map(|&j| jobs.job(j).power()).sum())
}

/// Attack budget: at most `B = floor(beta * n)` jobs may be altered.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Budget {
    pub beta: f64,
    pub n: usize,
    pub jobs: usize,
}

impl Budget {
    pub fn new(beta: f64, n: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&beta) {
            return Err(Error::Config(format!("beta {beta} must lie in [0, 1]")));
        }
        // The epsilon keeps e.g. 0.29 * 100 from flooring to 28.
        let jobs = ((beta * n as f64) + 1e-9).floor() as usize;
        Ok(Budget { beta, n, jobs: jobs.min(n) })
    }

    pub fn full(n: usize) -> Self {
        Budget { beta: 1.0, n, jobs: n }
    }
}

/// Outcome of an attack: the demands shown to the operator and what they cost.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackResult {
    pub forged: JobSet,
    /// `origin[k]` is the original job behind forged job `k`.
    pub origin: Vec<usize>,
    pub partition: Option<CliquePartition>,
    /// Original ids whose forged form differs from the original demand.
    pub modified: BTreeSet<usize>,
    pub enforced_cost: f64,
}

impl AttackResult {
    pub fn mapping(&self, n_original: usize) -> Vec<Vec<usize>> {
        mapping_from_origin(&self.origin, n_original)
    }

    pub fn check_admissible(&self, original: &JobSet) -> std::result::Result<(), Violation> {
        validate_admissible(original, &self.forged, &self.mapping(original.len()))
    }
}

#[derive(Serialize)]
struct AttackResultJson<'a> {
    cost: f64,
    cliques: &'a [Clique],
    forged_jobs: Vec<ForgedJobJson>,
    modified: &'a BTreeSet<usize>,
}

#[derive(Serialize)]
struct ForgedJobJson {
    origin: usize,
    #[serde(flatten)]
    job: JobEntry,
}

impl Serialize for AttackResult {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        AttackResultJson {
            cost: self.enforced_cost,
            cliques: self.partition.as_ref().map_or(&[], |p| &p.cliques),
            forged_jobs: self
                .forged
                .jobs()
                .iter()
                .zip(&self.origin)
                .map(|(j, &origin)| ForgedJobJson { origin, job: JobEntry::from(j) })
                .collect(),
            modified: &self.modified,
        }
        .serialize(serializer)
    }
}

/// Cost of a constant-power set the operator must serve exactly as given,
/// falling back to the continuous relaxation when some job still has slack.
pub(crate) fn enforced_cp_cost(forged: &JobSet, cost: &CostModel) -> Result<f64> {
    if forged.jobs().iter().all(|j| j.slackness() == 0) {
        let mut loads = vec![0.0; forged.horizon() as usize + 1];
        for j in forged.jobs() {
            for t in j.arrival..=j.deadline {
                loads[t as usize] += j.power();
            }
        }
        return Ok(cost_of_loads(&loads, cost));
    }
    Ok(cp_relaxed_lower_bound(forged, cost)?.cost)
}

/// Minimum operator cost of a total-energy set, evaluated directly when every
/// window is a single slot.
pub(crate) fn enforced_te_cost(forged: &JobSet, cost: &CostModel) -> Result<f64> {
    if forged.jobs().iter().all(|j| j.slackness() == 0) {
        let mut loads = vec![0.0; forged.horizon() as usize + 1];
        for j in forged.jobs() {
            loads[j.arrival as usize] += j.energy();
        }
        return Ok(cost_of_loads(&loads, cost));
    }
    Ok(optimal_schedule(forged, cost)?.cost)
}

/// One forged demand before the set is assembled.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Piece {
    pub origin: usize,
    pub arrival: Slot,
    pub deadline: Slot,
    pub demand: Demand,
}

/// Sorts pieces by forged arrival (then origin) into a job set on the original
/// horizon, and works out which originals changed.
pub(crate) fn assemble(original: &JobSet, mut pieces: Vec<Piece>) -> Result<(JobSet, Vec<usize>, BTreeSet<usize>)> {
    pieces.sort_by_key(|p| (p.arrival, p.origin, p.deadline));
    let mut count = vec![0usize; original.len()];
    let mut modified = BTreeSet::new();
    for p in &pieces {
        count[p.origin] += 1;
        let o = original.job(p.origin);
        if p.arrival != o.arrival || p.deadline != o.deadline || p.demand != o.demand {
            modified.insert(p.origin);
        }
    }
    for (j, &c) in count.iter().enumerate() {
        if c != 1 {
            modified.insert(j);
        }
    }
    let origin = pieces.iter().map(|p| p.origin).collect();
    let forged = JobSet::build(
        original.model(),
        original.horizon(),
        pieces.into_iter().map(|p| (p.arrival, p.deadline, p.demand)).collect(),
    )?;
    Ok((forged, origin, modified))
}

/// Total-energy forging: job `j` is pinned to `slots[j]` when set, untouched otherwise.
pub(crate) fn compress_te(original: &JobSet, slots: &[Option<Slot>]) -> Result<(JobSet, Vec<usize>, BTreeSet<usize>)> {
    original.require(Model::TotalEnergy)?;
    let pieces = original
        .jobs()
        .iter()
        .map(|j| match slots[j.id] {
            Some(t) => Piece { origin: j.id, arrival: t, deadline: t, demand: j.demand },
            None => Piece { origin: j.id, arrival: j.arrival, deadline: j.deadline, demand: j.demand },
        })
        .collect();
    assemble(original, pieces)
}

/// Constant-power forging: job `j` is served exactly in `slots[j]` when set
/// (grouped into maximal runs), untouched otherwise.
pub(crate) fn pin_cp(original: &JobSet, slots: &[Option<Vec<Slot>>]) -> Result<(JobSet, Vec<usize>, BTreeSet<usize>)> {
    original.require(Model::ConstantPower)?;
    let mut pieces = Vec::new();
    for j in original.jobs() {
        match &slots[j.id] {
            None => pieces.push(Piece { origin: j.id, arrival: j.arrival, deadline: j.deadline, demand: j.demand }),
            Some(ts) => {
                let mut ts = ts.clone();
                ts.sort_unstable();
                let mut i = 0;
                while i < ts.len() {
                    let start = ts[i];
                    let mut end = start;
                    while i + 1 < ts.len() && ts[i + 1] == end + 1 {
                        i += 1;
                        end = ts[i];
                    }
                    i += 1;
                    pieces.push(Piece {
                        origin: j.id,
                        arrival: start,
                        deadline: end,
                        demand: Demand::ConstantPower { service: end - start + 1, power: j.power() },
                    });
                }
            }
        }
    }
    assemble(original, pieces)
}
