use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attacks::{
    offline_full_attack_cp, offline_full_attack_te, offline_limited_attack_cp,
    offline_limited_attack_te, online_full_attack_cp, online_full_attack_te, online_limited_attack_cp,
    online_limited_attack_te, upper_bound_limited_te, AttackResult, Budget,
};
use crate::cost::CostModel;
use crate::error::{Error, Result};
use crate::model::{JobSet, Model};
use crate::operator::{avr_schedule, cp_relaxed_lower_bound, cr_schedule_online, yds_schedule, Threshold};
use crate::schedule::baseline_cost;

use super::detector::{z_test, DetectorConfig};
use super::generate::{generate_jobs, GenConfig, Slackness};

/// Quantities an experiment can record per trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Column {
    /// Operator optimum on the true demands.
    #[serde(rename = "C_min")]
    CMin,
    /// Heuristic operator (average rate, or controlled release) on the true demands.
    #[serde(rename = "Cbar_min")]
    CBarMin,
    #[serde(rename = "C_base")]
    CBase,
    /// Online full attack.
    #[serde(rename = "Cunder_max")]
    CUnderMax,
    /// Offline full attack.
    #[serde(rename = "C_max")]
    CMax,
    /// Greedy limited attack against the optimal operator.
    #[serde(rename = "C1")]
    C1,
    /// Best limited attack against the baseline operator.
    #[serde(rename = "C2")]
    C2,
    /// Configured operator on the configured attack's output.
    #[serde(rename = "C_attack")]
    CAttack,
    #[serde(rename = "modified")]
    Modified,
    #[serde(rename = "z")]
    Z,
    #[serde(rename = "flagged")]
    Flagged,
}

impl Column {
    pub fn name(self) -> &'static str {
        match self {
            Column::CMin => "C_min",
            Column::CBarMin => "Cbar_min",
            Column::CBase => "C_base",
            Column::CUnderMax => "Cunder_max",
            Column::CMax => "C_max",
            Column::C1 => "C1",
            Column::C2 => "C2",
            Column::CAttack => "C_attack",
            Column::Modified => "modified",
            Column::Z => "z",
            Column::Flagged => "flagged",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum OperatorSpec {
    Yds,
    Avr,
    Baseline,
    Relaxed,
    Cr {
        #[serde(default)]
        threshold: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AttackSpec {
    #[default]
    None,
    OfflineFull,
    OnlineFull,
    OfflineLimited { beta: f64 },
    OnlineLimited { beta: f64 },
}

impl AttackSpec {
    fn beta(self) -> f64 {
        match self {
            AttackSpec::OfflineLimited { beta } | AttackSpec::OnlineLimited { beta } => beta,
            AttackSpec::None => 0.0,
            AttackSpec::OfflineFull | AttackSpec::OnlineFull => 1.0,
        }
    }

    fn with_beta(self, beta: f64) -> Self {
        match self {
            AttackSpec::OfflineLimited { .. } => AttackSpec::OfflineLimited { beta },
            AttackSpec::OnlineLimited { .. } => AttackSpec::OnlineLimited { beta },
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    SlacknessMean,
    Beta,
    N,
    InterarrivalMean,
    ServiceMean,
    B,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

fn default_b() -> f64 {
    2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub generator: GenConfig,
    #[serde(default = "default_b")]
    pub b: f64,
    pub operator: OperatorSpec,
    #[serde(default)]
    pub attack: AttackSpec,
    pub sweep: Sweep,
    pub trials: usize,
    pub seed0: u64,
    pub columns: Vec<Column>,
    /// Defaults to the generator's own slackness moments at `alpha = 0.05`.
    #[serde(default)]
    pub detector: Option<DetectorConfig>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("scenario: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub seed: u64,
    /// Aligned with [`ExperimentResult::columns`].
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointResult {
    pub value: f64,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    pub trials: Vec<TrialRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub param: SweepParam,
    pub columns: Vec<Column>,
    pub points: Vec<PointResult>,
}

impl ExperimentResult {
    pub fn column_index(&self, column: Column) -> Option<usize> {
        self.columns.iter().position(|&c| c == column)
    }

    /// Mean of `column` at every sweep point.
    pub fn means(&self, column: Column) -> Option<Vec<f64>> {
        let i = self.column_index(column)?;
        Some(self.points.iter().map(|p| p.mean[i]).collect())
    }
}

/// Everything one sweep point needs.
#[derive(Debug, Clone)]
struct Point {
    generator: GenConfig,
    cost: CostModel,
    operator: OperatorSpec,
    attack: AttackSpec,
    detector: DetectorConfig,
}

fn point(scenario: &Scenario, value: f64) -> Result<Point> {
    let mut generator = scenario.generator.clone();
    let mut attack = scenario.attack;
    let mut b = scenario.b;
    match scenario.sweep.param {
        SweepParam::SlacknessMean => match &mut generator.slackness {
            Slackness::Exponential { mean } => *mean = value,
            _ => return Err(Error::Config("sweeping slackness_mean needs exponential slackness".into())),
        },
        SweepParam::Beta => match attack {
            AttackSpec::OfflineLimited { .. } | AttackSpec::OnlineLimited { .. } => attack = attack.with_beta(value),
            _ => return Err(Error::Config("sweeping beta needs a limited attack".into())),
        },
        SweepParam::N => {
            if value < 0.0 || value.fract() != 0.0 {
                return Err(Error::Config(format!("job count {value} is not a whole number")));
            }
            generator.n = value as usize;
        }
        SweepParam::InterarrivalMean => generator.interarrival_mean = value,
        SweepParam::ServiceMean => generator.service_mean = value,
        SweepParam::B => b = value,
    }
    generator.validate()?;
    let detector = match scenario.detector {
        Some(d) => d,
        None => {
            let (mu, sigma) = generator.slackness.moments();
            DetectorConfig { mu, sigma: if sigma > 0.0 { sigma } else { 1.0 }, alpha: 0.05 }
        }
    };
    detector.validate()?;
    Ok(Point { generator, cost: CostModel::power(b)?, operator: scenario.operator, attack, detector })
}

fn operate(spec: OperatorSpec, jobs: &JobSet, cost: &CostModel) -> Result<f64> {
    let wrong = |name: &str| Error::Config(format!("operator {name} does not serve {} jobs", jobs.model().name()));
    match (spec, jobs.model()) {
        (OperatorSpec::Baseline, _) => Ok(baseline_cost(jobs, cost)),
        (OperatorSpec::Yds, Model::TotalEnergy) => Ok(yds_schedule(jobs, cost)?.cost),
        (OperatorSpec::Avr, Model::TotalEnergy) => Ok(avr_schedule(jobs, cost)?.cost),
        (OperatorSpec::Relaxed, Model::ConstantPower) => Ok(cp_relaxed_lower_bound(jobs, cost)?.cost),
        (OperatorSpec::Cr { threshold }, Model::ConstantPower) => {
            let th = threshold.map_or(Threshold::RunningAverage, Threshold::Fixed);
            Ok(cr_schedule_online(jobs, th, cost)?.cost)
        }
        (OperatorSpec::Yds, _) => Err(wrong("yds")),
        (OperatorSpec::Avr, _) => Err(wrong("avr")),
        (OperatorSpec::Relaxed, _) => Err(wrong("relaxed")),
        (OperatorSpec::Cr { .. }, _) => Err(wrong("cr")),
    }
}

fn attack(spec: AttackSpec, jobs: &JobSet, seed: u64, cost: &CostModel) -> Result<Option<AttackResult>> {
    let te = jobs.model() == Model::TotalEnergy;
    Ok(Some(match spec {
        AttackSpec::None => return Ok(None),
        AttackSpec::OfflineFull if te => offline_full_attack_te(jobs, cost)?,
        AttackSpec::OfflineFull => offline_full_attack_cp(jobs, cost)?,
        AttackSpec::OnlineFull if te => online_full_attack_te(jobs, cost)?,
        AttackSpec::OnlineFull => online_full_attack_cp(jobs, cost)?,
        AttackSpec::OfflineLimited { beta } if te => offline_limited_attack_te(jobs, beta, cost)?.attack,
        AttackSpec::OfflineLimited { beta } => offline_limited_attack_cp(jobs, beta, cost)?.attack,
        AttackSpec::OnlineLimited { beta } if te => online_limited_attack_te(jobs, beta, seed, cost)?,
        AttackSpec::OnlineLimited { beta } => online_limited_attack_cp(jobs, beta, seed, cost)?,
    }))
}

/// Optimum on the true demands in the job set's own model.
fn optimum(jobs: &JobSet, cost: &CostModel) -> Result<f64> {
    match jobs.model() {
        Model::TotalEnergy => Ok(yds_schedule(jobs, cost)?.cost),
        Model::ConstantPower => Ok(cp_relaxed_lower_bound(jobs, cost)?.cost),
    }
}

fn trial(p: &Point, columns: &[Column], seed: u64) -> Result<TrialRecord> {
    let mut generator = p.generator.clone();
    generator.seed = seed;
    let jobs = generate_jobs(&generator)?;
    let cost = &p.cost;
    let te = jobs.model() == Model::TotalEnergy;

    let needs_attack = columns.iter().any(|c| matches!(c, Column::CAttack | Column::Modified | Column::Z | Column::Flagged));
    let forged = if needs_attack { attack(p.attack, &jobs, seed, cost)? } else { None };
    let shown = forged.as_ref().map_or(&jobs, |a| &a.forged);
    let detection = if columns.iter().any(|c| matches!(c, Column::Z | Column::Flagged)) && !shown.is_empty() {
        let slack = shown.slackness();
        Some(z_test(&slack, &p.detector)?)
    } else {
        None
    };

    let mut values = Vec::with_capacity(columns.len());
    for &column in columns {
        let v = match column {
            Column::CMin => optimum(&jobs, cost)?,
            Column::CBarMin if te => avr_schedule(&jobs, cost)?.cost,
            Column::CBarMin => cr_schedule_online(&jobs, Threshold::RunningAverage, cost)?.cost,
            Column::CBase => baseline_cost(&jobs, cost),
            Column::CUnderMax if te => online_full_attack_te(&jobs, cost)?.enforced_cost,
            Column::CUnderMax => online_full_attack_cp(&jobs, cost)?.enforced_cost,
            Column::CMax if te => offline_full_attack_te(&jobs, cost)?.enforced_cost,
            Column::CMax => offline_full_attack_cp(&jobs, cost)?.enforced_cost,
            Column::C1 if te => offline_limited_attack_te(&jobs, p.attack.beta(), cost)?.attack.enforced_cost,
            Column::C1 => offline_limited_attack_cp(&jobs, p.attack.beta(), cost)?.attack.enforced_cost,
            Column::C2 if te => upper_bound_limited_te(&jobs, Budget::new(p.attack.beta(), jobs.len())?, cost)?,
            Column::C2 => return Err(Error::Config("C2 is only defined for total-energy jobs".into())),
            Column::CAttack => operate(p.operator, shown, cost)?,
            Column::Modified => forged.as_ref().map_or(0.0, |a| a.modified.len() as f64),
            Column::Z => detection.map_or(0.0, |d| d.z),
            Column::Flagged => detection.map_or(0.0, |d| f64::from(u8::from(d.flagged))),
        };
        values.push(v);
    }
    Ok(TrialRecord { seed, values })
}

fn summarise(records: &[TrialRecord], width: usize) -> (Vec<f64>, Vec<f64>) {
    let n = records.len() as f64;
    let mut mean = vec![0.0; width];
    let mut stderr = vec![0.0; width];
    if records.is_empty() {
        return (vec![f64::NAN; width], vec![f64::NAN; width]);
    }
    for r in records {
        for (m, v) in mean.iter_mut().zip(&r.values) {
            *m += v / n;
        }
    }
    if records.len() > 1 {
        for (i, s) in stderr.iter_mut().enumerate() {
            let var = records.iter().map(|r| (r.values[i] - mean[i]).powi(2)).sum::<f64>() / (n - 1.0);
            *s = (var / n).sqrt();
        }
    }
    (mean, stderr)
}

/// Runs every trial at every sweep point. Trial `i` uses seed `seed0 + i` at
/// all points, so points differ only in the swept parameter.
pub fn run_experiment(scenario: &Scenario) -> Result<ExperimentResult> {
    let mut points = Vec::with_capacity(scenario.sweep.values.len());
    for &value in &scenario.sweep.values {
        let p = point(scenario, value)?;
        let trials: Vec<TrialRecord> = (0..scenario.trials as u64)
            .into_par_iter()
            .map(|i| trial(&p, &scenario.columns, scenario.seed0.wrapping_add(i)))
            .collect::<Result<_>>()?;
        let (mean, stderr) = summarise(&trials, scenario.columns.len());
        points.push(PointResult { value, mean, stderr, trials });
    }
    Ok(ExperimentResult { param: scenario.sweep.param, columns: scenario.columns.clone(), points })
}
