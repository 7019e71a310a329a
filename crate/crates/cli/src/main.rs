use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use elastic_grid::attacks::{
    limited_bounds, offline_full_attack_cp, offline_full_attack_te, offline_limited_attack_cp,
    offline_limited_attack_te, online_full_attack_cp, online_full_attack_te, online_limited_attack_cp,
    online_limited_attack_te, upper_bound_limited_te,
};
use elastic_grid::bounds::{compute_bounds, figure1_curve, CurvePoint};
use elastic_grid::harness::{emit_tables, oracle_check, run_experiment, Scenario};
use elastic_grid::operator::{
    avr_schedule, cp_relaxed_lower_bound, cr_schedule_online, optimal_schedule, yds_schedule, yds_time_dependent,
    Threshold,
};
use elastic_grid::{baseline_schedule, evaluate_cost, AttackResult, Budget, CostModel, JobSet, Model, OperatorResult};

const DEFAULT_SEED: u64 = 0;

/// Something the tool computed is wrong, as opposed to bad input.
#[derive(Debug)]
struct Failure(String);

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Failure {}

#[derive(Parser, Debug)]
#[command(name = "elastic-grid", version, about = "Operator schedules and forged-demand attacks on elastic loads")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct Common {
    /// Job set JSON: {"horizon", "model", "jobs": [...]}
    #[arg(long)]
    jobs: Option<PathBuf>,
    /// Demand model; must agree with the job file when both are given.
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    /// Cost exponent.
    #[arg(long, default_value_t = 2.0)]
    b: f64,
    /// Attacker budget as a fraction of the jobs.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Random seed; 0 when absent.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    algo: Option<String>,
    /// JSON array of per-slot coefficients c_0, c_1, ...
    #[arg(long)]
    cost_coeffs: Option<PathBuf>,
}

impl Common {
    fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    Te,
    Cp,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Operator schedule (yds, time-dependent, optimal, avr, baseline, relaxed, cr).
    Schedule(Common),
    /// Forged demand (offline-full, online-full, offline-limited, online-limited, upper-bound).
    Attack(Common),
    /// Ratios and bounds for a job set; --out writes the lower-bound curve as CSV.
    Bounds(Common),
    /// Random instances checked against the exhaustive oracles.
    OracleCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Runs a scenario sweep; --out writes CSV plus a gnuplot script.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        scenario: PathBuf,
        /// Overrides the scenario's trial count.
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Full-attack lower bound against l_min.
    Figure1 {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "10,20,40")]
        n: Vec<u32>,
        #[arg(long, default_value_t = 40)]
        lmin_max: u32,
        #[arg(long, default_value_t = 10.0)]
        avg_energy: f64,
        #[arg(long, default_value_t = 5.0)]
        avg_interarrival: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            report("usage", &e.render().to_string());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if e.downcast_ref::<Failure>().is_some() {
                report("failure", &format!("{e:#}"));
                ExitCode::from(1)
            } else {
                report("input", &format!("{e:#}"));
                ExitCode::from(2)
            }
        }
    }
}

fn report(kind: &str, message: &str) {
    eprintln!("{}", json!({ "error": kind, "message": message.trim_end() }));
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Schedule(c) => schedule(&c),
        Command::Attack(c) => attack(&c),
        Command::Bounds(c) => bounds(&c),
        Command::OracleCheck { common, trials } => {
            let cost = cost_model(&common)?;
            let summary = oracle_check(trials, common.seed(), &cost)?;
            emit(&common.out, &serde_json::to_value(&summary)?)?;
            if !summary.passed {
                return Err(Failure("oracle mismatch".into()).into());
            }
            Ok(())
        }
        Command::Simulate { common, scenario, trials } => simulate(&common, &scenario, trials),
        Command::Figure1 { common, n, lmin_max, avg_energy, avg_interarrival } => {
            let lmins: Vec<u32> = (1..=lmin_max).collect();
            let curve = figure1_curve(&n, &lmins, avg_energy, avg_interarrival, common.b);
            write_text(&common.out, &curve_csv(&curve))
        }
    }
}

fn cost_model(c: &Common) -> Result<CostModel> {
    Ok(match &c.cost_coeffs {
        None => CostModel::power(c.b)?,
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let coeffs: Vec<f64> = serde_json::from_str(&text).context("cost coefficients must be a JSON array")?;
            CostModel::per_slot(c.b, coeffs)?
        }
    })
}

fn load_jobs(c: &Common) -> Result<JobSet> {
    let Some(path) = &c.jobs else { bail!("--jobs is required") };
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let jobs = JobSet::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    let wanted = c.model.map(|m| match m {
        ModelArg::Te => Model::TotalEnergy,
        ModelArg::Cp => Model::ConstantPower,
    });
    if let Some(m) = wanted {
        jobs.require(m)?;
    }
    Ok(jobs)
}

fn emit(out: &Option<PathBuf>, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(out, &text)
}

fn write_text(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn schedule(c: &Common) -> Result<()> {
    let jobs = load_jobs(c)?;
    let cost = cost_model(c)?;
    let default = match jobs.model() {
        Model::TotalEnergy => "optimal",
        Model::ConstantPower => "relaxed",
    };
    let result = match c.algo.as_deref().unwrap_or(default) {
        "yds" => yds_schedule(&jobs, &cost)?,
        "time-dependent" => yds_time_dependent(&jobs, &cost)?,
        "optimal" => optimal_schedule(&jobs, &cost)?,
        "avr" => avr_schedule(&jobs, &cost)?,
        "relaxed" => cp_relaxed_lower_bound(&jobs, &cost)?,
        "cr" => cr_schedule_online(&jobs, Threshold::RunningAverage, &cost)?,
        "baseline" => {
            let schedule = baseline_schedule(&jobs);
            let total = evaluate_cost(&schedule, &cost)?;
            OperatorResult { schedule, cost: total, critical_intervals: Vec::new() }
        }
        other => bail!("unknown schedule algorithm {other:?}; expected yds, time-dependent, optimal, avr, baseline, relaxed or cr"),
    };
    // relaxed is a lower bound over fractional service, so only exact schedulers are checked
    if !matches!(c.algo.as_deref().unwrap_or(default), "relaxed") {
        result.schedule.check_serves(&jobs).map_err(|e| Failure(format!("schedule does not serve the jobs: {e}")))?;
    }
    emit(&c.out, &serde_json::to_value(&result)?)
}

fn checked(attack: &AttackResult, original: &JobSet) -> Result<Value> {
    attack.check_admissible(original).map_err(|e| Failure(format!("forged jobs are not admissible: {e}")))?;
    Ok(serde_json::to_value(attack)?)
}

fn attack(c: &Common) -> Result<()> {
    let jobs = load_jobs(c)?;
    let cost = cost_model(c)?;
    let te = jobs.model() == Model::TotalEnergy;
    let algo = c.algo.as_deref().unwrap_or("offline-full");
    let value = match algo {
        "offline-full" => {
            let r = if te { offline_full_attack_te(&jobs, &cost)? } else { offline_full_attack_cp(&jobs, &cost)? };
            checked(&r, &jobs)?
        }
        "online-full" => {
            let r = if te { online_full_attack_te(&jobs, &cost)? } else { online_full_attack_cp(&jobs, &cost)? };
            checked(&r, &jobs)?
        }
        "offline-limited" => {
            let r = if te {
                offline_limited_attack_te(&jobs, c.beta, &cost)?
            } else {
                offline_limited_attack_cp(&jobs, c.beta, &cost)?
            };
            let mut v = checked(&r.attack, &jobs)?;
            v["beta"] = json!(c.beta);
            v["budget"] = json!(r.budget.jobs);
            v["greedy_value"] = json!(r.greedy_value);
            if te && cost.is_uniform() && distinct_arrivals(&jobs) {
                v["bounds"] = serde_json::to_value(limited_bounds(&jobs, c.beta, &cost)?)?;
            }
            v
        }
        "online-limited" => {
            let r = if te {
                online_limited_attack_te(&jobs, c.beta, c.seed(), &cost)?
            } else {
                online_limited_attack_cp(&jobs, c.beta, c.seed(), &cost)?
            };
            let mut v = checked(&r, &jobs)?;
            v["beta"] = json!(c.beta);
            v["seed"] = json!(c.seed());
            v
        }
        "upper-bound" => {
            let budget = Budget::new(c.beta, jobs.len())?;
            let bound = upper_bound_limited_te(&jobs, budget, &cost)?;
            json!({ "cost": bound, "beta": c.beta, "budget": budget.jobs })
        }
        other => bail!(
            "unknown attack algorithm {other:?}; expected offline-full, online-full, offline-limited, online-limited or upper-bound"
        ),
    };
    emit(&c.out, &value)
}

fn distinct_arrivals(jobs: &JobSet) -> bool {
    jobs.arrivals().len() == jobs.len()
}

fn bounds(c: &Common) -> Result<()> {
    let jobs = load_jobs(c)?;
    let cost = cost_model(c)?;
    let report = compute_bounds(&jobs, Budget::new(c.beta, jobs.len())?, &cost)?;
    if let Some(path) = &c.out {
        let n = jobs.len() as u32;
        let avg_energy = jobs.total_energy() / f64::from(n);
        let arrivals = jobs.jobs().iter().map(|j| j.arrival);
        let (lo, hi) = arrivals.fold((u32::MAX, 0), |(lo, hi), a| (lo.min(a), hi.max(a)));
        let gap = if n > 1 { f64::from(hi - lo) / f64::from(n - 1) } else { 0.0 };
        let lmins: Vec<u32> = (1..=jobs.l_max().unwrap_or(1).max(40)).collect();
        let csv = curve_csv(&figure1_curve(&[n], &lmins, avg_energy, gap, c.b));
        write_text(&Some(path.clone()), &csv)?;
    }
    emit(&None, &serde_json::to_value(report)?)
}

fn curve_csv(curve: &[CurvePoint]) -> String {
    let mut out = String::from("n,l_min,bound\n");
    for p in curve {
        let _ = writeln!(out, "{},{},{}", p.n, p.l_min, p.bound);
    }
    out
}

fn simulate(c: &Common, scenario_path: &Path, trials: Option<usize>) -> Result<()> {
    let mut scenario = Scenario::load(scenario_path).with_context(|| format!("loading {}", scenario_path.display()))?;
    if let Some(t) = trials {
        scenario.trials = t;
    }
    if let Some(seed) = c.seed {
        scenario.seed0 = seed;
    }
    let result = run_experiment(&scenario)?;
    match &c.out {
        Some(csv) => {
            let plot = csv.with_extension("gp");
            emit_tables(&result, csv, &plot)?;
            let summary = json!({
                "seed0": scenario.seed0,
                "trials": scenario.trials,
                "csv": csv.display().to_string(),
                "plot": plot.display().to_string(),
            });
            emit(&None, &summary)
        }
        None => {
            let mut v = serde_json::to_value(&result)?;
            v["seed0"] = json!(scenario.seed0);
            emit(&None, &v)
        }
    }
}
