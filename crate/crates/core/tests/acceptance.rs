//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any failed.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use elastic_grid::attacks::{
    offline_full_attack_cp, offline_full_attack_te, offline_limited_attack_te, online_full_attack_cp,
    online_full_attack_te, upper_bound_limited_te,
};
use elastic_grid::bounds::{compute_bounds, figure1_curve};
use elastic_grid::harness::tiny::{tiny_cp, tiny_te};
use elastic_grid::harness::{
    generate_jobs, run_experiment, z_test, Column, DetectorConfig, ExperimentResult, GenConfig, Scenario, Slackness,
};
use elastic_grid::operator::{avr_schedule, yds_schedule};
use elastic_grid::oracle::{
    brute_force_cp, brute_force_limited_attack, brute_force_max_clique_partition, brute_force_min_schedule_te,
    Objective, OracleOperator, DEFAULT_SWEEPS,
};
use elastic_grid::{baseline_cost, Budget, CostModel, JobSet, Model};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn te_suite() -> Vec<JobSet> {
    (0..200).map(|i| tiny_te(&mut ChaCha8Rng::seed_from_u64(i), 8, false)).collect()
}

fn cp_suite() -> Vec<JobSet> {
    (0..100).map(|i| tiny_cp(&mut ChaCha8Rng::seed_from_u64(10_000 + i), 4, 6)).collect()
}

fn within(limit: Duration, start: Instant) -> Result<f64, String> {
    let took = start.elapsed();
    if took > limit {
        Err(format!("took {:.1} s, limit {} s", took.as_secs_f64(), limit.as_secs()))
    } else {
        Ok(took.as_secs_f64())
    }
}

fn violations(found: Vec<String>, total: usize) -> Outcome {
    match found.first() {
        None => Ok(format!("{total} checks")),
        Some(first) => Err(format!("{} of {total} violated, first: {first}", found.len())),
    }
}

fn criterion_1(suite: &[JobSet]) -> Outcome {
    let cost = CostModel::quadratic();
    let start = Instant::now();
    let mut bad = Vec::new();
    for (i, jobs) in suite.iter().enumerate() {
        let dp = offline_full_attack_te(jobs, &cost).map_err(|e| e.to_string())?;
        let dp = dp.partition.map_or(0.0, |p| p.total_cost);
        let bf = brute_force_max_clique_partition(jobs, &cost).map_err(|e| e.to_string())?.total_cost;
        if dp != bf {
            bad.push(format!("instance {i}: {dp} vs {bf}"));
        }
    }
    let secs = within(Duration::from_secs(30), start)?;
    violations(bad, suite.len()).map(|s| format!("{s}, {secs:.2} s"))
}

fn criterion_2(suite: &[JobSet]) -> Outcome {
    let cost = CostModel::quadratic();
    let start = Instant::now();
    let mut bad = Vec::new();
    for (i, jobs) in suite.iter().enumerate() {
        let dp = offline_full_attack_cp(jobs, &cost).map_err(|e| e.to_string())?.enforced_cost;
        let bf = brute_force_cp(jobs, &cost, Objective::Max).map_err(|e| e.to_string())?;
        if dp != bf {
            bad.push(format!("instance {i}: {dp} vs {bf}"));
        }
    }
    let secs = within(Duration::from_secs(60), start)?;
    violations(bad, suite.len()).map(|s| format!("{s}, {secs:.2} s"))
}

/// Every job is served only in the least-loaded slots of its window, and the
/// peeled intervals come out in nonincreasing intensity.
fn flat_certificate(jobs: &JobSet, result: &elastic_grid::OperatorResult) -> Option<String> {
    let loads = result.schedule.loads();
    let top = loads.iter().cloned().fold(0.0, f64::max);
    let tol = 1e-9 * (1.0 + top);
    for e in result.schedule.entries() {
        if e.amount <= 1e-12 {
            continue;
        }
        let j = jobs.job(e.job);
        let floor = (j.arrival..=j.deadline).map(|t| loads[t as usize]).fold(f64::INFINITY, f64::min);
        if loads[e.slot as usize] - floor > tol {
            return Some(format!("job {} served at slot {} above its window minimum", e.job, e.slot));
        }
    }
    for j in jobs.jobs() {
        if (result.schedule.served(j.id) - j.energy()).abs() > tol {
            return Some(format!("job {} not fully served", j.id));
        }
    }
    for w in result.critical_intervals.windows(2) {
        if w[1].intensity > w[0].intensity + tol {
            return Some("critical intensities increase".into());
        }
    }
    None
}

fn criterion_3() -> Outcome {
    let cost = CostModel::quadratic();
    let mut bad = Vec::new();
    for i in 0..200 {
        let jobs = tiny_te(&mut ChaCha8Rng::seed_from_u64(20_000 + i), 6, false);
        let r = yds_schedule(&jobs, &cost).map_err(|e| e.to_string())?;
        let bf = brute_force_min_schedule_te(&jobs, &cost, DEFAULT_SWEEPS).map_err(|e| e.to_string())?;
        if (r.cost - bf).abs() > 1e-6 * (1.0 + r.cost) {
            bad.push(format!("instance {i}: {} vs {bf}", r.cost));
        }
        if let Some(why) = flat_certificate(&jobs, &r) {
            bad.push(format!("instance {i}: {why}"));
        }
    }
    violations(bad, 200)
}

fn criterion_4(suite: &[JobSet]) -> Outcome {
    let mut bad = Vec::new();
    let mut checks = 0;
    for b in [2.0, 3.0] {
        let cost = CostModel::power(b).map_err(|e| e.to_string())?;
        for (i, jobs) in suite.iter().enumerate() {
            let run = || -> elastic_grid::Result<Vec<(&'static str, f64, f64)>> {
                let report = compute_bounds(jobs, Budget::full(jobs.len()), &cost)?;
                let c_max = offline_full_attack_te(jobs, &cost)?.enforced_cost;
                let c_under = online_full_attack_te(jobs, &cost)?.enforced_cost;
                let c_min = yds_schedule(jobs, &cost)?.cost;
                let c_bar = avr_schedule(jobs, &cost)?.cost;
                let c_base = baseline_cost(jobs, &cost);
                // (name, smaller, larger)
                Ok(vec![
                    ("online fraction", c_max / (report.r1 as f64).powf(b - 1.0), c_under),
                    ("lower bound", report.max_lower, c_max),
                    ("upper bound", c_max, report.max_upper_factor * c_min),
                    ("avr ratio", c_bar, report.avr_ratio_upper * c_min),
                    ("min below base", c_min, c_base),
                    ("base below max", c_base, c_max),
                ])
            };
            for (name, lo, hi) in run().map_err(|e| e.to_string())? {
                checks += 1;
                if lo > hi + 1e-9 * (1.0 + hi.abs()) {
                    bad.push(format!("b={b} instance {i}: {name}: {lo} > {hi}"));
                }
            }
        }
    }
    violations(bad, checks)
}

fn criterion_5() -> Outcome {
    let cost = CostModel::quadratic();
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut checks = 0;
    // bound failures where beta * n is a whole number, i.e. the floor loses nothing
    let mut whole_budget_misses = 0;
    for i in 0..100 {
        let jobs = tiny_te(&mut ChaCha8Rng::seed_from_u64(30_000 + i), 4, true);
        let c_max = offline_full_attack_te(&jobs, &cost).map_err(|e| e.to_string())?.enforced_cost;
        for beta in [0.25, 0.5, 0.75] {
            let run = || -> elastic_grid::Result<(f64, f64, f64, f64)> {
                let budget = Budget::new(beta, jobs.len())?;
                let c1 = offline_limited_attack_te(&jobs, beta, &cost)?.attack.enforced_cost;
                let c2 = upper_bound_limited_te(&jobs, budget, &cost)?;
                let opt = brute_force_limited_attack(&jobs, budget, OracleOperator::Optimal, &cost)?;
                let base = brute_force_limited_attack(&jobs, budget, OracleOperator::Baseline, &cost)?;
                Ok((c1, c2, opt, base))
            };
            let (c1, c2, opt, base) = run().map_err(|e| e.to_string())?;
            checks += 1;
            let tol = 1e-6 * (1.0 + opt.abs());
            let tag = format!("instance {i} beta {beta}");
            if c1 > opt + tol {
                bad.push(format!("{tag}: c1 {c1} above best attack {opt}"));
            }
            if opt > c2 + tol {
                bad.push(format!("{tag}: best attack {opt} above c2 {c2}"));
            }
            if c2 != base {
                bad.push(format!("{tag}: c2 {c2} differs from baseline oracle {base}"));
            }
            if c1 < beta * beta / 2.0 * c_max - 1e-9 * c_max {
                bad.push(format!("{tag}: c1 {c1} below beta^2/2 * {c_max} with n = {}", jobs.len()));
                if (beta * jobs.len() as f64).fract() == 0.0 {
                    whole_budget_misses += 1;
                }
            }
        }
    }
    let secs = within(Duration::from_secs(60), start)?;
    violations(bad, checks)
        .map(|s| format!("{s}, {secs:.2} s"))
        .map_err(|s| format!("{s}; {whole_budget_misses} with a whole-number budget"))
}

fn criterion_6(suite: &[JobSet]) -> Outcome {
    let cost = CostModel::quadratic();
    let mut bad = Vec::new();
    for (i, jobs) in suite.iter().enumerate() {
        let run = || -> elastic_grid::Result<(f64, f64, u64)> {
            let c_max = offline_full_attack_cp(jobs, &cost)?.enforced_cost;
            let online = online_full_attack_cp(jobs, &cost)?.enforced_cost;
            Ok((c_max, online, compute_bounds(jobs, Budget::full(jobs.len()), &cost)?.r2))
        };
        let (c_max, online, r2) = run().map_err(|e| e.to_string())?;
        if online < c_max / r2 as f64 - 1e-9 * c_max {
            bad.push(format!("instance {i}: {online} < {c_max} / {r2}"));
        }
    }
    violations(bad, suite.len())
}

fn criterion_7() -> Outcome {
    let mut bad = Vec::new();
    for i in 0..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(40_000 + i);
        let jobs = tiny_te(&mut rng, 8, false);
        // quarter steps keep every product exact
        let coeffs: Vec<f64> =
            (0..=jobs.horizon()).map(|_| f64::from(rng.random_range(4u32..=16)) / 4.0).collect();
        let cost = CostModel::per_slot(2.0, coeffs).map_err(|e| e.to_string())?;
        let run = || -> elastic_grid::Result<(f64, f64, f64, f64)> {
            let dp = offline_full_attack_te(&jobs, &cost)?;
            let total = dp.partition.as_ref().map_or(0.0, |p| p.total_cost);
            let bf = brute_force_max_clique_partition(&jobs, &cost)?.total_cost;
            let online = online_full_attack_te(&jobs, &cost)?.enforced_cost;
            let frac = compute_bounds(&jobs, Budget::full(jobs.len()), &cost)?.td_fraction;
            Ok((total, bf, online, frac))
        };
        let (dp, bf, online, frac) = run().map_err(|e| e.to_string())?;
        if dp != bf {
            bad.push(format!("instance {i}: dp {dp} vs oracle {bf}"));
        }
        if online < frac * bf - 1e-9 * bf {
            bad.push(format!("instance {i}: online {online} below {frac} * {bf}"));
        }
    }
    violations(bad, 100)
}

fn criterion_8() -> Outcome {
    let ns = [10u32, 20, 40];
    let lmins: Vec<u32> = (1..=40).collect();
    let curve = figure1_curve(&ns, &lmins, 10.0, 5.0, 2.0);
    let mut bad = Vec::new();
    let mut k = 0;
    for &n in &ns {
        let mut prev = f64::NEG_INFINITY;
        for &l in &lmins {
            let p = curve[k];
            k += 1;
            let total = 10.0 * f64::from(n);
            let direct = (f64::from(l) * total / (2.0 * f64::from(l) + 5.0 * f64::from(n - 1))).powi(2);
            if p.n != n || p.l_min != l || (p.bound - direct).abs() > 1e-9 * (1.0 + direct) {
                bad.push(format!("n={n} l_min={l}: {} vs {direct}", p.bound));
            }
            if p.bound < prev {
                bad.push(format!("n={n}: drops at l_min={l}"));
            }
            prev = p.bound;
        }
    }
    let sample = curve.iter().find(|p| p.n == 20 && p.l_min == 10).map_or(f64::NAN, |p| p.bound);
    if (sample - 302.5).abs() > 0.1 {
        bad.push(format!("n=20 l_min=10 gives {sample}"));
    }
    violations(bad, curve.len()).map(|s| format!("{s}, n=20 l_min=10 -> {sample:.2}"))
}

/// Average ranks, ties sharing the mean rank.
fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut out = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = r;
        }
        i = j + 1;
    }
    out
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        0.0
    } else {
        cov / (vx * vy).sqrt()
    }
}

fn permutations(items: &mut Vec<f64>, k: usize, visit: &mut dyn FnMut(&[f64])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Spearman's rho and its exact one-sided permutation p-value in the
/// direction of `sign`.
fn spearman(x: &[f64], y: &[f64], sign: f64) -> (f64, f64) {
    let (rx, ry) = (ranks(x), ranks(y));
    let rho = pearson(&rx, &ry);
    let (mut hits, mut total) = (0u64, 0u64);
    let mut perm = ry.clone();
    permutations(&mut perm, 0, &mut |p| {
        total += 1;
        if sign * pearson(&rx, p) >= sign * rho - 1e-12 {
            hits += 1;
        }
    });
    (rho, hits as f64 / total as f64)
}

fn criterion_9() -> Outcome {
    let scenario = Scenario::from_json(
        r#"{
            "generator": {"n": 20, "model": "te", "slackness": {"kind": "exponential", "mean": 1.0}},
            "b": 2.0,
            "operator": {"name": "yds"},
            "sweep": {"param": "slackness_mean", "values": [1, 2, 3, 4, 5, 6]},
            "trials": 10,
            "seed0": 500,
            "columns": ["C_min", "C_max"]
        }"#,
    )
    .map_err(|e| e.to_string())?;
    let r = run_experiment(&scenario).map_err(|e| e.to_string())?;
    let xs: Vec<f64> = r.points.iter().map(|p| p.value).collect();
    let c_min = r.means(Column::CMin).unwrap_or_default();
    let c_max = r.means(Column::CMax).unwrap_or_default();
    let (rho_min, p_min) = spearman(&xs, &c_min, -1.0);
    let (rho_max, p_max) = spearman(&xs, &c_max, 1.0);
    let detail = format!("C_min rho {rho_min:.3} p {p_min:.4}, C_max rho {rho_max:.3} p {p_max:.4}");
    if rho_min < 0.0 && p_min < 0.05 && rho_max > 0.0 && p_max < 0.05 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

const MIXTURE: &str = r#"{"kind": "mixture", "components": [
    {"weight": 0.1, "lo": 0, "hi": 10}, {"weight": 0.9, "lo": 40, "hi": 50}]}"#;

fn criterion_10() -> Outcome {
    let limited = format!(
        r#"{{
            "generator": {{"n": 100, "model": "te", "slackness": {MIXTURE}}},
            "operator": {{"name": "avr"}},
            "attack": {{"name": "online-limited", "beta": 0.0}},
            "sweep": {{"param": "beta", "values": [0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]}},
            "trials": 100,
            "seed0": 900,
            "columns": ["C_base", "C_attack"]
        }}"#
    );
    let full = limited
        .replace(r#""name": "online-limited", "beta": 0.0"#, r#""name": "online-full""#)
        .replace(r#""param": "beta""#, r#""param": "b""#)
        .replace("[0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]", "[2]");
    let run = |json: &str| -> Result<ExperimentResult, String> {
        run_experiment(&Scenario::from_json(json).map_err(|e| e.to_string())?).map_err(|e| e.to_string())
    };
    let (limited, full) = (run(&limited)?, run(&full)?);
    let attacked = limited.means(Column::CAttack).unwrap_or_default();
    let base = limited.means(Column::CBase).unwrap_or_default();
    let mut bad = Vec::new();
    for (i, w) in attacked.windows(2).enumerate() {
        if w[1] < w[0] - 1e-9 * w[0] {
            bad.push(format!("mean drops from {:.2} to {:.2} after beta {:.1}", w[0], w[1], limited.points[i].value));
        }
    }
    let last = limited.points.last().ok_or("no sweep points")?;
    let col = limited.column_index(Column::CAttack).ok_or("missing column")?;
    let full_col = full.column_index(Column::CAttack).ok_or("missing column")?;
    for (a, b) in last.trials.iter().zip(&full.points[0].trials) {
        if a.seed != b.seed || a.values[col] != b.values[full_col] {
            let (x, y) = (a.values[col], b.values[full_col]);
            bad.push(format!("seed {}: beta=1 gives {x} but the full attack gives {y}", a.seed));
        }
    }
    let crossing = limited.points.iter().zip(attacked.iter().zip(&base)).find(|(p, (a, b))| p.value <= 0.6 && a > b);
    let Some((p, _)) = crossing else {
        bad.push("no beta <= 0.6 pushes the mean above the baseline".into());
        return violations(bad, attacked.len());
    };
    let beta = p.value;
    violations(bad, attacked.len()).map(|s| format!("{s}, exceeds C_base from beta {beta}"))
}

fn criterion_11() -> Outcome {
    let alpha = 0.05;
    let trials = 10_000usize;
    let slackness = Slackness::Exponential { mean: 4.0 };
    let (mu, sigma) = slackness.moments();
    let detector = DetectorConfig::new(mu, sigma, alpha).map_err(|e| e.to_string())?;
    let flagged: usize = (0..trials as u64)
        .into_par_iter()
        .map(|seed| {
            let mut config = GenConfig::new(50, Model::TotalEnergy, slackness.clone());
            config.seed = seed;
            let jobs = generate_jobs(&config)?;
            Ok(usize::from(z_test(&jobs.slackness(), &detector)?.flagged))
        })
        .collect::<elastic_grid::Result<Vec<usize>>>()
        .map_err(|e| e.to_string())?
        .into_iter()
        .sum();
    let rate = flagged as f64 / trials as f64;
    let band = 3.0 * (alpha * (1.0 - alpha) / trials as f64).sqrt();
    let detail = format!("false-flag rate {rate:.4}, band {:.4}..{:.4}", alpha - band, alpha + band);
    if (rate - alpha).abs() <= band {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn criterion_12() -> Outcome {
    let root = workspace_root();
    let target = root.join("target/acceptance-cli");
    let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
    let build = Command::new(cargo)
        .args(["build", "--quiet", "-p", "elastic-grid-cli", "--target-dir"])
        .arg(&target)
        .current_dir(&root)
        .output()
        .map_err(|e| format!("cannot run cargo: {e}"))?;
    if !build.status.success() {
        return Err(format!("cli build failed: {}", String::from_utf8_lossy(&build.stderr)));
    }
    let bin = target.join("debug/elastic-grid");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let jobs = dir.path().join("jobs.json");
    let set = tiny_te(&mut ChaCha8Rng::seed_from_u64(77), 8, false);
    std::fs::write(&jobs, set.to_json()).map_err(|e| e.to_string())?;
    let scenario = dir.path().join("scenario.json");
    std::fs::write(
        &scenario,
        r#"{"generator": {"n": 15, "model": "te", "slackness": {"kind": "exponential", "mean": 3}},
            "operator": {"name": "yds"}, "attack": {"name": "online-limited", "beta": 0.5},
            "sweep": {"param": "beta", "values": [0.25, 0.75]}, "trials": 5, "seed0": 3,
            "columns": ["C_min", "C_attack", "modified", "z"]}"#,
    )
    .map_err(|e| e.to_string())?;
    let j = jobs.to_str().ok_or("non-utf8 path")?;
    let s = scenario.to_str().ok_or("non-utf8 path")?;
    let cases: Vec<Vec<&str>> = vec![
        vec!["schedule", "--jobs", j],
        vec!["schedule", "--jobs", j, "--algo", "avr"],
        vec!["attack", "--jobs", j, "--algo", "offline-full"],
        vec!["attack", "--jobs", j, "--algo", "online-full"],
        vec!["attack", "--jobs", j, "--algo", "offline-limited", "--beta", "0.5"],
        vec!["attack", "--jobs", j, "--algo", "online-limited", "--beta", "0.5", "--seed", "4"],
        vec!["bounds", "--jobs", j, "--beta", "0.5"],
        vec!["oracle-check", "--trials", "30", "--seed", "7"],
        vec!["simulate", "--scenario", s, "--seed", "12"],
        vec!["figure1"],
    ];
    let mut bad = Vec::new();
    for args in &cases {
        let first = Command::new(&bin).args(args).output().map_err(|e| e.to_string())?;
        let second = Command::new(&bin).args(args).output().map_err(|e| e.to_string())?;
        if !first.status.success() {
            bad.push(format!("{args:?} failed: {}", String::from_utf8_lossy(&first.stderr)));
        } else if first.stdout != second.stdout || first.status.code() != second.status.code() {
            bad.push(format!("{args:?} differs between runs"));
        }
    }
    violations(bad, cases.len())
}

fn main() {
    let te = te_suite();
    let cp = cp_suite();
    let criteria: Vec<Criterion> = vec![
        ("oracle equivalence, full attack, total energy", Box::new(|| criterion_1(&te))),
        ("oracle equivalence, full attack, constant power", Box::new(|| criterion_2(&cp))),
        ("operator optimality and flat certificate", Box::new(criterion_3)),
        ("bound inequalities", Box::new(|| criterion_4(&te))),
        ("limited-attack sandwich", Box::new(criterion_5)),
        ("constant-power online guarantee", Box::new(|| criterion_6(&cp))),
        ("time-dependent cost", Box::new(criterion_7)),
        ("lower-bound curve", Box::new(criterion_8)),
        ("slackness trend", Box::new(criterion_9)),
        ("budget trend", Box::new(criterion_10)),
        ("detector calibration", Box::new(criterion_11)),
        ("cli determinism", Box::new(criterion_12)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail}; {secs:.1} s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({detail}; {secs:.1} s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
