use std::fmt::Write as _;
use std::path::Path;

use super::experiment::{ExperimentResult, SweepParam};

fn param_name(p: SweepParam) -> &'static str {
    match p {
        SweepParam::SlacknessMean => "slackness_mean",
        SweepParam::Beta => "beta",
        SweepParam::N => "n",
        SweepParam::InterarrivalMean => "interarrival_mean",
        SweepParam::ServiceMean => "service_mean",
        SweepParam::B => "b",
    }
}

/// One row per sweep point: the parameter, then mean and standard error per column.
pub fn to_csv(result: &ExperimentResult) -> String {
    let mut out = String::from(param_name(result.param));
    for c in &result.columns {
        let _ = write!(out, ",{0},{0}_stderr", c.name());
    }
    out.push('\n');
    for p in &result.points {
        let _ = write!(out, "{}", p.value);
        for (m, s) in p.mean.iter().zip(&p.stderr) {
            let _ = write!(out, ",{m},{s}");
        }
        out.push('\n');
    }
    out
}

/// Gnuplot script drawing every column with error bars from `csv_name`.
pub fn plot_script(result: &ExperimentResult, csv_name: &str) -> String {
    let mut out = String::new();
    out.push_str("set datafile separator ','\n");
    out.push_str("set key outside right\n");
    let _ = writeln!(out, "set xlabel '{}'", param_name(result.param));
    out.push_str("set ylabel 'cost'\n");
    let png = Path::new(csv_name).with_extension("png");
    let _ = writeln!(out, "set terminal pngcairo size 900,600\nset output '{}'", png.display());
    let series: Vec<String> = result
        .columns
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let (m, s) = (2 + 2 * i, 3 + 2 * i);
            format!("'{csv_name}' using 1:{m}:{s} skip 1 with yerrorlines title '{}'", c.name())
        })
        .collect();
    if !series.is_empty() {
        let _ = writeln!(out, "plot {}", series.join(", \\\n     "));
    }
    out
}

/// Writes the CSV table and its plotting script.
pub fn emit_tables(result: &ExperimentResult, csv_path: &Path, plot_path: &Path) -> crate::Result<()> {
    std::fs::write(csv_path, to_csv(result))?;
    let name = csv_path.file_name().map_or_else(|| csv_path.display().to_string(), |n| n.to_string_lossy().into_owned());
    std::fs::write(plot_path, plot_script(result, &name))?;
    Ok(())
}
