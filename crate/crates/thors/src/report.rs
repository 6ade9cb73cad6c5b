//! CSV tables and the JSON run manifest.
//!
//! The CSV files are a pure function of the configuration. Timings only
//! appear in the manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::experiment::ExperimentOutput;

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let f = fs::File::create(path).map_err(|e| HarnessError::io(path, e))?;
    Ok(csv::Writer::from_writer(f))
}

pub fn write_rounds_csv(path: &Path, out: &ExperimentOutput) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record([
        "round",
        "seed",
        "scorer",
        "method",
        "threshold",
        "test_cost",
        "error",
    ])?;
    for r in &out.rounds {
        for o in &r.outcomes {
            w.write_record([
                r.round.to_string(),
                r.seed.to_string(),
                o.scorer.clone(),
                o.method.name().to_owned(),
                opt(o.threshold),
                opt(o.test_cost),
                o.error.clone().unwrap_or_default(),
            ])?;
        }
        if let Some(c) = r.bayes_cost {
            w.write_record([
                r.round.to_string(),
                r.seed.to_string(),
                "oracle".into(),
                "bayes".into(),
                String::new(),
                c.to_string(),
                String::new(),
            ])?;
        }
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

pub fn write_summary_csv(path: &Path, out: &ExperimentOutput) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record([
        "scorer",
        "method",
        "n_ok",
        "mean_cost",
        "std_cost",
        "wins",
        "losses",
        "ties",
        "unavailable",
    ])?;
    for r in &out.summary.rows {
        w.write_record([
            r.scorer.clone(),
            r.method.name().to_owned(),
            r.n_ok.to_string(),
            opt(r.mean_cost),
            opt(r.std_cost),
            r.wins.to_string(),
            r.losses.to_string(),
            r.ties.to_string(),
            r.unavailable.to_string(),
        ])?;
    }
    if let Some((m, s)) = out.summary.bayes {
        let n = out.rounds.iter().filter(|r| r.bayes_cost.is_some()).count();
        w.write_record([
            "oracle".into(),
            "bayes".into(),
            n.to_string(),
            m.to_string(),
            s.to_string(),
            "0".into(),
            "0".into(),
            "0".into(),
            "0".into(),
        ])?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

#[derive(Serialize)]
struct Timing<'a> {
    scorer: &'a str,
    method: &'a str,
    mean_wall_time_secs: f64,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    config: &'a ExperimentConfig,
    round_seeds: Vec<u64>,
    split_sizes: Vec<[usize; 3]>,
    wall_time_secs: f64,
    timing: Vec<Timing<'a>>,
}

/// Paths written by [`write_outputs`].
#[derive(Clone, Debug)]
pub struct OutputFiles {
    pub rounds_csv: PathBuf,
    pub summary_csv: PathBuf,
    pub manifest_json: PathBuf,
}

pub fn write_outputs(
    dir: &Path,
    cfg: &ExperimentConfig,
    out: &ExperimentOutput,
) -> Result<OutputFiles> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let files = OutputFiles {
        rounds_csv: dir.join("rounds.csv"),
        summary_csv: dir.join("summary.csv"),
        manifest_json: dir.join("manifest.json"),
    };
    write_rounds_csv(&files.rounds_csv, out)?;
    write_summary_csv(&files.summary_csv, out)?;
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        config: cfg,
        round_seeds: out.rounds.iter().map(|r| r.seed).collect(),
        split_sizes: out.rounds.iter().map(|r| r.sizes).collect(),
        wall_time_secs: out.wall_time_secs,
        timing: out
            .summary
            .rows
            .iter()
            .map(|r| Timing {
                scorer: &r.scorer,
                method: r.method.name(),
                mean_wall_time_secs: r.mean_wall_time_secs,
            })
            .collect(),
    };
    let text = serde_json::to_string_pretty(&manifest)?;
    fs::write(&files.manifest_json, text).map_err(|e| HarnessError::io(&files.manifest_json, e))?;
    Ok(files)
}

/// Fixed-width text rendering of the summary for terminals.
pub fn render_summary(out: &ExperimentOutput) -> String {
    use std::fmt::Write;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<10} {:<12} {:>14} {:>12} {:>9} {:>10}",
        "scorer", "method", "mean cost", "std", "w/l/t", "time (s)"
    );
    for r in &out.summary.rows {
        let wlt = if r.method == crate::config::Method::Thors {
            "-".to_owned()
        } else {
            format!("{}/{}/{}", r.wins, r.losses, r.ties)
        };
        let fmt = |x: Option<f64>| x.map_or("n/a".to_owned(), |v| format!("{v:.1}"));
        let _ = writeln!(
            s,
            "{:<10} {:<12} {:>14} {:>12} {:>9} {:>10.4}",
            r.scorer,
            r.method.name(),
            fmt(r.mean_cost),
            fmt(r.std_cost),
            wlt,
            r.mean_wall_time_secs
        );
    }
    if let Some((m, sd)) = out.summary.bayes {
        let _ = writeln!(
            s,
            "{:<10} {:<12} {:>14.1} {:>12.1}",
            "oracle", "bayes", m, sd
        );
    }
    s
}
