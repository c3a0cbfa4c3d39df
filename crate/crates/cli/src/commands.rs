//! The three subcommands. Each computes its full output in memory before
//! anything is written, so a failure leaves no partial files behind.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use comove_core::{summarize, summary_stats, run_pair_test, McStudy, PairReport, SkipReason, WindowOutcome, WindowSpec};

use crate::config::{OutputFormat, RunConfig};
use crate::error::{CliError, Result};
use crate::format;
use crate::format::SummaryRow;
use crate::ingest::{align, load_returns};
use crate::parallel::{monte_carlo_study_parallel, run_pair_test_parallel};

/// Text for stdout plus named files for the output directory.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Output {
    pub stdout: String,
    pub files: Vec<(String, String)>,
}

impl Output {
    pub fn write_files(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
        for (name, contents) in &self.files {
            let path = dir.join(name);
            std::fs::write(&path, contents).map_err(|source| CliError::Io { path, source })?;
        }
        Ok(())
    }
}

pub fn cmd_stats(files: &[PathBuf], fmt: OutputFormat) -> Result<String> {
    let mut rows = Vec::with_capacity(files.len());
    for path in files {
        let returns = load_returns(path)?;
        let stats = summary_stats(returns.values()).map_err(|e| CliError::core(path.display().to_string(), e))?;
        rows.push((returns.id().to_string(), stats));
    }
    match fmt {
        OutputFormat::Csv => format::stats_csv(&rows),
        OutputFormat::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|(id, s)| serde_json::json!({ "series": id, "stats": s }))
                .collect();
            format::json_text(&v)
        }
    }
}

#[derive(Debug, Clone)]
pub struct TestJob {
    pub benchmark: PathBuf,
    pub targets: Vec<PathBuf>,
    pub config: RunConfig,
    pub parallel: bool,
}

fn is_degenerate(report: &PairReport) -> bool {
    !report.windows.is_empty()
        && report.windows.iter().all(|w| {
            matches!(w, WindowOutcome::Skipped { reason: SkipReason::CollinearPair, .. })
        })
}

pub fn cmd_test(job: &TestJob) -> Result<Output> {
    let spec = job.config.window_spec()?;
    let prewhiten = job.config.prewhiten()?;
    let benchmark = load_returns(&job.benchmark)?;

    let mut seen = BTreeSet::new();
    let mut rows = Vec::new();
    let mut files = Vec::new();
    for path in &job.targets {
        let target = load_returns(path)?;
        if !seen.insert(target.id().to_string()) {
            return Err(CliError::Usage(format!("two targets share the name {:?}", target.id())));
        }
        let pair = align(&benchmark, &target)?;
        let context = format!("{} vs {}", benchmark.id(), target.id());
        let report = if job.parallel {
            run_pair_test_parallel(&pair.benchmark, &pair.target, spec, prewhiten)
        } else {
            run_pair_test(&pair.benchmark, &pair.target, spec, prewhiten)
        }
        .map_err(|e| CliError::core(context, e))?;
        if is_degenerate(&report) {
            return Err(CliError::DegeneratePair {
                benchmark: benchmark.id().into(),
                target: target.id().into(),
            });
        }
        let summary = summarize(&report);
        let id = target.id();
        match job.config.output_format {
            OutputFormat::Csv => {
                files.push((format!("{id}.windows.csv"), format::windows_csv(&report)?));
                files.push((format!("{id}.significant.csv"), format::significant_csv(&summary)?));
            }
            OutputFormat::Json => files.push((format!("{id}.report.json"), format::json_text(&report)?)),
        }
        files.push((format!("{id}.plot.csv"), format::plot_csv(&report)?));
        rows.push(SummaryRow {
            observations: pair.benchmark.len(),
            dropped_benchmark: pair.dropped_benchmark,
            dropped_target: pair.dropped_target,
            summary,
        });
    }

    let (name, stdout) = match job.config.output_format {
        OutputFormat::Csv => ("summary.csv", format::summary_csv(&rows)?),
        OutputFormat::Json => ("summary.json", format::json_text(&rows)?),
    };
    files.insert(0, (name.to_string(), stdout.clone()));
    Ok(Output { stdout, files })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SimMode {
    Size,
    Power,
}

#[derive(Debug, Clone, Copy)]
pub struct SimJob {
    pub mode: SimMode,
    pub theta: f64,
    pub replications: usize,
    pub seed: u64,
    pub length: usize,
    pub exponent_c: f64,
    pub alpha: f64,
    pub format: OutputFormat,
    pub parallel: bool,
}

/// Size mode ignores `theta` and simulates independent pairs.
pub fn run_simulation(job: &SimJob) -> Result<McStudy> {
    if job.replications == 0 {
        return Err(CliError::Usage("--reps must be positive".into()));
    }
    let spec = WindowSpec::new(job.length, job.exponent_c, job.alpha)
        .map_err(|e| CliError::core("simulation", e))?;
    let theta = match job.mode {
        SimMode::Size => 0.0,
        SimMode::Power => job.theta,
    };
    let study = if job.parallel {
        monte_carlo_study_parallel(theta, &spec, job.length, job.replications, job.seed)
    } else {
        comove_core::monte_carlo_study(theta, &spec, job.length, job.replications, job.seed)
    };
    study.map_err(|e| CliError::core("simulation", e))
}

pub fn cmd_simulate(job: &SimJob) -> Result<String> {
    let study = run_simulation(job)?;
    match job.format {
        OutputFormat::Csv => format::simulation_csv(&study),
        OutputFormat::Json => format::json_text(&study),
    }
}
