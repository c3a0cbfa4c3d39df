//! Argument parsing and dispatch.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{cmd_simulate, cmd_stats, cmd_test, SimJob, SimMode, TestJob};
use crate::config::{OutputFormat, Overrides, PrewhitenMode, RunConfig, Scope};
use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "comove", version, about = "Windowed cross-bicorrelation tests for episodic co-movement")]
pub struct Cli {
    /// Worker threads; 1 runs everything on a single thread.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Descriptive statistics of each file's log returns.
    Stats {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
    },
    /// Windowed H_xy / H_xxy tests of each target against the benchmark.
    Test(TestArgs),
    /// Monte Carlo size or power of both statistics.
    Simulate(SimArgs),
}

#[derive(Debug, Args)]
pub struct TestArgs {
    #[arg(long)]
    pub benchmark: PathBuf,
    #[arg(long, required = true, num_args = 1..)]
    pub targets: Vec<PathBuf>,
    /// `key = value` file with defaults for the flags below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, value_enum)]
    pub prewhiten: Option<PrewhitenMode>,
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long = "p-max")]
    pub p_max: Option<usize>,
    #[arg(long, value_enum)]
    pub scope: Option<Scope>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[arg(long, value_enum)]
    pub mode: SimMode,
    #[arg(long, default_value_t = 0.8)]
    pub theta: f64,
    #[arg(long, default_value_t = 2000)]
    pub reps: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Sample length; the lag depth follows from it and `--c`.
    #[arg(long, default_value_t = 25)]
    pub n: usize,
    #[arg(long, default_value_t = 0.4)]
    pub c: f64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
}

impl TestArgs {
    fn run_config(&self) -> Result<RunConfig> {
        let mut config = RunConfig::default();
        if let Some(path) = &self.config {
            config = config.apply(&RunConfig::load_file(path)?);
        }
        Ok(config.apply(&Overrides {
            window_length: self.window,
            exponent_c: self.c,
            alpha: self.alpha,
            prewhiten_mode: self.prewhiten,
            fixed_order: self.order,
            p_max: self.p_max,
            scope: self.scope,
            output_format: self.format,
        }))
    }
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    if cli.threads == Some(0) {
        return Err(CliError::Usage("--threads must be positive".into()));
    }
    let parallel = cli.threads != Some(1);
    let text = crate::parallel::with_threads(cli.threads, || -> Result<String> {
        match cli.command {
            Command::Stats { files, format } => cmd_stats(&files, format),
            Command::Test(args) => {
                let job = TestJob {
                    benchmark: args.benchmark.clone(),
                    targets: args.targets.clone(),
                    config: args.run_config()?,
                    parallel,
                };
                let output = cmd_test(&job)?;
                if let Some(dir) = &args.out {
                    output.write_files(dir)?;
                }
                Ok(output.stdout)
            }
            Command::Simulate(a) => cmd_simulate(&SimJob {
                mode: a.mode,
                theta: a.theta,
                replications: a.reps,
                seed: a.seed,
                length: a.n,
                exponent_c: a.c,
                alpha: a.alpha,
                format: a.format,
                parallel,
            }),
        }
    })?;
    stdout
        .write_all(text.as_bytes())
        .map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source })
}
