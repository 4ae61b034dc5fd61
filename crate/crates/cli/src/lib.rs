//! Command-line front end: ingest point files, generate synthetic data, build
//! dataset graphs, run and verify solvers, and sweep benchmark parameters.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 a solution failed
//! verification.

pub mod commands;
pub mod config;
pub mod error;
pub mod gen;
pub mod input;
pub mod points;
pub mod report;

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::{bench_csv, bench_json};
use crate::config::{parse_bounds, RunConfig, DEFAULT_THETA};
use crate::error::{CliError, EXIT_OK, EXIT_USAGE};
use crate::gen::GenSpec;

#[derive(Debug, Parser)]
#[command(
    name = "bmcc",
    version,
    about = "Connected budgeted coverage over spatial datasets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by the commands that build a marketplace. Every value is
/// also accepted as `key=value` in a `--config` file; flags win.
#[derive(Debug, Default, Args)]
pub struct RunArgs {
    /// key=value configuration file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Grid resolution (cells per side = 2^theta)
    #[arg(long)]
    pub theta: Option<String>,
    /// Distance threshold in cells
    #[arg(long)]
    pub delta: Option<String>,
    /// Absolute budget
    #[arg(long)]
    pub budget: Option<String>,
    /// Budget as a fraction of the total catalog price; wins over --budget
    #[arg(long)]
    pub budget_ratio: Option<String>,
    /// usage or table
    #[arg(long)]
    pub pricing: Option<String>,
    /// dataset_id,price file for table pricing
    #[arg(long)]
    pub prices: Option<String>,
    /// Comma-separated solvers: dsa, dpsa, dpsa-ba, cmc-mc, cmc-mg, exact
    #[arg(long)]
    pub solvers: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Largest catalog the exact solver accepts
    #[arg(long)]
    pub oracle_cap: Option<String>,
    /// Explicit bounding space: min_x,min_y,max_x,max_y
    #[arg(long)]
    pub bounds: Option<String>,
    /// Sweep axis: comma-separated thetas
    #[arg(long)]
    pub thetas: Option<String>,
    /// Sweep axis: comma-separated deltas
    #[arg(long)]
    pub deltas: Option<String>,
    /// Sweep axis: comma-separated absolute budgets
    #[arg(long)]
    pub budgets: Option<String>,
    /// Sweep axis: comma-separated budget ratios
    #[arg(long)]
    pub budget_ratios: Option<String>,
    /// Sweep axis: comma-separated catalog fractions in (0, 1]
    #[arg(long)]
    pub scales: Option<String>,
    /// Run sweep points in parallel
    #[arg(long)]
    pub parallel: bool,
}

impl RunArgs {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut config = RunConfig::default();
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            config.apply_file_text(&text)?;
        }
        let flags = [
            ("theta", &self.theta),
            ("delta", &self.delta),
            ("budget", &self.budget),
            ("budget_ratio", &self.budget_ratio),
            ("pricing", &self.pricing),
            ("prices", &self.prices),
            ("solvers", &self.solvers),
            ("seed", &self.seed),
            ("oracle_cap", &self.oracle_cap),
            ("bounds", &self.bounds),
            ("thetas", &self.thetas),
            ("deltas", &self.deltas),
            ("budgets", &self.budgets),
            ("budget_ratios", &self.budget_ratios),
            ("scales", &self.scales),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                config.set(key, v)?;
            }
        }
        if self.parallel {
            config.parallel = true;
        }
        config.validate()?;
        Ok(config)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rasterize a point file into a catalog
    Ingest {
        points: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value_t = DEFAULT_THETA)]
        theta: u32,
        /// Explicit bounding space: min_x,min_y,max_x,max_y
        #[arg(long, value_parser = parse_bounds)]
        bounds: Option<bmcc_core::Bounds>,
        /// Embed this dataset_id,price table in the catalog
        #[arg(long)]
        prices: Option<PathBuf>,
    },
    /// Write a seeded synthetic point file
    Gen {
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = GenSpec::default().datasets)]
        datasets: usize,
        #[arg(long, default_value_t = GenSpec::default().min_points)]
        min_points: usize,
        #[arg(long, default_value_t = GenSpec::default().max_points)]
        max_points: usize,
        #[arg(long, default_value_t = GenSpec::default().clusters)]
        clusters: usize,
        #[arg(long, default_value_t = GenSpec::default().cluster_radius)]
        cluster_radius: f64,
        /// Standard deviation of points around their dataset centre
        #[arg(long, default_value_t = GenSpec::default().spread)]
        spread: f64,
        #[arg(long, default_value_t = GenSpec::default().extent)]
        extent: f64,
        #[arg(long, default_value_t = GenSpec::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = GenSpec::default().decimals)]
        decimals: usize,
    },
    /// Build the dataset graph and print its statistics
    BuildGraph {
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Write the adjacency list to this file
        #[arg(long)]
        adjacency: Option<PathBuf>,
        /// Compare every pair instead of using the ball tree
        #[arg(long)]
        naive: bool,
    },
    /// Run solvers at one parameter point and write a JSON report
    Solve {
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Omit wall-clock timings so reports are reproducible byte for byte
        #[arg(long)]
        mask_timing: bool,
    },
    /// Sweep parameter axes and write one row per solver and point
    Bench {
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        /// Omit wall-clock timings so output is reproducible byte for byte
        #[arg(long)]
        mask_timing: bool,
    },
    /// Re-check a solve report against the input data
    Verify {
        input: PathBuf,
        #[arg(long)]
        report: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
}

fn emit(path: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::data(p.display(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Ingest {
            points,
            output,
            theta,
            bounds,
            prices,
        } => {
            if !(1..=31).contains(&theta) {
                return Err(CliError::Usage(format!(
                    "theta must lie in 1..=31, got {theta}"
                )));
            }
            let summary = commands::cmd_ingest(&points, &output, theta, bounds, prices.as_deref())?;
            print!("{}", summary.render());
        }
        Command::Gen {
            output,
            datasets,
            min_points,
            max_points,
            clusters,
            cluster_radius,
            spread,
            extent,
            seed,
            decimals,
        } => {
            let spec = GenSpec {
                datasets,
                min_points,
                max_points,
                clusters,
                cluster_radius,
                spread,
                extent,
                seed,
                decimals,
            };
            let rows = commands::cmd_gen(&spec, output.as_deref())?;
            if output.is_some() {
                println!("points: {rows}\ndatasets: {datasets}");
            }
        }
        Command::BuildGraph {
            input,
            run,
            adjacency,
            naive,
        } => {
            let config = run.resolve()?;
            let summary = commands::cmd_build_graph(&input, &config, adjacency.as_deref(), naive)?;
            print!("{}", summary.render());
        }
        Command::Solve {
            input,
            run,
            output,
            mask_timing,
        } => {
            let config = run.resolve()?;
            let report = commands::cmd_solve(&input, &config, mask_timing)?;
            emit(output.as_ref(), &report.to_json())?;
            for s in &report.solutions {
                eprintln!(
                    "{}: coverage {} price {} ({})",
                    s.algorithm,
                    s.coverage,
                    s.total_price,
                    if s.feasible { "feasible" } else { "INFEASIBLE" }
                );
            }
            if !report.all_feasible() {
                return Err(CliError::Infeasible(
                    "a solution failed verification".into(),
                ));
            }
        }
        Command::Bench {
            input,
            run,
            output,
            format,
            mask_timing,
        } => {
            let config = run.resolve()?;
            let rows = commands::cmd_bench(&input, &config, mask_timing)?;
            let text = match format {
                OutputFormat::Csv => bench_csv(&rows)?,
                OutputFormat::Json => bench_json(&rows),
            };
            emit(output.as_ref(), &text)?;
            if rows.iter().any(|r| !r.feasible) {
                return Err(CliError::Infeasible(
                    "a solution failed verification".into(),
                ));
            }
        }
        Command::Verify { input, report, run } => {
            let config = run.resolve()?;
            let lines = commands::cmd_verify(&input, &report, &config)?;
            let mut failed = false;
            for line in &lines {
                for (name, ok) in line.report.checks() {
                    println!(
                        "{} {name} {}",
                        line.algorithm,
                        if ok { "pass" } else { "FAIL" }
                    );
                    failed |= !ok;
                }
            }
            if failed {
                return Err(CliError::Infeasible("verification failed".into()));
            }
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
