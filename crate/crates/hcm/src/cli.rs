//! Argument parsing and the command runner.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::commands::{self, BendingOptions, MetricsOptions, Report};
use crate::config::{load_config, ConventionName, ToolConfig};
use crate::error::{CliError, CliResult};
use crate::parallel::worker_count;

/// Design, simulation and data-reduction tools for hair-clip mechanisms.
///
/// Exit codes: 0 success, 2 invalid configuration or input file,
/// 3 numerical failure, 4 infeasible design budget, 5 simulation instability.
#[derive(Debug, Parser)]
#[command(name = "hcm", version)]
pub struct Cli {
    /// Configuration file (JSON). Defaults to the reference design.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Print the report as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Directory for tables and plot data (default: `output.dir` from the
    /// configuration, else the working directory).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Also write whitespace-separated plot columns (`*.dat`).
    #[arg(long, global = true)]
    pub plot_data: bool,

    /// Section convention, overriding the configuration.
    #[arg(long, global = true, value_enum)]
    pub convention: Option<ConventionName>,

    /// Worker threads for sweeps and suites (default: all cores). Results
    /// do not depend on this.
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Buckling load, tip angle, energy barrier and snap time of one ribbon.
    Analyze,
    /// Evaluate the (l, D) design grid and write sweep.csv.
    Sweep,
    /// Find the best design under the configured objective and budget.
    Optimize,
    /// Simulate the crawler and write trajectory.csv, or run a suite.
    Simulate {
        /// Experiment-suite file (JSON list of labelled overrides); writes
        /// suite.csv.
        #[arg(long, value_name = "FILE")]
        suite: Option<PathBuf>,
    },
    /// Fit the stiffness of a three-point bending curve (disp_mm,load_N).
    FitBending {
        file: PathBuf,
        /// Support span (mm).
        #[arg(long, default_value_t = 180.0)]
        span_mm: f64,
        /// Fit window (mm); defaults to the central half of the data.
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        region_mm: Option<Vec<f64>>,
        /// Mass for the static deflection (g); defaults to the robot mass.
        #[arg(long)]
        mass_g: Option<f64>,
    },
    /// Gait metrics of a motion trace (t_s,x_mm[,y_mm][,psi1_deg,psi2_deg]).
    Metrics {
        file: PathBuf,
        /// Body length (mm); defaults to the robot's.
        #[arg(long)]
        body_length_mm: Option<f64>,
        /// Actuation period (s), enables stride length.
        #[arg(long)]
        period_s: Option<f64>,
        /// Height above the lowest point that counts as airborne (mm).
        #[arg(long, default_value_t = 1.0)]
        threshold_mm: f64,
    },
}

/// Runs a parsed command line. Returns the report text to print.
pub fn execute(cli: &Cli) -> CliResult<String> {
    let mut config = match &cli.config {
        Some(path) => load_config(path)?,
        None => ToolConfig::default(),
    };
    if let Some(c) = cli.convention {
        config.convention = Some(c);
    }
    let workers = worker_count(cli.jobs);
    let report = match &cli.command {
        Command::Analyze => commands::analyze(&config)?,
        Command::Sweep => commands::sweep(&config, workers)?,
        Command::Optimize => commands::optimize_cmd(&config)?,
        Command::Simulate { suite: None } => commands::simulate(&config)?,
        Command::Simulate { suite: Some(file) } => commands::simulate_suite(&config, file, workers)?,
        Command::FitBending { file, span_mm, region_mm, mass_g } => {
            let region_mm = region_mm.as_ref().map(|r| (r[0], r[1]));
            commands::fit_bending(&config, file, BendingOptions { span_mm: *span_mm, region_mm, mass_g: *mass_g })?
        }
        Command::Metrics { file, body_length_mm, period_s, threshold_mm } => commands::metrics(
            &config,
            file,
            MetricsOptions { body_length_mm: *body_length_mm, period_s: *period_s, threshold_mm: *threshold_mm },
        )?,
    };
    let dir = cli.out.clone().or_else(|| config.output_dir().map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("."));
    write_outputs(&report, &dir, cli.plot_data || config.plot_data())?;
    Ok(if cli.json { report.json } else { report.text })
}

fn write_outputs(report: &Report, dir: &Path, plot_data: bool) -> CliResult<()> {
    let plots = if plot_data { report.plots.as_slice() } else { &[] };
    if report.tables.is_empty() && plots.is_empty() {
        return Ok(());
    }
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    for (name, contents) in report.tables.iter().chain(plots) {
        write_atomic(&dir.join(name), contents.as_bytes())?;
    }
    Ok(())
}

/// Writes through a temporary sibling and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    let mut file = std::fs::File::create(&tmp).map_err(|e| CliError::io(&tmp, e))?;
    file.write_all(bytes).and_then(|_| file.sync_all()).map_err(|e| CliError::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}
