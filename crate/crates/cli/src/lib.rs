//! Command-line runner for the robustaf scenarios.
//!
//! Results go to CSV (or JSON) for external plotting, with a JSON metadata
//! sidecar recording the effective configuration, seed and versions.

pub mod config;
pub mod error;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use robustaf::chua::write_series_csv;
use robustaf::experiments::{predict_steady_state_msd, run_scenario, scenario_registry, ScenarioOutput};
use serde::Serialize;

pub use config::{parse_config, parse_config_with_seed, to_toml, ExperimentConfig, Format};
pub use error::{CliError, ConfigError};

/// Environment variable consulted when neither a flag nor the config sets a seed.
pub const SEED_ENV: &str = "ROBUSTAF_SEED";

#[derive(Debug, Parser)]
#[command(name = "robustaf", version, about = "Robust adaptive filtering experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a registry scenario or a TOML experiment config.
    Run {
        /// Config file path or registry scenario name.
        target: String,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory.
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Print the scenario registry.
    ListScenarios,
    /// Steady-state MSD prediction for RGA with β = 2 under Gaussian noise.
    Theory {
        l: usize,
        mu: f64,
        lambda: f64,
        sigma_v2: f64,
        /// Input autocorrelation trace; defaults to L (white unit-variance input).
        #[arg(long)]
        trace_rx: Option<f64>,
    },
    /// Write a raw Chua series described by a TOML config.
    ChuaGen {
        config: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

/// Parse `args` (program name first), run, and return the exit status.
/// Diagnostics go to `err`.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "robustaf: {}: {e}", e.category());
            e.exit_code()
        }
    }
}

pub fn execute(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Run {
            target,
            runs,
            seed,
            output,
            format,
        } => {
            let mut config = load_target(&target)?;
            if let Some(r) = runs {
                config.set_runs(r)?;
            }
            if let Some(s) = seed {
                config.seed = s;
            }
            if let Some(o) = output {
                config.output = o;
            }
            if let Some(f) = format {
                config.format = f.into();
            }
            let written = run_experiment(&config)?;
            for p in written {
                writeln!(out, "wrote {}", p.display())?;
            }
        }
        Command::ListScenarios => {
            for s in scenario_registry() {
                writeln!(out, "{:<8} {}", s.name, s.description)?;
            }
        }
        Command::Theory {
            l,
            mu,
            lambda,
            sigma_v2,
            trace_rx,
        } => {
            let tr = trace_rx.unwrap_or(l as f64);
            let p = predict_steady_state_msd(l, mu, lambda, sigma_v2, tr)?;
            writeln!(out, "eta       {:.6}", p.eta)?;
            writeln!(out, "eta_max   {:.6}", p.eta_max)?;
            writeln!(out, "mu_max    {:.6}", p.mu_max)?;
            writeln!(out, "msd       {:.6}", p.msd)?;
            writeln!(out, "msd_db    {:.3}", p.msd_db)?;
        }
        Command::ChuaGen { config, output } => {
            let text = fs::read_to_string(&config)
                .map_err(|e| CliError::Io(format!("{}: {e}", config.display())))?;
            let mut c = config::parse_chua_config(&text)?;
            if let Some(o) = output {
                c.output = o;
            }
            if let Some(dir) = c.output.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            let series = c.chua.series(c.n)?;
            write_series_csv(&c.output, &series)?;
            writeln!(out, "wrote {}", c.output.display())?;
        }
    }
    Ok(())
}

/// Seed used when neither the command line nor the config sets one.
pub fn default_seed() -> Result<u64, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::Config(ConfigError::validation(
                SEED_ENV,
                format!("{SEED_ENV} must be a non-negative integer, got '{v}'"),
            ))
        }),
        Err(_) => Ok(0),
    }
}

/// A readable file is parsed as a config; anything else is a registry name.
pub fn load_target(target: &str) -> Result<ExperimentConfig, CliError> {
    let seed = default_seed()?;
    let path = Path::new(target);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{target}: {e}")))?;
        Ok(parse_config_with_seed(&text, seed)?)
    } else {
        Ok(ExperimentConfig::named(target, seed)?)
    }
}

#[derive(Serialize)]
struct Metadata<'a> {
    name: &'a str,
    seed: u64,
    library: &'static str,
    library_version: &'static str,
    cli_version: &'static str,
    results_file: String,
    config: &'a ExperimentConfig,
    summary: Summary,
}

#[derive(Serialize)]
#[serde(untagged)]
enum Summary {
    SysId(Vec<SysIdSummary>),
    TimeSeries(Vec<KernelSummary>),
    Theory(Vec<robustaf::experiments::registry::TheoryComparison>),
}

#[derive(Serialize)]
struct SysIdSummary {
    label: String,
    steady_state_db: f64,
    median_steady_state_db: f64,
    median_crossing: f64,
    diverged_runs: usize,
}

#[derive(Serialize)]
struct KernelSummary {
    label: String,
    test_mse: f64,
    dictionary_size: usize,
    degenerate_events: usize,
}

fn summarize(out: &ScenarioOutput) -> Summary {
    match out {
        ScenarioOutput::SysId(t) => Summary::SysId(
            t.algorithms
                .iter()
                .map(|a| SysIdSummary {
                    label: a.label.clone(),
                    steady_state_db: a.steady_state_db(),
                    median_steady_state_db: a.median_steady_state_db(),
                    median_crossing: a.median_crossing(),
                    diverged_runs: a.diverged_runs,
                })
                .collect(),
        ),
        ScenarioOutput::TimeSeries(t) => Summary::TimeSeries(
            t.algorithms
                .iter()
                .map(|a| KernelSummary {
                    label: a.label.clone(),
                    test_mse: a.test_mse,
                    dictionary_size: a.dictionary_size,
                    degenerate_events: a.degenerate_events,
                })
                .collect(),
        ),
        ScenarioOutput::Theory(t) => Summary::Theory(t.comparisons.clone()),
    }
}

fn json_err(e: serde_json::Error) -> CliError {
    CliError::Io(e.to_string())
}

/// Run `config` and write the results file and its metadata sidecar.
/// Returns the paths written.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<PathBuf>, CliError> {
    config.validate()?;
    log::info!("running {} with seed {}", config.name, config.seed);
    let result = run_scenario(&config.scenario, config.seed)?;

    fs::create_dir_all(&config.output)
        .map_err(|e| CliError::Io(format!("{}: {e}", config.output.display())))?;
    let results = config
        .output
        .join(format!("{}.{}", config.name, config.format.extension()));
    let file = std::io::BufWriter::new(
        fs::File::create(&results).map_err(|e| CliError::Io(format!("{}: {e}", results.display())))?,
    );
    match (config.format, &result) {
        (Format::Csv, r) => r.write_csv(file, &config.name)?,
        (Format::Json, ScenarioOutput::SysId(t)) => serde_json::to_writer(file, t).map_err(json_err)?,
        (Format::Json, ScenarioOutput::TimeSeries(t)) => {
            serde_json::to_writer(file, t).map_err(json_err)?
        }
        (Format::Json, ScenarioOutput::Theory(t)) => serde_json::to_writer(file, t).map_err(json_err)?,
    }

    let meta_path = config.output.join(format!("{}.meta.json", config.name));
    let meta = Metadata {
        name: &config.name,
        seed: config.seed,
        library: "robustaf",
        library_version: robustaf::VERSION,
        cli_version: env!("CARGO_PKG_VERSION"),
        results_file: results
            .file_name()
            .map(|f| f.to_string_lossy().into_owned())
            .unwrap_or_default(),
        config,
        summary: summarize(&result),
    };
    let text = serde_json::to_string_pretty(&meta).map_err(json_err)?;
    fs::write(&meta_path, text + "\n")
        .map_err(|e| CliError::Io(format!("{}: {e}", meta_path.display())))?;
    Ok(vec![results, meta_path])
}
