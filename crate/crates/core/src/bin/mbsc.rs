use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mbsc::harness::{
    preset_json, run_monte_carlo, run_scenario_with, write_aggregate, write_steps, write_sweep,
    ConfigError, ScenarioConfig, PRESETS,
};

const EXIT_CONFIG: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(name = "mbsc", version, about = "Multi-target tracking with sensor control")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write per-step records.
    Run {
        /// Scenario JSON file or preset name.
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        seed: Option<u64>,
        /// Output CSV (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record wall-clock control time instead of zero.
        #[arg(long)]
        timing: bool,
    },
    /// Monte-Carlo runs with per-step mean and std.
    Mc {
        #[arg(long)]
        scenario: String,
        #[arg(long, default_value_t = 200)]
        runs: usize,
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        timing: bool,
    },
    /// Monte-Carlo runs for each value of one dotted parameter.
    Sweep {
        #[arg(long)]
        scenario: String,
        /// Dotted path into the scenario, e.g. `control.eta`.
        #[arg(long)]
        param: String,
        /// Comma-separated JSON values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        #[arg(long, default_value_t = 200)]
        runs: usize,
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        timing: bool,
    },
    /// List presets, or write their JSON into a directory.
    Presets {
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    match path {
        Some(p) => File::create(p)
            .map(|f| Box::new(BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|e| Failure::Runtime(format!("cannot create {}: {e}", p.display()))),
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn runtime<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Runtime(e.to_string())
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run {
            scenario,
            seed,
            out,
            timing,
        } => {
            let config = ScenarioConfig::load(&scenario)?;
            let seed = seed.unwrap_or(config.seed);
            match run_scenario_with(&config, seed, None) {
                Ok(records) => write_steps(output(out.as_deref())?, &records, timing).map_err(runtime),
                Err(failure) => {
                    // Keep whatever finished before the failing step.
                    write_steps(output(out.as_deref())?, &failure.records, timing).map_err(runtime)?;
                    Err(runtime(failure))
                }
            }
        }
        Command::Mc {
            scenario,
            runs,
            parallel,
            seed,
            out,
            timing,
        } => {
            let mut config = ScenarioConfig::load(&scenario)?;
            if let Some(s) = seed {
                config.seed = s;
            }
            if runs == 0 {
                return Err(Failure::Config("--runs must be at least 1".into()));
            }
            let mc = run_monte_carlo(&config, runs, parallel).map_err(runtime)?;
            write_aggregate(output(out.as_deref())?, &mc.aggregate, timing).map_err(runtime)
        }
        Command::Sweep {
            scenario,
            param,
            values,
            runs,
            parallel,
            out,
            timing,
        } => {
            let base = ScenarioConfig::load(&scenario)?;
            if runs == 0 {
                return Err(Failure::Config("--runs must be at least 1".into()));
            }
            let mut configs = Vec::with_capacity(values.len());
            for raw in &values {
                let value: serde_json::Value = serde_json::from_str(raw)
                    .unwrap_or_else(|_| serde_json::Value::String(raw.clone()));
                configs.push((raw.clone(), base.with_param(&param, value)?));
            }
            let mut tables = Vec::with_capacity(configs.len());
            for (raw, config) in configs {
                let mc = run_monte_carlo(&config, runs, parallel).map_err(runtime)?;
                tables.push((raw, mc.aggregate));
            }
            write_sweep(output(out.as_deref())?, &tables, timing).map_err(runtime)
        }
        Command::Presets { dir } => {
            let mut stdout = io::stdout().lock();
            for name in PRESETS {
                match &dir {
                    Some(d) => {
                        let path = d.join(format!("{name}.json"));
                        std::fs::write(&path, preset_json(name).expect("listed preset"))
                            .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display())))?;
                        writeln!(stdout, "{}", path.display()).map_err(runtime)?;
                    }
                    None => writeln!(stdout, "{name}").map_err(runtime)?,
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
