use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use sinegordon::io::{parse_config, parse_times, run, ExportTransform, RunConfig};
use sinegordon::scenarios::{builtin_scenario, SCENARIO_NAMES};

/// Two-dimensional sine-Gordon soliton solver.
#[derive(Parser, Debug)]
#[command(name = "sinegordon", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a scenario and write snapshots, error tables and diagnostics.
    Run(RunArgs),
    /// List the built-in scenarios.
    ListScenarios,
    /// Print a scenario's formulas and defaults.
    Describe {
        #[arg(long)]
        scenario: String,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Built-in scenario name.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    scenario: Option<String>,
    /// Config file of key=value lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    dx: Option<f64>,
    #[arg(long)]
    dy: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    /// Comma-separated snapshot times.
    #[arg(long)]
    snapshots: Option<String>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,
    /// raw, half-sine or both.
    #[arg(long)]
    transform: Option<ExportTransform>,
    /// Also write diagnostics.csv (energy, ring radius).
    #[arg(long)]
    diagnostics: bool,
    /// Replace existing output files.
    #[arg(long)]
    overwrite: bool,
    /// Leave the wall-clock line out of run_meta.txt.
    #[arg(long)]
    no_timestamp: bool,
}

impl RunArgs {
    fn into_config(self) -> Result<RunConfig> {
        let mut cfg = match (&self.scenario, &self.config) {
            (Some(name), None) => RunConfig::new(name.clone()),
            (None, Some(path)) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                parse_config(&text).with_context(|| format!("in {}", path.display()))?
            }
            _ => bail!("give exactly one of --scenario or --config"),
        };
        if let Some(v) = self.out {
            cfg.out_dir = v;
        }
        cfg.dt = self.dt.or(cfg.dt);
        cfg.dx = self.dx.or(cfg.dx);
        cfg.dy = self.dy.or(cfg.dy);
        cfg.t_end = self.t_end.or(cfg.t_end);
        cfg.beta = self.beta.or(cfg.beta);
        cfg.phi = self.phi.or(cfg.phi);
        if let Some(s) = self.snapshots {
            cfg.snapshots = Some(parse_times(&s)?);
        }
        if let Some(t) = self.transform {
            cfg.transform = t;
        }
        cfg.diagnostics |= self.diagnostics;
        cfg.overwrite |= self.overwrite;
        cfg.timestamp = !self.no_timestamp;
        Ok(cfg)
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::ListScenarios => {
            for name in SCENARIO_NAMES {
                let spec = builtin_scenario(name)?;
                println!("{name:<22}{}", spec.title);
            }
        }
        Command::Describe { scenario } => {
            print!("{}", builtin_scenario(&scenario)?.describe());
        }
        Command::Run(args) => {
            let cfg = args.into_config()?;
            let out = run(&cfg)?;
            for r in &out.errors {
                println!("t={:<8} l_inf={:.4e} rms={:.4e}", r.time, r.l_inf, r.rms);
            }
            println!(
                "wrote {} snapshot file(s) to {}",
                out.snapshot_files.len(),
                cfg.out_dir.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
