use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use uavcps::harness::{
    dcf_summary, run_dcf, run_orient, run_sweep, write_dcf_csv, write_orient_csv, write_sweep_csv, Config,
};
use uavcps::orient::{parse_trace, synthetic_trace, EnvironmentProfile};
use uavcps::planner::{Method, Plan, PlanEvaluation, Planner};
use uavcps::{Error, Execution, Result};

/// Energy planning for UAV compute-fly-transmit links.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    /// JSON experiment config; every field is optional.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Where to write the CSV (or JSON for `plan`). Defaults to stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Override a config field, e.g. `--set compute.gap_initial=2`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,

    /// Seed for the DCF Monte Carlo and synthetic orient traces.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Run on one thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimise one scenario with both methods, or evaluate a given plan.
    Plan {
        /// Plan to evaluate as JSON, e.g.
        /// '{"t_pre_s":1,"t_wf_s":1,"t_fly_s":10,"heading_rad":1.05,"tx_power_W":5}'.
        #[arg(long, value_name = "JSON")]
        evaluate: Option<String>,
    },
    /// Energy and delay of both methods over the packet-length sweep.
    Sweep,
    /// Saturation throughput versus transmission probability.
    Dcf {
        /// Add a slot-level simulation column with this many slots per point.
        #[arg(long, value_name = "SLOTS")]
        monte_carlo: Option<u64>,
    },
    /// Classify link observations from a trace, or from scripted profiles.
    Orient {
        /// JSON array of observation records, optionally labelled.
        #[arg(long, value_name = "PATH")]
        trace: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct PlanReport {
    method: &'static str,
    plan: Plan,
    evaluation: PlanEvaluation,
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

/// Summaries go to stdout when the data goes to a file, else to stderr.
fn print_summary(to_file: bool, text: &str) {
    if to_file {
        print!("{text}");
    } else {
        eprint!("{text}");
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut config = Config::load(cli.config.as_deref(), &cli.overrides)?;
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    if let Some(seed) = cli.seed {
        config.dcf.seed = seed;
        config.orient.seed = seed;
    }

    match cli.command {
        Command::Plan { evaluate } => {
            let planner = Planner::new(&config.scenario)?.with_grid(config.search)?.with_execution(exec);
            let reports = match evaluate {
                Some(json) => {
                    let plan: Plan = serde_json::from_str(&json).map_err(|e| Error::Config(format!("--evaluate: {e}")))?;
                    plan.validate(&config.scenario.radio)?;
                    vec![PlanReport { method: "given", plan, evaluation: planner.evaluator().evaluate(&plan) }]
                }
                None => [Method::Cps, Method::JpCc]
                    .into_iter()
                    .map(|m| {
                        let (plan, evaluation) = match planner.optimize(m) {
                            Ok(s) => (s.plan, s.evaluation),
                            Err(Error::InfeasibleScenario { best_effort, .. }) => *best_effort,
                            Err(e) => return Err(e),
                        };
                        Ok(PlanReport { method: m.label(), plan, evaluation })
                    })
                    .collect::<Result<_>>()?,
            };
            let mut out = open_out(cli.out.as_deref())?;
            serde_json::to_writer_pretty(&mut out, &reports)?;
            writeln!(out)?;
            out.flush()?;
        }
        Command::Sweep => {
            let result = run_sweep(&config.scenario, &config.search, &config.sweep, exec)?;
            let path = cli.out.or(config.sweep.output_path);
            let mut out = open_out(path.as_deref())?;
            write_sweep_csv(&result, &mut out)?;
            out.flush()?;
            print_summary(path.is_some(), &result.summary());
        }
        Command::Dcf { monte_carlo } => {
            if let Some(slots) = monte_carlo {
                config.dcf.monte_carlo_slots = slots;
            }
            let rows = run_dcf(&config.dcf, exec)?;
            let mut out = open_out(cli.out.as_deref())?;
            write_dcf_csv(&rows, &mut out)?;
            out.flush()?;
            print_summary(cli.out.is_some(), &dcf_summary(&rows));
        }
        Command::Orient { trace } => {
            let records = match trace {
                Some(p) => parse_trace(&std::fs::read_to_string(&p)?)?,
                None => EnvironmentProfile::ALL
                    .into_iter()
                    .flat_map(|p| synthetic_trace(p, config.orient.synthetic_per_profile, config.orient.seed))
                    .collect(),
            };
            let report = run_orient(&records, &config.orient.thresholds);
            let mut out = open_out(cli.out.as_deref())?;
            write_orient_csv(&report, &mut out)?;
            out.flush()?;
            print_summary(cli.out.is_some(), &report.summary());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
