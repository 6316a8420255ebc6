use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dynavg::scenario::{self, ExecuteOptions, BUNDLED};
use dynavg::{graph, signal, Error};

#[derive(Parser)]
#[command(name = "dynavg", version, about = "Dynamic average consensus simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory for CSV, metrics and SVG files
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write an SVG plot
    #[arg(long, global = true)]
    svg: bool,
    /// Override the scenario seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the integrator step
    #[arg(long, global = true)]
    step: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file (or a bundled scenario name)
    Run { config: PathBuf },
    /// Check a scenario without running it
    Validate { config: PathBuf },
    /// Run every *.json scenario in a directory in parallel
    Batch { dir: PathBuf },
    /// List bundled scenarios, graph presets and input presets
    Presets,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Divergence { .. } => 2,
        Error::Io(_) => 3,
        _ => 1,
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_code(&e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = ExecuteOptions {
        out_dir: cli.out,
        svg: cli.svg,
        seed: cli.seed,
        step: cli.step,
    };
    match cli.command {
        Command::Run { config } => {
            match scenario::load_scenario(&config).and_then(|cfg| scenario::execute(&cfg, &opts)) {
                Ok(s) => {
                    println!("{}", s.line);
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::Validate { config } => {
            let cfg = scenario::load_scenario(&config).map(|c| c.with_overrides(&opts));
            match cfg.and_then(|c| scenario::validate_report(&c)) {
                Ok(report) => {
                    print!("{report}");
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::Batch { dir } => {
            let results = match scenario::run_batch(&dir, &opts) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            let mut worst = 0;
            for (path, r) in results {
                match r {
                    Ok(s) => println!("{}", s.line),
                    Err(e) => {
                        eprintln!("{}: error: {e}", path.display());
                        worst = worst.max(exit_code(&e));
                    }
                }
            }
            ExitCode::from(worst)
        }
        Command::Presets => {
            println!("scenarios:");
            for (name, text) in BUNDLED {
                let desc = scenario::ScenarioConfig::from_json(text)
                    .ok()
                    .and_then(|c| c.description)
                    .unwrap_or_default();
                println!("  {name:<14} {desc}");
            }
            println!("graphs: {}", graph::PRESET_NAMES.join(", "));
            println!("inputs: {}", signal::PRESET_NAMES.join(", "));
            ExitCode::SUCCESS
        }
    }
}
