//! Command line front end: `weildesc descend | check | selftest`.
//!
//! Exit codes: 0 on success, 1 when a suite or battery assertion fails or
//! a construction step rejects the algebra, 2 on unusable input. The
//! random seed is resolved as `WEILDESC_SEED` environment variable first,
//! then `--seed`, then the `options.seed` field of the input file.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use weildesc::cli::{self, OutputFormat};

#[derive(Parser)]
#[command(
    name = "weildesc",
    version,
    about = "Differential Weil descent of differential polynomial systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Descend a system and print the generators and derivation table.
    Descend {
        /// Input description (JSON).
        input: PathBuf,
        /// Rewrite the output into differential equations over the base.
        #[arg(long)]
        geometric: bool,
        /// Also emit the components of all input derivatives up to this
        /// total order.
        #[arg(long, value_name = "N", default_value_t = 0)]
        prolong: u32,
        /// Output format.
        #[arg(long, value_parser = ["text", "json"], default_value = "text")]
        format: String,
        /// Write the output to a file instead of stdout.
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Run the randomized property suites against an input description.
    Check {
        /// Input description (JSON).
        input: PathBuf,
        /// Trials per randomized suite.
        #[arg(long, value_name = "N")]
        trials: Option<usize>,
        /// Seed for the random generator.
        #[arg(long, value_name = "S")]
        seed: Option<u64>,
    },
    /// Run the built-in battery of fixed assertions.
    Selftest,
}

fn resolve_seed(flag: Option<u64>, file_seed: u64) -> u64 {
    if let Ok(s) = std::env::var("WEILDESC_SEED") {
        if let Ok(v) = s.parse::<u64>() {
            return v;
        }
    }
    flag.unwrap_or(file_seed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Descend {
            input,
            geometric,
            prolong,
            format,
            output,
        } => {
            let loaded = match cli::load_input_path(&input, true) {
                Ok(l) => l,
                Err(e) => {
                    eprintln!("error: {}", e);
                    return ExitCode::from(cli::exit_code(&e) as u8);
                }
            };
            let format = if format == "json" {
                OutputFormat::Json
            } else {
                OutputFormat::Text
            };
            let geometric = geometric || loaded.options.geometric;
            let prolong = if prolong > 0 {
                prolong
            } else {
                loaded.options.prolong
            };
            match cli::run_descend(&loaded, geometric, prolong, format) {
                Ok(text) => {
                    if let Some(path) = output {
                        if let Err(e) = std::fs::write(&path, &text) {
                            eprintln!("error: cannot write {}: {}", path.display(), e);
                            return ExitCode::from(2);
                        }
                    } else {
                        print!("{}", text);
                        let _ = std::io::stdout().flush();
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {}", e);
                    ExitCode::from(cli::exit_code(&e) as u8)
                }
            }
        }
        Command::Check {
            input,
            trials,
            seed,
        } => {
            // For checking, table axioms are findings, not load errors, so
            // any error surfacing here means the input itself is unusable.
            let loaded = match cli::load_input_path(&input, false) {
                Ok(l) => l,
                Err(e) => {
                    eprintln!("error: {}", e);
                    return ExitCode::from(2);
                }
            };
            let trials = trials.or(loaded.options.trials).unwrap_or(25);
            let seed = resolve_seed(seed, loaded.options.seed);
            let outcome = cli::run_check(&loaded, trials, seed);
            print!("{}", outcome.output);
            let _ = std::io::stdout().flush();
            if outcome.all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Selftest => {
            let outcome = weildesc::selftest::run_selftest();
            print!("{}", outcome.output);
            let _ = std::io::stdout().flush();
            if outcome.all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
