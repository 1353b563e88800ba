use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use oplab::examples::{run_example, ExampleError};
use oplab::grid::{values, write_csv, Quantity};
use oplab::{analyze, cap_from_env, read_config, AnalyzeOptions, CliError, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK};

#[derive(Parser)]
#[command(name = "oplab", version, about = "Composition operator criteria on Hardy, model and de Branges spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the tasks of a JSON config and emit a report bundle.
    Analyze {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exit 4 when a criterion is violated.
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        no_timings: bool,
    },
    /// Reproduce a canned example: 3.6, 3.7 or model-translation.
    Example {
        name: String,
        #[arg(long)]
        explain: bool,
    },
    /// Write a per-point quantity over the config grid as CSV.
    Grid {
        config: PathBuf,
        #[arg(long)]
        quantity: Quantity,
        #[arg(long)]
        out: PathBuf,
    },
}

fn fail(e: impl std::fmt::Display, code: i32) -> i32 {
    eprintln!("oplab: {e}");
    code
}

fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Analyze { config, out, strict, jobs, no_timings } => {
            let cap = match cap_from_env() {
                Ok(c) => c,
                Err(e) => return fail(e, EXIT_CONFIG),
            };
            let cfg = match read_config(&config) {
                Ok(c) => c,
                Err(e) => return fail(e, EXIT_CONFIG),
            };
            let opts = AnalyzeOptions { strict, jobs, timings: !no_timings, cap };
            let (bundle, code) = match analyze(&cfg, &opts) {
                Ok(r) => r,
                Err(e) => {
                    let code = e.exit_code();
                    return fail(e, code);
                }
            };
            let text = bundle.to_json();
            match out {
                Some(p) => {
                    if let Err(e) = std::fs::write(&p, text) {
                        return fail(CliError::Io(format!("cannot write {}: {e}", p.display())), EXIT_CONFIG);
                    }
                }
                None => print!("{text}"),
            }
            code
        }
        Command::Example { name, explain } => match run_example(&name) {
            Ok(r) => {
                if explain {
                    println!("{}", r.explain);
                }
                print!("{}", r.table());
                if r.all_pass() {
                    EXIT_OK
                } else {
                    EXIT_NUMERICAL
                }
            }
            Err(ExampleError::Cli(e)) => fail(e, EXIT_CONFIG),
            Err(ExampleError::Numerical(e)) => fail(e, EXIT_NUMERICAL),
        },
        Command::Grid { config, quantity, out } => {
            let setup = match cap_from_env().and_then(|cap| read_config(&config)?.setup(cap)) {
                Ok(s) => s,
                Err(e) => return fail(e, EXIT_CONFIG),
            };
            let rows = match values(&setup, quantity) {
                Ok(r) => r,
                Err(e) => return fail(e, EXIT_NUMERICAL),
            };
            match write_csv(&out, &rows) {
                Ok(()) => EXIT_OK,
                Err(e) => fail(e, EXIT_CONFIG),
            }
        }
    }
}

fn main() -> ExitCode {
    let code = run(Cli::parse());
    ExitCode::from(code as u8)
}
