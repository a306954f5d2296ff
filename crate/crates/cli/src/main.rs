//! `flux`: typecheck, evaluate and test query and update programs.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Settings;

#[derive(Parser, Debug)]
#[command(
    name = "flux",
    version,
    about = "Regular-expression types for XML queries and updates"
)]
struct Cli {
    /// Print a JSON report on stdout instead of human-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Nesting bound for enumerated values.
    #[arg(long, global = true, default_value_t = 3, value_name = "N")]
    max_depth: usize,
    /// Forest-length bound for enumerated values.
    #[arg(long, global = true, default_value_t = 3, value_name = "N")]
    max_width: usize,
    /// Maximum depth of nested function and procedure calls.
    #[arg(long, global = true, default_value_t = flux_core::eval::DEFAULT_RECURSION_LIMIT, value_name = "N")]
    recursion_limit: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Typecheck a program; exit 1 if it is ill-typed.
    Check { file: PathBuf },
    /// Print the synthesized type of a program's main query or update.
    Type { file: PathBuf },
    /// Decide T1 <: T2; exit 0 if it holds and 1 if not.
    Subtype {
        t1: String,
        t2: String,
        /// File of `type X = t;` declarations.
        #[arg(long, value_name = "FILE")]
        sig: Option<PathBuf>,
    },
    /// Evaluate a query program.
    Eval {
        file: PathBuf,
        /// Value of a declared variable, e.g. `--env 'x=a[b[]]'`. Repeatable.
        #[arg(long = "env", value_name = "NAME=VALUE")]
        env: Vec<String>,
    },
    /// Apply an update program to an input value.
    RunUpdate {
        file: PathBuf,
        #[arg(long, value_name = "VALUE")]
        input: String,
        #[arg(long = "env", value_name = "NAME=VALUE")]
        env: Vec<String>,
    },
    /// Check a program against its types on enumerated inputs.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Inputs per declaration, and cases per suite with `--suites`.
        #[arg(long, default_value_t = 200)]
        cases: usize,
        /// Also run the generic property suites.
        #[arg(long)]
        suites: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let settings = Settings {
        json: cli.json,
        bounds: flux_core::Bounds {
            depth: cli.max_depth,
            width: cli.max_width,
        },
        recursion_limit: cli.recursion_limit,
    };
    let result = match &cli.command {
        Command::Check { file } => commands::check(&settings, file),
        Command::Type { file } => commands::type_of(&settings, file),
        Command::Subtype { t1, t2, sig } => commands::subtype(&settings, t1, t2, sig.as_deref()),
        Command::Eval { file, env } => commands::eval(&settings, file, env),
        Command::RunUpdate { file, input, env } => {
            commands::run_update(&settings, file, input, env)
        }
        Command::Oracle {
            file,
            seed,
            cases,
            suites,
        } => commands::oracle(&settings, file, *seed, *cases, *suites),
    };
    ExitCode::from(result.finish(&settings))
}
