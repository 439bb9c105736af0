use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tbpp_cli::commands::{cmd_bench, cmd_generate, cmd_profile, cmd_solve, emit_records, threads_from_env};
use tbpp_cli::summary::render_tables;
use tbpp_cli::{CliError, Method, RunOptions, RunStatus};
use tbpp_core::generator::InstanceClass;

#[derive(Parser)]
#[command(name = "tbpp", version, about = "Temporal bin packing: bounds, heuristics and exact solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
struct Budgets {
    /// Node budget of the method's main search
    #[arg(long)]
    node_budget: Option<u64>,
    /// Rolling horizon window in steps
    #[arg(long, default_value_t = 30)]
    delta: usize,
    /// Right branches allowed per dive path
    #[arg(long, default_value_t = 1)]
    tokens: u32,
}

impl Budgets {
    fn options(self) -> RunOptions {
        RunOptions {
            node_budget: self.node_budget,
            delta: self.delta.max(1),
            tokens: self.tokens,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write random instances named <class>_<i>_<T>.tbpp
    Generate {
        /// Instance classes (I..X); all classes if omitted
        #[arg(long, value_delimiter = ',')]
        class: Vec<InstanceClass>,
        /// Instances per class
        #[arg(long, default_value_t = 1)]
        count: u32,
        /// Step counts to truncate each instance to
        #[arg(long, value_delimiter = ',', default_value = "5,10")]
        horizons: Vec<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one method on one instance file
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        #[command(flatten)]
        budgets: Budgets,
        /// Also write the CSV row here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run methods on instance files or directories and write CSV rows
    Bench {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "auto")]
        method: Vec<Method>,
        #[command(flatten)]
        budgets: Budgets,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Turn result CSV files into performance profile points
    Profile {
        #[arg(required = true)]
        results: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Generate {
            class,
            count,
            horizons,
            seed,
            out,
        } => {
            let classes = if class.is_empty() { InstanceClass::ALL.to_vec() } else { class };
            let written = cmd_generate(&classes, count, &horizons, seed, &out)?;
            eprintln!("wrote {} instances to {}", written.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve {
            file,
            method,
            budgets,
            out,
        } => {
            let rec = cmd_solve(&file, method, &budgets.options())?;
            println!("{}: {}", rec.instance, rec.summary());
            if let Some(p) = out {
                emit_records(std::slice::from_ref(&rec), Some(&p))?;
            }
            Ok(match rec.status {
                Some(RunStatus::Budget | RunStatus::NoSolution) => ExitCode::from(2),
                _ => ExitCode::SUCCESS,
            })
        }
        Command::Bench {
            paths,
            method,
            budgets,
            out,
        } => {
            let records = cmd_bench(&paths, &method, &budgets.options(), threads_from_env()?)?;
            emit_records(&records, out.as_deref())?;
            eprint!("{}", render_tables(&records));
            Ok(ExitCode::SUCCESS)
        }
        Command::Profile { results, out } => {
            match out {
                Some(p) => {
                    let file = fs::File::create(&p).map_err(|source| CliError::Io { path: p.clone(), source })?;
                    cmd_profile(&results, file)?;
                }
                None => cmd_profile(&results, std::io::stdout().lock())?,
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
