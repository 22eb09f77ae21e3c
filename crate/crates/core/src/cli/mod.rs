//! Command-line front end. `run` parses arguments, executes one command and
//! returns the process exit code; all output goes to the given writers.

pub mod commands;
pub mod config;
pub mod records;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::WorkspaceConfig;
pub use report::{CaseResult, Exit, RunReport, Summary};

#[derive(Debug, Parser)]
#[command(name = "tfnp", version, about = "Total search problems, reductions, Herbrand consistency search and disjoint pairs")]
pub struct Cli {
    /// JSON workspace config; unset fields keep their defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Restricts `selftest` to items with this tag, name or number.
    #[arg(long, global = true)]
    pub filter: Option<String>,
    /// Overrides the config gate cap.
    #[arg(long = "gate-cap", global = true)]
    pub gate_cap: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance of a problem record by exhaustive search.
    Solve {
        problem: PathBuf,
        /// A decimal number or `<len>:<hex>`.
        instance: String,
    },
    /// Check a reduction record against every witness of every image.
    CheckReduction {
        reduction: PathBuf,
        /// `nums:A..B` or `strings:W`; defaults to the record's domain.
        #[arg(long)]
        domain: Option<String>,
    },
    /// Write the Herbrand expansion of a sentence file as DIMACS.
    Herbrand {
        sentence: PathBuf,
        #[arg(long, default_value_t = 0)]
        depth: usize,
        /// Keep only the first N tuples.
        #[arg(long)]
        max_tuples: Option<usize>,
        #[arg(long, default_value = "expansion.cnf")]
        out: PathBuf,
        /// Solve the expansion and check the model against the ground conjunction.
        #[arg(long)]
        solve: bool,
    },
    /// Run the acceptance checklist.
    Selftest,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return if code == 0 { Exit::Ok.code() } else { Exit::Input.code() };
        }
    };
    let mut cfg = match &cli.config {
        Some(p) => match WorkspaceConfig::load(p) {
            Ok(c) => c,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return Exit::Input.code();
            }
        },
        None => WorkspaceConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(g) = cli.gate_cap {
        cfg.gate_cap = g;
    }
    if let Err(e) = cfg.validate() {
        let _ = writeln!(err, "error: {e}");
        return Exit::Input.code();
    }
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let result = match &cli.command {
        Command::Solve { problem, instance } => commands::solve(&cfg, echo, problem, instance),
        Command::CheckReduction { reduction, domain } => {
            commands::check_reduction(&cfg, echo, reduction, domain.as_deref())
        }
        Command::Herbrand { sentence, depth, max_tuples, out: path, solve } => {
            commands::herbrand(&cfg, echo, sentence, *depth, *max_tuples, path, *solve)
        }
        Command::Selftest => Ok(commands::selftest(&cfg, echo, cli.filter.as_deref())),
    };
    match result {
        Ok(report) => {
            let _ = if cli.json { writeln!(out, "{}", report.to_json()) } else { write!(out, "{}", report.to_text()) };
            report.exit.code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            Exit::Input.code()
        }
    }
}
