//! Command-line surface over `lepm-core`. Every subcommand writes one table
//! as CSV (default) or JSON to `--out` or standard output.
//!
//! Exit codes: 0 on success, 2 for an invalid configuration, 3 when the
//! computation fails.

pub mod args;
pub mod commands;
pub mod continuation;
pub mod output;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, IsTerminal, Write};

use clap::error::ErrorKind;
use clap::Parser;

use args::{Args, Command};
use output::Table;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Invalid(String),
    Compute(String),
}

impl CliError {
    pub fn invalid(e: impl std::fmt::Display) -> Self {
        CliError::Invalid(e.to_string())
    }

    pub fn compute(e: impl std::fmt::Display) -> Self {
        CliError::Compute(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Compute(_) => EXIT_COMPUTE,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Invalid(m) | CliError::Compute(m) => m,
        }
    }
}

pub fn execute(args: &Args) -> Result<Table, CliError> {
    let command = args
        .command
        .ok_or_else(|| CliError::Invalid("no subcommand given (on the command line or as `command` in the config)".into()))?;
    match command {
        Command::Spectrum => commands::cmd_spectrum(args),
        Command::Sweep => commands::cmd_sweep(args),
        Command::LepmScan => commands::cmd_lepm_scan(args),
        Command::PhaseDiagram => commands::cmd_phase_diagram(args),
        Command::Boundary => commands::cmd_boundary(args),
        Command::Quench => commands::cmd_quench(args),
        Command::ZenoCheck => commands::cmd_zeno_check(args),
        Command::Jordan => commands::cmd_jordan(args),
    }
}

/// Parses flags, merges the config file, runs the subcommand and writes the
/// result. Returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INVALID,
            };
        }
    };
    match run_parsed(args) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            report(&e);
            e.exit_code()
        }
    }
}

fn run_parsed(cli: Args) -> Result<(), CliError> {
    let args = match &cli.config {
        Some(path) => {
            let file = Args::load_config(path)?;
            cli.clone().merge(file)
        }
        None => cli.clone(),
    };
    let table = match args.threads {
        Some(0) => return Err(CliError::Invalid("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(CliError::compute)?
            .install(|| execute(&args))?,
        None => execute(&args)?,
    };
    let format = args.format.unwrap_or_default();
    match &args.out {
        Some(path) => {
            let f = File::create(path)
                .map_err(|e| CliError::Invalid(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(f);
            table.write(format, &args, &mut w)?;
            w.flush().map_err(CliError::compute)
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            table.write(format, &args, &mut w)?;
            w.flush().map_err(CliError::compute)
        }
    }
}

fn report(e: &CliError) {
    let color = std::env::var_os("NO_COLOR").map_or(true, |v| v.is_empty()) && io::stderr().is_terminal();
    let label = if color { "\x1b[1;31merror\x1b[0m" } else { "error" };
    eprintln!("{label}: {}", e.message());
}
