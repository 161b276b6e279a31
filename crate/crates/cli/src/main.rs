//! `cover-switch`: verify the extremal bounds and drive the switching
//! machinery from the command line.
//!
//! Exit status is 0 on success, 1 when a verification reports `pass =
//! false`, and 2 on usage, parse or I/O errors. Error lines start with
//! `error:`.

mod batch;
mod commands;
mod output;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, ValueEnum};

use commands::{Command, Context};
use output::Output;

#[derive(Debug, Parser)]
#[command(name = "cover-switch", version, about = "Edge switching and exact extremal checks for K_n-covered graphs")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses every core, 1 runs sequentially.
    #[arg(long, global = true, env = "COVER_SWITCH_JOBS", default_value_t = 0)]
    jobs: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Errors that end the process with status 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(cover_switch::Error),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<cover_switch::Error> for CliError {
    fn from(e: cover_switch::Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            let _ = io::stdout().flush();
            eprintln!("error: {}", one_line(&e.to_string()));
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    let ctx = Context::new(cli.global.jobs);
    let out = match &cli.command {
        Command::Batch(args) => batch::run(args, &ctx)?,
        command => commands::execute(command, &ctx)?,
    };
    emit(&out, cli.global.format, cli.global.out.as_ref())?;
    Ok(if out.failed() { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn emit(out: &Output, format: Format, path: Option<&PathBuf>) -> CliResult<()> {
    let body = out.render(format);
    match path {
        Some(p) => fs::write(p, body).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}"))),
    }
}

fn one_line(s: &str) -> String {
    s.lines().map(str::trim).filter(|l| !l.is_empty()).collect::<Vec<_>>().join("; ")
}
