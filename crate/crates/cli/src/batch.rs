//! Batch runs from a TOML file:
//!
//! ```toml
//! runs = ["verify-main --n 3 --t 3 --N 6"]
//!
//! [[grid]]
//! command = "verify-main"
//! n = [3, 4]
//! t = 3
//! N = [6, 7]
//! ```
//!
//! Each grid table expands to the product of its value lists, keys in
//! sorted order. Only verification subcommands may appear.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser};
use serde::Deserialize;
use toml::{Table, Value};

use crate::commands::{execute, Command, Context};
use crate::output::Output;
use crate::{CliError, CliResult};

#[derive(Debug, Args)]
pub struct BatchArgs {
    /// TOML file listing the runs.
    #[arg(value_name = "CONFIG")]
    config: PathBuf,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    #[serde(default)]
    runs: Vec<String>,
    #[serde(default)]
    grid: Vec<Table>,
}

#[derive(Debug, Parser)]
#[command(no_binary_name = true)]
struct Run {
    #[command(subcommand)]
    command: Command,
}

pub fn run(args: &BatchArgs, ctx: &Context) -> CliResult<Output> {
    let source = fs::read_to_string(&args.config)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", args.config.display())))?;
    let mut reports = Vec::new();
    for argv in expand(&source)? {
        let run = Run::try_parse_from(&argv)
            .map_err(|e| CliError::Usage(format!("batch run `{}`: {}", argv.join(" "), e.render())))?;
        if !run.command.is_verification() {
            return Err(CliError::Usage(format!(
                "batch run `{}`: only verify-* subcommands produce reports",
                argv.join(" ")
            )));
        }
        match execute(&run.command, ctx)? {
            Output::Report(r) => reports.push(*r),
            _ => unreachable!("verification commands return reports"),
        }
    }
    Ok(Output::Reports(reports))
}

/// Every run of the config as an argument vector.
pub fn expand(source: &str) -> CliResult<Vec<Vec<String>>> {
    let config: Config = toml::from_str(source).map_err(|e| CliError::Usage(format!("batch config: {e}")))?;
    let mut out: Vec<Vec<String>> = config
        .runs
        .iter()
        .map(|r| r.split_whitespace().map(str::to_string).collect())
        .collect();
    for (i, table) in config.grid.iter().enumerate() {
        out.extend(expand_grid(table).map_err(|m| CliError::Usage(format!("batch config grid {}: {m}", i + 1)))?);
    }
    Ok(out)
}

fn expand_grid(table: &Table) -> Result<Vec<Vec<String>>, String> {
    let command = match table.get("command") {
        Some(Value::String(s)) => s.clone(),
        _ => return Err("needs a string `command`".into()),
    };
    let mut rows = vec![vec![command]];
    for (key, value) in table.iter().filter(|(k, _)| *k != "command") {
        let choices = match value {
            Value::Array(items) => items.iter().map(scalar).collect::<Result<Vec<_>, _>>()?,
            v => vec![scalar(v)?],
        };
        rows = rows
            .into_iter()
            .flat_map(|row| {
                choices.iter().map(move |c| {
                    let mut r = row.clone();
                    r.push(format!("--{key}"));
                    r.push(c.clone());
                    r
                })
            })
            .collect();
    }
    Ok(rows)
}

fn scalar(v: &Value) -> Result<String, String> {
    match v {
        Value::Integer(i) => Ok(i.to_string()),
        Value::String(s) => Ok(s.clone()),
        other => Err(format!("unsupported value `{other}`")),
    }
}
