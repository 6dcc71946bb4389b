//! Command-line front end.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use super::{bundled, load_config, run_scenario, HarnessError, RunOptions, BUNDLED};

#[derive(Debug, Parser)]
#[command(name = "matwalk", version, about = "Simulate and check limit theorems for products of random matrices")]
pub struct Cli {
    /// Master seed (decimal or 0x-hex); overrides the scenario and MATWALK_SEED.
    #[arg(long, global = true, value_parser = parse_seed)]
    pub seed: Option<u64>,
    /// Directory receiving one subdirectory per scenario.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; changes wall time only, never the output.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the scenario described by a TOML file.
    Run { config: PathBuf },
    /// List the bundled scenarios.
    List,
    /// Run a bundled scenario by name.
    RunBuiltin { name: String },
}

fn parse_seed(s: &str) -> Result<u64, String> {
    super::config::parse_seed_text(s)
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let opts = RunOptions {
        seed: cli.seed,
        out_dir: cli.out,
        threads: cli.threads.map(usize::from),
        ..RunOptions::from_env()
    };
    let config = match &cli.command {
        Command::List => {
            for (name, text) in BUNDLED {
                let description = super::parse_config(text).map(|c| c.description).unwrap_or_default();
                println!("{name:<28} {description}");
            }
            return 0;
        }
        Command::Run { config } => load_config(config).map_err(HarnessError::from),
        Command::RunBuiltin { name } => bundled(name).ok_or_else(|| {
            HarnessError::Config(super::ConfigError {
                problems: vec![format!("no bundled scenario named `{name}` (see `matwalk list`)")],
            })
        }),
    };
    match config.and_then(|c| run_scenario(&c, &opts)) {
        Ok(outcome) => {
            println!("seed {}", outcome.seed);
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
