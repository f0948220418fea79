mod check;
mod error;
mod figure;
mod fmt;
mod metric;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gaussgate::sdp::{solve_ecd_with, EcdConfig, EcdProblem};

use crate::check::{Level, Mutation};
use crate::error::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "gaussgate", version, about = "Distances between ideal Gaussian gates and their experimental approximations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write fig<ID>.csv, fig<ID>.svg and fig<ID>.meta.json into OUT.
    Figure {
        #[arg(long)]
        id: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a named quantity, e.g. `metric f_sine eta=0.9 E=1`. `metric list` shows all queries.
    Metric {
        #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
        query: Vec<String>,
    },
    /// Run the invariant suite and print a JSON-lines report; exit status 1 on any failure.
    Check {
        #[arg(long, default_value = "fast")]
        level: Level,
        #[arg(long, default_value = "none", hide = true)]
        mutate: Mutation,
    },
    /// Solve the energy-constrained diamond-distance SDP for a Choi difference in JSON.
    Sdp {
        #[arg(long)]
        choi: PathBuf,
        #[arg(long)]
        energy: f64,
        #[arg(long, default_value_t = EcdConfig::default().gap_tol)]
        gap_tol: f64,
        #[arg(long, default_value_t = EcdConfig::default().max_iter)]
        max_iter: usize,
    },
}

fn init_threads() -> CliResult<()> {
    if let Ok(v) = std::env::var("GAUSSGATE_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::BadArgument(format!("GAUSSGATE_THREADS={v} is not a positive integer")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<bool> {
    init_threads()?;
    match cli.cmd {
        Cmd::Figure { id, out } => {
            for p in figure::write(id, &out)? {
                println!("{}", p.display());
            }
            Ok(true)
        }
        Cmd::Metric { query } => {
            if query.len() == 1 && query[0] == "list" {
                print!("{}", metric::help_text());
                return Ok(true);
            }
            println!("{}", metric::evaluate(&query)?);
            Ok(true)
        }
        Cmd::Check { level, mutate } => check::run(level, mutate, &mut std::io::stdout().lock()),
        Cmd::Sdp { choi, energy, gap_tol, max_iter } => {
            let text = std::fs::read_to_string(&choi)?;
            let pb = EcdProblem::from_json(&text, energy)?;
            let cfg = EcdConfig { gap_tol, max_iter, ..Default::default() };
            println!("{}", solve_ecd_with(&pb, &cfg)?.to_json()?);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
