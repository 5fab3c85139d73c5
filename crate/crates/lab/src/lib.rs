//! Command-line front end for `orbitope-core`.
//!
//! Exit codes: 0 success (or a face), 1 negative verdict, 2 usage or input
//! error, 3 a bound that should hold was numerically violated.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::ffi::OsString;

use clap::Parser;

pub mod cli;
pub mod commands;
pub mod config;
pub mod exec;
pub mod output;

use cli::{Cli, Command};
use commands::{Usage, Verdict};
use config::RunConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FALSIFIED: i32 = 3;

fn dispatch(command: Command) -> Result<(RunConfig, commands::Outcome), Usage> {
    let runner = || exec::PoolRunner::from_env().map_err(Usage);
    let (cfg, outcome) = match command {
        Command::Eval { common, t, deriv } => {
            let cfg = RunConfig::from(common);
            cfg.validate().map_err(Usage)?;
            let o = commands::eval(&cfg, t, deriv);
            (cfg, o)
        }
        Command::FaceCheck { common, points, mults } => {
            let cfg = RunConfig::from(common);
            cfg.validate().map_err(Usage)?;
            let o = commands::face_check(&cfg, &points, &mults);
            (cfg, o)
        }
        Command::Phi { common, bound_only, bracket, table } => {
            let cfg = RunConfig::from(common);
            cfg.validate().map_err(Usage)?;
            let o = commands::phi(&runner()?, &cfg, bound_only, bracket, table);
            (cfg, o)
        }
        Command::Bounds { common } => {
            let cfg = RunConfig::from(common);
            cfg.validate().map_err(Usage)?;
            let o = commands::bounds(&cfg);
            (cfg, o)
        }
        Command::Inradius { common } => {
            let cfg = RunConfig::from(common);
            cfg.validate().map_err(Usage)?;
            let o = commands::inradius(&runner()?, &cfg);
            (cfg, o)
        }
        Command::Roots { common, points, mults, normal, offset } => {
            let cfg = RunConfig::from(common);
            cfg.validate().map_err(Usage)?;
            let o = commands::roots(&cfg, &points, &mults, &normal, offset);
            (cfg, o)
        }
    };
    Ok((cfg, outcome))
}

/// Parses `args` (program name first), runs the command, writes its output
/// and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let (cfg, outcome) = match dispatch(cli.command) {
        Ok(v) => v,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    let (report, verdict) = match outcome {
        Ok(v) => v,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    let written = output::encode(&report, &cfg)
        .map_err(|e| e.to_string())
        .and_then(|bytes| output::write(&bytes, &cfg).map_err(|e| e.to_string()));
    if let Err(msg) = written {
        eprintln!("error: cannot write output: {msg}");
        return EXIT_USAGE;
    }
    match verdict {
        Verdict::Success => EXIT_OK,
        Verdict::Negative => EXIT_NEGATIVE,
        Verdict::Falsified(msg) => {
            eprintln!("FALSIFIED: {msg}");
            EXIT_FALSIFIED
        }
    }
}
