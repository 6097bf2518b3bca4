// Negated comparisons are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod design;
mod failure;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use failure::{Failure, Outcome, USAGE};

/// Size the worker pool from `OIBDP_THREADS` when set.
fn configure_threads() -> Outcome<()> {
    let Ok(text) = std::env::var("OIBDP_THREADS") else {
        return Ok(());
    };
    let threads: usize = text.trim().parse().ok().filter(|t| *t > 0).ok_or_else(|| {
        Failure::usage(format!(
            "OIBDP_THREADS must be a positive integer, got '{text}'"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| {
            Failure::new(
                failure::CHECK_FAILED,
                format!("cannot size thread pool: {e}"),
            )
        })
}

fn dispatch(command: &Command) -> Outcome<u8> {
    configure_threads()?;
    match command {
        Command::Bdp(a) => commands::bdp::run(a),
        Command::Sweep(a) => commands::sweep::run(a),
        Command::Attack(a) => commands::attack::run(a),
        Command::Verify(a) => commands::verify::run(a),
        Command::Expected(a) => commands::expected::run(a),
        Command::Asymptote(a) => commands::asymptote::run(a),
        Command::SvrCheck(a) => commands::svr_check::run(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("oibdp: {f}");
            ExitCode::from(f.code)
        }
    }
}
