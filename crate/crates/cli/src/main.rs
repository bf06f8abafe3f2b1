mod args;
mod commands;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use kszforms::Error;

use args::{Cli, Command, Common};
use commands::{Outcome, Usage};

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_EXHAUSTED: u8 = 3;

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Constants(a) => &a.common,
        Command::Sample(a) => &a.common,
        Command::Norm(a) => &a.common,
        Command::Window(a) => &a.common,
        Command::Hl(a) => &a.common,
        Command::Sweep(a) => &a.common,
    }
}

fn dispatch(cmd: Command) -> anyhow::Result<Outcome> {
    match cmd {
        Command::Constants(a) => commands::constants(a),
        Command::Sample(a) => commands::sample(a),
        Command::Norm(a) => commands::norm(a),
        Command::Window(a) => commands::window(a),
        Command::Hl(a) => commands::hl(a),
        Command::Sweep(a) => commands::sweep(a),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Usage>().is_some() {
        return EXIT_USAGE;
    }
    match err.downcast_ref::<Error>() {
        Some(
            Error::BudgetExceeded { .. }
            | Error::NotCertified { .. }
            | Error::Uncertifiable { .. }
            | Error::NotExact(_)
            | Error::NoConvergence { .. },
        ) => EXIT_EXHAUSTED,
        Some(
            Error::InvalidShape(_)
            | Error::DimensionMismatch { .. }
            | Error::CoordinateOutOfRange { .. }
            | Error::InvalidExponent(_)
            | Error::InvalidArgument(_)
            | Error::Hypothesis(_)
            | Error::Decode(_),
        ) => EXIT_USAGE,
        _ => EXIT_VIOLATION,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (output, workers) = {
        let c = common(&cli.command);
        (c.output.clone(), c.workers)
    };

    let pool = match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start {workers} workers: {e}");
            return ExitCode::from(EXIT_VIOLATION);
        }
    };
    let result = pool.install(|| dispatch(cli.command));

    match result {
        Ok(outcome) => {
            let written = match &output {
                Some(path) => fs::write(path, &outcome.text),
                None => std::io::stdout().lock().write_all(outcome.text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: writing output: {e}");
                return ExitCode::from(EXIT_VIOLATION);
            }
            if outcome.violated {
                eprintln!("error: a ratio fell below the universal lower constant");
                return ExitCode::from(EXIT_VIOLATION);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", format!("{e:#}").replace('\n', " "));
            ExitCode::from(exit_code(&e))
        }
    }
}
