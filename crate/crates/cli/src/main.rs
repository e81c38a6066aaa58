mod args;
mod commands;
mod error;

use args::{Cli, Command};
use clap::error::ErrorKind;
use clap::Parser;
use error::CliError;

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::usage("--jobs must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::usage(e.to_string()))?;
    }
    match cli.command {
        Command::Generate(a) => commands::generate(a),
        Command::Split(a) => commands::split(a),
        Command::Prob(a) => commands::prob(a),
        Command::Verify(a) => commands::verify(a),
        Command::Bound(a) => commands::bound(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Oracle(a) => commands::oracle(a),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            e.exit()
        }
        Err(e) => {
            let err = CliError::usage(e.render().to_string().trim_end());
            eprintln!("{}", err.to_json());
            std::process::exit(err.exit_code());
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Err(err) = run(cli) {
        eprintln!("{}", err.to_json());
        std::process::exit(err.exit_code());
    }
}
