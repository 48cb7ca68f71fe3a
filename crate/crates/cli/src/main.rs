use std::process::ExitCode;

use clap::Parser;
use qcarpet_cli::args::Cli;
use qcarpet_cli::output::write_artifacts;
use qcarpet_cli::run::execute;
use qcarpet_cli::{selfcheck, CliError, RunConfig};

fn run(cli: &Cli) -> Result<bool, CliError> {
    let Some((command, args)) = cli.command.split() else {
        let mut all = true;
        for check in selfcheck::CHECKS {
            let outcome = (check.run)();
            all &= outcome.passed;
            let verdict = if outcome.passed { "PASS" } else { "FAIL" };
            println!("{verdict} {}: {}", check.name, outcome.detail);
        }
        return Ok(all);
    };
    let config = RunConfig::from_settings(command, &args.settings()?)?;
    let artifacts = execute(&config)?;
    for path in write_artifacts(&config.out, &artifacts)? {
        println!("{}", path.display());
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("qcarpet: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
