mod args;
mod audits;
mod commands;
mod config;
mod error;
mod output;

use args::Command;
use error::CliError;

fn run(argv: Vec<String>) -> Result<(), CliError> {
    let cfg = config::run_config(argv)?;
    match &cfg.command {
        Command::ThetaEval(a) => commands::theta_eval(a, &cfg),
        Command::Integrate(a) => commands::integrate(a, &cfg),
        Command::MathieuBands(a) => commands::mathieu_bands(a, &cfg),
        Command::Invariants(a) => audits::invariants(a),
        Command::BracketCheck(a) => audits::bracket_check(a),
        Command::QuantizeCheck(a) => audits::quantize_check(a),
        Command::LegendreCheck(a) => audits::legendre_check(a),
    }
}

fn main() {
    let code = match run(std::env::args().collect()) {
        Ok(()) => 0,
        Err(CliError::Clap(e)) => {
            let _ = e.print();
            e.exit_code()
        }
        Err(e) => {
            if let CliError::Checks(failed) = &e {
                for f in failed {
                    eprintln!("failed: {f}");
                }
            }
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
