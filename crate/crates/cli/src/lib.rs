//! Command-line front end: identity verification suites, quadrature
//! convergence sweeps, disc characterization of domain files and disc
//! recovery, with CSV or JSON output.
//!
//! Every subcommand is a plain function of a [`RunConfig`] returning an exit
//! code and report rows, so the binary and the test suites share one code path.
//! Rows may be computed in parallel but are always emitted in grid order.

pub mod characterize;
pub mod config;
pub mod converge;
pub mod output;
pub mod recover;
pub mod verify;

pub use characterize::{characterize_domain, run_characterize, CharacterizeRow};
pub use config::{CliError, Command, OutputFormat, RunConfig};
pub use converge::{run_converge, ConvergeRow};
pub use recover::{recover_domain, run_recover, RecoverRow};
pub use verify::{run_verify, Identity, VerifyRow};

/// Exit code and rendered report of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub output: String,
}

/// Runs the configured subcommand and renders its rows.
pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    let (exit_code, output) = match config.command {
        Command::Verify => {
            let (code, rows) = run_verify(config)?;
            (code, output::render(&rows, config.format)?)
        }
        Command::Converge => {
            let (code, rows) = run_converge(config)?;
            (code, output::render(&rows, config.format)?)
        }
        Command::Characterize => {
            let (code, rows) = run_characterize(config)?;
            (code, output::render(&rows, config.format)?)
        }
        Command::Recover => {
            let (code, row) = run_recover(config)?;
            (code, output::render(&[row], config.format)?)
        }
    };
    Ok(Outcome { exit_code, output })
}
