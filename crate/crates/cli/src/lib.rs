//! Command implementations behind the `hybridauth` binary. Each command
//! returns a [`Report`]: a JSON value (the stable contract) and a text
//! rendering for people.

pub mod args;
pub mod attack;
pub mod biometric;
mod error;
mod io;
pub mod params;
pub mod serve;
pub mod simulate;

pub use error::CliError;

use args::{Cli, Command};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub json: Value,
    pub text: String,
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Params(a) => params::cmd_params(a),
        Command::Simulate(a) => simulate::cmd_simulate(a, cli.seed, cli.out.as_deref()),
        Command::Attack(a) => attack::cmd_attack(a, cli.seed),
        Command::Biometric(c) => biometric::cmd_biometric(c, cli.out.as_deref()),
        Command::Serve(a) => serve::cmd_serve(a, cli.seed),
    }
}
