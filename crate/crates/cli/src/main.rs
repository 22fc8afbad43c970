mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

/// Exit statuses, stable across releases.
pub mod exit {
    pub const OK: u8 = 0;
    pub const OTHER: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const CAPACITY: u8 = 3;
    pub const DECODE: u8 = 4;
}

/// A bad combination of flags or an unparsable flag value, detected before
/// any file is touched.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return exit::USAGE;
    }
    match err.downcast_ref::<netsteg::Error>() {
        Some(
            netsteg::Error::TypeExhausted { .. }
            | netsteg::Error::MessageTooLarge { .. }
            | netsteg::Error::ReferenceExhausted { .. }
            | netsteg::Error::BodyTooLong(_),
        ) => exit::CAPACITY,
        Some(netsteg::Error::CorruptOrWrongKey | netsteg::Error::Decode { .. }) => exit::DECODE,
        Some(netsteg::Error::BiasTooSmall(_) | netsteg::Error::InvalidParameters(_) | netsteg::Error::EmptyMessage) => {
            exit::USAGE
        }
        _ => exit::OTHER,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::from(exit::OK),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
