//! Command-line front end: generate mutants, build kill matrices, analyze
//! them and run the test-selection study over MiniLang programs.

mod args;
mod commands;
mod output;

pub use args::{BudgetArgs, Cli, Command};
pub use commands::run;

use mutlab_core::harness::HarnessError;
use mutlab_core::lang::LangError;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Program {
        path: PathBuf,
        #[source]
        source: LangError,
    },
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    NotGreen(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Read { .. } | CliError::Program { .. } | CliError::Input(_) => 2,
            CliError::NotGreen(_) => 3,
            CliError::Write { .. } | CliError::Invariant(_) => 4,
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::NotGreen(_) => CliError::NotGreen(e.to_string()),
            HarnessError::Tests(_) | HarnessError::Entry { .. } => CliError::Input(e.to_string()),
            HarnessError::Mutation(_) | HarnessError::DuplicateMutant(_) | HarnessError::Pool(_) => {
                CliError::Invariant(e.to_string())
            }
        }
    }
}
