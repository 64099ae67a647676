//! Runs test suites against the original program and its mutants.

pub mod matrix;
pub mod suite;

pub use matrix::{build_kill_matrix, kill_check, BudgetConfig, CellRecord, KillMatrix, MatrixError, MatrixRun};
pub use suite::{load_tests, verify_green, Expectation, GreenReport, TestCase, TestResult};

use crate::lang::LangError;
use crate::mutation::MutationError;
use thiserror::Error;

/// Step budget for runs of the unmutated program.
pub const BASELINE_BUDGET: u64 = 1_000_000;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("malformed test suite: {0}")]
    Tests(#[from] serde_json::Error),
    #[error("test `{test}` cannot run: {source}")]
    Entry {
        test: String,
        #[source]
        source: LangError,
    },
    #[error("suite is not green on the original program; failing tests: {}", .0.join(", "))]
    NotGreen(Vec<String>),
    #[error(transparent)]
    Mutation(#[from] MutationError),
    #[error("mutant id {0} appears twice")]
    DuplicateMutant(u32),
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}
