//! Driver layer: randomized suites, tightness search, matrix files, reports and the CLI.

mod cli;
mod instance;
mod io;
mod report;
mod search;
mod suite;

pub use cli::cli_main;
pub use instance::{evaluate, generation_class, rank_for_index, Instance, Latent, Params};
pub use io::{load_matrix, matrix_from_record, matrix_to_record, save_matrix, FileError, MatrixRecord};
pub use report::{write_csv, write_jsonl, ReportRow};
pub use search::{minimize_gap, SearchConfig, TightnessRecord};
pub use suite::{run_suite, Aggregate, SuiteConfig, SuiteReport};

use thiserror::Error;

use crate::error::GenerateError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    File(#[from] FileError),

    #[error(transparent)]
    Generate(#[from] GenerateError),
}
