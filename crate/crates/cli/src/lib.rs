//! Command-line front end for gitmilnor: parsing, JSON reports, corpus
//! generation and the theorem-verification harnesses.

pub mod commands;
pub mod corpus;
pub mod harness;
pub mod report;

pub use commands::{run, run_args, Cli};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] gitmilnor_core::Error),
    #[error("corpus generation failed: {0}")]
    Corpus(String),
}

impl CliError {
    /// Every error here is a problem with the input.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
