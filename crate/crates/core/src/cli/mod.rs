//! Problem files, the bundled corpus and the `prover` commands.

pub mod commands;
pub mod corpus;
pub mod narrative;
pub mod problem_file;

pub use commands::{cmd_corpus, cmd_factor, cmd_prove, exit_code, EXIT_EXACT, EXIT_FAILURE, EXIT_INPUT, EXIT_NUMERIC};
pub use corpus::{corpus, run_corpus, run_entry, CorpusReport, EntryReport, Verification, CORPUS_FILES};
pub use narrative::render;
pub use problem_file::{parse_interval, parse_problem_file, Expected, ProblemFile, ProblemFileError, Status};
