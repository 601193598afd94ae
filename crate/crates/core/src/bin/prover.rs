use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use septan::cli::{cmd_corpus, cmd_factor, cmd_prove};
use septan::jensen::ProveOptions;

#[derive(Parser)]
#[command(name = "prover", about = "Tangent-line and base-curve proofs of symmetric inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Prove the inequality in a problem file.
    Prove {
        file: PathBuf,
        /// Write the certificate as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        verbose: bool,
        #[arg(long, default_value_t = ProveOptions::default().numeric_tol)]
        numeric_tol: f64,
        #[arg(long, default_value_t = ProveOptions::default().seed)]
        seed: u64,
    },
    /// Run the bundled problems against their expected results.
    Corpus {
        /// Only entries whose id contains this.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Factor f - g at a touch point x0.
    Factor { f: String, g: String, x0: String },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let mut out = std::io::stdout().lock();
    let code = match cli.command {
        Command::Prove { file, json, verbose, numeric_tol, seed } => {
            let opts = ProveOptions { numeric_tol, seed, ..ProveOptions::default() };
            cmd_prove(&file, json.as_deref(), verbose, &opts, &mut out)
        }
        Command::Corpus { filter, report } => {
            cmd_corpus(filter.as_deref(), report.as_deref(), &ProveOptions::default(), &mut out)
        }
        Command::Factor { f, g, x0 } => cmd_factor(&f, &g, &x0, &mut out),
    };
    let _ = out.flush();
    ExitCode::from(code as u8)
}
