use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use nlk::catalog;
use nlk::report::{self, Command, RunOptions};
use nlk::scenario::Scenario;
use nlk::{Error, Execution};

#[derive(Parser)]
#[command(name = "nlk", version, about = "Exact checks for Schürmann triples and generating functionals")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Override the scenario's word-length bound.
    #[arg(long, global = true)]
    max_word_length: Option<usize>,
    /// Run everything on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the representation and cocycle.
    Validate { file: PathBuf },
    /// Decide whether a generating functional exists.
    Solve { file: PathBuf },
    /// Split off the Gaussian part and attempt a Lévy-Khinchin decomposition.
    Decompose { file: PathBuf },
    /// Verify the Schürmann-triple identities up to the word-length bound.
    Verify { file: PathBuf },
    /// Cross-check well-definedness by brute force over a normal form.
    Oracle { file: PathBuf },
    /// Report which properties the scenario witnesses.
    Classify { file: PathBuf },
    /// Independently confirm a report produced by another command.
    Recheck { file: PathBuf },
    /// The built-in catalog of worked examples.
    Catalog {
        #[command(subcommand)]
        action: CatalogCmd,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    List,
    Run { id: String },
    RunAll,
}

fn emit<T: serde::Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("reports serialize")),
        Format::Text => print!("{}", text()),
    }
}

fn read(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<u8, Error> {
    let opts = RunOptions {
        max_word_length: cli.max_word_length,
        exec: if cli.sequential { Execution::Sequential } else { Execution::default() },
    };
    let (command, file) = match cli.command {
        Cmd::Validate { file } => (Command::Validate, file),
        Cmd::Solve { file } => (Command::Solve, file),
        Cmd::Decompose { file } => (Command::Decompose, file),
        Cmd::Verify { file } => (Command::Verify, file),
        Cmd::Oracle { file } => (Command::Oracle, file),
        Cmd::Classify { file } => (Command::Classify, file),
        Cmd::Recheck { file } => {
            let r = report::parse_report(&read(&file)?)?;
            let checked = report::recheck(&r, opts)?;
            emit(cli.format, &checked, || checked.to_text());
            return Ok(if checked.confirmed { 0 } else { 2 });
        }
        Cmd::Catalog { action } => return run_catalog(action, cli.format, opts),
    };
    let s = Scenario::from_json(&read(&file)?)?;
    let r = report::run(command, &s, opts)?;
    emit(cli.format, &r, || r.to_text());
    Ok(r.exit_code() as u8)
}

fn run_catalog(action: CatalogCmd, format: Format, opts: RunOptions) -> Result<u8, Error> {
    match action {
        CatalogCmd::List => {
            let entries = catalog::entries()?;
            let rows: Vec<_> = entries.iter().map(|e| (&e.id, &e.algebra, &e.summary)).collect();
            emit(format, &rows, || {
                entries.iter().map(|e| format!("{:<28} {}\n", e.id, e.summary)).collect()
            });
            Ok(0)
        }
        CatalogCmd::Run { id } => {
            let r = catalog::run_entry(&catalog::entry(&id)?, opts)?;
            emit(format, &r, || r.to_text());
            Ok(if r.passed() { 0 } else { 2 })
        }
        CatalogCmd::RunAll => {
            let r = catalog::run_all(opts)?;
            emit(format, &r, || r.to_text());
            Ok(if r.passed() { 0 } else { 2 })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
