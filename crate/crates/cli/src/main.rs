//! `refwatch`: ingest GDELT 2.0 files, query refugee-event criteria, replay
//! the case studies and serve the HTTP API.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Problems with how the command was invoked (exit code 2).
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

#[derive(Parser)]
#[command(name = "refwatch", version, about = "Refugee and xenophobia event monitor over GDELT 2.0")]
struct Cli {
    /// SQLite store file.
    #[arg(long, global = true, env = "REFWATCH_STORE", default_value = "refwatch.db")]
    store: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    Ingest(commands::ingest::Args),
    Query(commands::query::Args),
    Replay(commands::replay::Args),
    Serve(commands::serve::Args),
    DocVolume(commands::volume::Args),
    /// Print ingest status and row counts as JSON.
    Status,
}

fn init_logging() {
    let filter = tracing_subscriber::EnvFilter::try_from_env("REFWATCH_LOG")
        .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("warn"));
    tracing_subscriber::fmt()
        .with_env_filter(filter)
        .with_writer(std::io::stderr)
        .init();
}

fn is_usage(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.is::<Usage>()
            || c.downcast_ref::<refwatch_core::query::CriteriaError>().is_some()
            || matches!(
                c.downcast_ref::<refwatch_ingest::IngestError>(),
                Some(refwatch_ingest::IngestError::BeforeDocApiCoverage { .. } | refwatch_ingest::IngestError::Invalid(_))
            )
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_logging();
    let result = match cli.command {
        Command::Ingest(args) => commands::ingest::run(&cli.store, args),
        Command::Query(args) => commands::query::run(&cli.store, args),
        Command::Replay(args) => commands::replay::run(&cli.store, args),
        Command::Serve(args) => commands::serve::run(&cli.store, args),
        Command::DocVolume(args) => commands::volume::run(args),
        Command::Status => commands::status(&cli.store),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if is_usage(&e) {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
