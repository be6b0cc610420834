use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, Result};
use chrono::Utc;
use refwatch_core::store::Store;
use refwatch_ingest::{
    download, download_and_verify, http_client, ingest_file, spawn_poller, FileReport, HttpManifest, Poller,
    RetryPolicy, DEFAULT_MANIFEST_URL,
};

use super::open_store;
use crate::Usage;

/// Parse and store GDELT export files, fetch single files by URL, or poll
/// the 15-minute update feed.
#[derive(clap::Args)]
pub struct Args {
    /// Export files (`*.export.CSV[.zip]`, `*.mentions.CSV[.zip]`, `*.gkg.csv[.zip]`).
    files: Vec<PathBuf>,

    /// Download and ingest these file URLs (e.g. historical exports).
    #[arg(long = "url")]
    urls: Vec<String>,

    /// Poll the update manifest and ingest every new file.
    #[arg(long)]
    poll: bool,

    /// With --poll: run a single poll and exit.
    #[arg(long, requires = "poll")]
    once: bool,

    /// Seconds between polls (at least 60).
    #[arg(long, default_value_t = 900, env = "REFWATCH_POLL_INTERVAL")]
    interval: u64,

    #[arg(long, env = "REFWATCH_FEED_URL", default_value = DEFAULT_MANIFEST_URL)]
    feed_url: String,

    /// Where downloaded files are kept.
    #[arg(long, env = "REFWATCH_DATA_DIR", default_value = "gdelt-data")]
    data_dir: PathBuf,

    /// Only ingest these tables when polling (events, mentions, gkg).
    #[arg(long, value_delimiter = ',')]
    tables: Vec<String>,
}

fn print_report(r: &FileReport) {
    println!(
        "{}\t{}\trows_ok={}\trows_skipped={}\tinserted={}\tupdated={}\tunchanged={}",
        r.name,
        r.kind,
        r.diagnostics.rows_ok,
        r.diagnostics.rows_skipped,
        r.upserted.inserted,
        r.upserted.updated,
        r.upserted.unchanged
    );
    for (line, reason) in &r.diagnostics.first_errors {
        tracing::warn!(file = %r.name, line, %reason, "skipped row");
    }
}

pub fn run(store_path: &Path, args: Args) -> Result<()> {
    if args.files.is_empty() && args.urls.is_empty() && !args.poll {
        return Err(Usage("nothing to ingest: give files, --url or --poll".into()).into());
    }
    let store = Arc::new(open_store(store_path)?);
    let mut failures = 0;
    for path in &args.files {
        match ingest_file(&store, path) {
            Ok(report) => print_report(&report),
            Err(e) => {
                failures += 1;
                eprintln!("error: {}: {e}", path.display());
            }
        }
    }
    if !args.urls.is_empty() || args.poll {
        let runtime = tokio::runtime::Runtime::new()?;
        failures += runtime.block_on(network(store.clone(), &args))?;
    }
    if failures > 0 {
        bail!("{failures} file(s) failed");
    }
    Ok(())
}

async fn fetch_url(store: Arc<Store>, url: &str, dir: &Path) -> Result<FileReport> {
    tokio::fs::create_dir_all(dir).await?;
    let path = download(&http_client(), url, dir, RetryPolicy::default()).await?;
    Ok(tokio::task::spawn_blocking(move || ingest_file(&store, &path)).await??)
}

async fn network(store: Arc<Store>, args: &Args) -> Result<usize> {
    let client = http_client();
    let mut failures = 0;
    for url in &args.urls {
        match fetch_url(store.clone(), url, &args.data_dir).await {
            Ok(report) => print_report(&report),
            Err(e) => {
                failures += 1;
                eprintln!("error: {url}: {e:#}");
            }
        }
    }
    if !args.poll {
        return Ok(failures);
    }

    tokio::fs::create_dir_all(&args.data_dir).await?;
    let wanted: Vec<String> = args.tables.iter().map(|t| t.to_ascii_lowercase()).collect();
    let source = HttpManifest {
        client: client.clone(),
        url: args.feed_url.clone(),
    };
    let handler = {
        let (store, client, dir) = (store.clone(), client.clone(), args.data_dir.clone());
        move |entry: refwatch_ingest::FeedEntry| {
            let (store, client, dir, wanted) = (store.clone(), client.clone(), dir.clone(), wanted.clone());
            async move {
                if !wanted.is_empty() && !wanted.iter().any(|w| w == entry.kind.as_str()) {
                    return Ok(());
                }
                let path = download_and_verify(&client, &entry, &dir, RetryPolicy::default()).await?;
                let report = tokio::task::spawn_blocking(move || ingest_file(&store, &path))
                    .await
                    .map_err(|e| anyhow::anyhow!(e))??;
                print_report(&report);
                Ok::<(), anyhow::Error>(())
            }
        }
    };
    let record = {
        let store = store.clone();
        move |result: &refwatch_ingest::Result<refwatch_ingest::PollOutcome>| {
            if let Err(e) = store.record_poll(Utc::now().naive_utc()) {
                tracing::error!(error = %e, "could not record poll time");
            }
            if let Ok(outcome) = result {
                tracing::info!(new = outcome.new_entries, failed = outcome.handler_failures, "poll finished");
            }
        }
    };

    if args.once {
        let mut handler = handler;
        let outcome = Poller::new().poll_once(&source, &mut handler).await;
        record(&outcome);
        let outcome = outcome?;
        return Ok(failures + outcome.handler_failures);
    }

    let handle = spawn_poller(Duration::from_secs(args.interval), source, handler, record)?;
    eprintln!("polling {} every {}s; Ctrl-C to stop", args.feed_url, args.interval);
    tokio::signal::ctrl_c().await?;
    handle.stop().await;
    Ok(failures)
}
