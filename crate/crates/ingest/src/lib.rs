//! Getting GDELT data into a store: the 15-minute update manifest, verified
//! downloads, a polling loop, the DOC 2.0 volume API and file ingestion.

mod docapi;
mod download;
mod manifest;
mod pipeline;
mod poller;

use std::time::Duration;

use chrono::NaiveDate;

pub use docapi::{parse_timeline_response, DocApiClient, DocApiQuery, DOC_API_EARLIEST};
pub use download::{download, download_and_verify, md5_hex, RetryPolicy};
pub use manifest::{fetch_update_manifest, parse_manifest, FeedEntry, ManifestLineError};
pub use pipeline::{ingest_bytes, ingest_file, FileReport};
pub use poller::{spawn_poller, HttpManifest, ManifestSource, PollHandle, PollOutcome, Poller, MIN_POLL_INTERVAL};

pub const DEFAULT_MANIFEST_URL: &str = "http://data.gdeltproject.org/gdeltv2/lastupdate.txt";
pub const DEFAULT_DOC_API_URL: &str = "https://api.gdeltproject.org/api/v2/doc/doc";

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("request to {url} failed after {attempts} attempt(s): {message}")]
    Retryable {
        url: String,
        attempts: u32,
        message: String,
    },
    #[error("{url} returned HTTP {status}")]
    Http { url: String, status: u16 },
    #[error("digest mismatch for {url}: manifest says {expected}, downloaded file is {actual}")]
    Integrity {
        url: String,
        expected: String,
        actual: String,
    },
    #[error("{0}")]
    Invalid(String),
    #[error(
        "the GDELT DOC 2.0 API only covers articles published on or after {earliest}; \
         requested start {requested} (use bulk file ingestion for earlier dates)"
    )]
    BeforeDocApiCoverage { requested: NaiveDate, earliest: NaiveDate },
    #[error("{0}")]
    DocApi(String),
    #[error("unrecognized GDELT file name {0:?}")]
    UnknownKind(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Format(#[from] refwatch_core::formats::FormatError),
    #[error(transparent)]
    Container(#[from] refwatch_core::formats::ContainerError),
    #[error(transparent)]
    Store(#[from] refwatch_core::store::StoreError),
}

pub type Result<T> = std::result::Result<T, IngestError>;

/// A client with the timeouts used for all GDELT requests.
pub fn http_client() -> reqwest::Client {
    reqwest::Client::builder()
        .connect_timeout(Duration::from_secs(20))
        .timeout(Duration::from_secs(300))
        .user_agent(concat!("refwatch/", env!("CARGO_PKG_VERSION")))
        .build()
        .expect("static client configuration")
}
