use std::path::{Path, PathBuf};
use std::time::Duration;

use md5::{Digest, Md5};

use crate::manifest::FeedEntry;
use crate::{IngestError, Result};

/// Bounded exponential backoff: `attempts` tries, sleeping `base_delay`,
/// then twice that, and so on between them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub attempts: u32,
    pub base_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            attempts: 3,
            base_delay: Duration::from_millis(500),
        }
    }
}

impl RetryPolicy {
    fn delay(&self, attempt: u32) -> Duration {
        self.base_delay.saturating_mul(1 << attempt.min(16))
    }
}

pub fn md5_hex(bytes: &[u8]) -> String {
    hex::encode(Md5::digest(bytes))
}

enum Failure {
    Transient(String),
    Fatal(IngestError),
}

async fn fetch_once(client: &reqwest::Client, url: &str) -> std::result::Result<Vec<u8>, Failure> {
    let response = client.get(url).send().await.map_err(|e| Failure::Transient(e.to_string()))?;
    let status = response.status();
    if status.is_server_error() || status.as_u16() == 429 {
        return Err(Failure::Transient(format!("HTTP {status}")));
    }
    if !status.is_success() {
        return Err(Failure::Fatal(IngestError::Http {
            url: url.to_string(),
            status: status.as_u16(),
        }));
    }
    let body = response.bytes().await.map_err(|e| Failure::Transient(e.to_string()))?;
    Ok(body.to_vec())
}

pub(crate) async fn fetch_with_retry(client: &reqwest::Client, url: &str, policy: RetryPolicy) -> Result<Vec<u8>> {
    let attempts = policy.attempts.max(1);
    let mut last = String::new();
    for attempt in 0..attempts {
        if attempt > 0 {
            tokio::time::sleep(policy.delay(attempt - 1)).await;
        }
        match fetch_once(client, url).await {
            Ok(body) => return Ok(body),
            Err(Failure::Fatal(e)) => return Err(e),
            Err(Failure::Transient(message)) => {
                tracing::warn!(url, attempt = attempt + 1, %message, "download attempt failed");
                last = message;
            }
        }
    }
    Err(IngestError::Retryable {
        url: url.to_string(),
        attempts,
        message: last,
    })
}

/// Download `url` into `dest` under its last path segment, without a digest
/// check. For one-off historical files that have no manifest entry.
pub async fn download(client: &reqwest::Client, url: &str, dest: &Path, policy: RetryPolicy) -> Result<PathBuf> {
    let name = url.rsplit('/').next().filter(|n| !n.is_empty()).unwrap_or("download");
    let body = fetch_with_retry(client, url, policy).await?;
    let target = dest.join(name);
    let partial = dest.join(format!(".{name}.part"));
    tokio::fs::write(&partial, &body).await?;
    tokio::fs::rename(&partial, &target).await?;
    Ok(target)
}

/// Download `entry` into `dest` and check its MD5 against the manifest.
///
/// The body is written to a temporary name and only renamed into place once
/// the digest matches, so a mismatching file is never left behind.
pub async fn download_and_verify(
    client: &reqwest::Client,
    entry: &FeedEntry,
    dest: &Path,
    policy: RetryPolicy,
) -> Result<PathBuf> {
    let body = fetch_with_retry(client, &entry.url, policy).await?;
    let target = dest.join(entry.file_name());
    let actual = md5_hex(&body);
    if !actual.eq_ignore_ascii_case(&entry.md5) {
        if tokio::fs::try_exists(&target).await.unwrap_or(false) {
            let existing = tokio::fs::read(&target).await?;
            if !md5_hex(&existing).eq_ignore_ascii_case(&entry.md5) {
                tokio::fs::remove_file(&target).await?;
            }
        }
        return Err(IngestError::Integrity {
            url: entry.url.clone(),
            expected: entry.md5.clone(),
            actual,
        });
    }
    let partial = dest.join(format!(".{}.part", entry.file_name()));
    tokio::fs::write(&partial, &body).await?;
    tokio::fs::rename(&partial, &target).await?;
    Ok(target)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        assert_eq!(md5_hex(b""), "d41d8cd98f00b204e9800998ecf8427e");
        assert_eq!(md5_hex(b"abc"), "900150983cd24fb0d6963f7d28e17f72");
    }

    #[test]
    fn backoff_doubles() {
        let p = RetryPolicy {
            attempts: 3,
            base_delay: Duration::from_millis(10),
        };
        assert_eq!([p.delay(0), p.delay(1), p.delay(2)], [10, 20, 40].map(Duration::from_millis));
    }
}
