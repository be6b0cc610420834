use refwatch_core::formats::TableKind;
use serde::Serialize;

use crate::{IngestError, Result};

/// One line of the update manifest: `size md5 url`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FeedEntry {
    pub size_bytes: u64,
    pub md5: String,
    pub url: String,
    pub kind: TableKind,
}

impl FeedEntry {
    pub fn file_name(&self) -> &str {
        self.url.rsplit('/').next().unwrap_or(&self.url)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestLineError {
    pub line: usize,
    pub reason: String,
}

fn parse_line(line: &str) -> std::result::Result<FeedEntry, String> {
    let mut parts = line.split_whitespace();
    let (Some(size), Some(md5), Some(url), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
        return Err("expected three space-separated fields".into());
    };
    let size_bytes = size.parse().map_err(|_| format!("bad size {size:?}"))?;
    if md5.len() != 32 || !md5.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(format!("bad md5 {md5:?}"));
    }
    if !(url.starts_with("http://") || url.starts_with("https://")) {
        return Err(format!("not an absolute URL: {url:?}"));
    }
    let name = url.rsplit('/').next().unwrap_or(url);
    let kind = TableKind::from_file_name(name).ok_or_else(|| format!("unrecognized file suffix in {url:?}"))?;
    Ok(FeedEntry {
        size_bytes,
        md5: md5.to_ascii_lowercase(),
        url: url.to_string(),
        kind,
    })
}

/// Parse a manifest body. Malformed lines are returned separately; blank
/// lines are ignored.
pub fn parse_manifest(body: &str) -> (Vec<FeedEntry>, Vec<ManifestLineError>) {
    let mut entries = Vec::new();
    let mut errors = Vec::new();
    for (i, line) in body.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match parse_line(line) {
            Ok(e) => entries.push(e),
            Err(reason) => errors.push(ManifestLineError { line: i + 1, reason }),
        }
    }
    (entries, errors)
}

pub async fn fetch_update_manifest(client: &reqwest::Client, feed_url: &str) -> Result<Vec<FeedEntry>> {
    let response = client.get(feed_url).send().await.map_err(|e| IngestError::Retryable {
        url: feed_url.to_string(),
        attempts: 1,
        message: e.to_string(),
    })?;
    let status = response.status();
    if !status.is_success() {
        return Err(IngestError::Http {
            url: feed_url.to_string(),
            status: status.as_u16(),
        });
    }
    let body = response.text().await.map_err(|e| IngestError::Retryable {
        url: feed_url.to_string(),
        attempts: 1,
        message: e.to_string(),
    })?;
    let (entries, errors) = parse_manifest(&body);
    for e in errors {
        tracing::warn!(url = feed_url, line = e.line, reason = %e.reason, "skipping manifest line");
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MANIFEST: &str = "\
150383 297a16b493de7cf6ca809a7cc31d0b93 http://data.gdeltproject.org/gdeltv2/20150218230000.export.CSV.zip
318084 bb27f78ba45f69a17ea6ed7755e9f8ff http://data.gdeltproject.org/gdeltv2/20150218230000.mentions.CSV.zip
10768507 ea8dde0beb0ba98810a92db068c0ce99 http://data.gdeltproject.org/gdeltv2/20150218230000.gkg.csv.zip
";

    #[test]
    fn three_lines_three_entries() {
        let (entries, errors) = parse_manifest(MANIFEST);
        assert!(errors.is_empty());
        let kinds: Vec<TableKind> = entries.iter().map(|e| e.kind).collect();
        assert_eq!(kinds, [TableKind::Events, TableKind::Mentions, TableKind::Gkg]);
        assert_eq!(entries[0].size_bytes, 150383);
        assert_eq!(entries[0].file_name(), "20150218230000.export.CSV.zip");
    }

    #[test]
    fn empty_body() {
        assert_eq!(parse_manifest(""), (vec![], vec![]));
    }

    #[test]
    fn bad_lines_are_reported() {
        let body = "12 abc http://x/a.export.CSV.zip\n\
                    12 297a16b493de7cf6ca809a7cc31d0b93 http://x/readme.txt\n\
                    nope\n\
                    12 297A16B493DE7CF6CA809A7CC31D0B93 http://x/a.export.CSV.zip\n";
        let (entries, errors) = parse_manifest(body);
        assert_eq!(entries.len(), 1);
        assert_eq!(entries[0].md5, "297a16b493de7cf6ca809a7cc31d0b93");
        assert_eq!(errors.iter().map(|e| e.line).collect::<Vec<_>>(), [1, 2, 3]);
    }
}
