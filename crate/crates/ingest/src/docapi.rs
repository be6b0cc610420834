use chrono::{NaiveDate, NaiveDateTime};
use refwatch_core::analytics::VolumePoint;
use serde::Deserialize;

use crate::download::{fetch_with_retry, RetryPolicy};
use crate::{IngestError, Result};

/// The DOC 2.0 API has no articles before this date.
pub const DOC_API_EARLIEST: NaiveDate = match NaiveDate::from_ymd_opt(2017, 1, 1) {
    Some(d) => d,
    None => panic!("valid date"),
};

/// A `timelinevolraw` request: matched and total article volume between two
/// inclusive dates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocApiQuery {
    pub query: String,
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl DocApiQuery {
    /// OR together `theme:` terms.
    pub fn themes<S: AsRef<str>>(themes: &[S], start: NaiveDate, end: NaiveDate) -> Self {
        let terms: Vec<String> = themes.iter().map(|t| format!("theme:{}", t.as_ref())).collect();
        let query = if terms.len() > 1 {
            format!("({})", terms.join(" OR "))
        } else {
            terms.concat()
        };
        DocApiQuery { query, start, end }
    }

    pub fn validate(&self) -> Result<()> {
        if self.start > self.end {
            return Err(IngestError::Invalid(format!(
                "start date {} is after end date {}",
                self.start, self.end
            )));
        }
        if self.start < DOC_API_EARLIEST {
            return Err(IngestError::BeforeDocApiCoverage {
                requested: self.start,
                earliest: DOC_API_EARLIEST,
            });
        }
        if self.query.trim().is_empty() {
            return Err(IngestError::Invalid("empty DOC API query".into()));
        }
        Ok(())
    }

    pub fn params(&self) -> Vec<(&'static str, String)> {
        vec![
            ("query", self.query.clone()),
            ("mode", "timelinevolraw".into()),
            ("format", "json".into()),
            ("startdatetime", format!("{}000000", self.start.format("%Y%m%d"))),
            ("enddatetime", format!("{}235959", self.end.format("%Y%m%d"))),
        ]
    }
}

#[derive(Deserialize)]
struct Response {
    #[serde(default)]
    timeline: Vec<Series>,
}

#[derive(Deserialize)]
struct Series {
    #[serde(default)]
    data: Vec<Sample>,
}

#[derive(Deserialize)]
struct Sample {
    date: String,
    value: u64,
    norm: u64,
}

/// Parse a `timelinevolraw` JSON body into date-sorted points. `value` is
/// the matched count and `norm` the total monitored. Repeated dates keep
/// their first sample.
pub fn parse_timeline_response(body: &str) -> Result<Vec<VolumePoint>> {
    let trimmed = body.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    let response: Response = serde_json::from_str(trimmed).map_err(|e| {
        let snippet: String = trimmed.chars().take(200).collect();
        IngestError::DocApi(format!("unexpected DOC API response ({e}): {snippet}"))
    })?;
    let mut points = Vec::new();
    for sample in response.timeline.into_iter().take(1).flat_map(|s| s.data) {
        let date = NaiveDateTime::parse_from_str(&sample.date, "%Y%m%dT%H%M%SZ")
            .map_err(|e| IngestError::DocApi(format!("bad timeline date {:?}: {e}", sample.date)))?;
        points.push(VolumePoint {
            date,
            matched_count: sample.value,
            total_monitored: sample.norm,
        });
    }
    points.sort_by_key(|p| p.date);
    points.dedup_by_key(|p| p.date);
    Ok(points)
}

pub struct DocApiClient {
    client: reqwest::Client,
    base_url: String,
    retry: RetryPolicy,
}

impl DocApiClient {
    pub fn new(client: reqwest::Client, base_url: impl Into<String>) -> Self {
        DocApiClient {
            client,
            base_url: base_url.into(),
            retry: RetryPolicy::default(),
        }
    }

    pub fn with_retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    pub fn request_url(&self, query: &DocApiQuery) -> Result<String> {
        let url = reqwest::Url::parse_with_params(&self.base_url, query.params())
            .map_err(|e| IngestError::Invalid(format!("bad DOC API base URL {:?}: {e}", self.base_url)))?;
        Ok(url.into())
    }

    /// Validate, fetch and parse one volume timeline.
    pub async fn timeline(&self, query: &DocApiQuery) -> Result<Vec<VolumePoint>> {
        query.validate()?;
        let url = self.request_url(query)?;
        let body = fetch_with_retry(&self.client, &url, self.retry).await?;
        parse_timeline_response(&String::from_utf8_lossy(&body))
    }
}
