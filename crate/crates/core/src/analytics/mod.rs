//! Chart-ready aggregations over scanned events.
//!
//! Everything here is a pure function of its inputs. Buckets are UTC
//! calendar days or months of the event day.

mod countries;
mod export;
mod spikes;
mod timeline;
mod tone;

use chrono::{Datelike, Months, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::query::DateRange;

pub use countries::{choropleth_counts, top_country_frequencies, ChoroplethCounts, CountryCount, CountryFrequency, RootFilter, Tooltip};
pub use export::ToCsv;
pub use spikes::{detect_spikes, Spike, SpikeReport, DEFAULT_SPIKE_K, DEFAULT_SPIKE_WINDOW};
pub use timeline::{article_count_timeline, percent_of_total, volume_timeline, TimelinePoint, TimelineSeries, VolumePoint};
pub use tone::{tone_stats, TonePoint, ToneSeries};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalyticsError {
    #[error("bucket sets differ: missing from totals {missing_in_total:?}, missing from matched series {missing_in_matched:?}")]
    Alignment {
        missing_in_total: Vec<NaiveDate>,
        missing_in_matched: Vec<NaiveDate>,
    },
    #[error("series has {len} points; spike detection with window {window} needs at least {window}")]
    TooShort { len: usize, window: usize },
    #[error("{0}")]
    InvalidParameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    #[default]
    Day,
    Month,
}

impl Granularity {
    pub fn as_str(self) -> &'static str {
        match self {
            Granularity::Day => "day",
            Granularity::Month => "month",
        }
    }

    /// First day of the bucket containing `day`.
    pub fn bucket_start(self, day: NaiveDate) -> NaiveDate {
        match self {
            Granularity::Day => day,
            Granularity::Month => day.with_day(1).expect("day 1 exists"),
        }
    }

    fn next(self, bucket: NaiveDate) -> NaiveDate {
        match self {
            Granularity::Day => bucket.succ_opt().expect("date in range"),
            Granularity::Month => bucket + Months::new(1),
        }
    }

    /// Contiguous bucket starts covering `range`.
    pub fn buckets(self, range: &DateRange) -> Vec<NaiveDate> {
        let last = self.bucket_start(range.end());
        let mut out = Vec::new();
        let mut bucket = self.bucket_start(range.start());
        while bucket <= last {
            out.push(bucket);
            bucket = self.next(bucket);
        }
        out
    }
}

impl std::str::FromStr for Granularity {
    type Err = AnalyticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "day" | "daily" => Ok(Granularity::Day),
            "month" | "monthly" => Ok(Granularity::Month),
            other => Err(AnalyticsError::InvalidParameter(format!(
                "unknown granularity {other:?} (expected day or month)"
            ))),
        }
    }
}

/// What a timeline counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountUnit {
    /// Event rows.
    Events,
    /// Distinct mention identifiers (source documents) of the events.
    DistinctArticles,
    /// Matched article counts reported by the DOC API.
    DocApiArticles,
}

impl CountUnit {
    pub fn as_str(self) -> &'static str {
        match self {
            CountUnit::Events => "events",
            CountUnit::DistinctArticles => "distinct-articles",
            CountUnit::DocApiArticles => "doc-api-articles",
        }
    }

    /// Distinct articles when any mention data is present, else events.
    pub fn default_for(contexts: &[crate::store::EventWithContext]) -> CountUnit {
        if contexts.iter().any(|c| !c.mentions.is_empty()) {
            CountUnit::DistinctArticles
        } else {
            CountUnit::Events
        }
    }
}

impl std::str::FromStr for CountUnit {
    type Err = AnalyticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "events" => Ok(CountUnit::Events),
            "distinct-articles" | "articles" => Ok(CountUnit::DistinctArticles),
            other => Err(AnalyticsError::InvalidParameter(format!(
                "unknown unit {other:?} (expected events or distinct-articles)"
            ))),
        }
    }
}
