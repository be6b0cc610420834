use std::collections::{BTreeMap, BTreeSet, HashSet};

use chrono::{NaiveDate, NaiveDateTime};
use serde::{Deserialize, Serialize};

use super::{AnalyticsError, CountUnit, Granularity};
use crate::query::DateRange;
use crate::store::EventWithContext;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimelinePoint {
    pub bucket: NaiveDate,
    pub count: u64,
}

/// Zero-filled counts over contiguous buckets, optionally with a
/// percent-of-total column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimelineSeries {
    pub granularity: Granularity,
    pub unit: CountUnit,
    pub points: Vec<TimelinePoint>,
    /// `100 * count / total` per point, aligned with `points`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub percent: Option<Vec<f64>>,
    /// Buckets whose total was zero; their percent is reported as 0.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub zero_total_buckets: Vec<NaiveDate>,
}

impl TimelineSeries {
    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.count as f64).collect()
    }

    /// The bucket with the highest count (earliest on ties).
    pub fn peak(&self) -> Option<TimelinePoint> {
        self.points
            .iter()
            .copied()
            .reduce(|best, p| if p.count > best.count { p } else { best })
    }
}

/// Count events (or their distinct source documents) per bucket of the
/// event day. Events outside `range` are ignored.
pub fn article_count_timeline(
    contexts: &[EventWithContext],
    range: &DateRange,
    granularity: Granularity,
    unit: CountUnit,
) -> TimelineSeries {
    let mut events: BTreeMap<NaiveDate, u64> = BTreeMap::new();
    let mut articles: BTreeMap<NaiveDate, HashSet<&str>> = BTreeMap::new();
    for ctx in contexts.iter().filter(|c| range.contains(c.event.day)) {
        let bucket = granularity.bucket_start(ctx.event.day);
        *events.entry(bucket).or_default() += 1;
        articles
            .entry(bucket)
            .or_default()
            .extend(ctx.mentions.iter().map(|m| m.mention_identifier.as_str()));
    }
    let points = granularity
        .buckets(range)
        .into_iter()
        .map(|bucket| TimelinePoint {
            bucket,
            count: match unit {
                CountUnit::Events => events.get(&bucket).copied().unwrap_or(0),
                _ => articles.get(&bucket).map_or(0, |s| s.len() as u64),
            },
        })
        .collect();
    TimelineSeries {
        granularity,
        unit,
        points,
        percent: None,
        zero_total_buckets: Vec::new(),
    }
}

/// One DOC API `timelinevolraw` sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VolumePoint {
    pub date: NaiveDateTime,
    /// Articles matching the query.
    pub matched_count: u64,
    /// All articles monitored in the interval.
    pub total_monitored: u64,
}

fn sum_by_bucket(
    points: &[VolumePoint],
    granularity: Granularity,
    value: impl Fn(&VolumePoint) -> u64,
) -> BTreeMap<NaiveDate, u64> {
    let mut out = BTreeMap::new();
    for p in points {
        *out.entry(granularity.bucket_start(p.date.date())).or_default() += value(p);
    }
    out
}

/// Attach `percent[i] = 100 * matched[i] / total[i]`.
///
/// Totals are summed into the series' buckets first. The bucket sets must
/// then be identical. A zero total gives percent 0 and is listed in
/// `zero_total_buckets`.
pub fn percent_of_total(matched: &TimelineSeries, total: &[VolumePoint]) -> Result<TimelineSeries, AnalyticsError> {
    let totals = sum_by_bucket(total, matched.granularity, |p| p.total_monitored);
    let ours: BTreeSet<NaiveDate> = matched.points.iter().map(|p| p.bucket).collect();
    let theirs: BTreeSet<NaiveDate> = totals.keys().copied().collect();
    if ours != theirs {
        return Err(AnalyticsError::Alignment {
            missing_in_total: ours.difference(&theirs).copied().collect(),
            missing_in_matched: theirs.difference(&ours).copied().collect(),
        });
    }

    let mut zero_total_buckets = Vec::new();
    let percent = matched
        .points
        .iter()
        .map(|p| {
            let total = totals[&p.bucket];
            if total == 0 {
                zero_total_buckets.push(p.bucket);
                0.0
            } else {
                // Both operands are exact in f64 for counts below 2^46, so the
                // quotient is the correctly rounded rational.
                (u128::from(p.count) * 100) as f64 / total as f64
            }
        })
        .collect();
    Ok(TimelineSeries {
        percent: Some(percent),
        zero_total_buckets,
        ..matched.clone()
    })
}

/// Matched DOC API volume per bucket over `range`, with percent of total.
pub fn volume_timeline(
    points: &[VolumePoint],
    range: &DateRange,
    granularity: Granularity,
) -> Result<TimelineSeries, AnalyticsError> {
    let in_range: Vec<VolumePoint> = points.iter().copied().filter(|p| range.contains(p.date.date())).collect();
    let matched = sum_by_bucket(&in_range, granularity, |p| p.matched_count);
    let buckets = granularity.buckets(range);
    let series = TimelineSeries {
        granularity,
        unit: CountUnit::DocApiArticles,
        points: buckets
            .iter()
            .map(|&bucket| TimelinePoint {
                bucket,
                count: matched.get(&bucket).copied().unwrap_or(0),
            })
            .collect(),
        percent: None,
        zero_total_buckets: Vec::new(),
    };
    // Buckets without any sample count as zero volume.
    let mut padded = in_range;
    padded.extend(buckets.iter().map(|&bucket| VolumePoint {
        date: bucket.and_hms_opt(0, 0, 0).expect("midnight"),
        matched_count: 0,
        total_monitored: 0,
    }));
    percent_of_total(&series, &padded)
}
