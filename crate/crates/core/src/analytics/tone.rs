use std::collections::BTreeMap;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::Granularity;
use crate::store::EventWithContext;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TonePoint {
    pub bucket: NaiveDate,
    pub min: f64,
    pub median: f64,
    pub max: f64,
    pub n: u64,
}

/// Per-bucket range and median of event `AvgTone`. Empty buckets are omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToneSeries {
    pub granularity: Granularity,
    pub points: Vec<TonePoint>,
}

pub fn tone_stats(contexts: &[EventWithContext], granularity: Granularity) -> ToneSeries {
    let mut buckets: BTreeMap<NaiveDate, Vec<f64>> = BTreeMap::new();
    for ctx in contexts {
        buckets
            .entry(granularity.bucket_start(ctx.event.day))
            .or_default()
            .push(ctx.event.avg_tone);
    }
    let points = buckets
        .into_iter()
        .map(|(bucket, mut tones)| {
            tones.sort_by(f64::total_cmp);
            let n = tones.len();
            let median = if n % 2 == 1 {
                tones[n / 2]
            } else {
                (tones[n / 2 - 1] + tones[n / 2]) / 2.0
            };
            TonePoint {
                bucket,
                min: tones[0],
                median,
                max: tones[n - 1],
                n: n as u64,
            }
        })
        .collect();
    ToneSeries { granularity, points }
}
