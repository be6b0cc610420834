use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::{AnalyticsError, TimelineSeries};

pub const DEFAULT_SPIKE_WINDOW: usize = 8;
pub const DEFAULT_SPIKE_K: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spike {
    pub bucket: NaiveDate,
    pub value: f64,
    pub baseline_mean: f64,
    pub baseline_std: f64,
    pub z_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpikeReport {
    pub window: usize,
    pub k: f64,
    pub flagged: Vec<Spike>,
}

/// Flag buckets whose value sits at least `k` standard deviations above the
/// mean of the preceding `window` buckets.
///
/// The baseline excludes the bucket itself and uses the population standard
/// deviation. Buckets with a flat baseline (std 0) are never flagged, nor
/// are the first `window` buckets.
pub fn detect_spikes(series: &TimelineSeries, window: usize, k: f64) -> Result<SpikeReport, AnalyticsError> {
    if window < 3 {
        return Err(AnalyticsError::InvalidParameter(format!("window must be at least 3, got {window}")));
    }
    if !(k.is_finite() && k > 0.0) {
        return Err(AnalyticsError::InvalidParameter(format!("k must be a positive number, got {k}")));
    }
    let values = series.values();
    if values.len() < window {
        return Err(AnalyticsError::TooShort {
            len: values.len(),
            window,
        });
    }

    let mut flagged = Vec::new();
    for i in window..values.len() {
        let baseline = &values[i - window..i];
        let mean = baseline.iter().sum::<f64>() / window as f64;
        let variance = baseline.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / window as f64;
        let std = variance.sqrt();
        if std <= 0.0 {
            continue;
        }
        let z_score = (values[i] - mean) / std;
        if z_score >= k {
            flagged.push(Spike {
                bucket: series.points[i].bucket,
                value: values[i],
                baseline_mean: mean,
                baseline_std: std,
                z_score,
            });
        }
    }
    Ok(SpikeReport { window, k, flagged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::{CountUnit, Granularity, TimelinePoint};

    fn series(values: &[u64]) -> TimelineSeries {
        let start = NaiveDate::from_ymd_opt(2021, 3, 1).unwrap();
        TimelineSeries {
            granularity: Granularity::Day,
            unit: CountUnit::Events,
            points: values
                .iter()
                .enumerate()
                .map(|(i, &count)| TimelinePoint {
                    bucket: start + chrono::Days::new(i as u64),
                    count,
                })
                .collect(),
            percent: None,
            zero_total_buckets: vec![],
        }
    }

    #[test]
    fn constant_series_has_no_spikes() {
        let r = detect_spikes(&series(&[7; 30]), 8, 3.0).unwrap();
        assert!(r.flagged.is_empty());
    }

    #[test]
    fn five_sigma_outlier_is_flagged() {
        // Baseline 10,12,... has mean 11 and population std 1.
        let mut values: Vec<u64> = (0..8).map(|i| if i % 2 == 0 { 10 } else { 12 }).collect();
        values.push(16);
        let r = detect_spikes(&series(&values), 8, 3.0).unwrap();
        assert_eq!(r.flagged.len(), 1);
        let s = r.flagged[0];
        assert_eq!(s.bucket, NaiveDate::from_ymd_opt(2021, 3, 9).unwrap());
        assert_eq!((s.baseline_mean, s.baseline_std, s.z_score), (11.0, 1.0, 5.0));
    }

    #[test]
    fn window_equal_to_length_has_nothing_to_flag() {
        let r = detect_spikes(&series(&[1, 5, 1, 5]), 4, 1.0).unwrap();
        assert!(r.flagged.is_empty());
    }

    #[test]
    fn parameters_are_validated() {
        assert!(matches!(
            detect_spikes(&series(&[1, 2]), 3, 3.0),
            Err(AnalyticsError::TooShort { len: 2, window: 3 })
        ));
        assert!(detect_spikes(&series(&[1; 10]), 2, 3.0).is_err());
        assert!(detect_spikes(&series(&[1; 10]), 3, 0.0).is_err());
        assert!(detect_spikes(&series(&[1; 10]), 3, f64::NAN).is_err());
    }
}
