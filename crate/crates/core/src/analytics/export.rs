//! CSV rendering of the aggregates, one row per bucket or entry.

use super::{ChoroplethCounts, CountryFrequency, SpikeReport, TimelineSeries, ToneSeries};

/// Render as RFC 4180 CSV with a header row.
pub trait ToCsv {
    fn to_csv(&self) -> String;
}

fn write_rows<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

impl ToCsv for TimelineSeries {
    fn to_csv(&self) -> String {
        let has_percent = self.percent.is_some();
        let header: &[&str] = if has_percent {
            &["bucket", "count", "percent", "zero_total"]
        } else {
            &["bucket", "count"]
        };
        write_rows(
            header,
            self.points.iter().enumerate().map(|(i, p)| {
                let mut row = vec![p.bucket.to_string(), p.count.to_string()];
                if let Some(percent) = &self.percent {
                    row.push(percent[i].to_string());
                    row.push(self.zero_total_buckets.contains(&p.bucket).to_string());
                }
                row
            }),
        )
    }
}

impl ToCsv for ToneSeries {
    fn to_csv(&self) -> String {
        write_rows(
            &["bucket", "min", "median", "max", "n"],
            self.points.iter().map(|p| {
                vec![
                    p.bucket.to_string(),
                    p.min.to_string(),
                    p.median.to_string(),
                    p.max.to_string(),
                    p.n.to_string(),
                ]
            }),
        )
    }
}

impl ToCsv for CountryFrequency {
    fn to_csv(&self) -> String {
        write_rows(
            &["rank", "country_code", "count"],
            self.entries
                .iter()
                .enumerate()
                .map(|(i, e)| vec![(i + 1).to_string(), e.country_code.clone(), e.count.to_string()]),
        )
    }
}

impl ToCsv for ChoroplethCounts {
    fn to_csv(&self) -> String {
        write_rows(
            &["country_code", "country_name", "iso_alpha3", "count"],
            self.tooltips.iter().map(|(code, t)| {
                vec![
                    code.clone(),
                    t.country_name.clone().unwrap_or_default(),
                    t.iso_alpha3.clone().unwrap_or_default(),
                    t.count.to_string(),
                ]
            }),
        )
    }
}

impl ToCsv for SpikeReport {
    fn to_csv(&self) -> String {
        write_rows(
            &["bucket", "value", "baseline_mean", "baseline_std", "z_score"],
            self.flagged.iter().map(|s| {
                vec![
                    s.bucket.to_string(),
                    s.value.to_string(),
                    s.baseline_mean.to_string(),
                    s.baseline_std.to_string(),
                    s.z_score.to_string(),
                ]
            }),
        )
    }
}
